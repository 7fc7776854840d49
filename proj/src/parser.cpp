#include "ptm/parser.hpp"

#include <initializer_list>
#include <sstream>

#include "ptm/lexer.hpp"

namespace ptm {

namespace {

class Parser {
public:
    Parser(std::vector<Token> tokens, Dialect dialect)
        : tokens_(std::move(tokens)), dialect_(dialect) {}

    Program parse_program() {
        skip_newlines();
        Program program;
        program.dialect = dialect_;
        while (!at(TokenKind::EndOfFile)) {
            program.stmts.push_back(parse_stmt());
            skip_newlines();
        }
        if (program.stmts.empty())
            fail("expected at least one statement");
        return program;
    }

private:
    std::vector<Token> tokens_;
    Dialect dialect_;
    size_t pos_ = 0;

    const Token& peek(size_t ahead = 0) const {
        size_t idx = pos_ + ahead;
        if (idx >= tokens_.size()) idx = tokens_.size() - 1;
        return tokens_[idx];
    }
    bool at(TokenKind kind, size_t ahead = 0) const { return peek(ahead).kind == kind; }
    bool at_ident(const std::string& text, size_t ahead = 0) const {
        return at(TokenKind::Identifier, ahead) && peek(ahead).text == text;
    }
    Token advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const std::string& message) const {
        std::ostringstream msg;
        msg << message << ", got " << describe(peek());
        throw DslError(Diagnostic{Diagnostic::Kind::Syntax, peek().pos, msg.str()});
    }

    [[noreturn]] void dialect_mismatch(const std::string& construct) const {
        std::ostringstream msg;
        msg << construct << " is not part of dialect " << to_string(dialect_);
        throw DslError(Diagnostic{Diagnostic::Kind::DialectMismatch, peek().pos, msg.str()});
    }

    static std::string describe(const Token& t) {
        if (t.kind == TokenKind::Identifier || t.kind == TokenKind::Integer)
            return to_string(t.kind) + " '" + t.text + "'";
        return to_string(t.kind);
    }

    Token expect(TokenKind kind, const char* context) {
        if (!at(kind)) {
            std::ostringstream msg;
            msg << "expected " << to_string(kind) << " " << context;
            fail(msg.str());
        }
        return advance();
    }

    void skip_newlines() {
        while (at(TokenKind::Newline)) advance();
    }

    void end_stmt() {
        if (at(TokenKind::EndOfFile)) return;
        expect(TokenKind::Newline, "to terminate statement");
    }

    Var parse_var(const char* context) {
        if (!at(TokenKind::Identifier)) fail(std::string("expected identifier ") + context);
        Token t = advance();
        if (t.text == "L1")
            fail("'L1' is reserved and cannot name a variable");
        return Var{t.text, t.pos};
    }

    std::string parse_counter_name(const char* context) { return parse_var(context).name; }

    // E -> term (+ term)*; term -> factor (* factor)*; factor -> identifier.
    ExprPtr parse_expr() {
        ExprPtr lhs = parse_term();
        while (at(TokenKind::Plus)) {
            SourcePos at_pos = peek().pos;
            advance();
            lhs = make_add(lhs, parse_term(), at_pos);
        }
        return lhs;
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_factor();
        while (at(TokenKind::Star)) {
            SourcePos at_pos = peek().pos;
            advance();
            lhs = make_mul(lhs, parse_factor(), at_pos);
        }
        return lhs;
    }

    ExprPtr parse_factor() {
        if (at(TokenKind::LParen)) {
            advance();
            ExprPtr inner = parse_expr();
            expect(TokenKind::RParen, "to close parenthesized expression");
            return inner;
        }
        if (!at(TokenKind::Identifier)) fail("expected identifier in expression");
        Token t = advance();
        if (t.text == "L1") fail("'L1' is reserved and cannot appear in an expression");
        return make_var(t.text, t.pos);
    }

    // v [ E ]
    IndexRef parse_index_after(Var array) {
        expect(TokenKind::LBracket, "after vector name");
        ExprPtr index = parse_expr();
        expect(TokenKind::RBracket, "to close index");
        return IndexRef{std::move(array), std::move(index)};
    }

    // L1 [ V , int ]
    LineRef parse_line_ref() {
        advance();  // the 'L1' identifier
        expect(TokenKind::LBracket, "after 'L1'");
        Var set = parse_var("for the cache set");
        expect(TokenKind::Comma, "between set and way");
        Token way = expect(TokenKind::Integer, "for the cache way");
        expect(TokenKind::RBracket, "to close 'L1[...]'");
        return LineRef{std::move(set), (int)way.int_value};
    }

    // L1 . insert ( Index )
    IndexRef parse_insert_call() {
        advance();  // 'L1'
        expect(TokenKind::Dot, "after 'L1'");
        Token member = expect(TokenKind::Identifier, "after 'L1.'");
        if (member.text != "insert") fail("expected 'insert' after 'L1.'");
        expect(TokenKind::LParen, "after 'L1.insert'");
        Var array = parse_var("for the inserted vector");
        IndexRef arg = parse_index_after(std::move(array));
        expect(TokenKind::RParen, "to close 'L1.insert(...)'");
        return arg;
    }

    Block parse_block() {
        expect(TokenKind::LBrace, "to open block");
        skip_newlines();
        Block block;
        while (!at(TokenKind::RBrace)) {
            if (at(TokenKind::EndOfFile)) fail("expected '}' to close block");
            block.stmts.push_back(parse_stmt());
            skip_newlines();
        }
        advance();  // '}'
        end_stmt();
        return block;
    }

    Stmt parse_stmt() {
        SourcePos start = peek().pos;
        if (at(TokenKind::KwRepeat)) return Stmt{parse_repeat(), start};
        if (at(TokenKind::KwForeachBlock)) {
            if (dialect_ == Dialect::V1) dialect_mismatch("'foreach_block'");
            return Stmt{parse_foreach(), start};
        }
        if (at(TokenKind::Star)) {
            if (dialect_ == Dialect::V2) dialect_mismatch("'*' line dereference");
            return Stmt{parse_store_deref(), start};
        }
        if (at_ident("L1")) {
            if (at(TokenKind::LBracket, 1)) {
                if (dialect_ == Dialect::V1) dialect_mismatch("'L1[set, way]'");
                return Stmt{parse_lineref_stmt(), start};
            }
            fail("'L1' cannot start a statement in this position");
        }
        if (at(TokenKind::Identifier)) return parse_ident_stmt(start);
        fail("expected statement");
    }

    Repeat parse_repeat() {
        advance();  // 'repeat'
        expect(TokenKind::LParen, "after 'repeat'");
        std::string counter = parse_counter_name("for the loop counter");
        expect(TokenKind::Less, "after loop counter");
        Var bound = parse_var("for the loop bound");
        std::optional<Var> step;
        if (at(TokenKind::Comma)) {
            if (dialect_ == Dialect::V2) dialect_mismatch("'repeat' with a step clause");
            advance();
            expect(TokenKind::KwStep, "in step clause");
            expect(TokenKind::Assign, "after 'step'");
            step = parse_var("for the step");
        }
        expect(TokenKind::RParen, "to close 'repeat(...)'");
        Block body = parse_block();
        return Repeat{std::move(counter), std::move(bound), std::move(step), std::move(body)};
    }

    ForeachBlock parse_foreach() {
        advance();  // 'foreach_block'
        expect(TokenKind::LParen, "after 'foreach_block'");
        Var bound = parse_var("for the element count");
        expect(TokenKind::Comma, "after element count");
        std::string index = parse_counter_name("for the set index");
        expect(TokenKind::Comma, "after set index");
        std::string offset = parse_counter_name("for the offset");
        expect(TokenKind::RParen, "to close 'foreach_block(...)'");
        Block body = parse_block();
        return ForeachBlock{std::move(bound), std::move(index), std::move(offset), std::move(body)};
    }

    // *line = v
    Store parse_store_deref() {
        advance();  // '*'
        Var line = parse_var("after '*'");
        expect(TokenKind::Assign, "in store statement");
        Var source = parse_var("for the stored value");
        end_stmt();
        return Store{DerefRef{std::move(line)}, std::move(source)};
    }

    // L1[set, way].insert(Index)  |  L1[set, way] = v
    std::variant<Repeat, ForeachBlock, InsertV1, InsertV2, LoadLine, LoadElem, Store, GatherPartial>
    parse_lineref_stmt() {
        LineRef line = parse_line_ref();
        if (at(TokenKind::Dot)) {
            advance();
            Token member = expect(TokenKind::Identifier, "after 'L1[...]'");
            if (member.text != "insert") fail("expected 'insert' on a cache line reference");
            expect(TokenKind::LParen, "after 'insert'");
            Var array = parse_var("for the inserted vector");
            IndexRef arg = parse_index_after(std::move(array));
            expect(TokenKind::RParen, "to close 'insert(...)'");
            end_stmt();
            return InsertV2{std::move(line), std::move(arg)};
        }
        expect(TokenKind::Assign, "after 'L1[...]'");
        Var source = parse_var("for the stored value");
        end_stmt();
        return Store{std::move(line), std::move(source)};
    }

    Stmt parse_ident_stmt(SourcePos start) {
        Var first = parse_var("to start statement");
        if (at(TokenKind::LBracket)) {
            // Index target: insert into a line sequence, or element store.
            if (dialect_ == Dialect::V2) dialect_mismatch("indexed assignment");
            IndexRef target = parse_index_after(std::move(first));
            expect(TokenKind::Assign, "after indexed target");
            if (at_ident("L1")) {
                IndexRef arg = parse_insert_call();
                end_stmt();
                return Stmt{InsertV1{std::move(target), std::move(arg)}, start};
            }
            Var source = parse_var("for the stored value");
            end_stmt();
            return Stmt{Store{std::move(target), std::move(source)}, start};
        }
        expect(TokenKind::Assign, "after variable");
        return parse_assign_rhs(std::move(first), start);
    }

    Stmt parse_assign_rhs(Var target, SourcePos start) {
        if (at(TokenKind::Star)) {
            if (dialect_ == Dialect::V2) dialect_mismatch("'*' line dereference");
            advance();
            Var line = parse_var("after '*'");
            end_stmt();
            return Stmt{LoadLine{std::move(target), DerefRef{std::move(line)}}, start};
        }
        if (at(TokenKind::KwGatherPartial)) {
            if (dialect_ == Dialect::V2) dialect_mismatch("'gather_partial'");
            advance();
            expect(TokenKind::LParen, "after 'gather_partial'");
            Var vec = parse_var("for the gather target vector");
            expect(TokenKind::Comma, "between gather arguments");
            Var line = parse_var("for the gathered cache line");
            expect(TokenKind::RParen, "to close 'gather_partial(...)'");
            end_stmt();
            return Stmt{GatherPartial{std::move(target), std::move(vec), std::move(line)}, start};
        }
        if (at_ident("L1")) {
            if (at(TokenKind::LBracket, 1)) {
                if (dialect_ == Dialect::V1) dialect_mismatch("'L1[set, way]'");
                LineRef line = parse_line_ref();
                end_stmt();
                return Stmt{LoadLine{std::move(target), std::move(line)}, start};
            }
            if (dialect_ == Dialect::V2) dialect_mismatch("'L1.insert' into a variable");
            IndexRef arg = parse_insert_call();
            end_stmt();
            return Stmt{InsertV1{std::move(target), std::move(arg)}, start};
        }
        if (at(TokenKind::Identifier)) {
            if (at(TokenKind::LBracket, 1)) {
                if (dialect_ == Dialect::V2) dialect_mismatch("element load through indexing");
                Var array = parse_var("for the indexed vector");
                IndexRef source = parse_index_after(std::move(array));
                end_stmt();
                return Stmt{LoadElem{std::move(target), std::move(source)}, start};
            }
            if (at(TokenKind::Dot, 1)) {
                if (dialect_ == Dialect::V2) dialect_mismatch("'.at(...)' element access");
                Var lines = parse_var("for the line sequence");
                advance();  // '.'
                Token member = expect(TokenKind::Identifier, "after '.'");
                if (member.text != "at") fail("expected 'at' after '.'");
                expect(TokenKind::LParen, "after 'at'");
                ExprPtr index = parse_expr();
                expect(TokenKind::RParen, "to close 'at(...)'");
                end_stmt();
                return Stmt{LoadElem{std::move(target), AtCall{std::move(lines), std::move(index)}}, start};
            }
        }
        fail("expected a load, insert, or gather on the right-hand side");
    }
};

}  // namespace

Program parse(const std::string& source, Dialect dialect) {
    if (auto pragma = detect_dialect(source); pragma && *pragma != dialect) {
        std::ostringstream msg;
        msg << "source declares dialect " << to_string(*pragma) << " but " << to_string(dialect)
            << " was requested";
        throw DslError(Diagnostic{Diagnostic::Kind::DialectMismatch, SourcePos{1, 1}, msg.str()});
    }
    Parser parser(tokenize(source), dialect);
    return parser.parse_program();
}

Program parse_auto(const std::string& source) {
    auto pragma = detect_dialect(source);
    if (!pragma)
        throw DslError(Diagnostic{Diagnostic::Kind::Syntax, SourcePos{1, 1},
                                  "no '#dialect v1|v2' pragma and no dialect given"});
    Parser parser(tokenize(source), *pragma);
    return parser.parse_program();
}

}  // namespace ptm
