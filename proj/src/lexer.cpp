#include "ptm/lexer.hpp"

#include <cctype>
#include <sstream>

namespace ptm {

std::string to_string(TokenKind kind) {
    switch (kind) {
        case TokenKind::Identifier: return "identifier";
        case TokenKind::Integer: return "integer";
        case TokenKind::KwRepeat: return "'repeat'";
        case TokenKind::KwForeachBlock: return "'foreach_block'";
        case TokenKind::KwGatherPartial: return "'gather_partial'";
        case TokenKind::KwStep: return "'step'";
        case TokenKind::Assign: return "'='";
        case TokenKind::Less: return "'<'";
        case TokenKind::LBracket: return "'['";
        case TokenKind::RBracket: return "']'";
        case TokenKind::LParen: return "'('";
        case TokenKind::RParen: return "')'";
        case TokenKind::LBrace: return "'{'";
        case TokenKind::RBrace: return "'}'";
        case TokenKind::Comma: return "','";
        case TokenKind::Star: return "'*'";
        case TokenKind::Plus: return "'+'";
        case TokenKind::Dot: return "'.'";
        case TokenKind::Percent: return "'%'";
        case TokenKind::Newline: return "end of line";
        case TokenKind::EndOfFile: return "end of input";
    }
    return "?";
}

namespace {

TokenKind keyword_kind(const std::string& word) {
    if (word == "repeat") return TokenKind::KwRepeat;
    if (word == "foreach_block") return TokenKind::KwForeachBlock;
    if (word == "gather_partial") return TokenKind::KwGatherPartial;
    if (word == "step") return TokenKind::KwStep;
    return TokenKind::Identifier;
}

}  // namespace

std::vector<Token> tokenize(const std::string& source) {
    std::vector<Token> tokens;
    int line = 1, col = 1;
    size_t i = 0;
    auto emit = [&](TokenKind kind, std::string text, int at_line, int at_col, long long value = 0) {
        if (kind == TokenKind::Newline && (tokens.empty() || tokens.back().kind == TokenKind::Newline))
            return;  // collapse blank lines and leading newlines
        tokens.push_back(Token{kind, std::move(text), SourcePos{at_line, at_col}, value});
    };

    while (i < source.size()) {
        char c = source[i];
        int at_line = line, at_col = col;
        if (c == '\n') {
            emit(TokenKind::Newline, "\n", at_line, at_col);
            ++i;
            ++line;
            col = 1;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            ++col;
            continue;
        }
        if (c == '#') {
            while (i < source.size() && source[i] != '\n') { ++i; ++col; }
            continue;
        }
        if (std::isalpha((unsigned char)c) || c == '_') {
            size_t start = i;
            while (i < source.size() && (std::isalnum((unsigned char)source[i]) || source[i] == '_')) {
                ++i;
                ++col;
            }
            std::string word = source.substr(start, i - start);
            emit(keyword_kind(word), word, at_line, at_col);
            continue;
        }
        if (std::isdigit((unsigned char)c)) {
            size_t start = i;
            while (i < source.size() && std::isdigit((unsigned char)source[i])) { ++i; ++col; }
            std::string digits = source.substr(start, i - start);
            emit(TokenKind::Integer, digits, at_line, at_col, std::stoll(digits));
            continue;
        }
        TokenKind kind;
        switch (c) {
            case '=': kind = TokenKind::Assign; break;
            case '<': kind = TokenKind::Less; break;
            case '[': kind = TokenKind::LBracket; break;
            case ']': kind = TokenKind::RBracket; break;
            case '(': kind = TokenKind::LParen; break;
            case ')': kind = TokenKind::RParen; break;
            case '{': kind = TokenKind::LBrace; break;
            case '}': kind = TokenKind::RBrace; break;
            case ',': kind = TokenKind::Comma; break;
            case '*': kind = TokenKind::Star; break;
            case '+': kind = TokenKind::Plus; break;
            case '.': kind = TokenKind::Dot; break;
            case '%': kind = TokenKind::Percent; break;
            default: {
                std::ostringstream msg;
                msg << "unrecognized character '" << c << "'";
                throw DslError(Diagnostic{Diagnostic::Kind::Lexical, SourcePos{at_line, at_col}, msg.str()});
            }
        }
        emit(kind, std::string(1, c), at_line, at_col);
        ++i;
        ++col;
    }
    if (!tokens.empty() && tokens.back().kind != TokenKind::Newline)
        tokens.push_back(Token{TokenKind::Newline, "\n", SourcePos{line, col}, 0});
    tokens.push_back(Token{TokenKind::EndOfFile, "", SourcePos{line, col}, 0});
    return tokens;
}

std::optional<Dialect> detect_dialect(const std::string& source) {
    std::istringstream in(source);
    std::string text;
    while (std::getline(in, text)) {
        size_t start = text.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (text[start] != '#') return std::nullopt;
        std::istringstream ls(text.substr(start + 1));
        std::string word, value;
        ls >> word >> value;
        if (word != "dialect") return std::nullopt;
        if (value == "v1") return Dialect::V1;
        if (value == "v2") return Dialect::V2;
        throw DslError(Diagnostic{Diagnostic::Kind::Syntax, SourcePos{1, (int)start + 1},
                                  "unknown dialect '" + value + "' in pragma (expected v1 or v2)"});
    }
    return std::nullopt;
}

}  // namespace ptm
