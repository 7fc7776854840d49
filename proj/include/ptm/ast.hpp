#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ptm {

enum class Dialect { V1, V2 };

inline std::string to_string(Dialect d) { return d == Dialect::V1 ? "v1" : "v2"; }

struct SourcePos {
    int line = 0;  // 1-based; 0 means synthesized node
    int col = 0;
};

struct Diagnostic {
    enum class Kind {
        Lexical,
        Syntax,
        DialectMismatch,
        UseBeforeInsert,
        Rebinding,
        WayOutOfRange,
        Semantic,
    };
    Kind kind = Kind::Syntax;
    SourcePos pos;
    std::string message;

    std::string str() const {
        return std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + message;
    }
};

// Thrown for unrecoverable lexical/syntax/dialect failures; typecheck instead
// returns its diagnostics as a list.
class DslError : public std::runtime_error {
public:
    explicit DslError(Diagnostic diag) : std::runtime_error(diag.str()), diagnostic(std::move(diag)) {}
    Diagnostic diagnostic;
};

// ---- Expressions: E -> V | E + E | E * E --------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct VarRef {
    std::string name;
};
struct Add {
    ExprPtr lhs, rhs;
};
struct Mul {
    ExprPtr lhs, rhs;
};

struct Expr {
    std::variant<VarRef, Add, Mul> node;
    SourcePos pos;
};

ExprPtr make_var(std::string name, SourcePos pos = {});
ExprPtr make_add(ExprPtr lhs, ExprPtr rhs, SourcePos pos = {});
ExprPtr make_mul(ExprPtr lhs, ExprPtr rhs, SourcePos pos = {});

bool equal(const ExprPtr& a, const ExprPtr& b);

// ---- Operand forms --------------------------------------------------------

struct Var {
    std::string name;
    SourcePos pos;
    friend bool operator==(const Var& a, const Var& b) { return a.name == b.name; }
};

// v[e]: element of a memory vector, cache line, or line sequence.
struct IndexRef {
    Var array;
    ExprPtr index;
    friend bool operator==(const IndexRef& a, const IndexRef& b) {
        return a.array == b.array && equal(a.index, b.index);
    }
};

// *v: whole-line access through a cache line variable.
struct DerefRef {
    Var line;
    friend bool operator==(const DerefRef& a, const DerefRef& b) { return a.line == b.line; }
};

// v.at(e): element access into a sequence of cache lines.
struct AtCall {
    Var lines;
    ExprPtr index;
    friend bool operator==(const AtCall& a, const AtCall& b) {
        return a.lines == b.lines && equal(a.index, b.index);
    }
};

// L1[set, way]: explicit logical cache line (dialect v2 only).
struct LineRef {
    Var set;
    int way = 0;
    friend bool operator==(const LineRef& a, const LineRef& b) {
        return a.set == b.set && a.way == b.way;
    }
};

// ---- Statements ------------------------------------------------------------

struct Stmt;

struct Block {
    std::vector<Stmt> stmts;
    friend bool operator==(const Block& a, const Block& b);
};

struct Repeat {
    std::string counter;
    Var bound;
    std::optional<Var> step;
    Block body;
    friend bool operator==(const Repeat& a, const Repeat& b) {
        return a.counter == b.counter && a.bound == b.bound && a.step == b.step && a.body == b.body;
    }
};

// foreach_block(n, index, offset): the bound variable names the symbolic
// element count; index and offset are the per-iteration counters.
struct ForeachBlock {
    Var bound;
    std::string index;
    std::string offset;
    Block body;
    friend bool operator==(const ForeachBlock& a, const ForeachBlock& b) {
        return a.bound == b.bound && a.index == b.index && a.offset == b.offset && a.body == b.body;
    }
};

struct InsertV1 {
    std::variant<Var, IndexRef> target;
    IndexRef arg;
    friend bool operator==(const InsertV1& a, const InsertV1& b) {
        return a.target == b.target && a.arg == b.arg;
    }
};

struct InsertV2 {
    LineRef target;
    IndexRef arg;
    friend bool operator==(const InsertV2& a, const InsertV2& b) {
        return a.target == b.target && a.arg == b.arg;
    }
};

struct LoadLine {
    Var target;
    std::variant<DerefRef, LineRef> source;
    friend bool operator==(const LoadLine& a, const LoadLine& b) {
        return a.target == b.target && a.source == b.source;
    }
};

struct LoadElem {
    Var target;
    std::variant<IndexRef, AtCall> source;
    friend bool operator==(const LoadElem& a, const LoadElem& b) {
        return a.target == b.target && a.source == b.source;
    }
};

struct Store {
    std::variant<IndexRef, DerefRef, LineRef> target;
    Var source;
    friend bool operator==(const Store& a, const Store& b) {
        return a.target == b.target && a.source == b.source;
    }
};

struct GatherPartial {
    Var target;
    Var vec;
    Var line;
    friend bool operator==(const GatherPartial& a, const GatherPartial& b) {
        return a.target == b.target && a.vec == b.vec && a.line == b.line;
    }
};

struct Stmt {
    std::variant<Repeat, ForeachBlock, InsertV1, InsertV2, LoadLine, LoadElem, Store, GatherPartial> node;
    SourcePos pos;
    friend bool operator==(const Stmt& a, const Stmt& b) { return a.node == b.node; }
};

inline bool operator==(const Block& a, const Block& b) { return a.stmts == b.stmts; }

struct Program {
    std::vector<Stmt> stmts;
    Dialect dialect = Dialect::V1;
    friend bool operator==(const Program& a, const Program& b) {
        return a.dialect == b.dialect && a.stmts == b.stmts;
    }
};

inline ExprPtr make_var(std::string name, SourcePos pos) {
    return std::make_shared<const Expr>(Expr{VarRef{std::move(name)}, pos});
}
inline ExprPtr make_add(ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
    return std::make_shared<const Expr>(Expr{Add{std::move(lhs), std::move(rhs)}, pos});
}
inline ExprPtr make_mul(ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
    return std::make_shared<const Expr>(Expr{Mul{std::move(lhs), std::move(rhs)}, pos});
}

inline bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->node.index() != b->node.index()) return false;
    if (const auto* va = std::get_if<VarRef>(&a->node))
        return va->name == std::get<VarRef>(b->node).name;
    if (const auto* aa = std::get_if<Add>(&a->node)) {
        const auto& ab = std::get<Add>(b->node);
        return equal(aa->lhs, ab.lhs) && equal(aa->rhs, ab.rhs);
    }
    const auto& ma = std::get<Mul>(a->node);
    const auto& mb = std::get<Mul>(b->node);
    return equal(ma.lhs, mb.lhs) && equal(ma.rhs, mb.rhs);
}

}  // namespace ptm
