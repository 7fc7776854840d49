#include "ptm/pretty_print.hpp"

#include <sstream>

namespace ptm {

namespace {

// Parenthesize additions under a multiplication, and right-nested children
// of the same precedence, so the left-associative parser rebuilds the tree
// exactly. Parsed (left-leaning) trees print without parentheses.
void render_expr(std::ostringstream& os, const ExprPtr& expr, bool mul_operand,
                 bool right_of_same) {
    if (const auto* var = std::get_if<VarRef>(&expr->node)) {
        os << var->name;
        return;
    }
    if (const auto* add = std::get_if<Add>(&expr->node)) {
        bool parens = mul_operand || right_of_same;
        if (parens) os << "(";
        render_expr(os, add->lhs, false, false);
        os << " + ";
        render_expr(os, add->rhs, false, std::holds_alternative<Add>(add->rhs->node));
        if (parens) os << ")";
        return;
    }
    const auto& mul = std::get<Mul>(expr->node);
    bool parens = mul_operand && right_of_same;
    if (parens) os << "(";
    render_expr(os, mul.lhs, true, false);
    os << " * ";
    render_expr(os, mul.rhs, true, std::holds_alternative<Mul>(mul.rhs->node));
    if (parens) os << ")";
}

struct Printer {
    std::ostringstream out;
    int depth = 0;

    void line_start() {
        for (int i = 0; i < depth; ++i) out << "  ";
    }

    void print_block(const Block& block) {
        out << "{\n";
        ++depth;
        for (const Stmt& s : block.stmts) print_stmt(s);
        --depth;
        line_start();
        out << "}\n";
    }

    void print_stmt(const Stmt& stmt) {
        line_start();
        std::visit([this](const auto& node) { print_node(node); }, stmt.node);
    }

    void print_node(const Repeat& r) {
        out << "repeat(" << r.counter << " < " << r.bound.name;
        if (r.step) out << ", step = " << r.step->name;
        out << ") ";
        print_block(r.body);
    }

    void print_node(const ForeachBlock& f) {
        out << "foreach_block(" << f.bound.name << ", " << f.index << ", " << f.offset << ") ";
        print_block(f.body);
    }

    void print_node(const InsertV1& ins) {
        if (const auto* var = std::get_if<Var>(&ins.target))
            out << var->name;
        else
            out << render(std::get<IndexRef>(ins.target));
        out << " = L1.insert(" << render(ins.arg) << ")\n";
    }

    void print_node(const InsertV2& ins) {
        out << render(ins.target) << ".insert(" << render(ins.arg) << ")\n";
    }

    void print_node(const LoadLine& load) {
        out << load.target.name << " = ";
        if (const auto* deref = std::get_if<DerefRef>(&load.source))
            out << "*" << deref->line.name;
        else
            out << render(std::get<LineRef>(load.source));
        out << "\n";
    }

    void print_node(const LoadElem& load) {
        out << load.target.name << " = ";
        if (const auto* index = std::get_if<IndexRef>(&load.source))
            out << render(*index);
        else {
            const auto& at = std::get<AtCall>(load.source);
            out << at.lines.name << ".at(" << render(at.index) << ")";
        }
        out << "\n";
    }

    void print_node(const Store& store) {
        if (const auto* index = std::get_if<IndexRef>(&store.target))
            out << render(*index);
        else if (const auto* deref = std::get_if<DerefRef>(&store.target))
            out << "*" << deref->line.name;
        else
            out << render(std::get<LineRef>(store.target));
        out << " = " << store.source.name << "\n";
    }

    void print_node(const GatherPartial& g) {
        out << g.target.name << " = gather_partial(" << g.vec.name << ", " << g.line.name << ")\n";
    }
};

}  // namespace

std::string render(const ExprPtr& expr) {
    std::ostringstream os;
    render_expr(os, expr, false, false);
    return os.str();
}

std::string render(const IndexRef& ref) {
    return ref.array.name + "[" + render(ref.index) + "]";
}

std::string render(const LineRef& ref) {
    return "L1[" + ref.set.name + ", " + std::to_string(ref.way) + "]";
}

std::string render_operand(const Stmt& stmt) {
    if (const auto* r = std::get_if<Repeat>(&stmt.node)) {
        std::string head = "repeat(" + r->counter + " < " + r->bound.name;
        if (r->step) head += ", step = " + r->step->name;
        return head + ")";
    }
    if (const auto* f = std::get_if<ForeachBlock>(&stmt.node))
        return "foreach_block(" + f->bound.name + ", " + f->index + ", " + f->offset + ")";
    Printer p;
    p.print_stmt(stmt);
    std::string text = p.out.str();
    if (!text.empty() && text.back() == '\n') text.pop_back();
    return text;
}

std::string pretty_print(const Program& program) {
    Printer p;
    p.out << "#dialect " << to_string(program.dialect) << "\n";
    for (const Stmt& s : program.stmts) p.print_stmt(s);
    return p.out.str();
}

}  // namespace ptm
