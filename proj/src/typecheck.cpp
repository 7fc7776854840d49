#include "ptm/typecheck.hpp"

#include <map>
#include <set>
#include <string>

namespace ptm {

namespace {

enum class Binding { LineVar, LineSeq };

class Checker {
public:
    explicit Checker(std::optional<int> max_ways) : max_ways_(max_ways) {}

    std::vector<Diagnostic> run(const Program& program) {
        push_scope();
        for (const Stmt& s : program.stmts) check_stmt(s);
        pop_scope();
        return std::move(diags_);
    }

private:
    std::optional<int> max_ways_;
    std::vector<Diagnostic> diags_;
    // v1 line bindings are visible from their statement onward, across block
    // boundaries: the rule is "a lexically enclosing or preceding insert".
    std::map<std::string, Binding> line_bindings_;
    // v2 slot inserts live within their loop body and nested scopes only.
    std::vector<std::set<std::pair<std::string, int>>> slot_scopes_;

    void push_scope() { slot_scopes_.emplace_back(); }
    void pop_scope() { slot_scopes_.pop_back(); }

    void error(Diagnostic::Kind kind, SourcePos pos, std::string message) {
        diags_.push_back(Diagnostic{kind, pos, std::move(message)});
    }

    std::optional<Binding> lookup(const std::string& name) const {
        auto found = line_bindings_.find(name);
        if (found == line_bindings_.end()) return std::nullopt;
        return found->second;
    }

    bool slot_inserted(const std::string& set_name, int way) const {
        for (auto it = slot_scopes_.rbegin(); it != slot_scopes_.rend(); ++it)
            if (it->count({set_name, way})) return true;
        return false;
    }

    void bind(const Var& name, Binding kind) {
        auto existing = lookup(name.name);
        if (existing) {
            if (kind == Binding::LineSeq && *existing == Binding::LineSeq)
                return;  // several inserts may fill one line sequence
            error(Diagnostic::Kind::Rebinding, name.pos,
                  "cache line variable '" + name.name + "' is already bound by an earlier insert");
            return;
        }
        line_bindings_[name.name] = kind;
    }

    void require(const Var& name, Binding kind, const char* use) {
        auto existing = lookup(name.name);
        if (!existing) {
            error(Diagnostic::Kind::UseBeforeInsert, name.pos,
                  "'" + name.name + "' is " + use + " but was never bound by L1.insert");
            return;
        }
        if (*existing != kind) {
            const char* expected = kind == Binding::LineVar ? "a cache line" : "a line sequence";
            error(Diagnostic::Kind::Semantic, name.pos,
                  "'" + name.name + "' is " + use + " but names " +
                      (*existing == Binding::LineVar ? "a cache line" : "a line sequence") +
                      ", not " + expected);
        }
    }

    void check_way(const LineRef& line, SourcePos pos) {
        if (max_ways_ && line.way >= *max_ways_)
            error(Diagnostic::Kind::WayOutOfRange, pos,
                  "way " + std::to_string(line.way) + " is outside the declared associativity of " +
                      std::to_string(*max_ways_));
    }

    void require_slot(const LineRef& line, SourcePos pos, const char* use) {
        check_way(line, pos);
        if (!slot_inserted(line.set.name, line.way))
            error(Diagnostic::Kind::UseBeforeInsert, pos,
                  "L1[" + line.set.name + ", " + std::to_string(line.way) + "] is " + use +
                      " without a preceding insert on that slot");
    }

    void check_block(const Block& block) {
        push_scope();
        for (const Stmt& s : block.stmts) check_stmt(s);
        pop_scope();
    }

    void check_stmt(const Stmt& stmt) {
        std::visit([&](const auto& node) { check_node(node, stmt.pos); }, stmt.node);
    }

    void check_node(const Repeat& r, SourcePos) { check_block(r.body); }
    void check_node(const ForeachBlock& f, SourcePos) { check_block(f.body); }

    void check_node(const InsertV1& ins, SourcePos) {
        // The insert argument is a plain memory reference; only the target binds.
        if (const auto* var = std::get_if<Var>(&ins.target))
            bind(*var, Binding::LineVar);
        else
            bind(std::get<IndexRef>(ins.target).array, Binding::LineSeq);
    }

    void check_node(const InsertV2& ins, SourcePos pos) {
        check_way(ins.target, pos);
        slot_scopes_.back().insert({ins.target.set.name, ins.target.way});
    }

    void check_node(const LoadLine& load, SourcePos pos) {
        if (const auto* deref = std::get_if<DerefRef>(&load.source))
            require(deref->line, Binding::LineVar, "dereferenced");
        else
            require_slot(std::get<LineRef>(load.source), pos, "read");
    }

    void check_node(const LoadElem& load, SourcePos) {
        if (const auto* index = std::get_if<IndexRef>(&load.source))
            require(index->array, Binding::LineVar, "indexed as a cache line");
        else
            require(std::get<AtCall>(load.source).lines, Binding::LineSeq, "accessed with .at()");
    }

    void check_node(const Store& store, SourcePos pos) {
        if (const auto* index = std::get_if<IndexRef>(&store.target))
            require(index->array, Binding::LineVar, "indexed as a cache line");
        else if (const auto* deref = std::get_if<DerefRef>(&store.target))
            require(deref->line, Binding::LineVar, "dereferenced");
        else
            require_slot(std::get<LineRef>(store.target), pos, "written");
    }

    void check_node(const GatherPartial& g, SourcePos) {
        require(g.line, Binding::LineVar, "passed as the gather_partial line");
    }
};

}  // namespace

std::vector<Diagnostic> typecheck(const Program& program, std::optional<int> max_ways) {
    return Checker(max_ways).run(program);
}

}  // namespace ptm
