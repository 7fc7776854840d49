#include "ptm/cost_model.hpp"

#include <fstream>
#include <sstream>

namespace ptm {

namespace {

using sym::Formula;

Formula sym_of(const std::string& name) { return Formula::symbol(name); }

Formula rule_repeat_stepped(const RuleContext& ctx) {
    return sym_of(ctx.var_names[0]).divided_by(sym_of(ctx.var_names[1])) *
           (ctx.child_costs[0] + sym_of(cost_symbol::rep));
}
Formula rule_repeat_plain(const RuleContext& ctx) {
    return sym_of(ctx.var_names[0]) * (ctx.child_costs[0] + sym_of(cost_symbol::rep));
}
Formula rule_foreach_block(const RuleContext& ctx) {
    return sym_of(ctx.var_names[0]).divided_by(sym_of(cost_symbol::line)) *
           (ctx.child_costs[0] + sym_of(cost_symbol::rep));
}
Formula rule_stmts_cons(const RuleContext& ctx) { return ctx.child_costs[0] + ctx.child_costs[1]; }
Formula rule_identity(const RuleContext& ctx) { return ctx.child_costs[0]; }
Formula rule_insert(const RuleContext&) { return sym_of(cost_symbol::insert); }
Formula rule_load(const RuleContext&) { return sym_of(cost_symbol::load); }
Formula rule_store(const RuleContext&) { return sym_of(cost_symbol::store); }
Formula rule_gather(const RuleContext&) { return sym_of(cost_symbol::gather); }

std::map<std::string, GrammarRule> make_v1_rules() {
    return {
        {"Prog -> Stmts", {"Prog -> Stmts", rule_identity}},
        {"Stmts -> Stmt Stmts", {"Stmts -> Stmt Stmts", rule_stmts_cons}},
        {"Stmts -> Stmt", {"Stmts -> Stmt", rule_identity}},
        {"B -> { Stmts }", {"B -> { Stmts }", rule_identity}},
        {"R -> repeat(i < V1, step = V2) B", {"R -> repeat(i < V1, step = V2) B", rule_repeat_stepped}},
        {"R -> repeat(i < V) B", {"R -> repeat(i < V) B", rule_repeat_plain}},
        {"Insert -> V = L1.insert(Index)", {"Insert -> V = L1.insert(Index)", rule_insert}},
        {"Insert -> Index = L1.insert(Index)", {"Insert -> Index = L1.insert(Index)", rule_insert}},
        {"LoadLine -> V = Deref", {"LoadLine -> V = Deref", rule_load}},
        {"LoadElem -> V = Index", {"LoadElem -> V = Index", rule_load}},
        {"LoadElem -> V = V.at(E)", {"LoadElem -> V = V.at(E)", rule_load}},
        {"Store -> Index = V", {"Store -> Index = V", rule_store}},
        {"Store -> Deref = V", {"Store -> Deref = V", rule_store}},
        {"G -> V = gather_partial(V, V)", {"G -> V = gather_partial(V, V)", rule_gather}},
    };
}

std::map<std::string, GrammarRule> make_v2_rules() {
    return {
        {"Prog -> Stmts", {"Prog -> Stmts", rule_identity}},
        {"Stmts -> Stmt Stmts", {"Stmts -> Stmt Stmts", rule_stmts_cons}},
        {"Stmts -> Stmt", {"Stmts -> Stmt", rule_identity}},
        {"B -> { Stmts }", {"B -> { Stmts }", rule_identity}},
        {"R -> repeat(i < V) B", {"R -> repeat(i < V) B", rule_repeat_plain}},
        {"F -> foreach_block(V, V, V) B", {"F -> foreach_block(V, V, V) B", rule_foreach_block}},
        {"Insert -> LineRef.insert(Index)", {"Insert -> LineRef.insert(Index)", rule_insert}},
        {"LoadLine -> V = LineRef", {"LoadLine -> V = LineRef", rule_load}},
        {"Store -> LineRef = V", {"Store -> LineRef = V", rule_store}},
    };
}

class Annotator {
public:
    explicit Annotator(Dialect dialect)
        : dialect_(dialect), rules_(grammar_rules(dialect)) {}

    CostAnnotation run(const Program& program) {
        Formula total = stmts_cost(program.stmts);
        annotation_.program_cost = apply("Prog -> Stmts", {{total}, {}});
        return std::move(annotation_);
    }

private:
    Dialect dialect_;
    const std::map<std::string, GrammarRule>& rules_;
    CostAnnotation annotation_;

    Formula apply(const std::string& production, const RuleContext& ctx) {
        auto it = rules_.find(production);
        if (it == rules_.end())
            throw std::logic_error("production '" + production + "' is not part of dialect " +
                                   to_string(dialect_));
        return it->second.apply(ctx);
    }

    Formula stmts_cost(const std::vector<Stmt>& stmts) {
        Formula total;
        bool first = true;
        for (const Stmt& s : stmts) {
            Formula c = cost_of(s);
            total = first ? apply("Stmts -> Stmt", {{c}, {}})
                          : apply("Stmts -> Stmt Stmts", {{total, c}, {}});
            first = false;
        }
        return total;
    }

    Formula block_cost(const Block& block) {
        return apply("B -> { Stmts }", {{stmts_cost(block.stmts)}, {}});
    }

    Formula cost_of(const Stmt& stmt) {
        Formula c = std::visit([&](const auto& node) { return cost_node(node); }, stmt.node);
        annotation_.stmt_cost[&stmt] = c;
        return c;
    }

    Formula cost_node(const Repeat& r) {
        Formula body = block_cost(r.body);
        if (r.step)
            return apply("R -> repeat(i < V1, step = V2) B",
                         {{body}, {r.bound.name, r.step->name}});
        return apply("R -> repeat(i < V) B", {{body}, {r.bound.name}});
    }

    Formula cost_node(const ForeachBlock& f) {
        Formula body = block_cost(f.body);
        return apply("F -> foreach_block(V, V, V) B", {{body}, {f.bound.name, f.index, f.offset}});
    }

    Formula cost_node(const InsertV1& ins) {
        if (std::holds_alternative<Var>(ins.target))
            return apply("Insert -> V = L1.insert(Index)", {});
        return apply("Insert -> Index = L1.insert(Index)", {});
    }

    Formula cost_node(const InsertV2&) { return apply("Insert -> LineRef.insert(Index)", {}); }

    Formula cost_node(const LoadLine& load) {
        if (std::holds_alternative<DerefRef>(load.source))
            return apply("LoadLine -> V = Deref", {});
        return apply("LoadLine -> V = LineRef", {});
    }

    Formula cost_node(const LoadElem& load) {
        if (std::holds_alternative<IndexRef>(load.source))
            return apply("LoadElem -> V = Index", {});
        return apply("LoadElem -> V = V.at(E)", {});
    }

    Formula cost_node(const Store& store) {
        if (std::holds_alternative<IndexRef>(store.target))
            return apply("Store -> Index = V", {});
        if (std::holds_alternative<DerefRef>(store.target))
            return apply("Store -> Deref = V", {});
        return apply("Store -> LineRef = V", {});
    }

    Formula cost_node(const GatherPartial&) {
        return apply("G -> V = gather_partial(V, V)", {});
    }
};

}  // namespace

const std::map<std::string, GrammarRule>& grammar_rules(Dialect dialect) {
    static const std::map<std::string, GrammarRule> v1 = make_v1_rules();
    static const std::map<std::string, GrammarRule> v2 = make_v2_rules();
    return dialect == Dialect::V1 ? v1 : v2;
}

sym::Formula CostAnnotation::block_cost(const Block& block) const {
    sym::Formula total;
    for (const Stmt& s : block.stmts) {
        auto it = stmt_cost.find(&s);
        if (it == stmt_cost.end())
            throw std::logic_error("block statement was not annotated by this annotation");
        total += it->second;
    }
    return total;
}

CostAnnotation annotate(const Program& program) {
    return Annotator(program.dialect).run(program);
}

sym::Formula predict(const Program& program, const CostTable& table, bool keep_symbolic) {
    table.validate();
    sym::Formula cost = annotate(program).program_cost;
    if (keep_symbolic) return cost;
    return cost.substitute(table.bindings());
}

FootprintReport footprint_report(const Program& program) {
    sym::Formula cost = annotate(program).program_cost;
    return FootprintReport{
        cost.coefficient_of(cost_symbol::insert), cost.coefficient_of(cost_symbol::load),
        cost.coefficient_of(cost_symbol::store), cost.coefficient_of(cost_symbol::gather),
        cost.coefficient_of(cost_symbol::rep),
    };
}

// ---- Cost table parsing -----------------------------------------------------

namespace {

std::optional<long long>* entry_for(CostTable& table, const std::string& key) {
    if (key == "T_insert") return &table.t_insert;
    if (key == "T_load") return &table.t_load;
    if (key == "T_store") return &table.t_store;
    if (key == "T_rep") return &table.t_rep;
    if (key == "T_gp") return &table.t_gp;
    return nullptr;
}

}  // namespace

CostTable CostTable::from_string(const std::string& text) {
    CostTable table;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key, eq;
        long long value;
        if (!(ls >> key)) continue;
        if (!(ls >> eq >> value) || eq != "=")
            throw std::runtime_error("cost table line " + std::to_string(lineno) +
                                     ": expected 'key = integer'");
        if (key == "L") {
            table.line_elems = value;
        } else if (auto* entry = entry_for(table, key)) {
            *entry = value;
        } else {
            throw std::runtime_error("cost table line " + std::to_string(lineno) +
                                     ": unknown key '" + key + "'");
        }
    }
    table.validate();
    return table;
}

CostTable CostTable::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open cost table file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_string(buffer.str());
}

sym::Bindings CostTable::bindings() const {
    sym::Bindings b;
    if (t_insert) b[cost_symbol::insert] = Rational(*t_insert);
    if (t_load) b[cost_symbol::load] = Rational(*t_load);
    if (t_store) b[cost_symbol::store] = Rational(*t_store);
    if (t_rep) b[cost_symbol::rep] = Rational(*t_rep);
    if (t_gp) b[cost_symbol::gather] = Rational(*t_gp);
    b[cost_symbol::line] = Rational(line_elems);
    return b;
}

void CostTable::validate() const {
    auto positive = [](const std::optional<long long>& v, const char* name) {
        if (v && *v <= 0)
            throw std::runtime_error(std::string("cost table entry ") + name + " must be positive");
    };
    positive(t_insert, "T_insert");
    positive(t_load, "T_load");
    positive(t_store, "T_store");
    positive(t_rep, "T_rep");
    positive(t_gp, "T_gp");
    if (line_elems <= 0) throw std::runtime_error("cost table entry L must be positive");
}

}  // namespace ptm
