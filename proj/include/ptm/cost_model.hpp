#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ptm/ast.hpp"
#include "ptm/symbolic.hpp"

namespace ptm {

// Cycle costs of the primitive operations plus the cache line length in
// elements. An unset entry keeps its symbol symbolic in predictions; the
// interpreter requires all entries numeric.
struct CostTable {
    std::optional<long long> t_insert = 20;
    std::optional<long long> t_load = 2;
    std::optional<long long> t_store = 2;
    std::optional<long long> t_rep = 2;
    std::optional<long long> t_gp = 4;
    long long line_elems = 16;

    static CostTable defaults() { return CostTable{}; }
    static CostTable from_string(const std::string& text);
    static CostTable from_file(const std::string& path);

    // Substitution map for the numeric entries plus L.
    sym::Bindings bindings() const;

    void validate() const;  // numeric entries and L must be positive
};

// Cost symbols used throughout the toolkit.
namespace cost_symbol {
inline const std::string insert = "T_insert";
inline const std::string load = "T_load";
inline const std::string store = "T_store";
inline const std::string rep = "T_rep";
inline const std::string gather = "T_gp";
inline const std::string line = "L";
}  // namespace cost_symbol

// One grammar production together with its semantic rule. The cost engine
// is a single bottom-up pass over these rules: each rule sees only the
// synthesized attributes of the production's children (the child costs and
// the names of its Var children), which keeps the grammar S-attributed.
struct RuleContext {
    std::vector<sym::Formula> child_costs;
    std::vector<std::string> var_names;
};

struct GrammarRule {
    std::string production;  // human-readable production text
    sym::Formula (*apply)(const RuleContext&);
};

// The semantic rule tables for the two dialects, keyed by production name.
const std::map<std::string, GrammarRule>& grammar_rules(Dialect dialect);

// Synthesized cost attribute per statement plus the root cost. The pointers
// key into the annotated program, so the annotation is valid only while
// that program object stays alive and unmoved.
struct CostAnnotation {
    std::map<const Stmt*, sym::Formula> stmt_cost;
    sym::Formula program_cost;

    sym::Formula block_cost(const Block& block) const;
};

// Bottom-up attribute evaluation. Purely symbolic: cost symbols and the
// line length L stay symbolic regardless of the cost table.
CostAnnotation annotate(const Program& program);

// Root cost attribute. With keep_symbolic (the default) the result is the
// symbolic formula; otherwise the cost table's numeric entries and L are
// substituted, leaving only program parameters free.
sym::Formula predict(const Program& program, const CostTable& table, bool keep_symbolic = true);

// Symbolic operation counts, extracted from the cost attribute by taking
// the coefficient of each cost symbol.
struct FootprintReport {
    sym::Formula inserts;
    sym::Formula loads;
    sym::Formula stores;
    sym::Formula gathers;
    sym::Formula loop_reps;
};

FootprintReport footprint_report(const Program& program);

}  // namespace ptm
