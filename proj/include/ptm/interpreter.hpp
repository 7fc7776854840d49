#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ptm/ast.hpp"
#include "ptm/cache_geometry.hpp"
#include "ptm/cost_model.hpp"
#include "ptm/symbolic.hpp"

namespace ptm {

class InterpreterError : public std::runtime_error {
public:
    explicit InterpreterError(const std::string& what) : std::runtime_error(what) {}
};

enum class OpKind { Insert, Load, Store, Gather, LoopRep };

std::string to_string(OpKind kind);

struct RunResult {
    long long cycles = 0;
    std::map<OpKind, long long> op_counts;
    std::vector<std::string> trace;  // filled only when tracing was requested
};

// One executed insert: which block of which vector went in, where the
// statement sits in the source, and the loop counters at that moment.
// set/way are filled for dialect v2 inserts only.
struct InsertEvent {
    SourcePos pos;
    std::vector<std::pair<std::string, long long>> iteration;
    std::string array;
    long long block = 0;
    std::optional<long long> set;
    std::optional<int> way;
};

// Concrete execution oracle: unrolls every loop under the bindings and
// charges each operation its cost-table cycles, one T_rep per iteration.
//
// Pre: the program typechecks (not re-verified here) and every loop bound
// resolves to a positive integer. Loop steps and foreach_block line lengths
// must divide their bounds. The foreach_block index counter is bound to
// (offset / L) mod num_sets when a geometry is given, else to offset / L.
RunResult run(const Program& program, const sym::Bindings& bindings, const CostTable& table,
              bool trace = false, const std::optional<CacheGeometry>& geometry = std::nullopt);

// The ordered insert events of the same execution.
std::vector<InsertEvent> insert_events(const Program& program, const sym::Bindings& bindings,
                                       const CostTable& table,
                                       const std::optional<CacheGeometry>& geometry = std::nullopt);

}  // namespace ptm
