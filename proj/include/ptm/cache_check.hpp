#pragma once

#include <map>
#include <string>
#include <vector>

#include "ptm/ast.hpp"
#include "ptm/cache_geometry.hpp"
#include "ptm/cost_model.hpp"
#include "ptm/interpreter.hpp"
#include "ptm/rational.hpp"
#include "ptm/symbolic.hpp"

namespace ptm {

struct RedundantInsert {
    SourcePos pos;
    std::vector<std::pair<std::string, long long>> iteration;
    std::string array;
    long long block = 0;
};

struct ResidencyReport {
    std::vector<RedundantInsert> redundant_inserts;
    std::map<std::string, long long> total_inserts;
    std::map<std::string, long long> distinct_blocks;
    std::map<std::string, long long> evictions;
    std::map<std::string, long long> resident_at_end;
};

// Replays the insert events of a dialect-v2 program against explicit
// (set, way) slots. An insert whose block is already resident anywhere in
// the cache is redundant and changes nothing; otherwise the slot's previous
// occupant is evicted and the block installed. Set expressions must land in
// [0, num_sets) and ways in [0, ways).
ResidencyReport check(const Program& program, const sym::Bindings& bindings,
                      const CacheGeometry& geometry, const CostTable& table = CostTable::defaults());

// Per-array reinsert factor: total inserts / distinct blocks inserted.
std::map<std::string, Rational> reuse_summary(const ResidencyReport& report);

}  // namespace ptm
