#include "ptm/cache_check.hpp"

#include <set>

namespace ptm {

namespace {

using BlockId = std::pair<std::string, long long>;

}  // namespace

ResidencyReport check(const Program& program, const sym::Bindings& bindings,
                      const CacheGeometry& geometry, const CostTable& table) {
    geometry.validate();
    if (program.dialect != Dialect::V2)
        throw InterpreterError("residency checking requires a dialect v2 program");

    std::vector<InsertEvent> events = insert_events(program, bindings, table, geometry);

    long long num_sets = geometry.num_sets();
    // slot index = set * ways + way
    std::vector<std::optional<BlockId>> slots((size_t)(num_sets * geometry.ways));
    std::map<BlockId, size_t> resident;
    std::map<std::string, std::set<long long>> distinct;
    ResidencyReport report;

    for (const InsertEvent& event : events) {
        if (!event.set || !event.way)
            throw InterpreterError("insert without an explicit (set, way) slot in a v2 program");
        if (*event.way < 0 || *event.way >= geometry.ways)
            throw InterpreterError("way " + std::to_string(*event.way) + " at " +
                                   std::to_string(event.pos.line) + ":" +
                                   std::to_string(event.pos.col) + " is outside 0.." +
                                   std::to_string(geometry.ways - 1));
        if (*event.set < 0 || *event.set >= num_sets)
            throw InterpreterError("set index " + std::to_string(*event.set) + " at " +
                                   std::to_string(event.pos.line) + ":" +
                                   std::to_string(event.pos.col) + " is outside 0.." +
                                   std::to_string(num_sets - 1));

        BlockId block{event.array, event.block};
        report.total_inserts[event.array] += 1;
        distinct[event.array].insert(event.block);

        if (resident.count(block)) {
            report.redundant_inserts.push_back(
                RedundantInsert{event.pos, event.iteration, event.array, event.block});
            continue;
        }
        size_t slot = (size_t)(*event.set * geometry.ways + *event.way);
        if (slots[slot]) {
            report.evictions[slots[slot]->first] += 1;
            resident.erase(*slots[slot]);
        }
        slots[slot] = block;
        resident[block] = slot;
    }

    for (const auto& [array, blocks] : distinct)
        report.distinct_blocks[array] = (long long)blocks.size();
    for (const auto& [block, slot] : resident) report.resident_at_end[block.first] += 1;
    return report;
}

std::map<std::string, Rational> reuse_summary(const ResidencyReport& report) {
    std::map<std::string, Rational> factors;
    for (const auto& [array, total] : report.total_inserts) {
        long long blocks = report.distinct_blocks.at(array);
        factors[array] = Rational(total, blocks);
    }
    return factors;
}

}  // namespace ptm
