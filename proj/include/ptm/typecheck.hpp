#pragma once

#include <optional>
#include <vector>

#include "ptm/ast.hpp"

namespace ptm {

// Enforces the cache-line discipline. In v1 every dereference, line
// indexing, .at() access and gather line argument must name a variable
// bound by a lexically preceding or enclosing L1.insert, and a line
// variable is bound at most once. In v2 every L1[set, way] read or write
// needs a preceding .insert on the same (set, way) pair within the same
// loop body or an enclosing scope. When max_ways is given, v2 way indices
// are range-checked against it. Returns an empty list when well typed.
std::vector<Diagnostic> typecheck(const Program& program,
                                  std::optional<int> max_ways = std::nullopt);

}  // namespace ptm
