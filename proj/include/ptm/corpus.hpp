#pragma once

#include <string>
#include <vector>

#include "ptm/ast.hpp"

namespace ptm::corpus {

// The six kernels shipped with the toolkit: 1a/1b scalar copy (AoS/SoA),
// 2a/2b vectorized copy, 3a/3b row-/column-wise broadcast.
std::vector<std::string> ids();
const std::string& source(const std::string& id);
Program program(const std::string& id);

}  // namespace ptm::corpus
