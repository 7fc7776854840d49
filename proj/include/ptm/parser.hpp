#pragma once

#include <string>

#include "ptm/ast.hpp"

namespace ptm {

// Parses source text under the given dialect. A "#dialect" pragma in the
// text is informative only and must agree with the requested dialect.
// Throws DslError (Syntax or DialectMismatch) on failure.
Program parse(const std::string& source, Dialect dialect);

// Parses using the file's "#dialect" pragma to pick the dialect.
Program parse_auto(const std::string& source);

}  // namespace ptm
