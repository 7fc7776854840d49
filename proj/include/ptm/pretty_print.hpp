#pragma once

#include <string>

#include "ptm/ast.hpp"

namespace ptm {

// Canonical concrete syntax: "#dialect" pragma first, one statement per
// line, two-space indentation. Re-parsing the output yields a structurally
// identical program.
std::string pretty_print(const Program& program);

std::string render(const ExprPtr& expr);
std::string render(const IndexRef& ref);
std::string render(const LineRef& ref);
std::string render_operand(const Stmt& stmt);  // compact one-line form, loops show their header

}  // namespace ptm
