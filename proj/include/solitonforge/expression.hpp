#pragma once

#include "solitonforge/fields.hpp"

#include <string>

namespace solitonforge {

/// Compiles an arithmetic expression in the variables x1..xn into an
/// evaluator. Supports + - * / ^ (right-associative), unary signs,
/// parentheses, the functions exp, log, sin, cos, tan, sqrt, abs, and the
/// constants pi and e. Throws std::invalid_argument with a position message
/// on malformed input.
ScalarField::Evaluator compile_expression(const std::string& text, int n);

/// compile_expression wrapped as a finite-difference field.
ScalarField expression_field(const std::string& text, int n, FdOptions options = {});

}  // namespace solitonforge
