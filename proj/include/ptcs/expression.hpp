#pragma once

// Arithmetic expressions in one variable, for user-supplied symbols such as
// "cos(q)^2/sin(q)" on the command line.
//
// Grammar: + - * / ^ (right associative), unary minus, parentheses, numbers,
// the variable `q`, constants `pi` and `nu`, and the functions
// sin cos tan cot exp log sqrt abs.

#include <functional>
#include <string>

#include "ptcs/cs_quantization.hpp"

namespace ptcs {

/// Compiles an expression in q.  Throws ValidationError naming the offending
/// column on a syntax error.
std::function<double(double)> compile_expression(const std::string& text, double nu);

/// "u-expr:degree" (e.g. "1/sin(q)^2:0") or a built-in name.
ClassicalSymbol parse_symbol(const std::string& spec, double nu);

}  // namespace ptcs
