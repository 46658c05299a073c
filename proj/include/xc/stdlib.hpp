#pragma once

#include <stdexcept>
#include <string>

#include "xc/expr.hpp"

namespace xc::lib {

// XC source for the reusable collective algorithms (gradient, counter, ep,
// replicate, broadcast, spanning tree, ...). A chain of `def`s meant to be
// prefixed to a program body.
const std::string& prelude();

struct CompileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// prelude + body -> parsed, checked, annotated program. Throws CompileError
// with the formatted diagnostics on any error.
ExprPtr compile_program(const std::string& body);

// body only, no prelude. Same checks.
ExprPtr compile_raw(const std::string& text);

}  // namespace xc::lib
