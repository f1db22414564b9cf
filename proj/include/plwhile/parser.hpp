#pragma once

#include <stdexcept>
#include <string>

#include "plwhile/assertion.hpp"

namespace plw {

struct ParseError : std::runtime_error {
  ParseError(SourcePos p, const std::string& msg)
      : std::runtime_error(std::to_string(p.line) + ":" +
                           std::to_string(p.col) + ": " + msg),
        pos(p) {}
  SourcePos pos;
};

/// Parses a complete source file (types, distributions, modules,
/// goals, proof scripts). Deterministic errors with line/column.
Program parse_program(const std::string& text);

/// Parses a single expression against an existing program's constants
/// (used by tests and tools).
ExprPtr parse_expr_text(const Program& prog, const std::string& text);

}  // namespace plw
