#pragma once

#include <string>

#include "plwhile/assertion.hpp"
#include "plwhile/interp.hpp"

namespace plw {

/// Canonical text forms. All printing is deterministic: dists are
/// sorted by outcome order, memories by variable name.

std::string print_elem(const Program& prog, Elem e);
std::string print_elem_dist(const Program& prog, const ElemDist& d);

/// Display name for an origin distribution: a named binding when one
/// matches extensionally, "uniform T" when a uniform does, the inline
/// weight table otherwise; "bot" for a missing origin.
std::string dist_display(const Program& prog, const DistHandle& h);

std::string print_labeled(const Program& prog, const LabeledValue& lv);
std::string print_binding(const Program& prog, const Binding& b);
std::string print_memory(const Memory& m);
std::string print_value(const Program& prog, const Value& v);
std::string print_memory_dist(const Dist<Memory>& d);
std::string print_result_dist(const Program& prog,
                              const Dist<ProcResult>& d);

std::string print_dist_expr(const Program& prog, const DistExpr& d);
std::string print_expr(const Program& prog, const Expr& e);
std::string print_command(const Program& prog, const Command& c, int indent);
std::string print_commands(const Program& prog,
                           std::span<const CommandPtr> cmds, int indent);
std::string print_assertion(const Program& prog, const Assertion& a);
std::string print_program(const Program& prog);

}  // namespace plw
