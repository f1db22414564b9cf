#pragma once

#include <stdexcept>

#include "plwhile/goal.hpp"

namespace plw {

struct TacticError : std::runtime_error {
  explicit TacticError(const std::string& msg, SourcePos p = {})
      : std::runtime_error(msg), pos(p) {}
  SourcePos pos;
};

/// Consumes one matching pair of trailing deterministic assignments,
/// substituting them into the postcondition.
std::vector<RelGoal> tac_assign(const RelGoal& g);

/// Consumes one matching pair of trailing probabilistic assignments
/// sampling from extensionally equal distributions; the postcondition
/// becomes the universally quantified substituted condition (identity
/// coupling).
std::vector<RelGoal> tac_rnd(const RelGoal& g);

/// Reorders two adjacent statements (1-based i, j = i+1) on one side;
/// their write sets must be disjoint from the other's free variables.
std::vector<RelGoal> tac_swap(const RelGoal& g, Side side, int i, int j);

/// Splits both sides at index k with an intermediate assertion.
std::vector<RelGoal> tac_seq(const RelGoal& g, int k, AssertionPtr mid);

/// Splits on a boolean expression evaluated on one side. When the
/// designated side's leading statement is a conditional whose guard is
/// the expression (or its negation), the branch is resolved in each
/// subgoal.
std::vector<RelGoal> tac_case(const RelGoal& g, Side side, ExprPtr e);

/// Replaces the side's first procedure call with its body, renaming
/// parameters and locals to fresh identifiers.
std::vector<RelGoal> tac_inline(const RelGoal& g, Side side);

/// Closes a goal whose sides are skip (or empty) when the
/// precondition implies the postcondition on every memory pair.
std::vector<RelGoal> tac_skip(const RelGoal& g, int fuel);

}  // namespace plw
