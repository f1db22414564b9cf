#pragma once

#include "plwhile/discharge.hpp"

namespace plw {

struct GoalError : std::runtime_error {
  explicit GoalError(const std::string& msg, SourcePos p = {})
      : std::runtime_error(msg), pos(p) {}
  SourcePos pos;
};

/// Elaborates a declared goal into a relational judgment: resolves the
/// module contexts, merges the declaration universes of both sides,
/// inlines procedure-call sides (binding arguments to parameters), and
/// type-checks programs and assertions.
RelGoal build_goal(const Program& prog, const GoalDecl& g);

struct ScriptResult {
  enum class Status { Proven, Stuck, Refuted };
  Status status = Status::Proven;
  /// Populated for Stuck (tactic failure, goals remaining) and Refuted
  /// (discharge counterexample); includes the goal label.
  std::string message;
  std::optional<Counterexample> cex;

  bool proven() const { return status == Status::Proven; }
};

/// Runs the proof script attached to the named goal: applies each
/// tactic to the first open goal, discharging on auto, and reports the
/// first failure faithfully.
ScriptResult check_script(const Program& prog, const std::string& goal_name,
                          int fuel);

}  // namespace plw
