#pragma once

#include <optional>

#include "plwhile/goal.hpp"

namespace plw {

struct Counterexample {
  Memory m1, m2;
  Dist<Memory> out1, out2;
  /// Human-readable diagnosis: failing postcondition conjunct when the
  /// outputs are deterministic, mass mismatch, or coupling failure.
  std::string detail;
  /// Index into conjuncts(post) when a specific conjunct failed on
  /// deterministic outputs; -1 otherwise.
  int failing_conjunct = -1;
};

struct DischargeResult {
  enum class Status { Proven, Refuted };
  Status status = Status::Proven;
  std::optional<Counterexample> cex;
  long long pairs_checked = 0;

  bool proven() const { return status == Status::Proven; }
};

/// Exhaustive semantic discharge: enumerates every memory pair over
/// the finite domains that satisfies the precondition, executes both
/// sides, and checks that the postcondition lifts (a coupling exists).
///
/// When the precondition carries the secure-assignment invariant
/// together with the domain facts of the direct lazy-sampling rule
/// (entry set on the right, unset on the left), the enumerator treats
/// the right-hand entry's stored value as distributed by the invariant
/// distribution, weighting the pair family by it, and co-varying any
/// borrowed left-hand variable the precondition ties to that entry.
/// This realizes the de-virtualized hypothesis of the lazy-sampling
/// rule; pairs whose family is cut by the precondition fall back to
/// pointwise checking.
DischargeResult discharge(const RelGoal& g, int fuel);

/// Enumeration check that pre implies post on every conforming pair
/// (the skip-closure test). Equivalent to discharging with two empty
/// programs.
DischargeResult check_implication(const RelGoal& g, int fuel);

}  // namespace plw
