#pragma once

#include <map>
#include <memory>

#include "plwhile/interp.hpp"

namespace plw {

/// One oracle interaction: an exposed procedure and concrete argument
/// values over the finite query alphabet.
struct Query {
  std::string proc;
  std::vector<Value> args;

  bool operator==(const Query& o) const {
    return proc == o.proc && args == o.args;
  }
  bool operator<(const Query& o) const {
    if (proc != o.proc) return proc < o.proc;
    return args < o.args;
  }
};

/// An initialized construction: module state after running init, with
/// the procedures the distinguisher may call. Only return values are
/// observable.
struct OracleSystem {
  const Program* prog = nullptr;
  const Module* mod = nullptr;
  std::shared_ptr<Universe> uni;
  Dist<Memory> state;
  std::vector<std::string> exposed;
  int fuel = 64;
};

/// Runs init (required, lossless) and returns the post-init system.
/// All procedures other than init are exposed.
OracleSystem init_system(const Program& prog, const Module& mod, int fuel);

/// Full finite query alphabet of a module: every exposed procedure
/// with every argument tuple, in declaration/element order.
std::vector<Query> query_alphabet(const Program& prog, const Module& mod);

/// Observable answers a query can produce (all values of the return
/// type; unit for procedures without one).
std::vector<Value> answer_alphabet(const Program& prog, const Module& mod,
                                   const std::string& proc);

/// One oracle step on an unnormalized state: the answer-indexed
/// posterior sub-distributions (masses sum to the input mass for
/// lossless procedures).
std::map<Value, Dist<Memory>> step_system(const OracleSystem& sys,
                                          const Dist<Memory>& state,
                                          const Query& q);

/// Adaptive deterministic strategy: a decision tree of queries with
/// one child per possible answer. A node without a query stops; accept
/// records the output bit of the optimal distinguisher at that leaf.
struct Strategy;
using StrategyPtr = std::shared_ptr<const Strategy>;
struct Strategy {
  std::optional<Query> query;
  std::vector<std::pair<Value, StrategyPtr>> children;
  bool accept = false;
};

/// Exact distribution of answer transcripts under a fixed strategy.
Dist<std::vector<Value>> transcript_dist(const OracleSystem& sys,
                                         const StrategyPtr& strategy);

/// The exact optimal distinguishing advantage over all adaptive
/// deterministic strategies of at most `depth` queries, run in both
/// orientations (this realizes the absolute value of the definition).
/// Requires matching exposed signatures and lossless exposed
/// procedures on both modules.
Rational optimal_advantage(const Program& prog, const Module& m1,
                           const Module& m2, int depth, int fuel,
                           StrategyPtr* witness = nullptr);

/// The exact optimal success probability of the guessing experiment:
/// (1/2) Pr[accept | left] + (1/2) Pr[reject | right], maximized over
/// strategies. Equals 1/2 exactly when the advantage is 0.
Rational experiment_value(const Program& prog, const Module& m1,
                          const Module& m2, int depth, int fuel);

/// All strategies of depth <= depth over a module's alphabet (the
/// brute-force oracle for the dynamic program).
std::vector<StrategyPtr> enumerate_strategies(const Program& prog,
                                              const Module& mod, int depth);

/// One-sided advantage of a fixed strategy with the best output rule:
/// sum over transcripts of max(0, p_left - p_right).
Rational strategy_advantage(const OracleSystem& left,
                            const OracleSystem& right,
                            const StrategyPtr& strategy);

std::string print_strategy(const Program& prog, const StrategyPtr& s,
                           int indent = 0);

}  // namespace plw
