#include "plwhile/game.hpp"

#include <algorithm>

#include "plwhile/printer.hpp"

namespace plw {

OracleSystem init_system(const Program& prog, const Module& mod, int fuel) {
  const Proc* init = mod.find_proc("init");
  if (!init)
    throw EvalFault("module " + mod.name + " has no init procedure");
  if (!init->params.empty())
    throw EvalFault(mod.name + ".init must take no arguments");
  if (!lossless_check(prog, mod, "init", fuel))
    throw EvalFault(mod.name + ".init is not lossless at fuel " +
                    std::to_string(fuel));

  OracleSystem sys;
  sys.prog = &prog;
  sys.mod = &mod;
  sys.uni = globals_universe(prog, mod);
  sys.fuel = fuel;
  Memory fresh(*sys.uni, true);
  sys.state = run_proc(prog, mod, "init", {}, fresh, fuel)
                  .map([](const ProcResult& r) { return r.mem; });
  for (const auto& p : mod.procs)
    if (p.name != "init") sys.exposed.push_back(p.name);
  return sys;
}

std::vector<Query> query_alphabet(const Program& prog, const Module& mod) {
  std::vector<Query> out;
  for (const auto& p : mod.procs) {
    if (p.name == "init") continue;
    std::vector<std::vector<Value>> tuples{{}};
    for (const auto& param : p.params) {
      const auto& elems = prog.types.at(param.type.type_id).elements;
      std::vector<std::vector<Value>> next;
      for (const auto& t : tuples)
        for (std::size_t i = 0; i < elems.size(); ++i) {
          auto copy = t;
          copy.push_back(Elem{param.type.type_id, static_cast<int>(i)});
          next.push_back(std::move(copy));
        }
      tuples = std::move(next);
    }
    for (auto& t : tuples) out.push_back(Query{p.name, std::move(t)});
  }
  return out;
}

std::vector<Value> answer_alphabet(const Program& prog, const Module& mod,
                                   const std::string& proc) {
  const Proc* p = mod.find_proc(proc);
  if (!p) throw EvalFault("unknown procedure: " + proc);
  if (!p->ret) return {Unit{}};
  std::vector<Value> out;
  const auto& elems = prog.types.at(p->ret_type_id).elements;
  for (std::size_t i = 0; i < elems.size(); ++i)
    out.push_back(Elem{p->ret_type_id, static_cast<int>(i)});
  return out;
}

std::map<Value, Dist<Memory>> step_system(const OracleSystem& sys,
                                          const Dist<Memory>& state,
                                          const Query& q) {
  std::map<Value, std::map<Memory, Rational>> acc;
  for (const auto& [m, w] : state.weights()) {
    Dist<ProcResult> res =
        run_proc(*sys.prog, *sys.mod, q.proc, q.args, m, sys.fuel);
    for (const auto& [r, wr] : res.weights()) {
      auto& bucket = acc[r.ret][r.mem];
      bucket += w * wr;
    }
  }
  std::map<Value, Dist<Memory>> out;
  for (auto& [answer, cells] : acc) {
    std::vector<Dist<Memory>::Entry> entries;
    for (auto& [m, w] : cells) entries.emplace_back(m, w);
    out.emplace(answer, Dist<Memory>::from_weights(std::move(entries)));
  }
  return out;
}

namespace {

struct GamePair {
  OracleSystem left, right;
  std::vector<Query> alphabet;
};

GamePair make_pair_checked(const Program& prog, const Module& m1,
                           const Module& m2, int fuel) {
  // The distinguisher interacts through signatures; they must match.
  auto signature = [&](const Module& m) {
    std::vector<std::tuple<std::string, std::vector<int>, int>> sig;
    for (const auto& p : m.procs) {
      if (p.name == "init") continue;
      std::vector<int> params;
      for (const auto& d : p.params) params.push_back(d.type.type_id);
      sig.emplace_back(p.name, params, p.ret ? p.ret_type_id : -1);
    }
    std::sort(sig.begin(), sig.end());
    return sig;
  };
  if (signature(m1) != signature(m2))
    throw EvalFault("modules " + m1.name + " and " + m2.name +
                    " expose different procedure signatures");
  for (const Module* m : {&m1, &m2})
    for (const auto& p : m->procs)
      if (p.name != "init" && !lossless_check(prog, *m, p.name, fuel))
        throw EvalFault(m->name + "." + p.name +
                        " is not lossless; transcript masses would be "
                        "uninterpretable");
  GamePair gp{init_system(prog, m1, fuel), init_system(prog, m2, fuel),
              query_alphabet(prog, m1)};
  return gp;
}

Rational positive_part(const Rational& r) {
  return r.is_negative() ? Rational(0) : r;
}

/// A(b) = max(base(b), max_q sum_a A(step(b, q)(a))), exact.
Rational adv_dp(const GamePair& gp, const Dist<Memory>& left,
                const Dist<Memory>& right, int depth,
                StrategyPtr* witness) {
  Rational base = positive_part(left.mass() - right.mass());
  Rational best = base;
  StrategyPtr best_strategy;
  if (witness) {
    auto leaf = std::make_shared<Strategy>();
    leaf->accept = right.mass() < left.mass();
    best_strategy = leaf;
  }
  if (depth > 0) {
    for (const auto& q : gp.alphabet) {
      auto stepsL = step_system(gp.left, left, q);
      auto stepsR = step_system(gp.right, right, q);
      std::map<Value, bool> answers;
      for (const auto& [a, d] : stepsL) answers[a] = true;
      for (const auto& [a, d] : stepsR) answers[a] = true;
      Rational total;
      std::vector<std::pair<Value, StrategyPtr>> children;
      for (const auto& [a, unused] : answers) {
        auto itL = stepsL.find(a);
        auto itR = stepsR.find(a);
        static const Dist<Memory> kEmpty;
        const Dist<Memory>& dl = itL == stepsL.end() ? kEmpty : itL->second;
        const Dist<Memory>& dr = itR == stepsR.end() ? kEmpty : itR->second;
        StrategyPtr child;
        total += adv_dp(gp, dl, dr, depth - 1, witness ? &child : nullptr);
        if (witness) children.emplace_back(a, child);
      }
      if (best < total) {
        best = total;
        if (witness) {
          auto node = std::make_shared<Strategy>();
          node->query = q;
          node->children = std::move(children);
          best_strategy = node;
        }
      }
    }
  }
  if (witness) *witness = best_strategy;
  return best;
}

/// E(b) = max(max(mass_l, mass_r) / 2, max_q sum_a E(...)).
Rational exp_dp(const GamePair& gp, const Dist<Memory>& left,
                const Dist<Memory>& right, int depth) {
  Rational base = max(left.mass(), right.mass()) / Rational(2);
  Rational best = base;
  if (depth > 0) {
    for (const auto& q : gp.alphabet) {
      auto stepsL = step_system(gp.left, left, q);
      auto stepsR = step_system(gp.right, right, q);
      std::map<Value, bool> answers;
      for (const auto& [a, d] : stepsL) answers[a] = true;
      for (const auto& [a, d] : stepsR) answers[a] = true;
      Rational total;
      for (const auto& [a, unused] : answers) {
        auto itL = stepsL.find(a);
        auto itR = stepsR.find(a);
        static const Dist<Memory> kEmpty;
        total += exp_dp(gp, itL == stepsL.end() ? kEmpty : itL->second,
                        itR == stepsR.end() ? kEmpty : itR->second,
                        depth - 1);
      }
      if (best < total) best = total;
    }
  }
  return best;
}

}  // namespace

Rational optimal_advantage(const Program& prog, const Module& m1,
                           const Module& m2, int depth, int fuel,
                           StrategyPtr* witness) {
  GamePair fwd = make_pair_checked(prog, m1, m2, fuel);
  StrategyPtr w1, w2;
  Rational a1 = adv_dp(fwd, fwd.left.state, fwd.right.state, depth,
                       witness ? &w1 : nullptr);
  GamePair bwd = make_pair_checked(prog, m2, m1, fuel);
  Rational a2 = adv_dp(bwd, bwd.left.state, bwd.right.state, depth,
                       witness ? &w2 : nullptr);
  if (witness) *witness = a2 > a1 ? w2 : w1;
  return max(a1, a2);
}

Rational experiment_value(const Program& prog, const Module& m1,
                          const Module& m2, int depth, int fuel) {
  GamePair gp = make_pair_checked(prog, m1, m2, fuel);
  return exp_dp(gp, gp.left.state, gp.right.state, depth);
}

namespace {

void transcripts(const OracleSystem& sys, const Dist<Memory>& state,
                 const StrategyPtr& node, std::vector<Value>& prefix,
                 std::map<std::vector<Value>, Rational>& acc) {
  if (!node->query) {
    if (!state.mass().is_zero()) acc[prefix] += state.mass();
    return;
  }
  auto steps = step_system(sys, state, *node->query);
  for (const auto& [answer, child] : node->children) {
    auto it = steps.find(answer);
    static const Dist<Memory> kEmpty;
    prefix.push_back(answer);
    transcripts(sys, it == steps.end() ? kEmpty : it->second, child, prefix,
                acc);
    prefix.pop_back();
  }
}

}  // namespace

Dist<std::vector<Value>> transcript_dist(const OracleSystem& sys,
                                         const StrategyPtr& strategy) {
  std::map<std::vector<Value>, Rational> acc;
  std::vector<Value> prefix;
  transcripts(sys, sys.state, strategy, prefix, acc);
  std::vector<Dist<std::vector<Value>>::Entry> entries;
  for (auto& [t, w] : acc) entries.emplace_back(t, w);
  return Dist<std::vector<Value>>::from_weights(std::move(entries));
}

std::vector<StrategyPtr> enumerate_strategies(const Program& prog,
                                              const Module& mod, int depth) {
  auto alphabet = query_alphabet(prog, mod);
  std::vector<std::vector<StrategyPtr>> by_depth;
  by_depth.push_back({std::make_shared<Strategy>()});
  for (int d = 1; d <= depth; ++d) {
    std::vector<StrategyPtr> level = by_depth.back();  // stop early
    for (const auto& q : alphabet) {
      auto answers = answer_alphabet(prog, mod, q.proc);
      // Cartesian product of subtrees per answer.
      std::vector<std::vector<StrategyPtr>> combos{{}};
      for (std::size_t a = 0; a < answers.size(); ++a) {
        std::vector<std::vector<StrategyPtr>> next;
        for (const auto& combo : combos)
          for (const auto& sub : by_depth[static_cast<std::size_t>(d - 1)]) {
            auto copy = combo;
            copy.push_back(sub);
            next.push_back(std::move(copy));
          }
        combos = std::move(next);
      }
      for (const auto& combo : combos) {
        auto node = std::make_shared<Strategy>();
        node->query = q;
        for (std::size_t a = 0; a < answers.size(); ++a)
          node->children.emplace_back(answers[a], combo[a]);
        level.push_back(node);
      }
    }
    by_depth.push_back(std::move(level));
  }
  return by_depth.back();
}

Rational strategy_advantage(const OracleSystem& left,
                            const OracleSystem& right,
                            const StrategyPtr& strategy) {
  auto t1 = transcript_dist(left, strategy);
  auto t2 = transcript_dist(right, strategy);
  Rational total;
  for (const auto& [t, w] : t1.weights()) {
    Rational diff = w - t2.weight_of(t);
    if (!diff.is_negative()) total += diff;
  }
  return total;
}

std::string print_strategy(const Program& prog, const StrategyPtr& s,
                           int indent) {
  std::string pad(static_cast<std::size_t>(2 * indent), ' ');
  if (!s->query) return pad + (s->accept ? "accept" : "reject") + "\n";
  std::string out = pad + s->query->proc + "(";
  for (std::size_t i = 0; i < s->query->args.size(); ++i) {
    if (i) out += ", ";
    out += print_value(prog, s->query->args[i]);
  }
  out += ")\n";
  for (const auto& [a, child] : s->children) {
    out += pad + "  = " + print_value(prog, a) + " ->\n" +
           print_strategy(prog, child, indent + 2);
  }
  return out;
}

}  // namespace plw
