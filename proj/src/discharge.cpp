#include "plwhile/discharge.hpp"

#include "plwhile/check.hpp"
#include "plwhile/lift.hpp"
#include "plwhile/printer.hpp"

namespace plw {

bool name_used_in_goal(const RelGoal& g, const std::string& name) {
  for (std::size_t s = 0; s < g.uni->slot_count(true); ++s)
    if (g.uni->decl(s).name == name) return true;
  auto scan_side = [&](const std::vector<CommandPtr>& cmds,
                       const Module* mod) {
    if (cmds.empty()) return false;
    auto fv = free_vars(*g.uni->prog, mod, cmds);
    return fv.count(name) > 0;
  };
  if (scan_side(g.left, g.lmod) || scan_side(g.right, g.rmod)) return true;
  if (g.uni->prog->find_elem(name) || g.uni->prog->find_dist(name))
    return true;
  return false;
}

std::string fresh_name(const RelGoal& g, const std::string& base) {
  for (int k = 0;; ++k) {
    std::string cand = base + "#" + std::to_string(k);
    if (!name_used_in_goal(g, cand)) return cand;
  }
}

std::shared_ptr<const Universe> with_aug_left(const Universe& u, VarDecl d) {
  auto copy = std::make_shared<Universe>(u);
  copy->aug_left.push_back(std::move(d));
  return copy;
}

std::shared_ptr<const Universe> with_shared_var(const Universe& u,
                                                VarDecl d) {
  auto copy = std::make_shared<Universe>(u);
  copy->vars.push_back(std::move(d));
  return copy;
}

namespace {

/// Detected direct-lazy-sampling pattern in a precondition: the
/// invariant inv(t1, t2, d) plus "key in dom t2 on the right" and
/// "key not in dom t1 on the left", with any borrowed left variables
/// tied to t2[key].
struct GroupPattern {
  bool active = false;
  std::string t1, t2;
  DistExpr dist;
  ExprPtr key;
  std::vector<std::string> tied_left_vars;
};

bool is_in_dom_atom(const Assertion& a, Side side, std::string* map,
                    ExprPtr* key, bool* positive) {
  if (a.kind == Assertion::Kind::BoolAt && a.side == side) {
    const Expr& e = *a.e1;
    if (e.kind == Expr::Kind::InDom) {
      *map = e.name;
      *key = e.a;
      *positive = true;
      return true;
    }
    if (e.kind == Expr::Kind::Not && e.a->kind == Expr::Kind::InDom) {
      *map = e.a->name;
      *key = e.a->a;
      *positive = false;
      return true;
    }
  }
  if (a.kind == Assertion::Kind::Not &&
      a.a->kind == Assertion::Kind::BoolAt && a.a->side == side &&
      a.a->e1->kind == Expr::Kind::InDom) {
    *map = a.a->e1->name;
    *key = a.a->e1->a;
    *positive = false;
    return true;
  }
  return false;
}

GroupPattern detect_group(const RelGoal& g) {
  GroupPattern p;
  auto parts = conjuncts(g.pre);

  const Assertion* inv = nullptr;
  for (const auto& c : parts)
    if (c->kind == Assertion::Kind::SecInv) {
      inv = c.get();
      break;
    }
  if (!inv) return p;
  if (inv->dist->kind == DistExpr::Kind::Point) return p;

  ExprPtr in_key, out_key;
  bool have_in = false, have_out = false;
  for (const auto& c : parts) {
    std::string map;
    ExprPtr key;
    bool positive;
    if (!is_in_dom_atom(*c, Side::Right, &map, &key, &positive) &&
        !is_in_dom_atom(*c, Side::Left, &map, &key, &positive))
      continue;
    std::string m2;
    ExprPtr k2;
    bool pos2;
    if (is_in_dom_atom(*c, Side::Right, &m2, &k2, &pos2) && pos2 &&
        m2 == inv->map2) {
      in_key = k2;
      have_in = true;
    }
    if (is_in_dom_atom(*c, Side::Left, &m2, &k2, &pos2) && !pos2 &&
        m2 == inv->map1) {
      out_key = k2;
      have_out = true;
    }
  }
  if (!have_in || !have_out || !same_expr(in_key, out_key)) return p;

  p.active = true;
  p.t1 = inv->map1;
  p.t2 = inv->map2;
  p.dist = *inv->dist;
  p.key = in_key;

  // Borrowed variables: left-side labeled variables the precondition
  // equates with t2[key] on the right.
  for (const auto& c : parts) {
    if (c->kind != Assertion::Kind::ExprRel || c->neq) continue;
    auto match = [&](const ExprPtr& ve, Side vs, const ExprPtr& me, Side ms) {
      if (vs != Side::Left || ms != Side::Right) return;
      if (ve->kind != Expr::Kind::Var || me->kind != Expr::Kind::MapLookup)
        return;
      if (me->name != p.t2 || !same_expr(me->a, p.key)) return;
      int slot = g.uni->slot_of(ve->name, true);
      if (slot < 0) return;
      if (g.uni->decl(slot).type.kind == VarType::Kind::Labeled)
        p.tied_left_vars.push_back(ve->name);
    };
    match(c->e1, c->s1, c->e2, c->s2);
    match(c->e2, c->s2, c->e1, c->s1);
  }
  return p;
}

/// Which memories an assertion reads; conjuncts touching only one
/// side can be checked before the other side's enumeration runs.
void side_usage(const Assertion& a, bool& uses_left, bool& uses_right) {
  switch (a.kind) {
    case Assertion::Kind::True:
    case Assertion::Kind::False:
      return;
    case Assertion::Kind::BoolAt:
    case Assertion::Kind::Leaked:
    case Assertion::Kind::Sampled:
      (a.side == Side::Left ? uses_left : uses_right) = true;
      return;
    case Assertion::Kind::ExprRel:
      (a.s1 == Side::Left ? uses_left : uses_right) = true;
      (a.s2 == Side::Left ? uses_left : uses_right) = true;
      return;
    case Assertion::Kind::Not:
    case Assertion::Kind::ForallK:
      side_usage(*a.a, uses_left, uses_right);
      return;
    case Assertion::Kind::And:
    case Assertion::Kind::Or:
    case Assertion::Kind::Implies:
      side_usage(*a.a, uses_left, uses_right);
      side_usage(*a.b, uses_left, uses_right);
      return;
    default:
      uses_left = uses_right = true;
      return;
  }
}

/// Backwards liveness over an assertion: which memory slots its truth
/// can depend on. Tactic-generated nodes write temporaries before
/// reading them, so the dependency set is often far smaller than the
/// universe; the postcondition check is memoized on it.
struct LiveNames {
  bool all = false;
  std::set<std::pair<bool, std::string>> reads;  // (left?, name)
};

void expr_live(const Expr& e, bool left, LiveNames& out) {
  switch (e.kind) {
    case Expr::Kind::Var:
    case Expr::Kind::MapLookup:
    case Expr::Kind::InDom:
      out.reads.emplace(left, e.name);
      break;
    default:
      break;
  }
  for (const auto& sub : {e.a, e.b, e.c})
    if (sub) expr_live(*sub, left, out);
  if (e.kind == Expr::Kind::DistAtom && e.dist &&
      e.dist->kind == DistExpr::Kind::Point)
    expr_live(*e.dist->point, left, out);
}

void dist_live(const std::optional<DistExpr>& d, bool left, LiveNames& out) {
  if (d && d->kind == DistExpr::Kind::Point)
    expr_live(*d->point, left, out);
}

LiveNames assertion_live(const Assertion& a) {
  LiveNames out;
  switch (a.kind) {
    case Assertion::Kind::True:
    case Assertion::Kind::False:
      return out;
    case Assertion::Kind::VarEq:
      for (const auto& n : a.names) {
        out.reads.emplace(true, n);
        out.reads.emplace(false, n);
      }
      return out;
    case Assertion::Kind::BoolAt:
    case Assertion::Kind::Leaked:
      expr_live(*a.e1, a.side == Side::Left, out);
      return out;
    case Assertion::Kind::Sampled:
      expr_live(*a.e1, a.side == Side::Left, out);
      dist_live(a.dist, a.side == Side::Left, out);
      return out;
    case Assertion::Kind::ExprRel:
      expr_live(*a.e1, a.s1 == Side::Left, out);
      expr_live(*a.e2, a.s2 == Side::Left, out);
      return out;
    case Assertion::Kind::LabelEqCross:
      expr_live(*a.e1, true, out);
      expr_live(*a.e2, false, out);
      return out;
    case Assertion::Kind::SecInv:
      out.reads.emplace(true, a.map1);
      out.reads.emplace(false, a.map2);
      dist_live(a.dist, true, out);
      return out;
    case Assertion::Kind::Not:
    case Assertion::Kind::ForallK: {
      out = assertion_live(*a.a);
      return out;
    }
    case Assertion::Kind::And:
    case Assertion::Kind::Or:
    case Assertion::Kind::Implies: {
      out = assertion_live(*a.a);
      LiveNames rhs = assertion_live(*a.b);
      out.all |= rhs.all;
      out.reads.insert(rhs.reads.begin(), rhs.reads.end());
      return out;
    }
    case Assertion::Kind::AfterAssign: {
      out = assertion_live(*a.a);
      auto one = [&](const std::optional<LValue>& tgt, const ExprPtr& e,
                     bool left) {
        if (!tgt) return;
        if (!tgt->key) out.reads.erase({left, tgt->name});
        if (tgt->key) expr_live(*tgt->key, left, out);
        if (e->kind != Expr::Kind::EmptyMap) expr_live(*e, left, out);
      };
      one(a.l_tgt, a.l_expr, true);
      one(a.r_tgt, a.r_expr, false);
      return out;
    }
    case Assertion::Kind::ForallSample: {
      out = assertion_live(*a.a);
      auto one = [&](const std::optional<LValue>& tgt,
                     const std::optional<DistExpr>& d, bool left) {
        if (!tgt) return;
        if (!tgt->key) out.reads.erase({left, tgt->name});
        if (tgt->key) expr_live(*tgt->key, left, out);
        dist_live(d, left, out);
      };
      one(a.l_tgt, a.l_dist, true);
      one(a.r_tgt, a.r_dist, false);
      return out;
    }
  }
  out.all = true;
  return out;
}

/// Backward liveness through a command sequence: which slots the
/// sequence can read, given that only live_out matters afterwards.
/// Returns false (bail: everything relevant) on calls and loops.
bool cmd_live_in(const std::vector<CommandPtr>& cmds,
                 std::set<std::string>& live) {
  auto expr_reads = [&](const Expr& e) {
    LiveNames tmp;
    expr_live(e, true, tmp);
    for (const auto& [side, name] : tmp.reads) live.insert(name);
  };
  for (auto it = cmds.rbegin(); it != cmds.rend(); ++it) {
    const Command& c = **it;
    switch (c.kind) {
      case Command::Kind::Skip:
        break;
      case Command::Kind::Assign:
        if (!c.target.key) live.erase(c.target.name);
        if (c.target.key) expr_reads(*c.target.key);
        if (c.expr->kind != Expr::Kind::EmptyMap) expr_reads(*c.expr);
        break;
      case Command::Kind::Sample:
      case Command::Kind::SecSample:
        if (!c.target.key) live.erase(c.target.name);
        if (c.target.key) expr_reads(*c.target.key);
        if (c.dist->kind == DistExpr::Kind::Point)
          expr_reads(*c.dist->point);
        break;
      case Command::Kind::SecRead:
        live.erase(c.target.name);
        expr_reads(*c.expr);  // read and re-labeled, never killed
        break;
      case Command::Kind::If: {
        std::set<std::string> then_live = live, else_live = live;
        if (!cmd_live_in(c.then_body, then_live) ||
            !cmd_live_in(c.else_body, else_live))
          return false;
        live = then_live;
        live.insert(else_live.begin(), else_live.end());
        expr_reads(*c.cond);
        break;
      }
      case Command::Kind::While:
      case Command::Kind::Call:
        return false;
    }
  }
  return true;
}

/// Slots one side of a goal can depend on (precondition, program, and
/// postcondition combined); nullopt when the analysis bails out.
std::optional<std::set<int>> relevant_slots(const RelGoal& g, bool left) {
  LiveNames post = assertion_live(*g.post);
  LiveNames pre = assertion_live(*g.pre);
  if (post.all || pre.all) return std::nullopt;

  std::set<std::string> live;
  for (const auto& [is_left, name] : post.reads)
    if (is_left == left) live.insert(name);
  if (!cmd_live_in(left ? g.left : g.right, live)) return std::nullopt;
  for (const auto& [is_left, name] : pre.reads)
    if (is_left == left) live.insert(name);

  std::set<int> slots;
  for (const auto& name : live) {
    int slot = g.uni->slot_of(name, left);
    if (slot >= 0) slots.insert(slot);
  }
  return slots;
}

struct Engine {
  const RelGoal& g;
  int fuel = 0;
  GroupPattern pat{};
  DistHandle pat_handle{};  // evaluated grouping distribution

  // Postcondition memoization on the slots it can actually read.
  bool memo_enabled = false;
  std::vector<int> live_l{}, live_r{};
  mutable std::map<std::pair<std::vector<Binding>, std::vector<Binding>>,
                   bool>
      post_memo{};

  void setup_memo() {
    LiveNames live = assertion_live(*g.post);
    if (live.all) return;
    for (const auto& [left, name] : live.reads) {
      int slot = g.uni->slot_of(name, left);
      if (slot < 0) continue;  // unknown names fault during eval
      (left ? live_l : live_r).push_back(slot);
    }
    memo_enabled = true;
  }

  Dist<Memory> run(const std::vector<CommandPtr>& cmds, const Module* mod,
                   const Memory& m) const {
    ExecCtx ctx{g.uni->prog, mod, fuel};
    return exec(ctx, cmds, m);
  }

  bool post_eval(const Memory& a, const Memory& b) const {
    // A postcondition that faults on an output pair (e.g. it reads an
    // entry the run left unset) cannot hold there.
    try {
      return holds(*g.post, a, b);
    } catch (const EvalFault&) {
      return false;
    }
  }

  bool post_rel(const Memory& a, const Memory& b) const {
    if (!memo_enabled) return post_eval(a, b);
    std::pair<std::vector<Binding>, std::vector<Binding>> key;
    key.first.reserve(live_l.size());
    key.second.reserve(live_r.size());
    for (int slot : live_l) key.first.push_back(a.at(slot));
    for (int slot : live_r) key.second.push_back(b.at(slot));
    auto it = post_memo.find(key);
    if (it != post_memo.end()) return it->second;
    bool value = post_eval(a, b);
    post_memo.emplace(std::move(key), value);
    return value;
  }

  /// Builds the y-variant of a pair: the right entry's stored value
  /// and every tied left variable move to y together.
  void variant(const Memory& m1, const Memory& m2, int key_index, Elem y,
               Memory& n1, Memory& n2) const {
    n1 = m1;
    n2 = m2;
    int t2_slot = g.uni->slot_of(pat.t2, false);
    auto& entry =
        std::get<MapValue>(n2.at(t2_slot)).entries[key_index];
    LabeledValue lv = *entry;
    lv.value = y;
    entry = lv;
    for (const auto& v : pat.tied_left_vars) {
      int slot = g.uni->slot_of(v, true);
      n1.at(slot) = lv;
    }
  }

  mutable std::map<Memory, Dist<Memory>> right_cache{};

  std::optional<Counterexample> check_pair(
      const Memory& m1, const Memory& m2,
      std::optional<Dist<Memory>>& left_cache) const {
    if (!left_cache) left_cache = run(g.left, g.lmod, m1);
    auto it = right_cache.find(m2);
    if (it == right_cache.end())
      it = right_cache.emplace(m2, run(g.right, g.rmod, m2)).first;
    return verdict(m1, m2, *left_cache, it->second);
  }

  std::optional<Counterexample> check_group(const Memory& m1,
                                            const Memory& m2,
                                            int key_index) const {
    Dist<Memory> mix1, mix2;
    for (const auto& [y, w] : pat_handle->weights()) {
      Memory n1, n2;
      variant(m1, m2, key_index, y, n1, n2);
      mix1 = mix1.plus(run(g.left, g.lmod, n1).scaled(w));
      mix2 = mix2.plus(run(g.right, g.rmod, n2).scaled(w));
    }
    return verdict(m1, m2, mix1, mix2);
  }

  std::optional<Counterexample> verdict(const Memory& m1, const Memory& m2,
                                        const Dist<Memory>& out1,
                                        const Dist<Memory>& out2) const {
    if (out1.mass() != out2.mass()) {
      Counterexample cex{m1, m2, out1, out2, "", -1};
      cex.detail = "output masses differ: left " +
                   out1.mass().to_string() + ", right " +
                   out2.mass().to_string() +
                   " (lost mass means divergence or exhausted fuel)";
      return cex;
    }
    bool ok = lift_check(
        [&](const Memory& a, const Memory& b) { return post_rel(a, b); },
        out1, out2);
    if (ok) return std::nullopt;
    Counterexample cex{m1, m2, out1, out2, "", -1};
    if (out1.size() == 1 && out2.size() == 1) {
      const Memory& a = out1.weights().front().first;
      const Memory& b = out2.weights().front().first;
      cex.failing_conjunct = first_failing_conjunct(g.post, a, b);
      auto parts = conjuncts(g.post);
      if (cex.failing_conjunct >= 0)
        cex.detail =
            "postcondition conjunct " +
            std::to_string(cex.failing_conjunct + 1) + " fails: " +
            print_assertion(*g.uni->prog,
                            *parts[static_cast<std::size_t>(
                                cex.failing_conjunct)]);
    } else {
      cex.detail = "no coupling with the required marginals exists";
    }
    return cex;
  }
};

}  // namespace

DischargeResult discharge(const RelGoal& g, int fuel) {
  Engine eng{.g = g, .fuel = fuel, .pat = detect_group(g)};
  eng.setup_memo();
  if (eng.pat.active) {
    // The pattern distribution is memory-independent; a goal whose
    // distribution has lost mass cannot use the grouped reading.
    Memory scratch(*g.uni, false);
    eng.pat_handle = eval_dist_handle(eng.pat.dist, scratch);
    if (!eng.pat_handle->mass().is_one()) eng.pat.active = false;
  }

  // Slots nothing can read stay pinned at their first option; the
  // verdict is invariant under them and the first counterexample is
  // unchanged (it has them at their first option anyway).
  auto full = [&](bool left) {
    std::set<int> all;
    for (std::size_t s = 0; s < g.uni->slot_count(left); ++s)
      all.insert(static_cast<int>(s));
    return all;
  };
  auto rel_l = relevant_slots(g, true);
  auto rel_r = relevant_slots(g, false);
  MemoryEnumerator e1(*g.uni, true, rel_l ? *rel_l : full(true));
  MemoryEnumerator e2(*g.uni, false, rel_r ? *rel_r : full(false));
  if (e1.approximate_count() * e2.approximate_count() > 2e9)
    throw EvalFault("finite domains too large to enumerate for goal " +
                    g.label);

  // Conjuncts reading only the left memory gate the outer loop.
  std::vector<AssertionPtr> left_only, both;
  for (const auto& c : conjuncts(g.pre)) {
    bool ul = false, ur = false;
    side_usage(*c, ul, ur);
    (ul && !ur ? left_only : both).push_back(c);
  }
  AssertionPtr pre_left = a_conj(left_only);
  AssertionPtr pre_rest = a_conj(both);

  DischargeResult res;
  Memory m1, m2;
  e1.reset(m1);
  e2.reset(m2);
  const Memory scratch2 = m2;

  do {
    bool left_sat;
    try {
      left_sat = holds(*pre_left, m1, scratch2);
    } catch (const EvalFault&) {
      left_sat = false;
    }
    if (!left_sat) continue;
    std::optional<Dist<Memory>> left_cache;

    e2.reset(m2);
    do {
      ++res.pairs_checked;
      bool sat;
      try {
        sat = holds(*pre_rest, m1, m2);
      } catch (const EvalFault&) {
        // Preconditions that fault on a pair exclude it.
        sat = false;
      }
      if (!sat) continue;

      std::optional<Counterexample> cex;
      bool handled = false;
      if (eng.pat.active) {
        // Resolve the grouped entry on this pair.
        Elem k = std::get<Elem>(eval_expr(*eng.pat.key, m2));
        int t2_slot = g.uni->slot_of(eng.pat.t2, false);
        const auto& entry =
            std::get<MapValue>(m2.at(t2_slot)).entries[k.index];
        if (entry && entry->conf == Conf::Secret &&
            dist_handle_eq(entry->origin, eng.pat_handle)) {
          {
            // The family of this pair: value slot ranges over the
            // support. Check whether the whole family satisfies pre.
            bool family_ok = true;
            Memory first1, first2;
            bool have_first = false;
            for (const auto& [y, w] : eng.pat_handle->weights()) {
              Memory n1, n2;
              eng.variant(m1, m2, k.index, y, n1, n2);
              bool member_sat;
              try {
                member_sat = holds(*g.pre, n1, n2);
              } catch (const EvalFault&) {
                member_sat = false;
              }
              if (!member_sat) {
                family_ok = false;
                break;
              }
              if (!have_first) {
                first1 = n1;
                first2 = n2;
                have_first = true;
              }
            }
            if (family_ok && have_first) {
              handled = true;
              // Only the first family member runs the grouped check;
              // the others are the same family again.
              if (m1 == first1 && m2 == first2)
                cex = eng.check_group(m1, m2, k.index);
            }
          }
        }
      }
      if (!handled) cex = eng.check_pair(m1, m2, left_cache);

      if (cex) {
        res.status = DischargeResult::Status::Refuted;
        res.cex = std::move(cex);
        return res;
      }
    } while (e2.next(m2));
  } while (e1.next(m1));

  return res;
}

DischargeResult check_implication(const RelGoal& g, int fuel) {
  RelGoal empty = g;
  empty.left.clear();
  empty.right.clear();
  return discharge(empty, fuel);
}

}  // namespace plw
