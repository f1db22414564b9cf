#include "plwhile/assertion.hpp"

namespace plw {

namespace {
std::shared_ptr<Assertion> blank(Assertion::Kind k, SourcePos pos = {}) {
  auto a = std::make_shared<Assertion>();
  a->kind = k;
  a->pos = pos;
  return a;
}
}  // namespace

AssertionPtr a_true() { return blank(Assertion::Kind::True); }
AssertionPtr a_false() { return blank(Assertion::Kind::False); }
AssertionPtr a_var_eq(std::vector<std::string> names, SourcePos pos) {
  auto a = blank(Assertion::Kind::VarEq, pos);
  a->names = std::move(names);
  return a;
}
AssertionPtr a_bool_at(Side s, ExprPtr e, SourcePos pos) {
  auto a = blank(Assertion::Kind::BoolAt, pos);
  a->side = s;
  a->e1 = std::move(e);
  return a;
}
AssertionPtr a_expr_rel(ExprPtr e1, Side s1, ExprPtr e2, Side s2, bool neq,
                        SourcePos pos) {
  auto a = blank(Assertion::Kind::ExprRel, pos);
  a->e1 = std::move(e1);
  a->s1 = s1;
  a->e2 = std::move(e2);
  a->s2 = s2;
  a->neq = neq;
  return a;
}
AssertionPtr a_leaked(Side s, ExprPtr lv, SourcePos pos) {
  auto a = blank(Assertion::Kind::Leaked, pos);
  a->side = s;
  a->e1 = std::move(lv);
  return a;
}
AssertionPtr a_sampled(Side s, ExprPtr lv, DistExpr d, SourcePos pos) {
  auto a = blank(Assertion::Kind::Sampled, pos);
  a->side = s;
  a->e1 = std::move(lv);
  a->dist = std::move(d);
  return a;
}
AssertionPtr a_label_eq_cross(ExprPtr e1, ExprPtr e2, SourcePos pos) {
  auto a = blank(Assertion::Kind::LabelEqCross, pos);
  a->e1 = std::move(e1);
  a->e2 = std::move(e2);
  return a;
}
AssertionPtr a_sec_inv(std::string map1, std::string map2, DistExpr d,
                       SourcePos pos) {
  auto a = blank(Assertion::Kind::SecInv, pos);
  a->map1 = std::move(map1);
  a->map2 = std::move(map2);
  a->dist = std::move(d);
  return a;
}
AssertionPtr a_not(AssertionPtr x, SourcePos pos) {
  auto a = blank(Assertion::Kind::Not, pos);
  a->a = std::move(x);
  return a;
}
AssertionPtr a_and(AssertionPtr x, AssertionPtr y, SourcePos pos) {
  auto a = blank(Assertion::Kind::And, pos);
  a->a = std::move(x);
  a->b = std::move(y);
  return a;
}
AssertionPtr a_or(AssertionPtr x, AssertionPtr y, SourcePos pos) {
  auto a = blank(Assertion::Kind::Or, pos);
  a->a = std::move(x);
  a->b = std::move(y);
  return a;
}
AssertionPtr a_implies(AssertionPtr x, AssertionPtr y, SourcePos pos) {
  auto a = blank(Assertion::Kind::Implies, pos);
  a->a = std::move(x);
  a->b = std::move(y);
  return a;
}
AssertionPtr a_forall(std::string var, int type_id, AssertionPtr body,
                      SourcePos pos) {
  auto a = blank(Assertion::Kind::ForallK, pos);
  a->qvar = std::move(var);
  a->qtype = type_id;
  a->a = std::move(body);
  return a;
}
AssertionPtr a_after_assign(std::optional<LValue> l_tgt, ExprPtr l_expr,
                            std::optional<LValue> r_tgt, ExprPtr r_expr,
                            AssertionPtr body) {
  auto a = blank(Assertion::Kind::AfterAssign);
  a->l_tgt = std::move(l_tgt);
  a->l_expr = std::move(l_expr);
  a->r_tgt = std::move(r_tgt);
  a->r_expr = std::move(r_expr);
  a->a = std::move(body);
  return a;
}
AssertionPtr a_forall_sample(std::optional<LValue> l_tgt,
                             std::optional<DistExpr> l_dist,
                             std::optional<LValue> r_tgt,
                             std::optional<DistExpr> r_dist,
                             AssertionPtr body) {
  auto a = blank(Assertion::Kind::ForallSample);
  a->l_tgt = std::move(l_tgt);
  a->l_dist = std::move(l_dist);
  a->r_tgt = std::move(r_tgt);
  a->r_dist = std::move(r_dist);
  a->a = std::move(body);
  return a;
}

AssertionPtr a_conj(std::vector<AssertionPtr> parts) {
  if (parts.empty()) return a_true();
  AssertionPtr acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i)
    acc = a_and(acc, parts[i]);
  return acc;
}

std::vector<AssertionPtr> conjuncts(const AssertionPtr& a) {
  std::vector<AssertionPtr> out;
  std::vector<AssertionPtr> stack{a};
  while (!stack.empty()) {
    AssertionPtr cur = stack.back();
    stack.pop_back();
    if (cur->kind == Assertion::Kind::And) {
      stack.push_back(cur->b);
      stack.push_back(cur->a);
    } else {
      out.push_back(cur);
    }
  }
  return out;
}

namespace {

using Bound = std::map<std::string, Elem>;

const Memory& pick(Side s, const Memory& m1, const Memory& m2) {
  return s == Side::Left ? m1 : m2;
}

LabeledValue eval_labeled(const Expr& e, const Memory& m, const Bound& bound) {
  Env env{&bound};
  Value v = eval_expr(e, m, env);
  if (const auto* lv = std::get_if<LabeledValue>(&v)) return *lv;
  throw EvalFault("assertion atom expects a labeled value", e.pos);
}

void apply_assign(Memory& m, const LValue& tgt, const Expr& e,
                  const Bound& bound) {
  Env env{&bound};
  if (e.kind == Expr::Kind::EmptyMap) {
    int slot = m.uni->slot_of(tgt.name, m.left);
    if (slot < 0) throw EvalFault("unbound identifier: " + tgt.name, tgt.pos);
    auto* map = std::get_if<MapValue>(&m.at(slot));
    if (!map) throw EvalFault("empty assigned to a non-map", tgt.pos);
    for (auto& entry : map->entries) entry.reset();
    return;
  }
  Value v = eval_expr(e, m, env);
  store(m, tgt, v, env);
}

bool holds_impl(const Assertion& a, const Memory& m1, const Memory& m2,
                const Bound& bound) {
  switch (a.kind) {
    case Assertion::Kind::True:
      return true;
    case Assertion::Kind::False:
      return false;
    case Assertion::Kind::VarEq:
      for (const auto& name : a.names) {
        int s1 = m1.uni->slot_of(name, m1.left);
        int s2 = m2.uni->slot_of(name, m2.left);
        if (s1 < 0 || s2 < 0)
          throw EvalFault("unknown variable in equality: " + name, a.pos);
        if (!(m1.at(s1) == m2.at(s2))) return false;
      }
      return true;
    case Assertion::Kind::BoolAt: {
      Env env{&bound};
      return eval_bool(*a.e1, pick(a.side, m1, m2), env);
    }
    case Assertion::Kind::ExprRel: {
      Env env{&bound};
      Value v1 = eval_expr(*a.e1, pick(a.s1, m1, m2), env);
      Value v2 = eval_expr(*a.e2, pick(a.s2, m1, m2), env);
      if (v1.index() != v2.index())
        throw EvalFault("relation between incompatible values", a.pos);
      return (v1 == v2) != a.neq;
    }
    case Assertion::Kind::Leaked:
      return is_leaked(eval_labeled(*a.e1, pick(a.side, m1, m2), bound));
    case Assertion::Kind::Sampled: {
      const Memory& m = pick(a.side, m1, m2);
      LabeledValue lv = eval_labeled(*a.e1, m, bound);
      Env env{&bound};
      return dist_handle_eq(lv.origin, eval_dist_handle(*a.dist, m, env));
    }
    case Assertion::Kind::LabelEqCross:
      return label_eq(eval_labeled(*a.e1, m1, bound),
                      eval_labeled(*a.e2, m2, bound));
    case Assertion::Kind::SecInv: {
      Env env{&bound};
      DistHandle d = eval_dist_handle(*a.dist, m1, env);
      int slot1 = m1.uni->slot_of(a.map1, m1.left);
      int slot2 = m2.uni->slot_of(a.map2, m2.left);
      if (slot1 < 0 || slot2 < 0)
        throw EvalFault("unknown map in invariant", a.pos);
      const auto* t1 = std::get_if<MapValue>(&m1.at(slot1));
      const auto* t2 = std::get_if<MapValue>(&m2.at(slot2));
      if (!t1 || !t2) throw EvalFault("invariant over non-maps", a.pos);
      std::size_t keys = t1->entries.size();
      if (keys != t2->entries.size())
        throw EvalFault("invariant maps have different domains", a.pos);
      for (std::size_t k = 0; k < keys; ++k) {
        const auto& e1 = t1->entries[k];
        const auto& e2 = t2->entries[k];
        if (e2 && !dist_handle_eq(e2->origin, d)) return false;
        if (e1) {
          if (!e2 || !(e1->value == e2->value)) return false;
          if (is_leaked(*e1) && !(*e1 == *e2)) return false;
        } else if (e2 && is_leaked(*e2)) {
          return false;
        }
      }
      return true;
    }
    case Assertion::Kind::Not:
      return !holds_impl(*a.a, m1, m2, bound);
    case Assertion::Kind::And:
      return holds_impl(*a.a, m1, m2, bound) &&
             holds_impl(*a.b, m1, m2, bound);
    case Assertion::Kind::Or:
      return holds_impl(*a.a, m1, m2, bound) ||
             holds_impl(*a.b, m1, m2, bound);
    case Assertion::Kind::Implies:
      return !holds_impl(*a.a, m1, m2, bound) ||
             holds_impl(*a.b, m1, m2, bound);
    case Assertion::Kind::ForallK: {
      const auto& t = m1.uni->prog->types.at(a.qtype);
      Bound inner = bound;
      for (std::size_t i = 0; i < t.elements.size(); ++i) {
        inner[a.qvar] = Elem{a.qtype, static_cast<int>(i)};
        if (!holds_impl(*a.a, m1, m2, inner)) return false;
      }
      return true;
    }
    case Assertion::Kind::AfterAssign: {
      Memory n1 = m1, n2 = m2;
      if (a.l_tgt) apply_assign(n1, *a.l_tgt, *a.l_expr, bound);
      if (a.r_tgt) apply_assign(n2, *a.r_tgt, *a.r_expr, bound);
      return holds_impl(*a.a, n1, n2, bound);
    }
    case Assertion::Kind::ForallSample: {
      Env env{&bound};
      DistHandle d1, d2;
      if (a.l_dist) d1 = eval_dist_handle(*a.l_dist, m1, env);
      if (a.r_dist) d2 = eval_dist_handle(*a.r_dist, m2, env);
      if (d1 && d2 && !dist_handle_eq(d1, d2)) return false;
      const ElemDist& d = d1 ? *d1 : *d2;
      for (const auto& [y, w] : d.weights()) {
        Memory n1 = m1, n2 = m2;
        if (a.l_tgt) store(n1, *a.l_tgt, Value{y}, Env{&bound});
        if (a.r_tgt) store(n2, *a.r_tgt, Value{y}, Env{&bound});
        if (!holds_impl(*a.a, n1, n2, bound)) return false;
      }
      return true;
    }
  }
  throw EvalFault("unreachable assertion kind", a.pos);
}

}  // namespace

bool holds(const Assertion& a, const Memory& m1, const Memory& m2) {
  static const Bound kEmpty;
  return holds_impl(a, m1, m2, kEmpty);
}

bool holds(const Assertion& a, const Memory& m1, const Memory& m2,
           const std::map<std::string, Elem>& bound) {
  return holds_impl(a, m1, m2, bound);
}

bool sec_invariant_eval(const std::string& map1, const std::string& map2,
                        const DistExpr& d, const Memory& m1,
                        const Memory& m2) {
  return holds(*a_sec_inv(map1, map2, d), m1, m2);
}

int first_failing_conjunct(const AssertionPtr& a, const Memory& m1,
                           const Memory& m2) {
  auto parts = conjuncts(a);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    bool ok;
    try {
      ok = holds(*parts[i], m1, m2);
    } catch (const EvalFault&) {
      ok = false;
    }
    if (!ok) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace plw
