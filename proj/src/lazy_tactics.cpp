#include "plwhile/lazy_tactics.hpp"

#include "plwhile/discharge.hpp"

namespace plw {

namespace {

std::vector<CommandPtr>& mutable_side(RelGoal& g, Side side) {
  return side == Side::Left ? g.left : g.right;
}

ExprPtr source_as_expr(const Command& c) { return c.expr; }

LValue source_as_lvalue(const Command& c) {
  const Expr& src = *c.expr;
  if (src.kind == Expr::Kind::Var) return LValue{src.name, nullptr, src.pos};
  return LValue{src.name, src.a, src.pos};
}

int labeled_type_of(const Universe& u, const LValue& t) {
  int slot = u.slot_of(t.name, true);
  if (slot < 0) throw TacticError("unknown identifier: " + t.name, t.pos);
  return u.decl(slot).type.type_id;
}

}  // namespace

namespace {

std::size_t first_of_kind(const std::vector<CommandPtr>& cmds,
                          Command::Kind kind) {
  for (std::size_t i = 0; i < cmds.size(); ++i)
    if (cmds[i]->kind == kind) return i;
  return cmds.size();
}

}  // namespace

RelGoal tactic_declassify(const RelGoal& g, Side side) {
  const auto& cmds = side == Side::Left ? g.left : g.right;
  std::size_t idx = first_of_kind(cmds, Command::Kind::SecRead);
  if (idx == cmds.size())
    throw TacticError("declassify: no secure read on this side");
  const Command& c = *cmds[idx];

  ExprPtr src = source_as_expr(c);
  LValue src_tgt = source_as_lvalue(c);
  ExprPtr relabeled =
      make_triple(make_proj(1, src, c.pos), make_proj(2, src, c.pos),
                  make_conf_atom(Conf::Leaked, c.pos), c.pos);

  RelGoal out = g;
  auto& out_cmds = mutable_side(out, side);
  std::vector<CommandPtr> rewritten(out_cmds.begin(),
                                    out_cmds.begin() + static_cast<long>(idx));
  rewritten.push_back(make_assign(src_tgt, relabeled, c.pos));
  rewritten.push_back(
      make_assign(c.target, make_proj(1, src, c.pos), c.pos));
  rewritten.insert(rewritten.end(),
                   out_cmds.begin() + static_cast<long>(idx) + 1,
                   out_cmds.end());
  out_cmds = std::move(rewritten);
  return out;
}

RelGoal tactic_secrnd(const RelGoal& g, Side side) {
  const auto& cmds = side == Side::Left ? g.left : g.right;
  std::size_t idx = first_of_kind(cmds, Command::Kind::SecSample);
  if (idx == cmds.size())
    throw TacticError("secrnd: no secure sample on this side");
  const Command& c = *cmds[idx];

  int type_id = labeled_type_of(*g.uni, c.target);
  std::string v = fresh_name(g, "v");

  RelGoal out = g;
  out.uni = with_shared_var(
      *out.uni, VarDecl{v, VarType{VarType::Kind::Plain, type_id, -1}, c.pos});

  LValue v_tgt{v, nullptr, c.pos};
  ExprPtr labeled =
      make_triple(make_var(v, c.pos), make_dist_atom(*c.dist, c.pos),
                  make_conf_atom(Conf::Secret, c.pos), c.pos);
  auto& out_cmds = mutable_side(out, side);
  std::vector<CommandPtr> rewritten(out_cmds.begin(),
                                    out_cmds.begin() + static_cast<long>(idx));
  rewritten.push_back(make_sample(v_tgt, *c.dist, c.pos));
  rewritten.push_back(make_assign(c.target, labeled, c.pos));
  rewritten.insert(rewritten.end(),
                   out_cmds.begin() + static_cast<long>(idx) + 1,
                   out_cmds.end());
  out_cmds = std::move(rewritten);
  return out;
}

std::vector<RelGoal> tactic_secrndasgn(const RelGoal& g,
                                       const std::string& map_name,
                                       const ExprPtr& key,
                                       const std::string& fresh_var) {
  // Shape: left is exactly [t[x] <~$ d; r <~ t[x]], right [r <~ t[x]].
  if (g.left.size() != 2 || g.right.size() != 1)
    throw TacticError("secrndasgn: goal shape mismatch");
  const Command& samp = *g.left[0];
  const Command& readl = *g.left[1];
  const Command& readr = *g.right[0];
  if (samp.kind != Command::Kind::SecSample ||
      readl.kind != Command::Kind::SecRead ||
      readr.kind != Command::Kind::SecRead)
    throw TacticError("secrndasgn: goal shape mismatch");
  if (samp.target.name != map_name || !samp.target.key)
    throw TacticError("secrndasgn: left sampling does not write " +
                      map_name + "[...]");
  auto is_entry = [&](const Expr& e) {
    return e.kind == Expr::Kind::MapLookup && e.name == map_name &&
           same_expr(e.a, key);
  };
  if (!same_expr(samp.target.key, key) || !is_entry(*readl.expr) ||
      !is_entry(*readr.expr))
    throw TacticError("secrndasgn: the key must be syntactically identical "
                      "in all three statements");
  if (readl.target.name != readr.target.name || readl.target.key ||
      readr.target.key)
    throw TacticError("secrndasgn: read targets differ across sides");
  if (name_used_in_goal(g, fresh_var))
    throw TacticError("secrndasgn: " + fresh_var + " is not fresh");

  const DistExpr& d = *samp.dist;
  int val_type = labeled_type_of(*g.uni, samp.target);

  auto uni = with_aug_left(
      *g.uni,
      VarDecl{fresh_var, VarType{VarType::Kind::Labeled, val_type, -1}, {}});

  ExprPtr v = make_var(fresh_var);
  ExprPtr entry = make_map_lookup(map_name, key);
  AssertionPtr borrow =
      a_expr_rel(v, Side::Left, entry, Side::Right, /*neq=*/false);
  AssertionPtr pre2 = a_and(g.pre, borrow);

  // Sub-goal (1): nothing runs; the borrowed value agrees with the
  // stored one, is secret, and the domain facts hold.
  RelGoal sub1;
  sub1.uni = uni;
  sub1.lmod = g.lmod;
  sub1.rmod = g.rmod;
  sub1.pre = pre2;
  sub1.post = a_and(
      a_and(a_and(a_and(g.post, borrow), a_not(a_leaked(Side::Left, v))),
            a_not(a_bool_at(Side::Left, make_in_dom(map_name, key)))),
      a_bool_at(Side::Right, make_in_dom(map_name, key)));
  sub1.label = g.label + " [secrndasgn sub-goal 1]";

  // Sub-goal (2): the sampling becomes a plain assignment from the
  // borrowed value; the invariant must survive.
  RelGoal sub2;
  sub2.uni = uni;
  sub2.lmod = g.lmod;
  sub2.rmod = g.rmod;
  sub2.pre = pre2;
  sub2.left = {make_assign(LValue{map_name, key, samp.pos}, v, samp.pos),
               g.left[1]};
  sub2.right = g.right;
  sub2.post =
      a_and(a_and(g.post, a_sampled(Side::Left, entry, d)),
            a_sec_inv(map_name, map_name, d));
  sub2.label = g.label + " [secrndasgn sub-goal 2]";

  return {sub1, sub2};
}

}  // namespace plw
