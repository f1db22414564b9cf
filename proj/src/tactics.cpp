#include "plwhile/tactics.hpp"

#include <algorithm>
#include <map>

#include "plwhile/check.hpp"
#include "plwhile/discharge.hpp"
#include "plwhile/printer.hpp"

namespace plw {

namespace {

bool all_skip(const std::vector<CommandPtr>& cmds) {
  return std::all_of(cmds.begin(), cmds.end(), [](const CommandPtr& c) {
    return c->kind == Command::Kind::Skip;
  });
}

const std::vector<CommandPtr>& side_cmds(const RelGoal& g, Side s) {
  return s == Side::Left ? g.left : g.right;
}

}  // namespace

std::vector<RelGoal> tac_assign(const RelGoal& g) {
  if (g.left.empty() || g.right.empty())
    throw TacticError("assign: no trailing statement to consume");
  const Command& l = *g.left.back();
  const Command& r = *g.right.back();
  if (l.kind != Command::Kind::Assign || r.kind != Command::Kind::Assign)
    throw TacticError("assign: trailing statements are not assignments");

  RelGoal out = g;
  out.left.pop_back();
  out.right.pop_back();
  out.post = a_after_assign(l.target, l.expr, r.target, r.expr, g.post);
  return {out};
}

std::vector<RelGoal> tac_rnd(const RelGoal& g) {
  if (g.left.empty() || g.right.empty())
    throw TacticError("rnd: no trailing statement to consume");
  const Command& l = *g.left.back();
  const Command& r = *g.right.back();
  if (l.kind != Command::Kind::Sample || r.kind != Command::Kind::Sample)
    throw TacticError("rnd: trailing statements are not samplings");

  // Memory-independent distributions are comparable now; point
  // distributions are re-checked extensionally during evaluation.
  if (l.dist->kind != DistExpr::Kind::Point &&
      r.dist->kind != DistExpr::Kind::Point) {
    Memory probe(*g.uni, true);
    if (!(eval_dist_expr(*l.dist, probe) == eval_dist_expr(*r.dist, probe)))
      throw TacticError("rnd: the two samplings draw from different "
                        "distributions");
  }

  RelGoal out = g;
  out.left.pop_back();
  out.right.pop_back();
  out.post = a_forall_sample(l.target, *l.dist, r.target, *r.dist, g.post);
  return {out};
}

std::vector<RelGoal> tac_swap(const RelGoal& g, Side side, int i, int j) {
  const auto& cmds = side_cmds(g, side);
  if (j != i + 1)
    throw TacticError("swap: statements must be adjacent");
  if (i < 1 || j > static_cast<int>(cmds.size()))
    throw TacticError("swap: statement index out of range");

  const Module* mod = side == Side::Left ? g.lmod : g.rmod;
  const Command& a = *cmds[static_cast<std::size_t>(i - 1)];
  const Command& b = *cmds[static_cast<std::size_t>(j - 1)];
  VarUse ua = var_use(*g.uni->prog, mod, a);
  VarUse ub = var_use(*g.uni->prog, mod, b);
  auto fv = [](const VarUse& u) {
    std::set<std::string> s = u.reads;
    s.insert(u.writes.begin(), u.writes.end());
    return s;
  };
  for (const auto& w : ua.writes)
    if (fv(ub).count(w))
      throw TacticError("swap: dependency on " + w +
                        " prevents reordering");
  for (const auto& w : ub.writes)
    if (fv(ua).count(w))
      throw TacticError("swap: dependency on " + w +
                        " prevents reordering");

  RelGoal out = g;
  auto& target = side == Side::Left ? out.left : out.right;
  std::swap(target[static_cast<std::size_t>(i - 1)],
            target[static_cast<std::size_t>(j - 1)]);
  return {out};
}

std::vector<RelGoal> tac_seq(const RelGoal& g, int k, AssertionPtr mid) {
  if (k < 0 || k > static_cast<int>(g.left.size()) ||
      k > static_cast<int>(g.right.size()))
    throw TacticError("seq: split index out of range");
  RelGoal first = g, second = g;
  first.left.assign(g.left.begin(), g.left.begin() + k);
  first.right.assign(g.right.begin(), g.right.begin() + k);
  first.post = mid;
  first.label = g.label + " (seq head)";
  second.left.assign(g.left.begin() + k, g.left.end());
  second.right.assign(g.right.begin() + k, g.right.end());
  second.pre = mid;
  second.label = g.label + " (seq tail)";
  return {first, second};
}

std::vector<RelGoal> tac_case(const RelGoal& g, Side side, ExprPtr e) {
  {
    // The split expression must be boolean under the goal's scope.
    Scope scope;
    for (std::size_t s = 0; s < g.uni->slot_count(side == Side::Left); ++s)
      scope[g.uni->decl(s).name] = g.uni->decl(s).type;
    std::vector<Diagnostic> errors;
    TypeInfo t = infer_expr(*g.uni->prog, scope, *e, errors);
    if (!errors.empty() || t.kind != TypeInfo::Kind::Bool)
      throw TacticError("case: split expression is not a boolean", e->pos);
  }

  auto resolve_if = [&](const RelGoal& in, bool cond_true) {
    RelGoal out = in;
    auto& cmds = side == Side::Left ? out.left : out.right;
    if (cmds.empty() || cmds.front()->kind != Command::Kind::If) return out;
    const Command& head = *cmds.front();
    bool guard_is_e = same_expr(head.cond, e);
    bool guard_is_not_e =
        head.cond->kind == Expr::Kind::Not && same_expr(head.cond->a, e);
    bool e_is_not_guard =
        e->kind == Expr::Kind::Not && same_expr(e->a, head.cond);
    if (!guard_is_e && !guard_is_not_e && !e_is_not_guard) return out;
    bool take_then = guard_is_e ? cond_true : !cond_true;
    const auto& branch = take_then ? head.then_body : head.else_body;
    std::vector<CommandPtr> flat(branch.begin(), branch.end());
    flat.insert(flat.end(), cmds.begin() + 1, cmds.end());
    cmds = std::move(flat);
    return out;
  };

  RelGoal yes = g, no = g;
  yes.pre = a_and(g.pre, a_bool_at(side, e));
  yes.label = g.label + " (case +)";
  no.pre = a_and(g.pre, a_not(a_bool_at(side, e)));
  no.label = g.label + " (case -)";
  return {resolve_if(yes, true), resolve_if(no, false)};
}

namespace {

ExprPtr rename_expr(const ExprPtr& e,
                    const std::map<std::string, std::string>& ren);

std::optional<DistExpr> rename_dist(const std::optional<DistExpr>& d,
                                    const std::map<std::string, std::string>& ren) {
  if (!d || d->kind != DistExpr::Kind::Point) return d;
  DistExpr out = *d;
  out.point = rename_expr(d->point, ren);
  return out;
}

ExprPtr rename_expr(const ExprPtr& e,
                    const std::map<std::string, std::string>& ren) {
  if (!e) return e;
  auto copy = std::make_shared<Expr>(*e);
  auto it = ren.find(e->name);
  if ((e->kind == Expr::Kind::Var || e->kind == Expr::Kind::MapLookup ||
       e->kind == Expr::Kind::InDom) &&
      it != ren.end())
    copy->name = it->second;
  copy->a = rename_expr(e->a, ren);
  copy->b = rename_expr(e->b, ren);
  copy->c = rename_expr(e->c, ren);
  copy->dist = rename_dist(e->dist, ren);
  return copy;
}

LValue rename_lvalue(const LValue& t,
                     const std::map<std::string, std::string>& ren) {
  LValue out = t;
  auto it = ren.find(t.name);
  if (it != ren.end()) out.name = it->second;
  out.key = rename_expr(t.key, ren);
  return out;
}

std::vector<CommandPtr> rename_cmds(
    const std::vector<CommandPtr>& cmds,
    const std::map<std::string, std::string>& ren) {
  std::vector<CommandPtr> out;
  out.reserve(cmds.size());
  for (const auto& cp : cmds) {
    auto c = std::make_shared<Command>(*cp);
    c->target = rename_lvalue(cp->target, ren);
    c->expr = rename_expr(cp->expr, ren);
    c->cond = rename_expr(cp->cond, ren);
    c->dist = rename_dist(cp->dist, ren);
    c->then_body = rename_cmds(cp->then_body, ren);
    c->else_body = rename_cmds(cp->else_body, ren);
    c->body = rename_cmds(cp->body, ren);
    if (cp->call_result) c->call_result = rename_lvalue(*cp->call_result, ren);
    std::vector<ExprPtr> args;
    for (const auto& a : cp->args) args.push_back(rename_expr(a, ren));
    c->args = std::move(args);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::vector<RelGoal> tac_inline(const RelGoal& g, Side side) {
  const Module* mod = side == Side::Left ? g.lmod : g.rmod;
  if (!mod) throw TacticError("inline: no module context on this side");
  const auto& cmds = side_cmds(g, side);
  std::size_t idx = cmds.size();
  for (std::size_t i = 0; i < cmds.size(); ++i)
    if (cmds[i]->kind == Command::Kind::Call) {
      idx = i;
      break;
    }
  if (idx == cmds.size())
    throw TacticError("inline: no procedure call on this side");
  const Command& call = *cmds[idx];
  const Proc* p = mod->find_proc(call.callee);
  if (!p) throw TacticError("inline: unknown procedure " + call.callee);

  RelGoal out = g;
  std::map<std::string, std::string> ren;
  for (const auto& d : p->params) {
    std::string fresh = fresh_name(out, d.name);
    ren[d.name] = fresh;
    out.uni = with_shared_var(*out.uni, VarDecl{fresh, d.type, d.pos});
  }
  for (const auto& d : p->locals) {
    std::string fresh = fresh_name(out, d.name);
    ren[d.name] = fresh;
    out.uni = with_shared_var(*out.uni, VarDecl{fresh, d.type, d.pos});
  }

  std::vector<CommandPtr> expansion;
  for (std::size_t i = 0; i < p->params.size(); ++i)
    expansion.push_back(make_assign(
        LValue{ren[p->params[i].name], nullptr, call.pos}, call.args[i],
        call.pos));
  for (const auto& c : rename_cmds(p->body, ren)) expansion.push_back(c);
  if (call.call_result) {
    if (!p->ret)
      throw TacticError("inline: " + call.callee + " returns no value");
    expansion.push_back(
        make_assign(*call.call_result, rename_expr(p->ret, ren), call.pos));
  }

  auto& target = side == Side::Left ? out.left : out.right;
  std::vector<CommandPtr> flat(target.begin(),
                               target.begin() + static_cast<long>(idx));
  flat.insert(flat.end(), expansion.begin(), expansion.end());
  flat.insert(flat.end(), target.begin() + static_cast<long>(idx) + 1,
              target.end());
  target = std::move(flat);
  return {out};
}

std::vector<RelGoal> tac_skip(const RelGoal& g, int fuel) {
  if (!all_skip(g.left) || !all_skip(g.right))
    throw TacticError("skip: both sides must be skip");
  DischargeResult r = check_implication(g, fuel);
  if (!r.proven()) {
    std::string msg = "skip: precondition does not imply postcondition";
    if (r.cex)
      msg += "\n  left:  " + print_memory(r.cex->m1) +
             "\n  right: " + print_memory(r.cex->m2) +
             "\n  " + r.cex->detail;
    throw TacticError(msg);
  }
  return {};
}

}  // namespace plw
