#include "plwhile/script.hpp"

#include <algorithm>

#include "plwhile/check.hpp"
#include "plwhile/lazy_tactics.hpp"
#include "plwhile/parser.hpp"
#include "plwhile/printer.hpp"

namespace plw {

namespace {

void merge_var(std::vector<VarDecl>& vars, const VarDecl& d) {
  for (const auto& existing : vars) {
    if (existing.name != d.name) continue;
    if (!(existing.type == d.type))
      throw GoalError("variable " + d.name +
                          " is declared with different types on the two "
                          "sides",
                      d.pos);
    return;
  }
  vars.push_back(d);
}

void collect_call_procs(const Module& mod, std::span<const CommandPtr> cmds,
                        std::vector<const Proc*>& out) {
  for (const auto& c : cmds) {
    switch (c->kind) {
      case Command::Kind::If:
        collect_call_procs(mod, c->then_body, out);
        collect_call_procs(mod, c->else_body, out);
        break;
      case Command::Kind::While:
        collect_call_procs(mod, c->body, out);
        break;
      case Command::Kind::Call: {
        const Proc* p = mod.find_proc(c->callee);
        if (!p) throw GoalError("unknown procedure: " + c->callee, c->pos);
        if (std::find(out.begin(), out.end(), p) == out.end()) {
          out.push_back(p);
          collect_call_procs(mod, p->body, out);
        }
        break;
      }
      default:
        break;
    }
  }
}

struct SideElab {
  const Module* mod = nullptr;
  std::vector<CommandPtr> cmds;
  std::vector<const Proc*> procs;  // procs whose params/locals join the
                                   // universe
};

SideElab elaborate_side(const Program& prog, const GoalSide& side,
                        const Module* context, SourcePos pos) {
  SideElab out;
  if (side.is_call) {
    out.mod = prog.find_module(side.module);
    if (!out.mod) throw GoalError("unknown module: " + side.module, pos);
    const Proc* p = out.mod->find_proc(side.proc);
    if (!p)
      throw GoalError("unknown procedure: " + side.module + "." + side.proc,
                      pos);
    if (p->params.size() != side.args.size())
      throw GoalError("arity mismatch calling " + side.proc, pos);
    out.procs.push_back(p);
    collect_call_procs(*out.mod, p->body, out.procs);
    for (std::size_t i = 0; i < p->params.size(); ++i) {
      const auto& arg = side.args[i];
      // Binding a parameter to itself is the identity.
      if (arg->kind == Expr::Kind::Var && arg->name == p->params[i].name)
        continue;
      out.cmds.push_back(make_assign(
          LValue{p->params[i].name, nullptr, pos}, arg, pos));
    }
    out.cmds.insert(out.cmds.end(), p->body.begin(), p->body.end());
    return out;
  }
  out.mod = context;
  out.cmds = side.raw;
  if (out.mod) collect_call_procs(*out.mod, out.cmds, out.procs);
  return out;
}

/// Validates every expression inside an assertion against the goal's
/// scope (bound quantifier variables are plain-typed).
void check_assertion(const Program& prog, Scope scope, const Assertion& a,
                     std::vector<Diagnostic>& errors) {
  switch (a.kind) {
    case Assertion::Kind::VarEq:
      for (const auto& n : a.names)
        if (!scope.count(n))
          errors.push_back({a.pos, "unknown variable in equality: " + n});
      break;
    case Assertion::Kind::BoolAt: {
      TypeInfo t = infer_expr(prog, scope, *a.e1, errors);
      if (t.kind != TypeInfo::Kind::Bool)
        errors.push_back({a.pos, "side-tagged expression is not boolean"});
      break;
    }
    case Assertion::Kind::ExprRel: {
      infer_expr(prog, scope, *a.e1, errors);
      infer_expr(prog, scope, *a.e2, errors);
      break;
    }
    case Assertion::Kind::Leaked:
    case Assertion::Kind::Sampled: {
      TypeInfo t = infer_expr(prog, scope, *a.e1, errors);
      if (t.kind != TypeInfo::Kind::Labeled)
        errors.push_back({a.pos, "label predicate over a non-labeled value"});
      break;
    }
    case Assertion::Kind::LabelEqCross: {
      for (const auto& e : {a.e1, a.e2}) {
        TypeInfo t = infer_expr(prog, scope, *e, errors);
        if (t.kind != TypeInfo::Kind::Labeled)
          errors.push_back({a.pos, "label equality over non-labeled values"});
      }
      break;
    }
    case Assertion::Kind::SecInv: {
      for (const auto& m : {a.map1, a.map2}) {
        auto it = scope.find(m);
        if (it == scope.end() || it->second.kind != VarType::Kind::Map)
          errors.push_back({a.pos, "invariant over a non-map: " + m});
      }
      break;
    }
    case Assertion::Kind::Not:
      check_assertion(prog, scope, *a.a, errors);
      break;
    case Assertion::Kind::And:
    case Assertion::Kind::Or:
    case Assertion::Kind::Implies:
      check_assertion(prog, scope, *a.a, errors);
      check_assertion(prog, scope, *a.b, errors);
      break;
    case Assertion::Kind::ForallK: {
      Scope inner = scope;
      inner[a.qvar] = VarType{VarType::Kind::Plain, a.qtype, -1};
      check_assertion(prog, inner, *a.a, errors);
      break;
    }
    default:
      break;
  }
}

}  // namespace

RelGoal build_goal(const Program& prog, const GoalDecl& g) {
  const Module* left_ctx = nullptr;
  const Module* right_ctx = nullptr;
  if (!g.over_modules.empty()) {
    left_ctx = prog.find_module(g.over_modules.front());
    if (!left_ctx)
      throw GoalError("unknown module: " + g.over_modules.front(), g.pos);
    right_ctx = g.over_modules.size() > 1
                    ? prog.find_module(g.over_modules[1])
                    : left_ctx;
    if (!right_ctx)
      throw GoalError("unknown module: " + g.over_modules[1], g.pos);
  }

  SideElab left = elaborate_side(prog, g.left, left_ctx, g.pos);
  SideElab right = elaborate_side(prog, g.right, right_ctx, g.pos);

  auto uni = std::make_shared<Universe>();
  uni->prog = &prog;
  if (left.mod)
    for (const auto& d : left.mod->globals) merge_var(uni->vars, d);
  if (right.mod)
    for (const auto& d : right.mod->globals) merge_var(uni->vars, d);
  for (const auto* p : left.procs) {
    for (const auto& d : p->params) merge_var(uni->vars, d);
    for (const auto& d : p->locals) merge_var(uni->vars, d);
  }
  for (const auto* p : right.procs) {
    for (const auto& d : p->params) merge_var(uni->vars, d);
    for (const auto& d : p->locals) merge_var(uni->vars, d);
  }
  for (const auto& d : g.extra_vars) merge_var(uni->vars, d);
  uni->origins = collect_origins(prog);
  uni->finalize();

  RelGoal goal;
  goal.uni = uni;
  goal.lmod = left.mod;
  goal.rmod = right.mod;
  goal.left = std::move(left.cmds);
  goal.right = std::move(right.cmds);
  goal.pre = g.pre;
  goal.post = g.post;
  goal.label = g.name;

  Scope scope;
  for (const auto& d : uni->vars) scope[d.name] = d.type;
  std::vector<Diagnostic> errors;
  check_commands(prog, goal.lmod, scope, goal.left, errors);
  check_commands(prog, goal.rmod, scope, goal.right, errors);
  check_assertion(prog, scope, *goal.pre, errors);
  check_assertion(prog, scope, *goal.post, errors);
  if (!errors.empty()) {
    std::string msg = "goal " + g.name + " is ill-typed:";
    for (const auto& e : errors) msg += "\n  " + e.message;
    throw GoalError(msg, g.pos);
  }
  return goal;
}

namespace {

std::string describe_cex(const Program& prog, const Counterexample& cex) {
  std::string out;
  out += "  left memory:  " + print_memory(cex.m1) + "\n";
  out += "  right memory: " + print_memory(cex.m2) + "\n";
  out += "  left output:  " + print_memory_dist(cex.out1) + "\n";
  out += "  right output: " + print_memory_dist(cex.out2) + "\n";
  out += "  " + cex.detail;
  (void)prog;
  return out;
}

}  // namespace

ScriptResult check_script(const Program& prog, const std::string& goal_name,
                          int fuel) {
  const GoalDecl* decl = prog.find_goal(goal_name);
  if (!decl) {
    return {ScriptResult::Status::Stuck,
            "no goal named " + goal_name, std::nullopt};
  }
  const ProofScript* script = prog.find_script(goal_name);
  if (!script) {
    return {ScriptResult::Status::Stuck,
            "goal " + goal_name + " has no proof script", std::nullopt};
  }

  std::vector<RelGoal> goals{build_goal(prog, *decl)};

  auto pop_and_prepend = [&](std::vector<RelGoal> replacement) {
    goals.erase(goals.begin());
    goals.insert(goals.begin(), replacement.begin(), replacement.end());
  };

  for (const auto& step : script->steps) {
    if (step.name == "done") {
      if (!goals.empty())
        return {ScriptResult::Status::Stuck,
                "done with " + std::to_string(goals.size()) +
                    " open goal(s); first: " + goals.front().label,
                std::nullopt};
      continue;
    }
    if (goals.empty())
      return {ScriptResult::Status::Stuck,
              "tactic " + step.name + " with no open goals", std::nullopt};
    RelGoal& cur = goals.front();

    try {
      if (step.name == "auto") {
        DischargeResult r = discharge(cur, fuel);
        if (!r.proven()) {
          ScriptResult out;
          out.status = ScriptResult::Status::Refuted;
          out.cex = r.cex;
          out.message = "goal " + cur.label + " refuted:\n" +
                        describe_cex(prog, *r.cex);
          return out;
        }
        goals.erase(goals.begin());
      } else if (step.name == "skip") {
        pop_and_prepend(tac_skip(cur, fuel));
      } else if (step.name == "assign") {
        pop_and_prepend(tac_assign(cur));
      } else if (step.name == "rnd") {
        pop_and_prepend(tac_rnd(cur));
      } else if (step.name == "swap") {
        pop_and_prepend(tac_swap(cur, *step.side, step.ints.at(0),
                                 step.ints.at(1)));
      } else if (step.name == "seq") {
        pop_and_prepend(tac_seq(cur, step.ints.at(0), step.assertion));
      } else if (step.name == "case") {
        pop_and_prepend(tac_case(cur, *step.side, step.exprs.at(0)));
      } else if (step.name == "inline") {
        pop_and_prepend(tac_inline(cur, *step.side));
      } else if (step.name == "declassify") {
        pop_and_prepend({tactic_declassify(cur, *step.side)});
      } else if (step.name == "secrnd") {
        pop_and_prepend({tactic_secrnd(cur, *step.side)});
      } else if (step.name == "secrndasgn") {
        pop_and_prepend(tactic_secrndasgn(cur, step.idents.at(0),
                                          step.exprs.at(0),
                                          step.idents.at(1)));
      } else {
        return {ScriptResult::Status::Stuck,
                "unknown tactic: " + step.name, std::nullopt};
      }
    } catch (const TacticError& e) {
      return {ScriptResult::Status::Stuck,
              "tactic " + step.name + " failed on goal " + cur.label +
                  ": " + e.what(),
              std::nullopt};
    }
  }

  if (!goals.empty())
    return {ScriptResult::Status::Stuck,
            "script ended with " + std::to_string(goals.size()) +
                " open goal(s); first: " + goals.front().label,
            std::nullopt};
  return {ScriptResult::Status::Proven, "proven", std::nullopt};
}

}  // namespace plw
