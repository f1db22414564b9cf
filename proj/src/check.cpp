#include "plwhile/check.hpp"

#include <algorithm>

namespace plw {

namespace {

void err(std::vector<Diagnostic>& errors, SourcePos pos, std::string msg) {
  errors.push_back({pos, std::move(msg)});
}

std::string type_name(const Program& prog, int id) {
  if (id < 0 || id >= static_cast<int>(prog.types.size())) return "?";
  return prog.types[static_cast<std::size_t>(id)].name;
}

}  // namespace

Scope module_scope(const Module& mod) {
  Scope s;
  for (const auto& d : mod.globals) s[d.name] = d.type;
  return s;
}

Scope proc_scope(const Module& mod, const Proc& p) {
  Scope s = module_scope(mod);
  for (const auto& d : p.params) s[d.name] = d.type;
  for (const auto& d : p.locals) s[d.name] = d.type;
  return s;
}

namespace {

TypeInfo check_dist_expr(const Program& prog, const Scope& scope,
                         const DistExpr& d, SourcePos pos,
                         std::vector<Diagnostic>& errors) {
  switch (d.kind) {
    case DistExpr::Kind::Uniform:
      if (d.type_id < 0 || d.type_id >= static_cast<int>(prog.types.size())) {
        err(errors, pos, "uniform over unknown type");
        return {TypeInfo::Kind::DistOpt, -1};
      }
      return {TypeInfo::Kind::DistOpt, d.type_id};
    case DistExpr::Kind::Point: {
      TypeInfo t = infer_expr(prog, scope, *d.point, errors);
      if (t.kind != TypeInfo::Kind::Elem) {
        err(errors, d.point->pos, "point distribution over a non-plain value");
        return {TypeInfo::Kind::DistOpt, -1};
      }
      return {TypeInfo::Kind::DistOpt, t.type_id};
    }
    case DistExpr::Kind::Named: {
      const DistDef* def = prog.find_dist(d.name);
      if (!def) {
        err(errors, pos, "unknown distribution: " + d.name);
        return {TypeInfo::Kind::DistOpt, -1};
      }
      return {TypeInfo::Kind::DistOpt, def->type_id};
    }
  }
  return {TypeInfo::Kind::DistOpt, -1};
}

}  // namespace

TypeInfo infer_expr(const Program& prog, const Scope& scope, const Expr& e,
                    std::vector<Diagnostic>& errors) {
  switch (e.kind) {
    case Expr::Kind::Const:
      return {TypeInfo::Kind::Elem, e.elem.type};
    case Expr::Kind::Var: {
      auto it = scope.find(e.name);
      if (it == scope.end()) {
        err(errors, e.pos, "unknown identifier: " + e.name);
        return {};
      }
      switch (it->second.kind) {
        case VarType::Kind::Plain:
          return {TypeInfo::Kind::Elem, it->second.type_id};
        case VarType::Kind::Labeled:
          return {TypeInfo::Kind::Labeled, it->second.type_id};
        case VarType::Kind::Map:
          return {TypeInfo::Kind::Map, it->second.type_id,
                  it->second.key_type_id};
      }
      return {};
    }
    case Expr::Kind::MapLookup: {
      auto it = scope.find(e.name);
      if (it == scope.end() || it->second.kind != VarType::Kind::Map) {
        err(errors, e.pos, "lookup into a non-map: " + e.name);
        return {};
      }
      TypeInfo k = infer_expr(prog, scope, *e.a, errors);
      if (k.kind != TypeInfo::Kind::Elem ||
          k.type_id != it->second.key_type_id)
        err(errors, e.a->pos,
            "map key must have type " +
                type_name(prog, it->second.key_type_id));
      return {TypeInfo::Kind::Labeled, it->second.type_id};
    }
    case Expr::Kind::Eq: {
      TypeInfo a = infer_expr(prog, scope, *e.a, errors);
      TypeInfo b = infer_expr(prog, scope, *e.b, errors);
      bool ok = a.kind == b.kind;
      if (ok && (a.kind == TypeInfo::Kind::Elem ||
                 a.kind == TypeInfo::Kind::Labeled))
        ok = a.type_id == b.type_id;
      if (ok && a.kind == TypeInfo::Kind::DistOpt)
        ok = a.type_id < 0 || b.type_id < 0 || a.type_id == b.type_id;
      if (ok && (a.kind == TypeInfo::Kind::Map ||
                 a.kind == TypeInfo::Kind::EmptyMap))
        ok = false;
      if (!ok) err(errors, e.pos, "equality between incompatible types");
      return {TypeInfo::Kind::Bool};
    }
    case Expr::Kind::Not: {
      TypeInfo a = infer_expr(prog, scope, *e.a, errors);
      if (a.kind != TypeInfo::Kind::Bool)
        err(errors, e.pos, "negation of a non-boolean");
      return {TypeInfo::Kind::Bool};
    }
    case Expr::Kind::And: {
      for (const auto& sub : {e.a, e.b}) {
        TypeInfo t = infer_expr(prog, scope, *sub, errors);
        if (t.kind != TypeInfo::Kind::Bool)
          err(errors, sub->pos, "conjunct is not a boolean");
      }
      return {TypeInfo::Kind::Bool};
    }
    case Expr::Kind::InDom: {
      auto it = scope.find(e.name);
      if (it == scope.end() || it->second.kind != VarType::Kind::Map) {
        err(errors, e.pos, "domain test on a non-map: " + e.name);
        return {TypeInfo::Kind::Bool};
      }
      TypeInfo k = infer_expr(prog, scope, *e.a, errors);
      if (k.kind != TypeInfo::Kind::Elem ||
          k.type_id != it->second.key_type_id)
        err(errors, e.a->pos, "domain test key has the wrong type");
      return {TypeInfo::Kind::Bool};
    }
    case Expr::Kind::Proj: {
      TypeInfo a = infer_expr(prog, scope, *e.a, errors);
      if (a.kind != TypeInfo::Kind::Labeled) {
        err(errors, e.pos, "projection applies to labeled values only");
        return {};
      }
      switch (e.proj_index) {
        case 1:
          return {TypeInfo::Kind::Elem, a.type_id};
        case 2:
          return {TypeInfo::Kind::DistOpt, a.type_id};
        case 3:
          return {TypeInfo::Kind::Conf};
        default:
          err(errors, e.pos, "projection index out of range");
          return {};
      }
    }
    case Expr::Kind::Triple: {
      TypeInfo v = infer_expr(prog, scope, *e.a, errors);
      TypeInfo d = infer_expr(prog, scope, *e.b, errors);
      TypeInfo c = infer_expr(prog, scope, *e.c, errors);
      if (v.kind != TypeInfo::Kind::Elem)
        err(errors, e.a->pos, "triple value slot is not a plain value");
      if (d.kind != TypeInfo::Kind::DistOpt)
        err(errors, e.b->pos, "triple origin slot is not a distribution");
      else if (d.type_id >= 0 && v.kind == TypeInfo::Kind::Elem &&
               d.type_id != v.type_id)
        err(errors, e.b->pos, "origin distribution over the wrong type");
      if (c.kind != TypeInfo::Kind::Conf)
        err(errors, e.c->pos, "triple label slot is not a confidentiality");
      return {TypeInfo::Kind::Labeled, v.type_id};
    }
    case Expr::Kind::DistAtom:
      if (!e.dist) return {TypeInfo::Kind::DistOpt, -1};
      return check_dist_expr(prog, scope, *e.dist, e.pos, errors);
    case Expr::Kind::ConfAtom:
      return {TypeInfo::Kind::Conf};
    case Expr::Kind::EmptyMap:
      return {TypeInfo::Kind::EmptyMap};
  }
  return {};
}

namespace {

struct TargetInfo {
  bool ok = false;
  bool labeled = false;  // labeled var or map entry
  bool map_var = false;  // bare map variable
  int type_id = -1;
};

TargetInfo check_target(const Program& prog, const Scope& scope,
                        const LValue& t, std::vector<Diagnostic>& errors) {
  auto it = scope.find(t.name);
  if (it == scope.end()) {
    err(errors, t.pos, "unknown assignment target: " + t.name);
    return {};
  }
  const VarType& vt = it->second;
  if (t.key) {
    if (vt.kind != VarType::Kind::Map) {
      err(errors, t.pos, "keyed write into a non-map: " + t.name);
      return {};
    }
    TypeInfo k = infer_expr(prog, scope, *t.key, errors);
    if (k.kind != TypeInfo::Kind::Elem || k.type_id != vt.key_type_id)
      err(errors, t.key->pos, "map key has the wrong type");
    return {true, true, false, vt.type_id};
  }
  switch (vt.kind) {
    case VarType::Kind::Plain:
      return {true, false, false, vt.type_id};
    case VarType::Kind::Labeled:
      return {true, true, false, vt.type_id};
    case VarType::Kind::Map:
      return {true, false, true, vt.type_id};
  }
  return {};
}

}  // namespace

void check_commands(const Program& prog, const Module* mod,
                    const Scope& scope, std::span<const CommandPtr> cmds,
                    std::vector<Diagnostic>& errors) {
  for (const auto& cp : cmds) {
    const Command& c = *cp;
    switch (c.kind) {
      case Command::Kind::Skip:
        break;
      case Command::Kind::Assign: {
        TargetInfo t = check_target(prog, scope, c.target, errors);
        if (c.expr->kind == Expr::Kind::EmptyMap) {
          if (t.ok && !t.map_var)
            err(errors, c.pos, "empty assigned to a non-map variable");
          break;
        }
        TypeInfo rhs = infer_expr(prog, scope, *c.expr, errors);
        if (!t.ok) break;
        if (t.map_var) {
          err(errors, c.pos, "whole-map assignment only supports empty");
        } else if (t.labeled) {
          if (rhs.kind != TypeInfo::Kind::Labeled || rhs.type_id != t.type_id)
            err(errors, c.pos,
                "labeled target requires a labeled value of type " +
                    type_name(prog, t.type_id));
        } else {
          if (rhs.kind != TypeInfo::Kind::Elem || rhs.type_id != t.type_id)
            err(errors, c.pos,
                "assignment type mismatch: expected " +
                    type_name(prog, t.type_id));
        }
        break;
      }
      case Command::Kind::Sample: {
        TargetInfo t = check_target(prog, scope, c.target, errors);
        TypeInfo d = check_dist_expr(prog, scope, *c.dist, c.pos, errors);
        if (t.ok && (t.labeled || t.map_var))
          err(errors, c.pos,
              "plain sampling into a labeled target (use <~$)");
        else if (t.ok && d.type_id >= 0 && d.type_id != t.type_id)
          err(errors, c.pos, "sampling from a distribution of the wrong type");
        break;
      }
      case Command::Kind::If: {
        TypeInfo g = infer_expr(prog, scope, *c.cond, errors);
        if (g.kind != TypeInfo::Kind::Bool)
          err(errors, c.pos, "branch condition is not a boolean");
        check_commands(prog, mod, scope, c.then_body, errors);
        check_commands(prog, mod, scope, c.else_body, errors);
        break;
      }
      case Command::Kind::While: {
        TypeInfo g = infer_expr(prog, scope, *c.cond, errors);
        if (g.kind != TypeInfo::Kind::Bool)
          err(errors, c.pos, "loop condition is not a boolean");
        check_commands(prog, mod, scope, c.body, errors);
        break;
      }
      case Command::Kind::SecRead: {
        if (c.expr->kind != Expr::Kind::Var &&
            c.expr->kind != Expr::Kind::MapLookup) {
          err(errors, c.pos,
              "secure read source must be a labeled variable or map entry");
          break;
        }
        TypeInfo src = infer_expr(prog, scope, *c.expr, errors);
        if (src.kind != TypeInfo::Kind::Labeled)
          err(errors, c.pos, "secure read from a non-labeled source");
        TargetInfo t = check_target(prog, scope, c.target, errors);
        if (t.ok && (t.labeled || t.map_var || c.target.key))
          err(errors, c.pos, "secure read target must be a plain variable");
        else if (t.ok && src.kind == TypeInfo::Kind::Labeled &&
                 t.type_id != src.type_id)
          err(errors, c.pos, "secure read type mismatch");
        break;
      }
      case Command::Kind::SecSample: {
        TargetInfo t = check_target(prog, scope, c.target, errors);
        TypeInfo d = check_dist_expr(prog, scope, *c.dist, c.pos, errors);
        if (t.ok && !t.labeled)
          err(errors, c.pos, "secure sampling into a non-labeled target");
        else if (t.ok && d.type_id >= 0 && d.type_id != t.type_id)
          err(errors, c.pos, "sampling from a distribution of the wrong type");
        break;
      }
      case Command::Kind::Call: {
        if (!mod) {
          err(errors, c.pos, "procedure call outside a module context");
          break;
        }
        const Proc* p = mod->find_proc(c.callee);
        if (!p) {
          err(errors, c.pos, "unknown procedure: " + c.callee);
          break;
        }
        if (p->params.size() != c.args.size()) {
          err(errors, c.pos, "arity mismatch calling " + c.callee);
          break;
        }
        for (std::size_t i = 0; i < c.args.size(); ++i) {
          TypeInfo a = infer_expr(prog, scope, *c.args[i], errors);
          if (a.kind != TypeInfo::Kind::Elem ||
              a.type_id != p->params[i].type.type_id)
            err(errors, c.args[i]->pos,
                "argument " + std::to_string(i + 1) + " of " + c.callee +
                    " has the wrong type");
        }
        if (c.call_result) {
          if (!p->ret) {
            err(errors, c.pos, c.callee + " returns no value");
          } else {
            TargetInfo t = check_target(prog, scope, *c.call_result, errors);
            if (t.ok && (t.labeled || t.map_var))
              err(errors, c.pos, "call result target must be plain");
          }
        }
        break;
      }
    }
  }
}

std::vector<Diagnostic> well_formed(const Program& prog, const Module& mod) {
  std::vector<Diagnostic> errors;

  std::set<std::string> seen;
  auto declare = [&](const VarDecl& d, const char* what) {
    if (!seen.insert(d.name).second)
      err(errors, d.pos, std::string("duplicate ") + what + ": " + d.name);
    if (prog.find_elem(d.name))
      err(errors, d.pos, d.name + " collides with an element constant");
    if (prog.find_dist(d.name))
      err(errors, d.pos, d.name + " collides with a distribution name");
    auto check_type = [&](int id, const char* role) {
      if (id < 0 || id >= static_cast<int>(prog.types.size()))
        err(errors, d.pos,
            std::string("unknown ") + role + " type for " + d.name);
    };
    check_type(d.type.type_id, "value");
    if (d.type.kind == VarType::Kind::Map)
      check_type(d.type.key_type_id, "key");
  };

  for (const auto& d : mod.globals) declare(d, "global");

  std::set<std::string> proc_names;
  for (const auto& p : mod.procs) {
    if (!proc_names.insert(p.name).second)
      err(errors, p.pos, "duplicate procedure: " + p.name);
    auto locals_seen = seen;  // params/locals must not shadow globals
    for (const auto& d : p.params) {
      if (!locals_seen.insert(d.name).second)
        err(errors, d.pos, "parameter shadows another name: " + d.name);
      if (d.type.kind != VarType::Kind::Plain)
        err(errors, d.pos, "parameters must be plain-typed: " + d.name);
    }
    for (const auto& d : p.locals) {
      if (!locals_seen.insert(d.name).second)
        err(errors, d.pos, "local shadows another name: " + d.name);
    }
    Scope scope = proc_scope(mod, p);
    check_commands(prog, &mod, scope, p.body, errors);
    if (p.ret) {
      TypeInfo r = infer_expr(prog, scope, *p.ret, errors);
      if (r.kind != TypeInfo::Kind::Elem)
        err(errors, p.pos, "return expression must be a plain value");
    }
  }
  return errors;
}

std::vector<Diagnostic> well_formed(const Program& prog) {
  std::vector<Diagnostic> errors;

  std::set<std::string> type_names, elem_names, dist_names;
  for (const auto& t : prog.types) {
    if (!type_names.insert(t.name).second)
      err(errors, t.pos, "duplicate type: " + t.name);
    if (t.elements.empty())
      err(errors, t.pos, "type " + t.name + " has no elements");
    for (const auto& e : t.elements)
      if (!elem_names.insert(e).second)
        err(errors, t.pos, "duplicate element name: " + e);
  }
  for (const auto& d : prog.dists) {
    if (!dist_names.insert(d.name).second)
      err(errors, d.pos, "duplicate distribution: " + d.name);
    if (elem_names.count(d.name))
      err(errors, d.pos, d.name + " collides with an element constant");
    if (d.type_id < 0 || d.type_id >= static_cast<int>(prog.types.size())) {
      err(errors, d.pos, "distribution over an unknown type");
      continue;
    }
    if (d.weights.size() != prog.types[d.type_id].elements.size())
      err(errors, d.pos, "weight table size mismatch for " + d.name);
    Rational total;
    for (const auto& w : d.weights) {
      if (w.is_negative())
        err(errors, d.pos, "negative weight in " + d.name);
      total += w;
    }
    if (Rational(1) < total)
      err(errors, d.pos, "weights of " + d.name + " sum beyond 1");
  }

  std::set<std::string> module_names;
  for (const auto& m : prog.modules) {
    if (!module_names.insert(m.name).second)
      err(errors, m.pos, "duplicate module: " + m.name);
    auto local = well_formed(prog, m);
    errors.insert(errors.end(), local.begin(), local.end());
  }
  return errors;
}

namespace {

/// Scans an expression for labeled identifiers used outside their
/// dedicated syntax, together with label machinery in code.
void scan_guard_expr(const Scope& scope, const Expr& e, SourcePos cmd_pos,
                     std::vector<Diagnostic>& out) {
  switch (e.kind) {
    case Expr::Kind::Var: {
      auto it = scope.find(e.name);
      if (it != scope.end() && it->second.kind == VarType::Kind::Labeled)
        out.push_back({cmd_pos, "labeled variable " + e.name +
                                    " used as a plain value"});
      break;
    }
    case Expr::Kind::MapLookup: {
      auto it = scope.find(e.name);
      if (it != scope.end() && it->second.kind == VarType::Kind::Map)
        out.push_back({cmd_pos, "labeled map entry " + e.name +
                                    "[...] used as a plain value"});
      scan_guard_expr(scope, *e.a, cmd_pos, out);
      break;
    }
    case Expr::Kind::InDom:
      // Domain-of-definition tests read no labeled content.
      scan_guard_expr(scope, *e.a, cmd_pos, out);
      break;
    case Expr::Kind::Proj:
      out.push_back({cmd_pos, "projection of a labeled value in code"});
      break;
    case Expr::Kind::Triple:
      out.push_back({cmd_pos, "labeled-value literal in code"});
      break;
    case Expr::Kind::ConfAtom:
      out.push_back({cmd_pos, "confidentiality constant in code"});
      break;
    case Expr::Kind::DistAtom:
      out.push_back({cmd_pos, "distribution value in code"});
      break;
    default:
      for (const auto& sub : {e.a, e.b, e.c})
        if (sub) scan_guard_expr(scope, *sub, cmd_pos, out);
      break;
  }
}

void scan_guard_cmds(const Scope& scope, std::span<const CommandPtr> cmds,
                     std::vector<Diagnostic>& out) {
  for (const auto& cp : cmds) {
    const Command& c = *cp;
    switch (c.kind) {
      case Command::Kind::Skip:
        break;
      case Command::Kind::Assign: {
        auto it = scope.find(c.target.name);
        bool target_labeled =
            it != scope.end() &&
            (it->second.kind == VarType::Kind::Labeled ||
             (it->second.kind == VarType::Kind::Map && c.target.key));
        if (target_labeled)
          out.push_back({c.pos, "plain assignment writes labeled target " +
                                    c.target.name});
        if (c.target.key) scan_guard_expr(scope, *c.target.key, c.pos, out);
        if (c.expr->kind != Expr::Kind::EmptyMap)
          scan_guard_expr(scope, *c.expr, c.pos, out);
        break;
      }
      case Command::Kind::Sample: {
        auto it = scope.find(c.target.name);
        if (it != scope.end() &&
            (it->second.kind == VarType::Kind::Labeled ||
             (it->second.kind == VarType::Kind::Map && c.target.key)))
          out.push_back({c.pos, "plain sampling writes labeled target " +
                                    c.target.name});
        if (c.target.key) scan_guard_expr(scope, *c.target.key, c.pos, out);
        if (c.dist->kind == DistExpr::Kind::Point)
          scan_guard_expr(scope, *c.dist->point, c.pos, out);
        break;
      }
      case Command::Kind::If:
        scan_guard_expr(scope, *c.cond, c.pos, out);
        scan_guard_cmds(scope, c.then_body, out);
        scan_guard_cmds(scope, c.else_body, out);
        break;
      case Command::Kind::While:
        scan_guard_expr(scope, *c.cond, c.pos, out);
        scan_guard_cmds(scope, c.body, out);
        break;
      case Command::Kind::SecRead:
        // Dedicated syntax; the source is the allowed labeled use.
        if (c.expr->kind == Expr::Kind::MapLookup)
          scan_guard_expr(scope, *c.expr->a, c.pos, out);
        break;
      case Command::Kind::SecSample:
        if (c.target.key) scan_guard_expr(scope, *c.target.key, c.pos, out);
        if (c.dist->kind == DistExpr::Kind::Point)
          scan_guard_expr(scope, *c.dist->point, c.pos, out);
        break;
      case Command::Kind::Call:
        for (const auto& a : c.args) scan_guard_expr(scope, *a, c.pos, out);
        break;
    }
  }
}

}  // namespace

std::vector<Diagnostic> guard_check(const Program& prog, const Module& mod) {
  std::vector<Diagnostic> out;
  for (const auto& p : mod.procs) {
    Scope scope = proc_scope(mod, p);
    scan_guard_cmds(scope, p.body, out);
    if (p.ret) scan_guard_expr(scope, *p.ret, p.pos, out);
  }
  (void)prog;
  return out;
}

namespace {

void expr_idents(const Expr& e, std::set<std::string>& out) {
  switch (e.kind) {
    case Expr::Kind::Var:
      out.insert(e.name);
      break;
    case Expr::Kind::MapLookup:
    case Expr::Kind::InDom:
      out.insert(e.name);
      expr_idents(*e.a, out);
      break;
    default:
      for (const auto& sub : {e.a, e.b, e.c})
        if (sub) expr_idents(*sub, out);
      if (e.kind == Expr::Kind::DistAtom && e.dist &&
          e.dist->kind == DistExpr::Kind::Point)
        expr_idents(*e.dist->point, out);
      break;
  }
}

void dist_idents(const DistExpr& d, std::set<std::string>& out) {
  if (d.kind == DistExpr::Kind::Point) expr_idents(*d.point, out);
}

struct FvWalker {
  const Program& prog;
  const Module* mod;
  std::set<std::string> acc;
  std::set<std::string> visiting;

  void walk(std::span<const CommandPtr> cmds) {
    for (const auto& cp : cmds) {
      const Command& c = *cp;
      switch (c.kind) {
        case Command::Kind::Skip:
          break;
        case Command::Kind::Assign:
          target(c.target);
          if (c.expr->kind != Expr::Kind::EmptyMap) expr_idents(*c.expr, acc);
          break;
        case Command::Kind::Sample:
          target(c.target);
          dist_idents(*c.dist, acc);
          break;
        case Command::Kind::If:
          expr_idents(*c.cond, acc);
          walk(c.then_body);
          walk(c.else_body);
          break;
        case Command::Kind::While:
          expr_idents(*c.cond, acc);
          walk(c.body);
          break;
        case Command::Kind::SecRead:
          target(c.target);
          expr_idents(*c.expr, acc);
          break;
        case Command::Kind::SecSample:
          target(c.target);
          dist_idents(*c.dist, acc);
          break;
        case Command::Kind::Call: {
          for (const auto& a : c.args) expr_idents(*a, acc);
          if (c.call_result) target(*c.call_result);
          if (!mod)
            throw std::runtime_error(
                "unresolved procedure call: " + c.callee);
          const Proc* p = mod->find_proc(c.callee);
          if (!p)
            throw std::runtime_error(
                "unresolved procedure call: " + c.callee);
          if (visiting.insert(c.callee).second) {
            for (const auto& d : p->params) acc.insert(d.name);
            walk(p->body);
            if (p->ret) expr_idents(*p->ret, acc);
          }
          break;
        }
      }
    }
  }
  void target(const LValue& t) {
    acc.insert(t.name);
    if (t.key) expr_idents(*t.key, acc);
  }
};

}  // namespace

std::set<std::string> free_vars(const Program& prog, const Module* mod,
                                std::span<const CommandPtr> cmds) {
  FvWalker w{prog, mod, {}, {}};
  w.walk(cmds);
  return w.acc;
}

VarUse var_use(const Program& prog, const Module* mod, const Command& c) {
  VarUse u;
  std::vector<CommandPtr> one{std::make_shared<Command>(c)};
  u.reads = free_vars(prog, mod, one);

  // Writes: targets of this command (and of nested/called commands).
  struct W {
    const Program& prog;
    const Module* mod;
    std::set<std::string> acc;
    std::set<std::string> visiting;
    void walk(const Command& c) {
      switch (c.kind) {
        case Command::Kind::Assign:
        case Command::Kind::Sample:
        case Command::Kind::SecSample:
          acc.insert(c.target.name);
          break;
        case Command::Kind::SecRead:
          acc.insert(c.target.name);
          // The source's confidentiality label is rewritten.
          acc.insert(c.expr->name);
          break;
        case Command::Kind::If:
          for (const auto& s : c.then_body) walk(*s);
          for (const auto& s : c.else_body) walk(*s);
          break;
        case Command::Kind::While:
          for (const auto& s : c.body) walk(*s);
          break;
        case Command::Kind::Call: {
          if (c.call_result) acc.insert(c.call_result->name);
          const Proc* p = mod ? mod->find_proc(c.callee) : nullptr;
          if (p && visiting.insert(c.callee).second) {
            for (const auto& d : p->params) acc.insert(d.name);
            for (const auto& s : p->body) walk(*s);
          }
          break;
        }
        default:
          break;
      }
    }
  } w{prog, mod, {}, {}};
  w.walk(c);
  u.writes = w.acc;
  return u;
}

}  // namespace plw
