#include "plwhile/interp.hpp"

#include <algorithm>

namespace plw {

namespace {

const Binding& binding_of(const Memory& m, const std::string& name,
                          SourcePos pos) {
  int slot = m.uni->slot_of(name, m.left);
  if (slot < 0) throw EvalFault("unbound identifier: " + name, pos);
  return m.at(slot);
}

Binding& binding_of(Memory& m, const std::string& name, SourcePos pos) {
  int slot = m.uni->slot_of(name, m.left);
  if (slot < 0) throw EvalFault("unbound identifier: " + name, pos);
  return m.at(slot);
}

Elem eval_elem(const Expr& e, const Memory& m, const Env& env) {
  Value v = eval_expr(e, m, env);
  if (auto* el = std::get_if<Elem>(&v)) return *el;
  throw EvalFault("expected a plain value", e.pos);
}

const LabeledValue& map_entry(const Memory& m, const std::string& name,
                              const Expr& key, const Env& env,
                              SourcePos pos) {
  const auto& b = binding_of(m, name, pos);
  const auto* map = std::get_if<MapValue>(&b);
  if (!map) throw EvalFault(name + " is not a map", pos);
  Elem k = eval_elem(key, m, env);
  const auto& entry = map->entries.at(k.index);
  if (!entry)
    throw EvalFault("read of unset map entry " + name + "[" +
                        m.uni->prog->elem_name(k) + "]",
                    pos);
  return *entry;
}

}  // namespace

Value eval_expr(const Expr& e, const Memory& m, const Env& env) {
  switch (e.kind) {
    case Expr::Kind::Const:
      return e.elem;
    case Expr::Kind::Var: {
      if (auto bound = env.lookup(e.name)) return *bound;
      const auto& b = binding_of(m, e.name, e.pos);
      if (const auto* el = std::get_if<Elem>(&b)) return *el;
      if (const auto* lv = std::get_if<LabeledValue>(&b)) return *lv;
      throw EvalFault("map used as a value: " + e.name, e.pos);
    }
    case Expr::Kind::MapLookup:
      return map_entry(m, e.name, *e.a, env, e.pos);
    case Expr::Kind::Eq: {
      Value a = eval_expr(*e.a, m, env);
      Value b = eval_expr(*e.b, m, env);
      if (a.index() != b.index())
        throw EvalFault("equality between incompatible values", e.pos);
      return a == b;
    }
    case Expr::Kind::Not:
      return !eval_bool(*e.a, m, env);
    case Expr::Kind::And:
      return eval_bool(*e.a, m, env) && eval_bool(*e.b, m, env);
    case Expr::Kind::InDom: {
      const auto& b = binding_of(m, e.name, e.pos);
      const auto* map = std::get_if<MapValue>(&b);
      if (!map) throw EvalFault(e.name + " is not a map", e.pos);
      Elem k = eval_elem(*e.a, m, env);
      return map->in_dom(k.index);
    }
    case Expr::Kind::Proj: {
      Value v = eval_expr(*e.a, m, env);
      const auto* lv = std::get_if<LabeledValue>(&v);
      if (!lv) throw EvalFault("projection of a non-labeled value", e.pos);
      switch (e.proj_index) {
        case 1:
          return lv->value;
        case 2:
          return DistValue{lv->origin};
        case 3:
          return lv->conf;
        default:
          throw EvalFault("bad projection index", e.pos);
      }
    }
    case Expr::Kind::Triple: {
      LabeledValue lv;
      lv.value = eval_elem(*e.a, m, env);
      Value d = eval_expr(*e.b, m, env);
      if (const auto* dv = std::get_if<DistValue>(&d))
        lv.origin = dv->d;
      else
        throw EvalFault("triple origin slot is not a distribution", e.pos);
      Value c = eval_expr(*e.c, m, env);
      if (const auto* cf = std::get_if<Conf>(&c))
        lv.conf = *cf;
      else
        throw EvalFault("triple label slot is not a confidentiality", e.pos);
      return lv;
    }
    case Expr::Kind::DistAtom: {
      if (!e.dist) return DistValue{nullptr};
      return DistValue{eval_dist_handle(*e.dist, m, env)};
    }
    case Expr::Kind::ConfAtom:
      return e.conf;
    case Expr::Kind::EmptyMap:
      throw EvalFault("empty map literal outside a map assignment", e.pos);
  }
  throw EvalFault("unreachable expression kind", e.pos);
}

bool eval_bool(const Expr& e, const Memory& m, const Env& env) {
  Value v = eval_expr(e, m, env);
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  throw EvalFault("expected a boolean", e.pos);
}

ElemDist eval_dist_expr(const DistExpr& d, const Memory& m, const Env& env) {
  const Program& prog = *m.uni->prog;
  switch (d.kind) {
    case DistExpr::Kind::Uniform: {
      const auto& t = prog.types.at(d.type_id);
      int n = static_cast<int>(t.elements.size());
      std::vector<ElemDist::Entry> w;
      for (int i = 0; i < n; ++i)
        w.emplace_back(Elem{d.type_id, i}, Rational(BigInt(1), BigInt(n)));
      return ElemDist::from_weights(std::move(w));
    }
    case DistExpr::Kind::Point:
      return ElemDist::dirac(eval_elem(*d.point, m, env));
    case DistExpr::Kind::Named: {
      const DistDef* def = prog.find_dist(d.name);
      if (!def) throw EvalFault("unknown distribution: " + d.name);
      std::vector<ElemDist::Entry> w;
      for (std::size_t i = 0; i < def->weights.size(); ++i)
        w.emplace_back(Elem{def->type_id, static_cast<int>(i)},
                       def->weights[i]);
      return ElemDist::from_weights(std::move(w));
    }
  }
  throw EvalFault("unreachable distribution kind");
}

DistHandle eval_dist_handle(const DistExpr& d, const Memory& m,
                            const Env& env) {
  const Universe& u = *m.uni;
  if (d.kind == DistExpr::Kind::Named) {
    auto it = u.named_dists.find(d.name);
    if (it != u.named_dists.end()) return it->second;
  } else if (d.kind == DistExpr::Kind::Uniform &&
             d.type_id < static_cast<int>(u.uniform_dists.size()) &&
             u.uniform_dists[d.type_id]) {
    return u.uniform_dists[d.type_id];
  }
  ElemDist dist = eval_dist_expr(d, m, env);
  if (dist.empty()) return std::make_shared<const ElemDist>(std::move(dist));
  int type_id = dist.weights().front().first.type;
  return u.intern(type_id, dist);
}

void store(Memory& m, const LValue& target, const Value& v, const Env& env) {
  Binding& b = binding_of(m, target.name, target.pos);
  if (target.key) {
    auto* map = std::get_if<MapValue>(&b);
    if (!map) throw EvalFault(target.name + " is not a map", target.pos);
    Elem k = eval_elem(*target.key, m, env);
    const auto* lv = std::get_if<LabeledValue>(&v);
    if (!lv)
      throw EvalFault("map entries hold labeled values", target.pos);
    // Re-resolve: key evaluation cannot alias the binding itself.
    std::get<MapValue>(binding_of(m, target.name, target.pos))
        .entries.at(k.index) = *lv;
    return;
  }
  if (const auto* el = std::get_if<Elem>(&v)) {
    if (!std::holds_alternative<Elem>(b))
      throw EvalFault("plain value stored into non-plain variable",
                      target.pos);
    b = *el;
    return;
  }
  if (const auto* lv = std::get_if<LabeledValue>(&v)) {
    if (!std::holds_alternative<LabeledValue>(b))
      throw EvalFault("labeled value stored into non-labeled variable",
                      target.pos);
    b = *lv;
    return;
  }
  throw EvalFault("value cannot be stored", target.pos);
}

namespace {

Dist<Memory> exec_seq(const ExecCtx& ctx, std::span<const CommandPtr> cmds,
                      const Memory& m);

Dist<Memory> exec_while(const ExecCtx& ctx, const Command& c, const Memory& m,
                        int remaining) {
  if (!eval_bool(*c.cond, m)) return Dist<Memory>::dirac(m);
  if (remaining <= 0) return Dist<Memory>::zero();
  return exec_seq(ctx, c.body, m).bind([&](const Memory& m2) {
    return exec_while(ctx, c, m2, remaining - 1);
  });
}

Dist<Memory> exec_call(const ExecCtx& ctx, const Command& c, const Memory& m) {
  if (!ctx.mod)
    throw EvalFault("procedure call outside a module context", c.pos);
  const Proc* p = ctx.mod->find_proc(c.callee);
  if (!p) throw EvalFault("unknown procedure: " + c.callee, c.pos);
  if (p->params.size() != c.args.size())
    throw EvalFault("arity mismatch calling " + c.callee, c.pos);
  if (ctx.fuel <= 0) throw EvalFault("call depth exhausted", c.pos);

  // Arguments are by value; parameter and local slots are saved and
  // restored so only globals persist across the call.
  std::vector<std::pair<int, Binding>> saved;
  auto save_slot = [&](const VarDecl& d) {
    int slot = m.uni->slot_of(d.name, m.left);
    if (slot < 0)
      throw EvalFault("callee variable missing from universe: " + d.name,
                      c.pos);
    saved.emplace_back(slot, m.at(slot));
  };
  for (const auto& d : p->params) save_slot(d);
  for (const auto& d : p->locals) save_slot(d);

  Memory entry = m;
  for (std::size_t i = 0; i < p->params.size(); ++i) {
    Value v = eval_expr(*c.args[i], m);
    store(entry, LValue{p->params[i].name, nullptr, c.pos}, v);
  }
  for (const auto& d : p->locals) {
    int slot = entry.uni->slot_of(d.name, entry.left);
    entry.at(slot) = default_binding(*entry.uni, d);
  }

  ExecCtx inner = ctx;
  inner.fuel = ctx.fuel - 1;
  return exec_seq(inner, p->body, entry).bind([&](const Memory& out) {
    Value ret = p->ret ? eval_expr(*p->ret, out) : Value{Unit{}};
    Memory back = out;
    for (const auto& [slot, b] : saved) back.at(slot) = b;
    if (c.call_result) store(back, *c.call_result, ret);
    return Dist<Memory>::dirac(back);
  });
}

Dist<Memory> exec_one(const ExecCtx& ctx, const Command& c, const Memory& m) {
  switch (c.kind) {
    case Command::Kind::Skip:
      return Dist<Memory>::dirac(m);
    case Command::Kind::Assign: {
      Memory m2 = m;
      if (c.expr->kind == Expr::Kind::EmptyMap) {
        Binding& b = m2.at(m2.uni->slot_of(c.target.name, m2.left));
        auto* map = std::get_if<MapValue>(&b);
        if (!map)
          throw EvalFault("empty assigned to a non-map variable", c.pos);
        for (auto& e : map->entries) e.reset();
      } else {
        store(m2, c.target, eval_expr(*c.expr, m));
      }
      return Dist<Memory>::dirac(m2);
    }
    case Command::Kind::Sample: {
      ElemDist d = eval_dist_expr(*c.dist, m);
      return d.bind([&](const Elem& v) {
        Memory m2 = m;
        store(m2, c.target, v);
        return Dist<Memory>::dirac(m2);
      });
    }
    case Command::Kind::If:
      return eval_bool(*c.cond, m) ? exec_seq(ctx, c.then_body, m)
                                   : exec_seq(ctx, c.else_body, m);
    case Command::Kind::While:
      return exec_while(ctx, c, m, ctx.fuel);
    case Command::Kind::SecRead: {
      Value src = eval_expr(*c.expr, m);
      const auto* lv = std::get_if<LabeledValue>(&src);
      if (!lv)
        throw EvalFault("secure read from a non-labeled expression", c.pos);
      Memory m2 = m;
      LabeledValue leaked{lv->value, lv->origin, Conf::Leaked};
      if (c.expr->kind == Expr::Kind::Var) {
        store(m2, LValue{c.expr->name, nullptr, c.pos}, leaked);
      } else if (c.expr->kind == Expr::Kind::MapLookup) {
        store(m2, LValue{c.expr->name, c.expr->a, c.pos}, leaked);
      } else {
        throw EvalFault("secure read source must be a variable or map entry",
                        c.pos);
      }
      store(m2, c.target, lv->value);
      return Dist<Memory>::dirac(m2);
    }
    case Command::Kind::SecSample: {
      DistHandle d = eval_dist_handle(*c.dist, m);
      return d->bind([&](const Elem& v) {
        Memory m2 = m;
        store(m2, c.target, LabeledValue{v, d, Conf::Secret});
        return Dist<Memory>::dirac(m2);
      });
    }
    case Command::Kind::Call:
      return exec_call(ctx, c, m);
  }
  throw EvalFault("unreachable command kind", c.pos);
}

Dist<Memory> exec_seq(const ExecCtx& ctx, std::span<const CommandPtr> cmds,
                      const Memory& m) {
  if (cmds.empty()) return Dist<Memory>::dirac(m);
  Dist<Memory> head = exec_one(ctx, *cmds.front(), m);
  if (cmds.size() == 1) return head;
  auto rest = cmds.subspan(1);
  return head.bind(
      [&](const Memory& m2) { return exec_seq(ctx, rest, m2); });
}

void collect_called(const Module& mod, std::span<const CommandPtr> cmds,
                    std::vector<const Proc*>& out) {
  for (const auto& c : cmds) {
    switch (c->kind) {
      case Command::Kind::If:
        collect_called(mod, c->then_body, out);
        collect_called(mod, c->else_body, out);
        break;
      case Command::Kind::While:
        collect_called(mod, c->body, out);
        break;
      case Command::Kind::Call: {
        const Proc* p = mod.find_proc(c->callee);
        if (p && std::find(out.begin(), out.end(), p) == out.end()) {
          out.push_back(p);
          collect_called(mod, p->body, out);
        }
        break;
      }
      default:
        break;
    }
  }
}

std::shared_ptr<Universe> proc_universe(const Program& prog,
                                        const Module& mod, const Proc& p) {
  auto u = std::make_shared<Universe>();
  u->prog = &prog;
  u->vars = mod.globals;
  std::vector<const Proc*> procs{&p};
  collect_called(mod, p.body, procs);
  for (const Proc* q : procs) {
    for (const auto& d : q->params) u->vars.push_back(d);
    for (const auto& d : q->locals) u->vars.push_back(d);
  }
  u->origins = collect_origins(prog);
  u->finalize();
  return u;
}

}  // namespace

Dist<Memory> exec(const ExecCtx& ctx, std::span<const CommandPtr> cmds,
                  const Memory& m) {
  return exec_seq(ctx, cmds, m);
}

std::shared_ptr<Universe> globals_universe(const Program& prog,
                                           const Module& mod) {
  auto u = std::make_shared<Universe>();
  u->prog = &prog;
  u->vars = mod.globals;
  u->origins = collect_origins(prog);
  u->finalize();
  return u;
}

Dist<ProcResult> run_proc(const Program& prog, const Module& mod,
                          const std::string& proc,
                          const std::vector<Value>& args, const Memory& m,
                          int fuel) {
  const Proc* p = mod.find_proc(proc);
  if (!p) throw EvalFault("unknown procedure: " + mod.name + "." + proc);
  if (p->params.size() != args.size())
    throw EvalFault("arity mismatch calling " + proc);

  auto uni = proc_universe(prog, mod, *p);
  std::size_t n_globals = mod.globals.size();

  Memory entry(*uni, m.left);
  for (std::size_t i = 0; i < n_globals; ++i) entry.slots[i] = m.slots[i];
  for (std::size_t i = 0; i < p->params.size(); ++i)
    store(entry, LValue{p->params[i].name, nullptr, p->pos}, args[i]);

  ExecCtx ctx{&prog, &mod, fuel};
  const Universe* base = m.uni;
  return exec(ctx, p->body, entry).bind([&](const Memory& out) {
    ProcResult r;
    r.ret = p->ret ? eval_expr(*p->ret, out) : Value{Unit{}};
    r.mem = Memory(*base, m.left);
    for (std::size_t i = 0; i < n_globals; ++i) r.mem.slots[i] = out.slots[i];
    return Dist<ProcResult>::dirac(std::move(r));
  });
}

bool lossless_check(const Program& prog, const Module& mod,
                    const std::string& proc, int fuel) {
  const Proc* p = mod.find_proc(proc);
  if (!p) throw EvalFault("unknown procedure: " + mod.name + "." + proc);
  auto uni = proc_universe(prog, mod, *p);
  MemoryEnumerator en(*uni, true);
  Memory m;
  en.reset(m);
  ExecCtx ctx{&prog, &mod, fuel};
  do {
    if (!exec(ctx, p->body, m).mass().is_one()) return false;
  } while (en.next(m));
  return true;
}

namespace {

void scan_dist_expr(const Program& prog, const DistExpr& d,
                    std::vector<std::vector<DistHandle>>& acc);

void scan_expr(const Program& prog, const Expr& e,
               std::vector<std::vector<DistHandle>>& acc) {
  if (e.kind == Expr::Kind::DistAtom && e.dist)
    scan_dist_expr(prog, *e.dist, acc);
  for (const auto& sub : {e.a, e.b, e.c})
    if (sub) scan_expr(prog, *sub, acc);
}

void add_origin(int type_id, const ElemDist& d,
                std::vector<std::vector<DistHandle>>& acc) {
  for (const auto& h : acc.at(type_id))
    if (*h == d) return;
  acc.at(type_id).push_back(std::make_shared<const ElemDist>(d));
}

void scan_dist_expr(const Program& prog, const DistExpr& d,
                    std::vector<std::vector<DistHandle>>& acc) {
  if (d.kind == DistExpr::Kind::Uniform) {
    const auto& t = prog.types.at(d.type_id);
    int n = static_cast<int>(t.elements.size());
    std::vector<ElemDist::Entry> w;
    for (int i = 0; i < n; ++i)
      w.emplace_back(Elem{d.type_id, i}, Rational(BigInt(1), BigInt(n)));
    add_origin(d.type_id, ElemDist::from_weights(std::move(w)), acc);
  }
  // Point distributions depend on the memory; they never enter the
  // enumeration universe of origin labels.
}

void scan_cmds(const Program& prog, std::span<const CommandPtr> cmds,
               std::vector<std::vector<DistHandle>>& acc) {
  for (const auto& c : cmds) {
    if (c->dist) scan_dist_expr(prog, *c->dist, acc);
    if (c->expr) scan_expr(prog, *c->expr, acc);
    if (c->cond) scan_expr(prog, *c->cond, acc);
    scan_cmds(prog, c->then_body, acc);
    scan_cmds(prog, c->else_body, acc);
    scan_cmds(prog, c->body, acc);
  }
}

}  // namespace

std::vector<std::vector<DistHandle>> collect_origins(const Program& prog) {
  std::vector<std::vector<DistHandle>> acc(prog.types.size());
  for (const auto& def : prog.dists) {
    std::vector<ElemDist::Entry> w;
    for (std::size_t i = 0; i < def.weights.size(); ++i)
      w.emplace_back(Elem{def.type_id, static_cast<int>(i)}, def.weights[i]);
    add_origin(def.type_id, ElemDist::from_weights(std::move(w)), acc);
  }
  for (const auto& mod : prog.modules)
    for (const auto& p : mod.procs) scan_cmds(prog, p.body, acc);
  for (const auto& g : prog.goals) {
    scan_cmds(prog, g.left.raw, acc);
    scan_cmds(prog, g.right.raw, acc);
  }
  return acc;
}

}  // namespace plw
