#include "plwhile/printer.hpp"

#include <sstream>

namespace plw {

namespace {

std::string indent_of(int n) { return std::string(2 * n, ' '); }

std::string conf_name(Conf c) { return c == Conf::Secret ? "S" : "L"; }

}  // namespace

std::string print_elem(const Program& prog, Elem e) {
  return prog.elem_name(e);
}

std::string print_elem_dist(const Program& prog, const ElemDist& d) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (const auto& [v, w] : d.weights()) {
    if (!first) out << ", ";
    first = false;
    out << print_elem(prog, v) << ": " << w.to_string();
  }
  out << "}";
  return out.str();
}

std::string dist_display(const Program& prog, const DistHandle& h) {
  if (!h) return "bot";
  for (const auto& def : prog.dists) {
    std::vector<ElemDist::Entry> w;
    for (std::size_t i = 0; i < def.weights.size(); ++i)
      w.emplace_back(Elem{def.type_id, static_cast<int>(i)}, def.weights[i]);
    if (ElemDist::from_weights(std::move(w)) == *h) return def.name;
  }
  for (std::size_t t = 0; t < prog.types.size(); ++t) {
    int n = static_cast<int>(prog.types[t].elements.size());
    std::vector<ElemDist::Entry> w;
    for (int i = 0; i < n; ++i)
      w.emplace_back(Elem{static_cast<int>(t), i},
                     Rational(BigInt(1), BigInt(n)));
    if (ElemDist::from_weights(std::move(w)) == *h)
      return "uniform " + prog.types[t].name;
  }
  return print_elem_dist(prog, *h);
}

std::string print_labeled(const Program& prog, const LabeledValue& lv) {
  return "(" + print_elem(prog, lv.value) + ", " +
         dist_display(prog, lv.origin) + ", " + conf_name(lv.conf) + ")";
}

std::string print_binding(const Program& prog, const Binding& b) {
  if (const auto* e = std::get_if<Elem>(&b)) return print_elem(prog, *e);
  if (const auto* lv = std::get_if<LabeledValue>(&b))
    return print_labeled(prog, *lv);
  const auto& map = std::get<MapValue>(b);
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (std::size_t k = 0; k < map.entries.size(); ++k) {
    if (!map.entries[k]) continue;
    if (!first) out << ", ";
    first = false;
    // Key names come from the entry's position; the value type carries
    // the labeled triple.
    out << "#" << k << ": " << print_labeled(prog, *map.entries[k]);
  }
  out << "}";
  return out.str();
}

std::string print_memory(const Memory& m) {
  const Program& prog = *m.uni->prog;
  std::vector<std::pair<std::string, std::string>> items;
  for (std::size_t s = 0; s < m.slots.size(); ++s) {
    const VarDecl& d = m.uni->decl(s);
    std::string value;
    if (const auto* map = std::get_if<MapValue>(&m.slots[s])) {
      std::ostringstream out;
      out << "{";
      bool first = true;
      const auto& keys = prog.types.at(d.type.key_type_id).elements;
      for (std::size_t k = 0; k < map->entries.size(); ++k) {
        if (!map->entries[k]) continue;
        if (!first) out << ", ";
        first = false;
        out << keys[k] << ": " << print_labeled(prog, *map->entries[k]);
      }
      out << "}";
      value = out.str();
    } else {
      value = print_binding(prog, m.slots[s]);
    }
    items.emplace_back(d.name, value);
  }
  std::sort(items.begin(), items.end());
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, value] : items) {
    if (!first) out << ", ";
    first = false;
    out << name << "=" << value;
  }
  return out.str();
}

std::string print_value(const Program& prog, const Value& v) {
  if (std::holds_alternative<Unit>(v)) return "()";
  if (const auto* e = std::get_if<Elem>(&v)) return print_elem(prog, *e);
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  if (const auto* lv = std::get_if<LabeledValue>(&v))
    return print_labeled(prog, *lv);
  if (const auto* d = std::get_if<DistValue>(&v))
    return dist_display(prog, d->d);
  return conf_name(std::get<Conf>(v));
}

std::string print_memory_dist(const Dist<Memory>& d) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (const auto& [m, w] : d.weights()) {
    if (!first) out << ", ";
    first = false;
    out << "[" << print_memory(m) << "]: " << w.to_string();
  }
  out << "}";
  return out.str();
}

std::string print_result_dist(const Program& prog,
                              const Dist<ProcResult>& d) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (const auto& [r, w] : d.weights()) {
    if (!first) out << ", ";
    first = false;
    out << "(" << print_memory(r.mem) << " | " << print_value(prog, r.ret)
        << "): " << w.to_string();
  }
  out << "}";
  return out.str();
}

std::string print_dist_expr(const Program& prog, const DistExpr& d) {
  switch (d.kind) {
    case DistExpr::Kind::Uniform:
      return "uniform " + prog.types.at(d.type_id).name;
    case DistExpr::Kind::Point:
      return "point(" + print_expr(prog, *d.point) + ")";
    case DistExpr::Kind::Named:
      return d.name;
  }
  return "?";
}

namespace {

// Precedence levels: 0 conjunction, 1 equality, 2 prefix, 3 primary.
std::string print_expr_prec(const Program& prog, const Expr& e, int min) {
  auto wrap = [&](int level, const std::string& s) {
    return level < min ? "(" + s + ")" : s;
  };
  switch (e.kind) {
    case Expr::Kind::Const:
      return print_elem(prog, e.elem);
    case Expr::Kind::Var:
      return e.name;
    case Expr::Kind::MapLookup:
      return e.name + "[" + print_expr_prec(prog, *e.a, 0) + "]";
    case Expr::Kind::Eq:
      return wrap(1, print_expr_prec(prog, *e.a, 2) + " = " +
                         print_expr_prec(prog, *e.b, 2));
    case Expr::Kind::Not:
      // Parenthesized !(a = b) prints as a != b.
      if (e.a->kind == Expr::Kind::Eq)
        return wrap(1, print_expr_prec(prog, *e.a->a, 2) + " != " +
                           print_expr_prec(prog, *e.a->b, 2));
      return wrap(2, "!" + print_expr_prec(prog, *e.a, 3));
    case Expr::Kind::And:
      return wrap(0, print_expr_prec(prog, *e.a, 1) + " /\\ " +
                         print_expr_prec(prog, *e.b, 1));
    case Expr::Kind::InDom:
      return wrap(2, "dom " + e.name + " " + print_expr_prec(prog, *e.a, 3));
    case Expr::Kind::Proj:
      return "pi" + std::to_string(e.proj_index) + "(" +
             print_expr_prec(prog, *e.a, 0) + ")";
    case Expr::Kind::Triple:
      return "(" + print_expr_prec(prog, *e.a, 0) + ", " +
             print_expr_prec(prog, *e.b, 0) + ", " +
             print_expr_prec(prog, *e.c, 0) + ")";
    case Expr::Kind::DistAtom:
      if (!e.dist) return "bot";
      if (e.dist->kind == DistExpr::Kind::Named) return e.dist->name;
      if (e.dist->kind == DistExpr::Kind::Point)
        return print_dist_expr(prog, *e.dist);
      return wrap(2, print_dist_expr(prog, *e.dist));
    case Expr::Kind::ConfAtom:
      return conf_name(e.conf);
    case Expr::Kind::EmptyMap:
      return "empty";
  }
  return "?";
}

}  // namespace

std::string print_expr(const Program& prog, const Expr& e) {
  return print_expr_prec(prog, e, 0);
}

namespace {

std::string print_lvalue(const Program& prog, const LValue& t) {
  if (!t.key) return t.name;
  return t.name + "[" + print_expr(prog, *t.key) + "]";
}

}  // namespace

std::string print_command(const Program& prog, const Command& c, int indent) {
  std::string pad = indent_of(indent);
  switch (c.kind) {
    case Command::Kind::Skip:
      return pad + "skip;";
    case Command::Kind::Assign:
      return pad + print_lvalue(prog, c.target) + " <- " +
             print_expr(prog, *c.expr) + ";";
    case Command::Kind::Sample:
      return pad + print_lvalue(prog, c.target) + " <$ " +
             print_dist_expr(prog, *c.dist) + ";";
    case Command::Kind::If: {
      std::string s = pad + "if " + print_expr(prog, *c.cond) + " {\n" +
                      print_commands(prog, c.then_body, indent + 1) + pad +
                      "}";
      if (!c.else_body.empty())
        s += " else {\n" + print_commands(prog, c.else_body, indent + 1) +
             pad + "}";
      return s;
    }
    case Command::Kind::While:
      return pad + "while " + print_expr(prog, *c.cond) + " {\n" +
             print_commands(prog, c.body, indent + 1) + pad + "}";
    case Command::Kind::SecRead:
      return pad + print_lvalue(prog, c.target) + " <~ " +
             print_expr(prog, *c.expr) + ";";
    case Command::Kind::SecSample:
      return pad + print_lvalue(prog, c.target) + " <~$ " +
             print_dist_expr(prog, *c.dist) + ";";
    case Command::Kind::Call: {
      std::string call = c.callee + "(";
      for (std::size_t i = 0; i < c.args.size(); ++i) {
        if (i) call += ", ";
        call += print_expr(prog, *c.args[i]);
      }
      call += ")";
      if (c.call_result)
        return pad + print_lvalue(prog, *c.call_result) + " <@ " + call + ";";
      return pad + "call " + call + ";";
    }
  }
  return pad + "?;";
}

std::string print_commands(const Program& prog,
                           std::span<const CommandPtr> cmds, int indent) {
  std::string out;
  for (const auto& c : cmds) out += print_command(prog, *c, indent) + "\n";
  return out;
}

namespace {

// Assertion precedence: 0 implies, 1 or, 2 and, 3 prefix/atom.
std::string sided_expr(const Program& prog, const Expr& e, Side s) {
  std::string body = print_expr_prec(prog, e, 3);
  bool primary = e.kind == Expr::Kind::Var ||
                 e.kind == Expr::Kind::MapLookup ||
                 e.kind == Expr::Kind::Proj || e.kind == Expr::Kind::Const;
  if (!primary) body = "(" + print_expr(prog, e) + ")";
  return body + "{" + (s == Side::Left ? "1" : "2") + "}";
}

std::string print_assertion_prec(const Program& prog, const Assertion& a,
                                 int min) {
  auto wrap = [&](int level, const std::string& s) {
    return level < min ? "(" + s + ")" : s;
  };
  switch (a.kind) {
    case Assertion::Kind::True:
      return "true";
    case Assertion::Kind::False:
      return "false";
    case Assertion::Kind::VarEq: {
      std::string s = "={";
      for (std::size_t i = 0; i < a.names.size(); ++i) {
        if (i) s += ", ";
        s += a.names[i];
      }
      return s + "}";
    }
    case Assertion::Kind::BoolAt:
      return sided_expr(prog, *a.e1, a.side);
    case Assertion::Kind::ExprRel:
      return sided_expr(prog, *a.e1, a.s1) + (a.neq ? " != " : " = ") +
             sided_expr(prog, *a.e2, a.s2);
    case Assertion::Kind::Leaked:
      return "leaked(" + print_expr(prog, *a.e1) + "){" +
             (a.side == Side::Left ? "1" : "2") + "}";
    case Assertion::Kind::Sampled:
      return "sampled(" + print_expr(prog, *a.e1) + ", " +
             print_dist_expr(prog, *a.dist) + "){" +
             (a.side == Side::Left ? "1" : "2") + "}";
    case Assertion::Kind::LabelEqCross:
      return sided_expr(prog, *a.e1, Side::Left) + " ~= " +
             sided_expr(prog, *a.e2, Side::Right);
    case Assertion::Kind::SecInv:
      return "inv(" + a.map1 + ", " + a.map2 + ", " +
             print_dist_expr(prog, *a.dist) + ")";
    case Assertion::Kind::Not:
      return wrap(3, "!" + print_assertion_prec(prog, *a.a, 4));
    case Assertion::Kind::And:
      return wrap(2, print_assertion_prec(prog, *a.a, 3) + " /\\ " +
                         print_assertion_prec(prog, *a.b, 2));
    case Assertion::Kind::Or:
      return wrap(1, print_assertion_prec(prog, *a.a, 2) + " \\/ " +
                         print_assertion_prec(prog, *a.b, 1));
    case Assertion::Kind::Implies:
      return wrap(0, print_assertion_prec(prog, *a.a, 1) + " ==> " +
                         print_assertion_prec(prog, *a.b, 0));
    case Assertion::Kind::ForallK:
      return wrap(0, "forall " + a.qvar + " : " +
                         prog.types.at(a.qtype).name + ", " +
                         print_assertion_prec(prog, *a.a, 0));
    case Assertion::Kind::AfterAssign: {
      auto one = [&](const std::optional<LValue>& t, const ExprPtr& e) {
        if (!t) return std::string("-");
        return print_lvalue(prog, *t) + " <- " + print_expr(prog, *e);
      };
      return "after(" + one(a.l_tgt, a.l_expr) + " | " +
             one(a.r_tgt, a.r_expr) + ")(" +
             print_assertion_prec(prog, *a.a, 0) + ")";
    }
    case Assertion::Kind::ForallSample: {
      auto one = [&](const std::optional<LValue>& t,
                     const std::optional<DistExpr>& d) {
        if (!t) return std::string("-");
        return print_lvalue(prog, *t) + " <$ " + print_dist_expr(prog, *d);
      };
      return "rndpost(" + one(a.l_tgt, a.l_dist) + " | " +
             one(a.r_tgt, a.r_dist) + ")(" +
             print_assertion_prec(prog, *a.a, 0) + ")";
    }
  }
  return "?";
}

std::string print_var_decl(const Program& prog, const VarDecl& d) {
  switch (d.type.kind) {
    case VarType::Kind::Plain:
      return d.name + " : " + prog.types.at(d.type.type_id).name;
    case VarType::Kind::Labeled:
      return d.name + " : labeled " + prog.types.at(d.type.type_id).name;
    case VarType::Kind::Map:
      return d.name + " : map " + prog.types.at(d.type.key_type_id).name +
             " -> labeled " + prog.types.at(d.type.type_id).name;
  }
  return "?";
}

std::string print_goal_side(const Program& prog, const GoalSide& s) {
  if (s.is_call) {
    std::string out = s.module + "." + s.proc + "(";
    for (std::size_t i = 0; i < s.args.size(); ++i) {
      if (i) out += ", ";
      out += print_expr(prog, *s.args[i]);
    }
    return out + ")";
  }
  if (s.raw.empty()) return "{ }";
  std::string out = "{\n";
  out += print_commands(prog, s.raw, 1);
  return out + "}";
}

}  // namespace

std::string print_assertion(const Program& prog, const Assertion& a) {
  return print_assertion_prec(prog, a, 0);
}

std::string print_program(const Program& prog) {
  std::ostringstream out;
  for (const auto& t : prog.types) {
    out << "type " << t.name << " = { ";
    for (std::size_t i = 0; i < t.elements.size(); ++i) {
      if (i) out << ", ";
      out << t.elements[i];
    }
    out << " }\n";
  }
  for (const auto& d : prog.dists) {
    out << "dist " << d.name << " = ";
    // Uniform tables print back as uniform for readability.
    bool is_uniform = true;
    int n = static_cast<int>(d.weights.size());
    for (const auto& w : d.weights)
      if (!(w == Rational(BigInt(1), BigInt(n)))) is_uniform = false;
    if (is_uniform) {
      out << "uniform " << prog.types.at(d.type_id).name << "\n";
    } else {
      out << "{ ";
      for (int i = 0; i < n; ++i) {
        if (i) out << ", ";
        out << prog.types.at(d.type_id).elements[i] << ": "
            << d.weights[i].to_fraction_string();
      }
      out << " }\n";
    }
  }
  for (const auto& m : prog.modules) {
    out << "\nmodule " << m.name << " {\n";
    for (const auto& g : m.globals)
      out << "  var " << print_var_decl(prog, g) << ";\n";
    for (const auto& p : m.procs) {
      out << "  proc " << p.name << "(";
      for (std::size_t i = 0; i < p.params.size(); ++i) {
        if (i) out << ", ";
        out << print_var_decl(prog, p.params[i]);
      }
      out << ")";
      if (p.ret && p.ret_type_id >= 0)
        out << " : " << prog.types.at(p.ret_type_id).name;
      out << " {\n";
      for (const auto& l : p.locals)
        out << "    var " << print_var_decl(prog, l) << ";\n";
      out << print_commands(prog, p.body, 2);
      if (p.ret) out << "    return " << print_expr(prog, *p.ret) << ";\n";
      out << "  }\n";
    }
    out << "}\n";
  }
  for (const auto& g : prog.goals) {
    out << "\ngoal " << g.name;
    if (!g.over_modules.empty()) {
      out << " over";
      for (const auto& m : g.over_modules) out << " " << m;
    }
    if (!g.extra_vars.empty()) {
      out << " vars (";
      for (std::size_t i = 0; i < g.extra_vars.size(); ++i) {
        if (i) out << ", ";
        out << print_var_decl(prog, g.extra_vars[i]);
      }
      out << ")";
    }
    out << " :\n  " << print_goal_side(prog, g.left) << "\n  ~\n  "
        << print_goal_side(prog, g.right) << "\n  : "
        << print_assertion(prog, *g.pre) << "\n  => "
        << print_assertion(prog, *g.post) << "\n";
  }
  for (const auto& s : prog.scripts) {
    out << "\nproof " << s.goal_name << " {\n";
    for (const auto& t : s.steps) {
      out << "  " << t.name;
      if (t.side)
        out << (*t.side == Side::Left ? " left" : " right");
      if (t.name == "secrndasgn") {
        out << " " << t.idents.at(0) << " ("
            << print_expr(prog, *t.exprs.at(0)) << ") " << t.idents.at(1);
      } else {
        for (int i : t.ints) out << " " << i;
        for (const auto& id : t.idents) out << " " << id;
        for (const auto& e : t.exprs)
          out << " (" << print_expr(prog, *e) << ")";
      }
      if (t.assertion)
        out << " { " << print_assertion(prog, *t.assertion) << " }";
      out << "\n";
    }
    out << "}\n";
  }
  return out.str();
}

}  // namespace plw
