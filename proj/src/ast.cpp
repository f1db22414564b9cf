#include "plwhile/ast.hpp"

namespace plw {

namespace {
std::shared_ptr<Expr> blank(Expr::Kind k, SourcePos pos) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->pos = pos;
  return e;
}
}  // namespace

ExprPtr make_const(Elem el, SourcePos pos) {
  auto e = blank(Expr::Kind::Const, pos);
  e->elem = el;
  return e;
}
ExprPtr make_var(std::string name, SourcePos pos) {
  auto e = blank(Expr::Kind::Var, pos);
  e->name = std::move(name);
  return e;
}
ExprPtr make_map_lookup(std::string name, ExprPtr key, SourcePos pos) {
  auto e = blank(Expr::Kind::MapLookup, pos);
  e->name = std::move(name);
  e->a = std::move(key);
  return e;
}
ExprPtr make_eq(ExprPtr a, ExprPtr b, SourcePos pos) {
  auto e = blank(Expr::Kind::Eq, pos);
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}
ExprPtr make_not(ExprPtr a, SourcePos pos) {
  auto e = blank(Expr::Kind::Not, pos);
  e->a = std::move(a);
  return e;
}
ExprPtr make_and(ExprPtr a, ExprPtr b, SourcePos pos) {
  auto e = blank(Expr::Kind::And, pos);
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}
ExprPtr make_in_dom(std::string map, ExprPtr key, SourcePos pos) {
  auto e = blank(Expr::Kind::InDom, pos);
  e->name = std::move(map);
  e->a = std::move(key);
  return e;
}
ExprPtr make_proj(int i, ExprPtr a, SourcePos pos) {
  auto e = blank(Expr::Kind::Proj, pos);
  e->proj_index = i;
  e->a = std::move(a);
  return e;
}
ExprPtr make_triple(ExprPtr v, ExprPtr d, ExprPtr c, SourcePos pos) {
  auto e = blank(Expr::Kind::Triple, pos);
  e->a = std::move(v);
  e->b = std::move(d);
  e->c = std::move(c);
  return e;
}
ExprPtr make_dist_atom(std::optional<DistExpr> d, SourcePos pos) {
  auto e = blank(Expr::Kind::DistAtom, pos);
  e->dist = std::move(d);
  return e;
}
ExprPtr make_conf_atom(Conf c, SourcePos pos) {
  auto e = blank(Expr::Kind::ConfAtom, pos);
  e->conf = c;
  return e;
}
ExprPtr make_empty_map(SourcePos pos) {
  return blank(Expr::Kind::EmptyMap, pos);
}

bool same_dist_expr(const DistExpr& a, const DistExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case DistExpr::Kind::Uniform:
      return a.type_id == b.type_id;
    case DistExpr::Kind::Point:
      return same_expr(*a.point, *b.point);
    case DistExpr::Kind::Named:
      return a.name == b.name;
  }
  return false;
}

bool same_expr(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Const:
      return a.elem == b.elem;
    case Expr::Kind::Var:
      return a.name == b.name;
    case Expr::Kind::MapLookup:
    case Expr::Kind::InDom:
      return a.name == b.name && same_expr(*a.a, *b.a);
    case Expr::Kind::Eq:
    case Expr::Kind::And:
      return same_expr(*a.a, *b.a) && same_expr(*a.b, *b.b);
    case Expr::Kind::Not:
      return same_expr(*a.a, *b.a);
    case Expr::Kind::Proj:
      return a.proj_index == b.proj_index && same_expr(*a.a, *b.a);
    case Expr::Kind::Triple:
      return same_expr(*a.a, *b.a) && same_expr(*a.b, *b.b) &&
             same_expr(*a.c, *b.c);
    case Expr::Kind::DistAtom:
      if (a.dist.has_value() != b.dist.has_value()) return false;
      return !a.dist || same_dist_expr(*a.dist, *b.dist);
    case Expr::Kind::ConfAtom:
      return a.conf == b.conf;
    case Expr::Kind::EmptyMap:
      return true;
  }
  return false;
}

bool same_lvalue(const LValue& a, const LValue& b) {
  if (a.name != b.name) return false;
  if ((a.key == nullptr) != (b.key == nullptr)) return false;
  return !a.key || same_expr(*a.key, *b.key);
}

namespace {
std::shared_ptr<Command> blank_cmd(Command::Kind k, SourcePos pos) {
  auto c = std::make_shared<Command>();
  c->kind = k;
  c->pos = pos;
  return c;
}
}  // namespace

CommandPtr make_skip(SourcePos pos) {
  return blank_cmd(Command::Kind::Skip, pos);
}
CommandPtr make_assign(LValue target, ExprPtr expr, SourcePos pos) {
  auto c = blank_cmd(Command::Kind::Assign, pos);
  c->target = std::move(target);
  c->expr = std::move(expr);
  return c;
}
CommandPtr make_sample(LValue target, DistExpr dist, SourcePos pos) {
  auto c = blank_cmd(Command::Kind::Sample, pos);
  c->target = std::move(target);
  c->dist = std::move(dist);
  return c;
}
CommandPtr make_if(ExprPtr cond, std::vector<CommandPtr> then_body,
                   std::vector<CommandPtr> else_body, SourcePos pos) {
  auto c = blank_cmd(Command::Kind::If, pos);
  c->cond = std::move(cond);
  c->then_body = std::move(then_body);
  c->else_body = std::move(else_body);
  return c;
}
CommandPtr make_while(ExprPtr cond, std::vector<CommandPtr> body,
                      SourcePos pos) {
  auto c = blank_cmd(Command::Kind::While, pos);
  c->cond = std::move(cond);
  c->body = std::move(body);
  return c;
}
CommandPtr make_sec_read(LValue target, ExprPtr source, SourcePos pos) {
  auto c = blank_cmd(Command::Kind::SecRead, pos);
  c->target = std::move(target);
  c->expr = std::move(source);
  return c;
}
CommandPtr make_sec_sample(LValue target, DistExpr dist, SourcePos pos) {
  auto c = blank_cmd(Command::Kind::SecSample, pos);
  c->target = std::move(target);
  c->dist = std::move(dist);
  return c;
}
CommandPtr make_call(std::optional<LValue> result, std::string callee,
                     std::vector<ExprPtr> args, SourcePos pos) {
  auto c = blank_cmd(Command::Kind::Call, pos);
  c->call_result = std::move(result);
  c->callee = std::move(callee);
  c->args = std::move(args);
  return c;
}

}  // namespace plw
