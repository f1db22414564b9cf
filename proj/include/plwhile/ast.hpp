#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "plwhile/rational.hpp"

namespace plw {

struct SourcePos {
  int line = 0;
  int col = 0;
};

/// Finite enumerated type. Element order is fixed at declaration and
/// drives all deterministic enumeration and printing.
struct FiniteType {
  std::string name;
  std::vector<std::string> elements;
  SourcePos pos;
};

/// Element of a finite type, as (type index, element index) into the
/// program's type table. Ordering follows declaration order.
struct Elem {
  int type = -1;
  int index = -1;
  auto operator<=>(const Elem&) const = default;
};

enum class Conf { Secret = 0, Leaked = 1 };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Distribution expression: uniform over a declared type, a point mass
/// at an expression's value, or a reference to a named weight table.
struct DistExpr {
  enum class Kind { Uniform, Point, Named };
  Kind kind = Kind::Uniform;
  int type_id = -1;    // Uniform
  ExprPtr point;       // Point
  std::string name;    // Named
};

bool same_dist_expr(const DistExpr& a, const DistExpr& b);

struct Expr {
  enum class Kind {
    Const,      // element constant
    Var,        // variable reference
    MapLookup,  // name[key]
    Eq,         // a = b (on any comparable value kind)
    Not,        // !a
    And,        // a /\ b
    InDom,      // dom name key  (domain-of-definition test)
    Proj,       // pi1/pi2/pi3 (a)
    Triple,     // (a, b, c) labeled-value literal
    DistAtom,   // distribution expression as a value; nullopt dist = bot
    ConfAtom,   // S or L
    EmptyMap,   // empty map literal (assignable to a map variable)
  };
  Kind kind;
  SourcePos pos;
  Elem elem;                      // Const
  std::string name;               // Var, MapLookup, InDom
  ExprPtr a, b, c;                // operands / key
  int proj_index = 0;             // Proj: 1..3
  std::optional<DistExpr> dist;   // DistAtom: nullopt means bot
  Conf conf = Conf::Secret;       // ConfAtom
};

ExprPtr make_const(Elem e, SourcePos pos = {});
ExprPtr make_var(std::string name, SourcePos pos = {});
ExprPtr make_map_lookup(std::string name, ExprPtr key, SourcePos pos = {});
ExprPtr make_eq(ExprPtr a, ExprPtr b, SourcePos pos = {});
ExprPtr make_not(ExprPtr a, SourcePos pos = {});
ExprPtr make_and(ExprPtr a, ExprPtr b, SourcePos pos = {});
ExprPtr make_in_dom(std::string map, ExprPtr key, SourcePos pos = {});
ExprPtr make_proj(int i, ExprPtr a, SourcePos pos = {});
ExprPtr make_triple(ExprPtr v, ExprPtr d, ExprPtr c, SourcePos pos = {});
ExprPtr make_dist_atom(std::optional<DistExpr> d, SourcePos pos = {});
ExprPtr make_conf_atom(Conf c, SourcePos pos = {});
ExprPtr make_empty_map(SourcePos pos = {});

/// Structural equality (used by tactic shape checks).
bool same_expr(const Expr& a, const Expr& b);
inline bool same_expr(const ExprPtr& a, const ExprPtr& b) {
  return same_expr(*a, *b);
}

/// Assignment target: a variable or a map entry.
struct LValue {
  std::string name;
  ExprPtr key;  // null for plain variables
  SourcePos pos;
};

bool same_lvalue(const LValue& a, const LValue& b);

struct Command;
using CommandPtr = std::shared_ptr<const Command>;

struct Command {
  enum class Kind {
    Skip,
    Assign,     // target <- expr
    Sample,     // target <$ dist
    If,         // if cond { then } else { els }
    While,      // while cond { body }
    SecRead,    // target <~ source     (reading from labeled expression)
    SecSample,  // target <~$ dist      (writing into labeled variable)
    Call,       // [result <@] proc(args)
  };
  Kind kind = Kind::Skip;
  SourcePos pos;
  LValue target;
  ExprPtr expr;  // Assign rhs / SecRead source
  std::optional<DistExpr> dist;
  ExprPtr cond;
  std::vector<CommandPtr> then_body, else_body, body;
  std::string callee;
  std::vector<ExprPtr> args;
  std::optional<LValue> call_result;
};

CommandPtr make_skip(SourcePos pos = {});
CommandPtr make_assign(LValue target, ExprPtr expr, SourcePos pos = {});
CommandPtr make_sample(LValue target, DistExpr dist, SourcePos pos = {});
CommandPtr make_if(ExprPtr cond, std::vector<CommandPtr> then_body,
                   std::vector<CommandPtr> else_body, SourcePos pos = {});
CommandPtr make_while(ExprPtr cond, std::vector<CommandPtr> body,
                      SourcePos pos = {});
CommandPtr make_sec_read(LValue target, ExprPtr source, SourcePos pos = {});
CommandPtr make_sec_sample(LValue target, DistExpr dist, SourcePos pos = {});
CommandPtr make_call(std::optional<LValue> result, std::string callee,
                     std::vector<ExprPtr> args, SourcePos pos = {});

struct VarType {
  enum class Kind { Plain, Labeled, Map };
  Kind kind = Kind::Plain;
  int type_id = -1;      // value type (codomain type for maps)
  int key_type_id = -1;  // maps only
  bool operator==(const VarType&) const = default;
};

struct VarDecl {
  std::string name;
  VarType type;
  SourcePos pos;
};

struct Proc {
  std::string name;
  std::vector<VarDecl> params;  // plain-typed by construction
  std::vector<VarDecl> locals;
  std::vector<CommandPtr> body;
  ExprPtr ret;           // null: returns unit
  int ret_type_id = -1;  // declared return type; -1 for unit
  SourcePos pos;
};

struct Module {
  std::string name;
  std::vector<VarDecl> globals;
  std::vector<Proc> procs;
  SourcePos pos;

  const Proc* find_proc(const std::string& proc_name) const {
    for (const auto& p : procs)
      if (p.name == proc_name) return &p;
    return nullptr;
  }
};

/// Named distribution binding, materialized to one weight per element
/// of the carrier type (zero weights allowed here; pruned on eval).
struct DistDef {
  std::string name;
  int type_id = -1;
  std::vector<Rational> weights;
  SourcePos pos;
};

struct Assertion;
using AssertionPtr = std::shared_ptr<const Assertion>;

struct GoalSide {
  bool is_call = false;
  std::string module, proc;          // call form
  std::vector<ExprPtr> args;         // call form
  std::vector<CommandPtr> raw;       // raw block form
};

struct GoalDecl {
  std::string name;
  GoalSide left, right;
  AssertionPtr pre, post;
  std::vector<std::string> over_modules;  // context for raw sides
  std::vector<VarDecl> extra_vars;
  SourcePos pos;
};

enum class Side { Left = 1, Right = 2 };

struct TacticCall {
  std::string name;
  std::optional<Side> side;
  std::vector<int> ints;
  std::vector<ExprPtr> exprs;
  std::vector<std::string> idents;
  AssertionPtr assertion;
  SourcePos pos;
};

struct ProofScript {
  std::string goal_name;
  std::vector<TacticCall> steps;
  SourcePos pos;
};

/// A parsed source file: the shared type/distribution preamble plus
/// modules, goals, and proof scripts.
struct Program {
  std::vector<FiniteType> types;
  std::vector<DistDef> dists;
  std::vector<Module> modules;
  std::vector<GoalDecl> goals;
  std::vector<ProofScript> scripts;

  int type_id(const std::string& name) const {
    for (std::size_t i = 0; i < types.size(); ++i)
      if (types[i].name == name) return static_cast<int>(i);
    return -1;
  }
  /// Resolves an element constant by name; element names are unique
  /// program-wide (checked by well_formed).
  std::optional<Elem> find_elem(const std::string& name) const {
    for (std::size_t t = 0; t < types.size(); ++t)
      for (std::size_t i = 0; i < types[t].elements.size(); ++i)
        if (types[t].elements[i] == name)
          return Elem{static_cast<int>(t), static_cast<int>(i)};
    return std::nullopt;
  }
  const DistDef* find_dist(const std::string& name) const {
    for (const auto& d : dists)
      if (d.name == name) return &d;
    return nullptr;
  }
  const Module* find_module(const std::string& name) const {
    for (const auto& m : modules)
      if (m.name == name) return &m;
    return nullptr;
  }
  const GoalDecl* find_goal(const std::string& name) const {
    for (const auto& g : goals)
      if (g.name == name) return &g;
    return nullptr;
  }
  const ProofScript* find_script(const std::string& goal_name) const {
    for (const auto& s : scripts)
      if (s.goal_name == goal_name) return &s;
    return nullptr;
  }
  std::string elem_name(Elem e) const {
    return types.at(e.type).elements.at(e.index);
  }
};

}  // namespace plw
