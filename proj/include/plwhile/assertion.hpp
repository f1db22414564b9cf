#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plwhile/interp.hpp"

namespace plw {

/// Relational assertion over a pair of memories. Atoms are decidable
/// by evaluation on any concrete pair; ForallK quantifies over a
/// finite type. AfterAssign and ForallSample are produced by tactics
/// only: they carry the exact postcondition transformations of the
/// assign and rnd rules.
struct Assertion {
  enum class Kind {
    True,
    False,
    VarEq,         // same binding in both memories, for each name
    BoolAt,        // side-tagged boolean expression
    ExprRel,       // e1<s1> = e2<s2>  (or !=)
    Leaked,        // is_leaked of a labeled lvalue on one side
    Sampled,       // lvalue on one side sampled from a dist expr
    LabelEqCross,  // e1<1> label-equal e2<2>, confidentiality ignored
    SecInv,        // secure-assignment invariant between two maps
    Not,
    And,
    Or,
    Implies,
    ForallK,       // forall k : T, body
    AfterAssign,   // tactic-generated assign postcondition
    ForallSample,  // tactic-generated rnd postcondition
  };

  Kind kind = Kind::True;
  SourcePos pos;

  std::vector<std::string> names;  // VarEq
  Side side = Side::Left;          // BoolAt / Leaked / Sampled
  ExprPtr e1, e2;
  Side s1 = Side::Left, s2 = Side::Right;  // ExprRel sides
  bool neq = false;                        // ExprRel
  std::optional<DistExpr> dist;            // Sampled / SecInv
  std::string map1, map2;                  // SecInv
  AssertionPtr a, b;
  std::string qvar;  // ForallK
  int qtype = -1;    // ForallK

  // AfterAssign payload: optional assignment per side.
  std::optional<LValue> l_tgt, r_tgt;
  ExprPtr l_expr, r_expr;
  // ForallSample payload: sampled target and dist per side.
  std::optional<DistExpr> l_dist, r_dist;
};

AssertionPtr a_true();
AssertionPtr a_false();
AssertionPtr a_var_eq(std::vector<std::string> names, SourcePos pos = {});
AssertionPtr a_bool_at(Side s, ExprPtr e, SourcePos pos = {});
AssertionPtr a_expr_rel(ExprPtr e1, Side s1, ExprPtr e2, Side s2,
                        bool neq = false, SourcePos pos = {});
AssertionPtr a_leaked(Side s, ExprPtr lv, SourcePos pos = {});
AssertionPtr a_sampled(Side s, ExprPtr lv, DistExpr d, SourcePos pos = {});
AssertionPtr a_label_eq_cross(ExprPtr e1, ExprPtr e2, SourcePos pos = {});
AssertionPtr a_sec_inv(std::string map1, std::string map2, DistExpr d,
                       SourcePos pos = {});
AssertionPtr a_not(AssertionPtr a, SourcePos pos = {});
AssertionPtr a_and(AssertionPtr a, AssertionPtr b, SourcePos pos = {});
AssertionPtr a_or(AssertionPtr a, AssertionPtr b, SourcePos pos = {});
AssertionPtr a_implies(AssertionPtr a, AssertionPtr b, SourcePos pos = {});
AssertionPtr a_forall(std::string var, int type_id, AssertionPtr body,
                      SourcePos pos = {});
AssertionPtr a_after_assign(std::optional<LValue> l_tgt, ExprPtr l_expr,
                            std::optional<LValue> r_tgt, ExprPtr r_expr,
                            AssertionPtr body);
AssertionPtr a_forall_sample(std::optional<LValue> l_tgt,
                             std::optional<DistExpr> l_dist,
                             std::optional<LValue> r_tgt,
                             std::optional<DistExpr> r_dist,
                             AssertionPtr body);

/// Conjunction of a list (True when empty).
AssertionPtr a_conj(std::vector<AssertionPtr> parts);

/// Flattens nested conjunctions into a list of conjuncts.
std::vector<AssertionPtr> conjuncts(const AssertionPtr& a);

/// Truth of an assertion on a concrete memory pair. Connectives
/// short-circuit left to right, so guarded assertions can avoid
/// evaluation faults on unset map entries.
bool holds(const Assertion& a, const Memory& m1, const Memory& m2);
bool holds(const Assertion& a, const Memory& m1, const Memory& m2,
           const std::map<std::string, Elem>& bound);

/// Four-clause secure-assignment invariant between the map named
/// map1 (read in m1) and map2 (read in m2), with respect to d.
bool sec_invariant_eval(const std::string& map1, const std::string& map2,
                        const DistExpr& d, const Memory& m1,
                        const Memory& m2);

/// Index (into conjuncts(a)) of the first failing conjunct, or -1 if
/// all hold. Used to report which part of a postcondition broke.
int first_failing_conjunct(const AssertionPtr& a, const Memory& m1,
                           const Memory& m2);

}  // namespace plw
