#include <doctest.h>

#include "helpers.hpp"
#include "plwhile/check.hpp"
#include "plwhile/lazy_tactics.hpp"
#include "plwhile/printer.hpp"
#include "plwhile/script.hpp"

using namespace plw;
using plw::test::load_corpus;

namespace {

const char* kCoinGoals = R"(
type Coin = { H, T }
dist dc = uniform Coin
module CoinM {
  var r : Coin;
  proc init() { r <- H; }
  proc flip(c : Coin) : Coin {
    var o : Coin;
    if c = H { o <- T; } else { o <- H; }
    return o;
  }
}

goal cf over CoinM CoinM :
  { r <$ dc; } ~ { r <$ dc; r <@ flip(r); }
  : true => ={r}

proof cf {
  auto
  done
}

goal cf_inline over CoinM CoinM :
  { r <$ dc; } ~ { r <$ dc; r <@ flip(r); }
  : true => ={r}

proof cf_inline {
  inline right
  auto
  done
}
)";

}  // namespace

TEST_CASE("assertion atoms evaluate as defined") {
  Program prog = load_corpus("if_example.plw");
  auto goal = build_goal(prog, *prog.find_goal("g_empty"));
  Memory m1(*goal.uni, true), m2(*goal.uni, false);

  CHECK(holds(*a_var_eq({"x"}), m1, m2));
  std::get<Elem>(m2.slots[goal.uni->slot_of("x", false)]) = Elem{0, 1};
  CHECK(!holds(*a_var_eq({"x"}), m1, m2));

  DistExpr dv;
  dv.kind = DistExpr::Kind::Named;
  dv.name = "dv";

  SUBCASE("invariant on empty maps is vacuous") {
    CHECK(sec_invariant_eval("t", "t", dv, m1, m2));
  }

  SUBCASE("a left entry missing on the right violates the invariant") {
    DistHandle h = goal.uni->intern(1, eval_dist_expr(dv, m1));
    std::get<MapValue>(m1.slots[goal.uni->slot_of("t", true)]).entries[0] =
        LabeledValue{Elem{1, 0}, h, Conf::Leaked};
    CHECK(!sec_invariant_eval("t", "t", dv, m1, m2));
  }

  SUBCASE("leaked entries must agree exactly") {
    DistHandle h = goal.uni->intern(1, eval_dist_expr(dv, m1));
    std::get<MapValue>(m1.slots[goal.uni->slot_of("t", true)]).entries[0] =
        LabeledValue{Elem{1, 1}, h, Conf::Leaked};
    std::get<MapValue>(m2.slots[goal.uni->slot_of("t", false)]).entries[0] =
        LabeledValue{Elem{1, 0}, h, Conf::Leaked};
    CHECK(!sec_invariant_eval("t", "t", dv, m1, m2));
  }
}

TEST_CASE("skip goals close by enumeration") {
  Program prog = load_corpus("if_example.plw");
  auto goal = build_goal(prog, *prog.find_goal("g_empty"));
  CHECK(discharge(goal, 16).proven());
  CHECK(tac_skip(goal, 16).empty());

  // an unprovable skip goal reports a counterexample
  RelGoal bad = goal;
  bad.pre = a_true();
  bad.post = a_var_eq({"x"});
  CHECK_THROWS_AS(tac_skip(bad, 16), TacticError);
  auto r = discharge(bad, 16);
  CHECK(!r.proven());
  REQUIRE(r.cex.has_value());
}

TEST_CASE("the coin-flip judgment discharges") {
  Program prog = parse_program(kCoinGoals);
  REQUIRE(well_formed(prog).empty());
  CHECK(check_script(prog, "cf", 16).proven());
  CHECK(check_script(prog, "cf_inline", 16).proven());
}

TEST_CASE("the stripped lazy-sampling goal is refuted with a witness") {
  Program prog = load_corpus("direct_sampling.plw");
  auto goal = build_goal(prog, *prog.find_goal("stripped"));
  auto r = discharge(goal, 16);
  REQUIRE(!r.proven());
  REQUIRE(r.cex.has_value());
  // canonically first failing pair: every variable at its first element
  CHECK(print_memory(r.cex->m1) == "r=y0, v=y0, x=x0");
  CHECK(print_memory(r.cex->m2) == "r=y0, v=y0, x=x0");
  CHECK(r.cex->detail.find("coupling") != std::string::npos);
}

TEST_CASE("assign substitutes into the postcondition") {
  // r <- v ~ r <- v : ={v} => ={r}  becomes a skip goal whose post is
  // semantically ={v}.
  Program prog = parse_program(R"(
type Y = { y0, y1 }
module W { var v : Y; var r : Y; }
goal asg over W W : { r <- v; } ~ { r <- v; } : ={v} => ={r}
proof asg { assign skip done }
)");
  REQUIRE(well_formed(prog).empty());
  CHECK(check_script(prog, "asg", 16).proven());

  auto goal = build_goal(prog, *prog.find_goal("asg"));
  auto next = tac_assign(goal);
  REQUIRE(next.size() == 1);
  CHECK(next[0].left.empty());
  // the transformed post is extensionally ={v}
  MemoryEnumerator e1(*next[0].uni, true), e2(*next[0].uni, false);
  Memory m1, m2;
  e1.reset(m1);
  do {
    e2.reset(m2);
    do {
      CHECK(holds(*next[0].post, m1, m2) == holds(*a_var_eq({"v"}), m1, m2));
    } while (e2.next(m2));
  } while (e1.next(m1));
}

TEST_CASE("rnd closes matched samplings and rejects mismatches") {
  Program prog = parse_program(R"(
type Y = { y0, y1 }
type Z = { z0, z1, z2 }
dist dy = uniform Y
dist dz = uniform Z
module W { var r : Y; var s : Z; }
goal rg over W W : { r <$ dy; } ~ { r <$ dy; } : true => ={r}
proof rg { rnd skip done }
goal bad over W W : { r <$ dy; } ~ { s <$ dz; } : true => true
)");
  CHECK(check_script(prog, "rg", 16).proven());
  auto goal = build_goal(prog, *prog.find_goal("bad"));
  CHECK_THROWS_AS(tac_rnd(goal), TacticError);
}

TEST_CASE("swap requires disjoint dependencies") {
  Program prog = parse_program(R"(
type Y = { y0, y1 }
module W { var a : Y; var b : Y; var c : Y; }
goal sw over W W : { a <- b; c <- b; } ~ { skip; } : true => true
goal swbad over W W : { a <- b; c <- a; } ~ { skip; } : true => true
)");
  auto ok = build_goal(prog, *prog.find_goal("sw"));
  auto swapped = tac_swap(ok, Side::Left, 1, 2);
  REQUIRE(swapped.size() == 1);
  CHECK(swapped[0].left[0]->target.name == "c");

  auto bad = build_goal(prog, *prog.find_goal("swbad"));
  CHECK_THROWS_AS(tac_swap(bad, Side::Left, 1, 2), TacticError);
  CHECK_THROWS_AS(tac_swap(ok, Side::Left, 2, 3), TacticError);
}

TEST_CASE("seq splits at an intermediate assertion") {
  Program prog = load_corpus("direct_sampling.plw");
  auto goal = build_goal(prog, *prog.find_goal("align_swap"));
  // align the sampling first, as the proof script does
  goal = tac_swap(goal, Side::Left, 1, 2)[0];
  auto mid = a_and(a_var_eq({"x"}), a_var_eq({"z"}));
  auto parts = tac_seq(goal, 1, mid);
  REQUIRE(parts.size() == 2);
  CHECK(discharge(parts[0], 16).proven());
  CHECK(discharge(parts[1], 16).proven());
}

TEST_CASE("case resolves a leading conditional") {
  Program prog = load_corpus("if_example.plw");
  auto goal = build_goal(prog, *prog.find_goal("g_g"));
  ExprPtr e = parse_expr_text(prog, "dom t x");
  auto split = tac_case(goal, Side::Right, e);
  REQUIRE(split.size() == 2);
  // positive branch: the guard !(dom t x) is false, so g's body is gone
  CHECK(split[0].right.empty());
  // negative branch: the sampling remains
  REQUIRE(split[1].right.size() == 1);
  CHECK(split[1].right[0]->kind == Command::Kind::SecSample);
}

TEST_CASE("discharge is monotone in fuel for loop-free goals") {
  Program prog = load_corpus("direct_sampling.plw");
  auto goal = build_goal(prog, *prog.find_goal("direct"));
  CHECK(discharge(goal, 8).proven());
  CHECK(discharge(goal, 64).proven());
}

TEST_CASE("lost mass is reported distinctly") {
  // One side diverges: the output masses cannot match and the report
  // says so instead of blaming the postcondition.
  Program prog = parse_program(R"(
type B = { tt }
module W { var z : B; }
goal spin over W W :
  { while z = tt { skip; } } ~ { skip; }
  : true => true
)");
  auto goal = build_goal(prog, *prog.find_goal("spin"));
  auto r = discharge(goal, 10);
  REQUIRE(!r.proven());
  REQUIRE(r.cex.has_value());
  CHECK(r.cex->detail.find("masses differ") != std::string::npos);
  CHECK(r.cex->detail.find("fuel") != std::string::npos);
}

TEST_CASE("tactic soundness along the shipped desugaring chain") {
  // Every intermediate goal list produced by the alignment script stays
  // provable by direct semantic discharge.
  Program prog = load_corpus("direct_sampling.plw");
  auto g0 = build_goal(prog, *prog.find_goal("align_swap"));
  CHECK(discharge(g0, 16).proven());

  auto g1 = tac_swap(g0, Side::Left, 1, 2)[0];
  CHECK(discharge(g1, 16).proven());
  auto g2 = tactic_declassify(g1, Side::Left);
  CHECK(discharge(g2, 16).proven());
  auto g3 = tactic_declassify(g2, Side::Right);
  CHECK(discharge(g3, 16).proven());
  auto g4 = tactic_secrnd(g3, Side::Left);
  CHECK(discharge(g4, 16).proven());
  auto g5 = tactic_secrnd(g4, Side::Right);
  CHECK(discharge(g5, 16).proven());
  auto g6 = tac_assign(g5)[0];
  auto g7 = tac_assign(g6)[0];
  auto g8 = tac_assign(g7)[0];
  CHECK(discharge(g8, 16).proven());
  auto g9 = tac_rnd(g8)[0];
  CHECK(discharge(g9, 16).proven());
  auto g10 = tac_assign(g9)[0];
  CHECK(discharge(g10, 16).proven());
  CHECK(tac_skip(g10, 16).empty());
}
