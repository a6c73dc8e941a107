#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ambicon/ambiguous.hpp"
#include "ambicon/gap.hpp"
#include "ambicon/lp.hpp"
#include "fixtures.hpp"

using namespace ambicon;
using namespace ambicon::gap;
using namespace ambicon::testing;

TEST_CASE("ambiguity_gap on the 3x3 instance") {
  Fixture f = gen_fixture("example1");
  GapReport g = ambiguity_gap(f.instance);
  CHECK(g.status == "ok");
  CHECK(g.best_single.principal_utility == f.reference["single_utility"]);
  CHECK(g.best_ambiguous.principal_utility == f.reference["ambiguous_utility"]);
  CHECK(g.rho == f.reference["rho"]);
  CHECK(g.max_welfare == 3);
  CHECK(g.rho_hat == Q(3, 2));
  CHECK(g.first_best_action == 2);
  CHECK(g.rho >= 1);
  CHECK(g.rho <= g.rho_hat);
}

TEST_CASE("ambiguity_gap degenerate cases") {
  // Single zero-cost action: rho = 1.
  Instance solo(vec({0}), vec({5}), mat({{1}}));
  GapReport g = ambiguity_gap(solo);
  CHECK(g.rho == 1);
  CHECK(g.rho_hat == 1);
  // Best single utility 0 -> infinite-gap status.
  Instance dead(vec({0, 2}), vec({0, 1}), mat({{1, 0}, {0, 1}}));
  CHECK(ambiguity_gap(dead).status == "infinite-gap");
  Instance dup(vec({0, 1}), vec({0, 1}), mat({{1, 0}, {1, 0}}));
  CHECK_THROWS_AS(ambiguity_gap(dup), std::invalid_argument);
}

TEST_CASE("gen_diagonal") {
  DiagonalParams p;
  p.m = 2;
  p.rewards = vec({0, 1});
  p.W = Q(1, 2);
  p.c = 0;
  DiagonalSet set = gen_diagonal(p);
  CHECK(eq(set.probs.row(0).transpose(), vec({1, 0})));
  CHECK(eq(set.probs.row(1).transpose(), vec({Q(1, 2), Q(1, 2)})));
  CHECK(set.costs(0) == 0);

  // Boundary: W + c equal to the reward puts full mass on the outcome.
  p.W = 1;
  CHECK(gen_diagonal(p).probs(1, 1) == 1);
  // Pseudo rows are refused.
  p.W = 2;
  CHECK_THROWS_AS(gen_diagonal(p), std::invalid_argument);
  p.W = Q(1, 2);
  p.rewards = vec({1, 2});
  CHECK_THROWS_AS(gen_diagonal(p), std::invalid_argument);
}

TEST_CASE("two-effort lower-bound construction") {
  CHECK_THROWS_AS(gen_two_effort_gap(Q(1, 2), Q(1, 2)), std::invalid_argument);

  Instance te = gen_two_effort_gap(Q(1, 10), Q(1, 2));
  REQUIRE(te.n() == 4);
  GapReport g = ambiguity_gap(te);
  CHECK(g.best_single.principal_utility == Q(1, 10));
  CHECK(g.best_ambiguous.principal_utility == Q(19, 100));
  CHECK(g.rho == Q(19, 10));
  CHECK(g.rho_hat == Q(19, 10));

  // The minimum-payment contract for the high action: t = (0, d(1-e), ...)
  // with total payment 1 - e.
  int hi = te.action_from_original(3);
  lp::MinPaymentResult mp = lp::min_payment(te, hi);
  REQUIRE(mp.feasible);
  CHECK(mp.payment == Q(9, 10));
  CHECK(mp.contract(0) == 0);
  CHECK(mp.contract(1) == Q(9, 20));

  // The closed form 2 - eps holds at other parameters too.
  GapReport g2 = ambiguity_gap(gen_two_effort_gap(Q(1, 100), Q(1, 50)));
  CHECK(g2.rho == Q(199, 100));
}

TEST_CASE("free LP equals the ray-restricted LP on diagonal-plus-high instances") {
  // The optimal contract incentivizing the high action can be normalized to
  // t_1 = 0 with the remaining payments proportional to the rewards.
  Instance te = gen_two_effort_gap(Q(1, 10), Q(1, 2));
  int hi = te.action_from_original(3);
  lp::MinPaymentResult free_lp = lp::min_payment(te, hi);

  lp::LpProblem p;
  p.objective = RatVec(te.m());
  for (int j = 0; j < te.m(); ++j) p.objective(j) = te.prob(hi, j);
  for (int i = 0; i < te.n(); ++i) {
    if (i == hi) continue;
    lp::LpConstraint ic;
    ic.coeffs = RatVec(te.m());
    for (int j = 0; j < te.m(); ++j) ic.coeffs(j) = te.prob(hi, j) - te.prob(i, j);
    ic.rel = lp::Relation::GreaterEq;
    ic.rhs = te.cost(hi) - te.cost(i);
    p.constraints.push_back(ic);
  }
  lp::LpConstraint ir;
  ir.coeffs = p.objective;
  ir.rel = lp::Relation::GreaterEq;
  ir.rhs = te.cost(hi);
  p.constraints.push_back(ir);
  lp::LpConstraint zero_first{vec({1, 0, 0}), lp::Relation::Equal, 0};
  p.constraints.push_back(zero_first);
  lp::LpConstraint ray{vec({0, te.reward(2), -te.reward(1)}), lp::Relation::Equal, 0};
  p.constraints.push_back(ray);

  lp::LpSolution restricted = lp::simplex_solve(p);
  REQUIRE(restricted.status == lp::LpStatus::Optimal);
  CHECK(restricted.value == free_lp.payment);
}

TEST_CASE("sop_tight fixture") {
  Fixture f = gen_sop_tight(5);
  const Instance& inst = f.instance;
  REQUIRE(inst.n() == 6);
  int target = inst.action_from_original(5);
  lp::MinPaymentResult mp = lp::min_payment(inst, target);
  REQUIRE(mp.feasible);
  CHECK(mp.payment == f.reference["single_payment"]);
  CHECK(mp.payment == Q(3, 2));

  SolveResult r = ambiguous::solve_general_for_action(inst, target);
  REQUIRE(r.ok());
  CHECK(r.payment == f.reference["ambiguous_payment"]);
  CHECK(r.tau.size() == 5);
  for (const auto& t : r.tau.contracts) CHECK(is_sop(t));
  CHECK_THROWS_AS(gen_sop_tight(3), std::invalid_argument);
}

TEST_CASE("monotone_omega fixture") {
  Fixture f = gen_monotone_omega(5, Q(1, 10), Q(1, 100), Q(1, 100));
  const Instance& inst = f.instance;
  REQUIRE(inst.n() == 5);
  REQUIRE(inst.m() == 4);
  CHECK(inst.cost(3) == Q(9963, 10));
  CHECK(inst.reward(1) == 1000);

  SolveResult amb = ambiguous::solve_monotone(inst);
  REQUIRE(amb.ok());
  CHECK(amb.principal_utility == f.reference["monotone_ambiguous_utility"]);
  CHECK(amb.principal_utility == Q(37001, 10000));
  CHECK(amb.action == 3);
  for (const auto& t : amb.tau.contracts) CHECK(is_monotone(t));

  SolveResult single = lp::optimal_single(inst, true);
  REQUIRE(single.ok());
  // The exact optimum exceeds the headline 1 + delta*gamma estimate by the
  // slack the costliest action leaves on the top payment; the certified
  // bound accounts for it.
  CHECK(single.principal_utility == Q(8947891, 8910000));
  CHECK(single.principal_utility <= f.reference["monotone_single_bound"]);
  CHECK(amb.principal_utility > 3 * single.principal_utility);
}

TEST_CASE("mlrp_b4 fixture") {
  Fixture f = gen_fixture("mlrp_b4");
  CHECK(is_mlrp(f.instance));
  GapReport g = ambiguity_gap(f.instance);
  CHECK(g.best_single.principal_utility == f.reference["single_utility"]);
  CHECK(g.best_ambiguous.principal_utility == f.reference["ambiguous_utility"]);
  CHECK(g.best_ambiguous.payment == f.reference["ambiguous_payment"]);
  CHECK(g.rho == Q(3095, 2987));
  CHECK_THROWS_AS(gen_fixture("no-such-fixture"), std::invalid_argument);
}

TEST_CASE("unbounded-gap construction at desk scale") {
  UnboundedReport r = gen_unbounded_gap(3, Q(1, 3));
  const Instance& inst = r.instance;
  CHECK(r.layers >= 10);
  CHECK(inst.n() == 1 + 2 * (r.layers + 1) + (r.amplified ? 2 : 0) + 1);
  for (const auto& item : r.certificate) CHECK(item.pass);
  CHECK(r.certificate.size() == 6);

  // The target is not single-contract implementable, but the two-payment
  // ambiguous contract incentivizes it at cost.
  CHECK(!lp::implementable(inst, r.target));
  CHECK(ambiguous::validates(inst, r.tau_star, r.target));
  CHECK(inst.cost(r.target) == 1 - Q(1, 3));
  CHECK(expected_reward(inst, r.target) == 1);
  CHECK(r.ambiguous_utility == Q(1, 3));

  // The certified water line is the exact best single utility.
  SolveResult single = lp::optimal_single(inst);
  CHECK(single.principal_utility == r.u_bar);
  CHECK(r.best_single == r.u_bar);
  CHECK(r.rho_lower == r.delta / r.u_bar);
  CHECK(r.rho_lower > 3);

  // The general ambiguous solver does at least as well as tau_star.
  CHECK(has_distinct_rows(inst));
  SolveResult amb = ambiguous::solve_general(inst);
  CHECK(amb.principal_utility >= r.delta);

  CHECK_THROWS_AS(gen_unbounded_gap(0, Q(1, 10)), std::invalid_argument);
  CHECK_THROWS_AS(gen_unbounded_gap(3, Q(99, 100)), std::invalid_argument);
  CHECK_THROWS_AS(gen_unbounded_gap(3, Q(1, 3), 2), std::invalid_argument);
}

TEST_CASE("two-effort probe stays under the welfare-ratio bound") {
  ProbeReport rep = two_effort_upper_bound_probe(20, 20250823);
  CHECK(rep.trials == 20);
  CHECK(rep.max_rho_hat <= 2);
  // The closed-form 1.99 instance is part of the sample.
  CHECK(rep.max_rho_hat >= Q(199, 100));
}
