#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lp_oracle.hpp"
#include "random_instances.hpp"

using namespace ambicon;
using namespace ambicon::lp;
using namespace ambicon::testing;

namespace {

LpConstraint con(std::initializer_list<Rational> coeffs, Relation rel, Rational rhs) {
  return LpConstraint{vec(coeffs), rel, rhs};
}

}  // namespace

TEST_CASE("simplex basics") {
  LpProblem p;
  p.objective = vec({1});
  p.constraints = {con({1}, Relation::GreaterEq, 3)};
  LpSolution s = simplex_solve(p);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.value == 3);
  CHECK(s.assignment(0) == 3);

  LpProblem inf;
  inf.objective = vec({0});
  inf.constraints = {con({1}, Relation::GreaterEq, 1), con({1}, Relation::LessEq, 0)};
  CHECK(simplex_solve(inf).status == LpStatus::Infeasible);

  LpProblem unb;
  unb.objective = vec({-1});
  unb.constraints = {con({1}, Relation::GreaterEq, 0)};
  CHECK(simplex_solve(unb).status == LpStatus::Unbounded);

  LpProblem eq;
  eq.objective = vec({2, 3});
  eq.constraints = {con({1, 1}, Relation::Equal, 4), con({1, 0}, Relation::LessEq, 1)};
  LpSolution se = simplex_solve(eq);
  REQUIRE(se.status == LpStatus::Optimal);
  CHECK(se.value == 11);  // x = (1, 3)
}

TEST_CASE("simplex solves the minimum-payment LP of the 3x3 instance") {
  Instance e1 = example1();
  MinPaymentResult r = min_payment(e1, 2);
  REQUIRE(r.feasible);
  CHECK(r.payment == 2);
  CHECK(expected_payment(e1, 2, r.contract) == 2);
  // IC and IR hold at the optimum.
  for (int ip = 0; ip < 3; ++ip)
    CHECK(agent_utility(e1, 2, r.contract) >= agent_utility(e1, ip, r.contract));
  CHECK(agent_utility(e1, 2, r.contract) >= 0);
}

TEST_CASE("min_payment on the 4x6 instance") {
  Instance b4 = mlrp4x6();
  MinPaymentResult r = min_payment(b4, 3);
  REQUIRE(r.feasible);
  CHECK(r.payment == Q(11, 5));  // at cost
  for (int i = 0; i < b4.n(); ++i) {
    MinPaymentResult ri = min_payment(b4, i);
    REQUIRE(ri.feasible);
    CHECK(ri.payment >= b4.cost(i));  // IR floor
    MinPaymentResult rm = min_payment(b4, i, true);
    if (rm.feasible) CHECK(rm.payment >= ri.payment);
  }
  // Minimum-cost actions are implementable at cost exactly.
  CHECK(min_payment(b4, 0).payment == b4.cost(0));
  Instance e1 = example1();
  CHECK(min_payment(e1, 0).payment == 0);
}

TEST_CASE("implementable") {
  Instance e1 = example1();
  for (int i = 0; i < e1.n(); ++i) CHECK(implementable(e1, i));
  Instance single(vec({0}), vec({2}), mat({{1}}));
  CHECK(implementable(single, 0));
  // An action replicated more cheaply by a convex combination is not
  // implementable: p3 = (p1 + p2)/2 with c3 > 0, c1 = c2 = 0.
  Instance bad(vec({0, 0, 1}), vec({0, 1, 2}),
               mat({{1, 0, 0}, {0, 0, 1}, {Q(1, 2), 0, Q(1, 2)}}));
  CHECK(!implementable(bad, 2));
  CHECK(implementable(bad, 0));
  CHECK(implementable(bad, 1));
}

TEST_CASE("at_cost_contract") {
  Instance e1 = example1();
  Contract z = at_cost_contract(e1, 0);
  CHECK(eq(z, RatVec::Zero(3)));
  Instance inst(vec({2, 3}), vec({0, 1, 4}),
                mat({{Q(1, 2), Q(1, 2), 0}, {0, 0, 1}}));
  Contract t = at_cost_contract(inst, 0);
  CHECK(eq(t, vec({2, 2, 0})));
  CHECK(expected_payment(inst, 0, t) == 2);
  CHECK(best_response(inst, t) == 0);
  CHECK_THROWS_AS(at_cost_contract(inst, 1), std::invalid_argument);
}

TEST_CASE("optimal_single") {
  Instance e1 = example1();
  SolveResult r = optimal_single(e1);
  REQUIRE(r.ok());
  CHECK(r.principal_utility == 2);
  CHECK(r.action == 0);  // ties at U_P = 2 resolved by payment then index
  CHECK(r.payment == 0);
  for (const auto& item : r.certificate) CHECK(item.pass);

  Instance b4 = mlrp4x6();
  SolveResult r4 = optimal_single(b4);
  REQUIRE(r4.ok());
  CHECK(r4.action == 3);
  CHECK(r4.payment == Q(11, 5));
  CHECK(r4.principal_utility == Q(2987, 1000));

  Instance single(vec({0}), vec({5}), mat({{1}}));
  SolveResult rs = optimal_single(single);
  CHECK(rs.principal_utility == 5);
}

TEST_CASE("adding an action never decreases min_payment for existing actions") {
  Instance e1 = example1();
  // Drop action 2 (internal index 1) and compare action 3's payment.
  Instance smaller(vec({0, 1}), vec({0, 4, 8}),
                   mat({{Q(1, 2), Q(1, 2), 0}, {Q(1, 4), Q(1, 2), Q(1, 4)}}));
  CHECK(min_payment(smaller, 1).payment <= min_payment(e1, 2).payment);
}

TEST_CASE("min_payment matches the vertex-enumeration oracle on random instances") {
  std::mt19937_64 rng(20250823);
  for (int trial = 0; trial < 60; ++trial) {
    Instance inst = random_instance(rng, 4, 4);
    for (int i = 0; i < inst.n(); ++i) {
      for (bool mono : {false, true}) {
        MinPaymentResult got = min_payment(inst, i, mono);
        OracleResult want = min_payment_oracle(inst, i, mono);
        REQUIRE(got.feasible == want.feasible);
        if (got.feasible) CHECK(got.payment == want.value);
      }
    }
  }
}
