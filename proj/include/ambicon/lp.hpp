#pragma once

// Exact-rational linear programming: a two-phase simplex with Bland's
// anti-cycling rule, the minimum-payment LP, implementability, at-cost
// contracts for minimum-cost actions, and the optimal single contract.

#include "ambicon/model.hpp"

#include <optional>

namespace ambicon::lp {

enum class Relation { LessEq, GreaterEq, Equal };

struct LpConstraint {
  RatVec coeffs;
  Relation rel = Relation::GreaterEq;
  Rational rhs;
};

// Minimize objective . x subject to the constraints and x >= 0.
struct LpProblem {
  RatVec objective;
  std::vector<LpConstraint> constraints;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  RatVec assignment;  // meaningful only when status == Optimal
};

// Exact two-phase simplex with Bland's rule. The returned assignment is
// re-substituted into every constraint as a post-check.
LpSolution simplex_solve(const LpProblem& p);

struct MinPaymentResult {
  bool feasible = false;
  Rational payment;
  Contract contract;
};

// Minimum expected payment incentivizing action i: minimizes p_i . t subject
// to IC against every other action, explicit IR (p_i . t >= c_i), t >= 0,
// and optionally t_j <= t_{j+1} for all j.
MinPaymentResult min_payment(const Instance& inst, int i, bool monotone = false);

// True iff some single contract incentivizes action i.
bool implementable(const Instance& inst, int i);

// For a minimum-cost action i: the contract paying c_i on every outcome in
// supp(p_i) and 0 elsewhere; its expected payment is exactly c_i.
Contract at_cost_contract(const Instance& inst, int i);

// Best single contract: per implementable action, the min-payment LP; returns
// the argmax of R_i - payment (ties: smaller payment, then smaller index).
SolveResult optimal_single(const Instance& inst, bool monotone = false);

}  // namespace ambicon::lp
