#include "ambicon/lp.hpp"

#include <algorithm>

namespace ambicon::lp {

namespace {

// Dense simplex tableau. Column layout: structural | slack/surplus |
// artificial | rhs. The cost row holds reduced costs; its rhs entry is the
// negated objective value of the current basis.
struct Tableau {
  std::vector<std::vector<Rational>> a;  // rows x cols (rhs last)
  std::vector<Rational> cost;            // size cols
  std::vector<int> basis;                // basic variable per row
  int cols = 0;

  int rhs() const { return cols - 1; }

  void pivot(int r, int c) {
    Rational piv = a[r][c];
    for (int j = 0; j < cols; ++j) a[r][j] /= piv;
    for (int r2 = 0; r2 < static_cast<int>(a.size()); ++r2) {
      if (r2 == r || a[r2][c] == 0) continue;
      Rational f = a[r2][c];
      for (int j = 0; j < cols; ++j) a[r2][j] -= f * a[r][j];
    }
    if (cost[c] != 0) {
      Rational f = cost[c];
      for (int j = 0; j < cols; ++j) cost[j] -= f * a[r][j];
    }
    basis[r] = c;
  }

  // Bland's rule: entering = lowest-index allowed column with negative
  // reduced cost; leaving = min ratio, ties by lowest basic variable index.
  // Returns false on unboundedness.
  bool run(const std::vector<bool>& allowed) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < rhs(); ++j)
        if (allowed[j] && cost[j] < 0) {
          enter = j;
          break;
        }
      if (enter < 0) return true;
      int leave = -1;
      Rational best_ratio;
      for (int r = 0; r < static_cast<int>(a.size()); ++r) {
        if (a[r][enter] <= 0) continue;
        Rational ratio = a[r][rhs()] / a[r][enter];
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis[r] < basis[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpSolution simplex_solve(const LpProblem& p) {
  const int nvar = static_cast<int>(p.objective.size());
  const int nrow = static_cast<int>(p.constraints.size());
  for (const auto& c : p.constraints)
    if (c.coeffs.size() != nvar) throw std::invalid_argument("LP dimension mismatch");

  // Count slack/surplus and artificial columns after normalizing rhs >= 0.
  std::vector<int> sign(nrow, 1);
  std::vector<Relation> rel(nrow);
  for (int r = 0; r < nrow; ++r) {
    rel[r] = p.constraints[r].rel;
    if (p.constraints[r].rhs < 0) {
      sign[r] = -1;
      if (rel[r] == Relation::LessEq)
        rel[r] = Relation::GreaterEq;
      else if (rel[r] == Relation::GreaterEq)
        rel[r] = Relation::LessEq;
    }
  }
  int nslack = 0, nart = 0;
  for (int r = 0; r < nrow; ++r) {
    if (rel[r] != Relation::Equal) ++nslack;
    if (rel[r] != Relation::LessEq) ++nart;  // >= and = rows need an artificial
  }
  const int slack0 = nvar, art0 = nvar + nslack;
  Tableau t;
  t.cols = nvar + nslack + nart + 1;
  t.a.assign(nrow, std::vector<Rational>(t.cols, Rational(0)));
  t.basis.assign(nrow, -1);
  int si = 0, ai = 0;
  for (int r = 0; r < nrow; ++r) {
    const auto& con = p.constraints[r];
    for (int j = 0; j < nvar; ++j) t.a[r][j] = sign[r] * con.coeffs(j);
    t.a[r][t.rhs()] = sign[r] * con.rhs;
    if (rel[r] != Relation::Equal) {
      t.a[r][slack0 + si] = rel[r] == Relation::LessEq ? 1 : -1;
      if (rel[r] == Relation::LessEq) t.basis[r] = slack0 + si;
      ++si;
    }
    if (rel[r] != Relation::LessEq) {
      t.a[r][art0 + ai] = 1;
      t.basis[r] = art0 + ai;
      ++ai;
    }
  }

  // Phase 1: minimize the sum of artificials.
  t.cost.assign(t.cols, Rational(0));
  for (int j = art0; j < art0 + nart; ++j) t.cost[j] = 1;
  for (int r = 0; r < nrow; ++r) {
    if (t.cost[t.basis[r]] == 0) continue;
    Rational f = t.cost[t.basis[r]];
    for (int j = 0; j < t.cols; ++j) t.cost[j] -= f * t.a[r][j];
  }
  std::vector<bool> allowed(t.cols, true);
  t.run(allowed);  // bounded below by 0, cannot be unbounded
  if (-t.cost[t.rhs()] != 0) return LpSolution{LpStatus::Infeasible, Rational(0), {}};

  // Drive remaining artificials out of the basis (their values are 0).
  for (int r = static_cast<int>(t.a.size()) - 1; r >= 0; --r) {
    if (t.basis[r] < art0) continue;
    int piv = -1;
    for (int j = 0; j < art0; ++j)
      if (t.a[r][j] != 0) {
        piv = j;
        break;
      }
    if (piv >= 0) {
      t.pivot(r, piv);
    } else {  // redundant row
      t.a.erase(t.a.begin() + r);
      t.basis.erase(t.basis.begin() + r);
    }
  }

  // Phase 2: minimize the real objective; artificial columns barred.
  for (int j = art0; j < art0 + nart; ++j) allowed[j] = false;
  t.cost.assign(t.cols, Rational(0));
  for (int j = 0; j < nvar; ++j) t.cost[j] = p.objective(j);
  for (int r = 0; r < static_cast<int>(t.a.size()); ++r) {
    if (t.cost[t.basis[r]] == 0) continue;
    Rational f = t.cost[t.basis[r]];
    for (int j = 0; j < t.cols; ++j) t.cost[j] -= f * t.a[r][j];
  }
  if (!t.run(allowed)) return LpSolution{LpStatus::Unbounded, Rational(0), {}};

  RatVec x = RatVec::Zero(nvar);
  for (int r = 0; r < static_cast<int>(t.a.size()); ++r)
    if (t.basis[r] < nvar) x(t.basis[r]) = t.a[r][t.rhs()];

  // Post-check: re-substitute the assignment into every original constraint.
  for (int j = 0; j < nvar; ++j)
    if (x(j) < 0) throw std::logic_error("simplex produced a negative variable");
  Rational value = 0;
  for (int j = 0; j < nvar; ++j) value += p.objective(j) * x(j);
  for (const auto& con : p.constraints) {
    Rational lhs = 0;
    for (int j = 0; j < nvar; ++j) lhs += con.coeffs(j) * x(j);
    bool ok = con.rel == Relation::LessEq    ? lhs <= con.rhs
              : con.rel == Relation::GreaterEq ? lhs >= con.rhs
                                               : lhs == con.rhs;
    if (!ok) throw std::logic_error("simplex solution fails re-substitution");
  }
  if (value != -t.cost[t.rhs()]) throw std::logic_error("simplex value mismatch");
  return LpSolution{LpStatus::Optimal, value, x};
}

MinPaymentResult min_payment(const Instance& inst, int i, bool monotone) {
  if (i < 0 || i >= inst.n()) throw std::out_of_range("action index out of range");
  const int m = inst.m();
  LpProblem p;
  p.objective = inst.probs().row(i).transpose();
  for (int ip = 0; ip < inst.n(); ++ip) {
    if (ip == i) continue;
    LpConstraint con;
    con.coeffs = (inst.probs().row(i) - inst.probs().row(ip)).transpose();
    con.rel = Relation::GreaterEq;
    con.rhs = inst.cost(i) - inst.cost(ip);
    p.constraints.push_back(std::move(con));
  }
  {
    LpConstraint ir;
    ir.coeffs = inst.probs().row(i).transpose();
    ir.rel = Relation::GreaterEq;
    ir.rhs = inst.cost(i);
    p.constraints.push_back(std::move(ir));
  }
  if (monotone) {
    for (int j = 0; j + 1 < m; ++j) {
      LpConstraint mc;
      mc.coeffs = RatVec::Zero(m);
      mc.coeffs(j) = 1;
      mc.coeffs(j + 1) = -1;
      mc.rel = Relation::LessEq;
      mc.rhs = 0;
      p.constraints.push_back(std::move(mc));
    }
  }
  LpSolution s = simplex_solve(p);
  if (s.status != LpStatus::Optimal) return MinPaymentResult{false, Rational(0), {}};
  return MinPaymentResult{true, s.value, s.assignment};
}

bool implementable(const Instance& inst, int i) { return min_payment(inst, i).feasible; }

Contract at_cost_contract(const Instance& inst, int i) {
  if (i < 0 || i >= inst.n()) throw std::out_of_range("action index out of range");
  for (int ip = 0; ip < inst.n(); ++ip)
    if (inst.cost(ip) < inst.cost(i))
      throw std::invalid_argument("at-cost contract requires a minimum-cost action");
  Contract t = RatVec::Zero(inst.m());
  for (int j = 0; j < inst.m(); ++j)
    if (inst.prob(i, j) > 0) t(j) = inst.cost(i);
  return t;
}

SolveResult optimal_single(const Instance& inst, bool monotone) {
  SolveResult best;
  best.status = "no-implementable-action";
  bool have = false;
  for (int i = 0; i < inst.n(); ++i) {
    MinPaymentResult r = min_payment(inst, i, monotone);
    if (!r.feasible) continue;
    Rational up = expected_reward(inst, i) - r.payment;
    bool better = !have || up > best.principal_utility ||
                  (up == best.principal_utility && r.payment < best.payment);
    if (!better) continue;
    have = true;
    best.status = "ok";
    best.action = i;
    best.payment = r.payment;
    best.agent_utility = r.payment - inst.cost(i);
    best.principal_utility = up;
    best.tau = AmbiguousContract();
    best.tau.add(r.contract);
    best.contract_payments = {r.payment};
  }
  if (!have) return best;
  const Contract& t = best.tau.contracts.front();
  bool ic = true;
  for (int ip = 0; ip < inst.n(); ++ip)
    if (agent_utility(inst, ip, t) > best.agent_utility) ic = false;
  best.certificate = {
      {"consistency", true},
      {"incentive-compatibility", ic},
      {"individual-rationality", best.agent_utility >= 0},
  };
  if (monotone) best.certificate.push_back({"monotone", is_monotone(t)});
  return best;
}

}  // namespace ambicon::lp
