#pragma once

// Independent optimality oracle for the ambiguous solvers: at a candidate
// payment level theta', the most permissive contract set is the full family
// of single-outcome payments over supp(p_i), each paying theta' at i. An
// action is incentivizable at theta' iff that family satisfies weak max-min
// incentive compatibility plus individual rationality. The solvers' water
// level theta must be feasible while every grid point below it is not.

#include "ambicon/model.hpp"

namespace ambicon::testing {

inline bool sop_family_feasible(const Instance& inst, int i, const Rational& theta) {
  std::vector<Contract> family;
  for (int j = 0; j < inst.m(); ++j) {
    if (inst.prob(i, j) == 0) continue;
    Contract t = RatVec::Zero(inst.m());
    t(j) = theta / inst.prob(i, j);
    family.push_back(t);
  }
  auto min_u = [&](int a) {
    Rational best;
    bool first = true;
    for (const auto& t : family) {
      Rational u = agent_utility(inst, a, t);
      if (first || u < best) best = u;
      first = false;
    }
    return best;
  };
  Rational ui = min_u(i);
  if (ui < 0) return false;
  for (int a = 0; a < inst.n(); ++a)
    if (a != i && min_u(a) > ui) return false;
  return true;
}

// True iff theta is feasible and no probed level below it is. Probes: a
// point 1/(10^6 * den(theta)) below theta, plus a coarse grid down to 0.
inline bool sop_level_is_optimal(const Instance& inst, int i, const Rational& theta) {
  if (!sop_family_feasible(inst, i, theta)) return false;
  if (theta == 0) return true;
  Rational epsilon = Rational(1) / (Rational(1000000) * Rational(theta.get_den()));
  Rational just_below = theta - epsilon;
  if (just_below >= 0 && sop_family_feasible(inst, i, just_below)) return false;
  for (int k = 0; k < 8; ++k) {
    Rational probe = theta * Rational(k) / 8;
    probe.canonicalize();
    if (sop_family_feasible(inst, i, probe)) return false;
  }
  return true;
}

}  // namespace ambicon::testing
