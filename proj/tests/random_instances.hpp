#pragma once

// Seeded random instance generation for property tests: small dimensions,
// small-denominator rationals, distinct probability rows.

#include "fixtures.hpp"

#include <random>

namespace ambicon::testing {

inline Instance random_instance(std::mt19937_64& rng, int max_n = 5, int max_m = 5) {
  for (;;) {
    std::uniform_int_distribution<int> nd(2, max_n), md(2, max_m);
    int n = nd(rng), m = md(rng);
    std::uniform_int_distribution<int> num(0, 8), den(1, 3), pnum(0, 4);
    RatVec rewards(m), costs(n);
    for (int j = 0; j < m; ++j) rewards(j) = Q(num(rng), den(rng));
    for (int i = 0; i < n; ++i) costs(i) = Q(pnum(rng), den(rng));
    RatMat probs(n, m);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      Rational sum = 0;
      for (int j = 0; j < m; ++j) {
        probs(i, j) = pnum(rng);
        sum += probs(i, j);
      }
      if (sum == 0) {
        ok = false;
        break;
      }
      for (int j = 0; j < m; ++j) probs(i, j) /= sum;
    }
    if (!ok) continue;
    Instance inst(costs, rewards, probs);
    if (has_distinct_rows(inst)) return inst;
  }
}

// Rejection-samples a small instance satisfying the monotone likelihood
// ratio property with pairwise-distinct costs and distinct rows.
inline Instance random_mlrp_instance(std::mt19937_64& rng, int max_n = 3, int max_m = 4) {
  for (;;) {
    Instance inst = random_instance(rng, max_n, max_m);
    bool distinct_costs = true;
    for (int i = 0; i + 1 < inst.n(); ++i)
      if (inst.cost(i) == inst.cost(i + 1)) distinct_costs = false;
    if (distinct_costs && is_mlrp(inst)) return inst;
  }
}

}  // namespace ambicon::testing
