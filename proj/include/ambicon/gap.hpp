#pragma once

// Ambiguity-gap metrics and instance generators: diagonal action sets, the
// two-effort 2-eps lower-bound construction, the harmonic-cost unbounded-gap
// construction with exact certification, named fixtures, and a randomized
// two-effort upper-bound probe.

#include "ambicon/model.hpp"

#include <map>
#include <random>

namespace ambicon::gap {

struct GapReport {
  std::string status = "ok";  // "ok" or "infinite-gap" (best single utility <= 0)
  Rational rho;               // best-ambiguous / best-single
  Rational rho_hat;           // max welfare / best-single
  SolveResult best_single;
  SolveResult best_ambiguous;
  int first_best_action = -1;  // argmax welfare (ties: smaller index)
  Rational max_welfare;
};

GapReport ambiguity_gap(const Instance& inst);

struct DiagonalParams {
  int m = 0;        // outcomes (= actions in the set)
  RatVec rewards;   // ascending, rewards(0) == 0
  Rational W, c;    // common welfare and cost
};

// m action rows over the given rewards: row 1 concentrates on the zero
// outcome; row j >= 2 pays off outcome j with probability (W+c)/r_j and the
// zero outcome otherwise. All costs equal c. Rows with (W+c)/r_j > 1 would be
// pseudo-actions and are rejected.
struct DiagonalSet {
  RatMat probs;
  RatVec costs;
};
DiagonalSet gen_diagonal(const DiagonalParams& params);

// 4 actions x 3 outcomes, rewards (0, delta, 1+delta): three zero-cost
// diagonal actions with welfare eps plus a high action with cost (1-eps)^2;
// its ambiguity gap is exactly 2 - eps. Requires 1 > delta > eps > 0.
Instance gen_two_effort_gap(const Rational& eps, const Rational& delta);

struct UnboundedReport {
  Instance instance;
  long x = 0;
  Rational delta;
  Rational u_bar;    // rationalized water line; exact certified best single
  long layers = 0;   // regular layers (floor of L)
  bool amplified = false;
  int target = -1;   // internal index of the full-support action i*
  AmbiguousContract tau_star;  // incentivizes target at cost
  Rational best_single;        // == u_bar
  Rational ambiguous_utility;  // == delta (via tau_star, at cost)
  Rational rho_lower;          // delta / u_bar, a certified lower bound on rho
  std::vector<CertItem> certificate;
};

// The iterative harmonic-cost construction: diagonal layers with rising
// expected reward and cost chosen so no single contract extracts more than
// u_bar from any action, while i* (unimplementable by single contracts) is
// implementable at cost by two single-outcome payments. All guarantees are
// re-verified in exact arithmetic; the float-guided water line is lowered and
// the build retried on failure, erroring after bounded retries.
UnboundedReport gen_unbounded_gap(long x, const Rational& delta, int m = 3,
                                  RatVec rewards = RatVec());

struct Fixture {
  Instance instance;
  std::map<std::string, Rational> reference;
};

// Named instances with reference values:
//   example1        - 3x3 strict-improvement instance
//   sop_tight       - sop_tight(5)
//   monotone_omega  - monotone_omega(5, 1/10, 1/100, 1/100)
//   mlrp_b4         - 4x6 MLRP instance
Fixture gen_fixture(const std::string& name);

// n-1 zero-cost actions, each missing one outcome of an (m = n-1)-outcome
// uniform pattern, plus a costly full-ish action whose optimal ambiguous
// contract needs all m single-outcome payments.
Fixture gen_sop_tight(int m);

// The monotone-gap construction: geometric costs, near-degenerate high
// rewards; monotone ambiguous contracts beat monotone single contracts by a
// factor that grows linearly with n.
Fixture gen_monotone_omega(int n, const Rational& eps, const Rational& gamma,
                           const Rational& delta);

struct ProbeReport {
  int trials = 0;
  Rational max_rho_hat;  // over all trials; the probe throws if any exceeds 2
};

// Random two-effort-level instances (n, m <= 6, small-denominator entries);
// rho_hat is computed exactly for each and must stay <= 2.
ProbeReport two_effort_upper_bound_probe(int trials, unsigned long seed);

}  // namespace ambicon::gap
