#pragma once

// Optimal ambiguous-contract solvers: the general single-outcome-payment
// waterfilling solver, the monotone step-contract solver (with its
// non-implementability screen), the MLRP fast paths, structural compressions
// of arbitrary consistent contract sets, and a validator.

#include "ambicon/model.hpp"

namespace ambicon::ambiguous {

// Per-action lowest (l) and highest (h) support outcomes, computed by two
// monotone sweeps; requires the monotone likelihood ratio property.
struct SupportScan {
  std::vector<int> l, h;
};

// Optimal ambiguous contract incentivizing action i: a set of
// single-outcome-payment contracts, all paying theta in expectation at i,
// where theta is the water level max(c_i, max_{i' != i} theta_{i'}).
// Requires distinct probability rows (run dedupe_actions first).
SolveResult solve_general_for_action(const Instance& inst, int i);
// Best action under the general solver (ties: smaller index).
SolveResult solve_general(const Instance& inst);

// Optimal *monotone* ambiguous contract for action i: step contracts at a
// common water level, or status "not-monotone-implementable" when a cheaper
// action cumulatively dominates i's row.
SolveResult solve_monotone_for_action(const Instance& inst, int i);
SolveResult solve_monotone(const Instance& inst);

// Requires is_mlrp(inst).
SupportScan support_scan(const Instance& inst);

// MLRP fast paths: same payment as the general/monotone solvers, with
// two-contract outputs {SOP at l(i), SOP at h(i)} resp. {step at l(i), step
// at h(i)}.
SolveResult solve_mlrp_for_action(const Instance& inst, int i);
SolveResult solve_mlrp(const Instance& inst);
SolveResult solve_mlrp_monotone_for_action(const Instance& inst, int i);
SolveResult solve_mlrp_monotone(const Instance& inst);

// Compresses a consistent contract set incentivizing i into at most
// min(m, n-1) single-outcome-payment contracts with the same payment.
AmbiguousContract compress_to_sop(const Instance& inst, const AmbiguousContract& tau, int i);
// Step-contract analogue over upper-cumulative probabilities; requires all
// contracts in tau to be monotone.
AmbiguousContract compress_to_step(const Instance& inst, const AmbiguousContract& tau, int i);

// Itemized certificate: consistency at i, max-min incentive compatibility
// against every action, the deterministic tie-break selecting i, and
// individual rationality.
std::vector<CertItem> validate(const Instance& inst, const AmbiguousContract& tau, int i);
// True iff every item of validate passes.
bool validates(const Instance& inst, const AmbiguousContract& tau, int i);

}  // namespace ambicon::ambiguous
