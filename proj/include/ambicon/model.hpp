#pragma once

// Core domain types for hidden-action principal-agent instances, plus
// expected-value computations, best responses with deterministic
// tie-breaking, consistency checks, and structural predicates.

#include "ambicon/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ambicon {

// A payment vector over outcomes; entries are nonnegative (limited liability).
using Contract = RatVec;

// A finite set of distinct contracts. Size 1 is the classic single-contract
// degenerate case. Insertion order is preserved; exact duplicates are merged.
struct AmbiguousContract {
  std::vector<Contract> contracts;

  AmbiguousContract() = default;
  explicit AmbiguousContract(std::vector<Contract> cs);

  // Adds a contract unless an exactly equal one is already present.
  void add(const Contract& t);
  int size() const { return static_cast<int>(contracts.size()); }
};

// A likelihood ratio that is either a rational or +infinity. +infinity only
// arises as p/0 with p > 0; 0/0 is rejected.
struct ExtendedRatio {
  bool infinite = false;
  Rational value;  // meaningful only when !infinite

  static ExtendedRatio make(const Rational& num, const Rational& den);
  static ExtendedRatio inf();

  friend bool operator==(const ExtendedRatio& a, const ExtendedRatio& b) {
    if (a.infinite != b.infinite) return false;
    return a.infinite || a.value == b.value;
  }
  friend bool operator<(const ExtendedRatio& a, const ExtendedRatio& b) {
    if (a.infinite) return false;
    if (b.infinite) return true;
    return a.value < b.value;
  }
  friend bool operator>(const ExtendedRatio& a, const ExtendedRatio& b) { return b < a; }
  friend bool operator>=(const ExtendedRatio& a, const ExtendedRatio& b) { return !(a < b); }
  friend bool operator<=(const ExtendedRatio& a, const ExtendedRatio& b) { return !(b < a); }
};

// A principal-agent instance. Rewards and costs are sorted ascending at
// construction (stable), with the permutations retained for reporting.
class Instance {
 public:
  Instance(RatVec costs, RatVec rewards, RatMat probs,
           std::vector<std::string> action_labels = {},
           std::vector<std::string> outcome_labels = {});

  int n() const { return static_cast<int>(costs_.size()); }
  int m() const { return static_cast<int>(rewards_.size()); }
  const RatVec& costs() const { return costs_; }
  const RatVec& rewards() const { return rewards_; }
  const RatMat& probs() const { return probs_; }
  const Rational& cost(int i) const { return costs_(i); }
  const Rational& reward(int j) const { return rewards_(j); }
  const Rational& prob(int i, int j) const { return probs_(i, j); }

  const std::string& action_label(int i) const { return action_labels_[i]; }
  const std::string& outcome_label(int j) const { return outcome_labels_[j]; }
  // Original (pre-sort) index of internal action i / outcome j.
  int original_action(int i) const { return action_perm_[i]; }
  int original_outcome(int j) const { return outcome_perm_[j]; }
  // Internal index of original action/outcome index.
  int action_from_original(int orig) const;
  int outcome_from_original(int orig) const;

  // Lowest / highest support outcome of action i (per-row scan).
  int support_lo(int i) const;
  int support_hi(int i) const;

 private:
  RatVec costs_, rewards_;
  RatMat probs_;
  std::vector<std::string> action_labels_, outcome_labels_;
  std::vector<int> action_perm_, outcome_perm_;  // internal -> original
};

// One verified condition inside a certificate.
struct CertItem {
  std::string name;
  bool pass = false;
};

// A solver result: the incentivized action, its expected payment, utilities,
// per-contract payments, the contract set, and a verification certificate.
struct SolveResult {
  std::string status = "ok";  // "ok" or a domain status such as
                              // "not-monotone-implementable", "no-implementable-action"
  int action = -1;            // internal (sorted) action index
  Rational payment;
  Rational agent_utility;
  Rational principal_utility;
  AmbiguousContract tau;
  std::vector<Rational> contract_payments;  // payment of `action` under each contract
  std::vector<CertItem> certificate;

  bool ok() const { return status == "ok"; }
};

Rational expected_reward(const Instance& inst, int i);
Rational welfare(const Instance& inst, int i);
Rational expected_payment(const Instance& inst, int i, const Contract& t);
Rational agent_utility(const Instance& inst, int i, const Contract& t);
Rational principal_utility(const Instance& inst, int i, const Contract& t);

// Minimum over contracts in tau of the agent's utility for action i.
Rational min_agent_utility(const Instance& inst, int i, const AmbiguousContract& tau);
// Maximum over contracts in tau of the expected payment for action i.
Rational max_payment(const Instance& inst, int i, const AmbiguousContract& tau);

// Agent's best response to a single contract. Ties: max principal utility,
// then smallest action index.
int best_response(const Instance& inst, const Contract& t);

// Agent's max-min best response to an ambiguous contract. Ties: prefer
// actions for which tau is consistent, then max R_i - max-payment tie key,
// then smallest action index (see min-payment solvers for rationale).
int maxmin_best_response(const Instance& inst, const AmbiguousContract& tau);

// True iff all contracts in tau give exactly equal expected payment at i.
bool is_consistent(const Instance& inst, const AmbiguousContract& tau, int i);

bool has_proper_crossing(const Contract& t, const Contract& u);

// Removes pointwise-dominating contracts until all remaining pairs properly
// cross. Deterministic: the lexicographically largest dominating contract is
// removed first. Per-action min utilities are preserved.
AmbiguousContract prune_dominated(const AmbiguousContract& tau);

struct DedupeReport {
  std::vector<int> removed_original;  // original indices of dropped actions
};

// Removes the costlier action of any pair with identical probability rows
// (higher original index dropped on a cost tie). The result satisfies: for
// all i != i' there is an outcome j with p_{i,j} > p_{i',j}.
Instance dedupe_actions(const Instance& inst, DedupeReport* report = nullptr);

// True iff no pair of actions has identical probability rows.
bool has_distinct_rows(const Instance& inst);

struct MlrpWitness {
  int i, i_prime, j, j_prime;  // internal indices; ratio decreases from j to j_prime
};

// Monotone likelihood ratio property: for every pair with c_i > c_{i'} and
// outcomes j < j', ratio p_{i,j'}/p_{i',j'} >= p_{i,j}/p_{i',j} whenever both
// ratios are defined (not 0/0).
bool is_mlrp(const Instance& inst, MlrpWitness* witness = nullptr);

// Pays a positive amount for exactly one outcome.
bool is_sop(const Contract& t);
// Zero up to a threshold outcome, constant positive afterwards.
bool is_step(const Contract& t);
// Nondecreasing payments.
bool is_monotone(const Contract& t);

}  // namespace ambicon
