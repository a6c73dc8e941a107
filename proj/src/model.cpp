#include "ambicon/model.hpp"

#include <algorithm>
#include <numeric>

namespace ambicon {

namespace {

bool lex_less(const Contract& a, const Contract& b) {
  for (int j = 0; j < a.size() && j < b.size(); ++j) {
    if (a(j) != b(j)) return a(j) < b(j);
  }
  return a.size() < b.size();
}

bool contracts_equal(const Contract& a, const Contract& b) {
  if (a.size() != b.size()) return false;
  for (int j = 0; j < a.size(); ++j)
    if (a(j) != b(j)) return false;
  return true;
}

// a pointwise >= b with a != b.
bool dominates(const Contract& a, const Contract& b) {
  bool strict = false;
  for (int j = 0; j < a.size(); ++j) {
    if (a(j) < b(j)) return false;
    if (a(j) > b(j)) strict = true;
  }
  return strict;
}

}  // namespace

AmbiguousContract::AmbiguousContract(std::vector<Contract> cs) {
  for (auto& c : cs) add(c);
  if (contracts.empty()) throw std::invalid_argument("ambiguous contract must be nonempty");
}

void AmbiguousContract::add(const Contract& t) {
  if (!contracts.empty() && t.size() != contracts.front().size())
    throw std::invalid_argument("contract length mismatch in ambiguous contract");
  Contract c = t;
  for (int j = 0; j < c.size(); ++j) {
    c(j).canonicalize();  // exact comparisons require canonical form
    if (c(j) < 0) throw std::invalid_argument("negative payment violates limited liability");
  }
  for (const auto& existing : contracts)
    if (contracts_equal(existing, c)) return;
  contracts.push_back(std::move(c));
}

ExtendedRatio ExtendedRatio::make(const Rational& num, const Rational& den) {
  if (den > 0) return ExtendedRatio{false, num / den};
  if (den == 0 && num > 0) return ExtendedRatio{true, Rational(0)};
  throw std::invalid_argument("extended ratio requires positive numerator over zero, or positive denominator");
}

ExtendedRatio ExtendedRatio::inf() { return ExtendedRatio{true, Rational(0)}; }

Instance::Instance(RatVec costs, RatVec rewards, RatMat probs,
                   std::vector<std::string> action_labels,
                   std::vector<std::string> outcome_labels) {
  const int n = static_cast<int>(costs.size());
  const int m = static_cast<int>(rewards.size());
  if (n < 1 || m < 1) throw std::invalid_argument("instance needs at least one action and outcome");
  // Two-argument mpq_class construction does not canonicalize, and exact
  // comparisons require canonical form; normalize all inputs up front.
  for (int i = 0; i < n; ++i) costs(i).canonicalize();
  for (int j = 0; j < m; ++j) rewards(j).canonicalize();
  for (int i = 0; i < static_cast<int>(probs.rows()); ++i)
    for (int j = 0; j < static_cast<int>(probs.cols()); ++j) probs(i, j).canonicalize();
  if (probs.rows() != n || probs.cols() != m)
    throw std::invalid_argument("probability matrix dimensions do not match costs/rewards");
  for (int i = 0; i < n; ++i) {
    if (costs(i) < 0) throw std::invalid_argument("negative cost at action " + std::to_string(i + 1));
    Rational row_sum = 0;
    for (int j = 0; j < m; ++j) {
      if (probs(i, j) < 0 || probs(i, j) > 1)
        throw std::invalid_argument("probability out of [0,1] at action " + std::to_string(i + 1));
      row_sum += probs(i, j);
    }
    if (row_sum != 1)
      throw std::invalid_argument("probability row " + std::to_string(i + 1) +
                                  " sums to " + rational_to_string(row_sum) + ", expected 1");
  }
  for (int j = 0; j < m; ++j)
    if (rewards(j) < 0) throw std::invalid_argument("negative reward at outcome " + std::to_string(j + 1));

  if (action_labels.empty()) {
    for (int i = 0; i < n; ++i) action_labels.push_back("a" + std::to_string(i + 1));
  }
  if (outcome_labels.empty()) {
    for (int j = 0; j < m; ++j) outcome_labels.push_back("o" + std::to_string(j + 1));
  }
  if (static_cast<int>(action_labels.size()) != n || static_cast<int>(outcome_labels.size()) != m)
    throw std::invalid_argument("label count mismatch");

  outcome_perm_.resize(m);
  std::iota(outcome_perm_.begin(), outcome_perm_.end(), 0);
  std::stable_sort(outcome_perm_.begin(), outcome_perm_.end(),
                   [&](int a, int b) { return rewards(a) < rewards(b); });
  action_perm_.resize(n);
  std::iota(action_perm_.begin(), action_perm_.end(), 0);
  std::stable_sort(action_perm_.begin(), action_perm_.end(),
                   [&](int a, int b) { return costs(a) < costs(b); });

  costs_.resize(n);
  rewards_.resize(m);
  probs_.resize(n, m);
  action_labels_.resize(n);
  outcome_labels_.resize(m);
  for (int j = 0; j < m; ++j) {
    rewards_(j) = rewards(outcome_perm_[j]);
    outcome_labels_[j] = outcome_labels[outcome_perm_[j]];
  }
  for (int i = 0; i < n; ++i) {
    costs_(i) = costs(action_perm_[i]);
    action_labels_[i] = action_labels[action_perm_[i]];
    for (int j = 0; j < m; ++j) probs_(i, j) = probs(action_perm_[i], outcome_perm_[j]);
  }
}

int Instance::action_from_original(int orig) const {
  for (int i = 0; i < n(); ++i)
    if (action_perm_[i] == orig) return i;
  throw std::out_of_range("original action index out of range");
}

int Instance::outcome_from_original(int orig) const {
  for (int j = 0; j < m(); ++j)
    if (outcome_perm_[j] == orig) return j;
  throw std::out_of_range("original outcome index out of range");
}

int Instance::support_lo(int i) const {
  for (int j = 0; j < m(); ++j)
    if (probs_(i, j) > 0) return j;
  throw std::logic_error("action has empty support");
}

int Instance::support_hi(int i) const {
  for (int j = m() - 1; j >= 0; --j)
    if (probs_(i, j) > 0) return j;
  throw std::logic_error("action has empty support");
}

namespace {

void check_action(const Instance& inst, int i) {
  if (i < 0 || i >= inst.n()) throw std::out_of_range("action index out of range");
}

void check_contract(const Instance& inst, const Contract& t) {
  if (t.size() != inst.m()) throw std::invalid_argument("contract length does not match outcome count");
}

}  // namespace

Rational expected_reward(const Instance& inst, int i) {
  check_action(inst, i);
  return inst.probs().row(i).dot(inst.rewards().transpose());
}

Rational welfare(const Instance& inst, int i) { return expected_reward(inst, i) - inst.cost(i); }

Rational expected_payment(const Instance& inst, int i, const Contract& t) {
  check_action(inst, i);
  check_contract(inst, t);
  return inst.probs().row(i).dot(t.transpose());
}

Rational agent_utility(const Instance& inst, int i, const Contract& t) {
  return expected_payment(inst, i, t) - inst.cost(i);
}

Rational principal_utility(const Instance& inst, int i, const Contract& t) {
  return expected_reward(inst, i) - expected_payment(inst, i, t);
}

Rational min_agent_utility(const Instance& inst, int i, const AmbiguousContract& tau) {
  bool first = true;
  Rational best;
  for (const auto& t : tau.contracts) {
    Rational u = agent_utility(inst, i, t);
    if (first || u < best) best = u;
    first = false;
  }
  return best;
}

Rational max_payment(const Instance& inst, int i, const AmbiguousContract& tau) {
  bool first = true;
  Rational best;
  for (const auto& t : tau.contracts) {
    Rational p = expected_payment(inst, i, t);
    if (first || p > best) best = p;
    first = false;
  }
  return best;
}

int best_response(const Instance& inst, const Contract& t) {
  check_contract(inst, t);
  int best = 0;
  Rational best_ua = agent_utility(inst, 0, t);
  Rational best_up = principal_utility(inst, 0, t);
  for (int i = 1; i < inst.n(); ++i) {
    Rational ua = agent_utility(inst, i, t);
    if (ua < best_ua) continue;
    Rational up = principal_utility(inst, i, t);
    if (ua > best_ua || up > best_up) {
      best = i;
      best_ua = ua;
      best_up = up;
    }
  }
  return best;
}

int maxmin_best_response(const Instance& inst, const AmbiguousContract& tau) {
  // Chain: max min-utility; prefer actions where tau is consistent (the
  // principal-favoring choice: an inconsistent selection has no well-defined
  // principal utility); then max R_i - max-payment as a deterministic key;
  // then smallest index.
  int best = -1;
  Rational best_ua;
  bool best_cons = false;
  Rational best_key;
  for (int i = 0; i < inst.n(); ++i) {
    Rational ua = min_agent_utility(inst, i, tau);
    bool better;
    if (best < 0 || ua > best_ua) {
      better = true;
    } else if (ua < best_ua) {
      better = false;
    } else {
      bool cons = is_consistent(inst, tau, i);
      if (cons != best_cons) {
        better = cons;
      } else {
        Rational key = expected_reward(inst, i) - max_payment(inst, i, tau);
        better = key > best_key;
      }
    }
    if (better) {
      best = i;
      best_ua = ua;
      best_cons = is_consistent(inst, tau, i);
      best_key = expected_reward(inst, i) - max_payment(inst, i, tau);
    }
  }
  return best;
}

bool is_consistent(const Instance& inst, const AmbiguousContract& tau, int i) {
  check_action(inst, i);
  if (tau.contracts.empty()) throw std::invalid_argument("empty ambiguous contract");
  Rational p0 = expected_payment(inst, i, tau.contracts.front());
  for (const auto& t : tau.contracts)
    if (expected_payment(inst, i, t) != p0) return false;
  return true;
}

bool has_proper_crossing(const Contract& t, const Contract& u) {
  if (t.size() != u.size()) throw std::invalid_argument("contract length mismatch");
  bool above = false, below = false;
  for (int j = 0; j < t.size(); ++j) {
    if (t(j) > u(j)) above = true;
    if (t(j) < u(j)) below = true;
  }
  return above && below;
}

AmbiguousContract prune_dominated(const AmbiguousContract& tau) {
  std::vector<Contract> cs = tau.contracts;
  for (;;) {
    int victim = -1;
    for (int a = 0; a < static_cast<int>(cs.size()); ++a) {
      bool dom = false;
      for (int b = 0; b < static_cast<int>(cs.size()); ++b)
        if (a != b && dominates(cs[a], cs[b])) dom = true;
      if (dom && (victim < 0 || lex_less(cs[victim], cs[a]))) victim = a;
    }
    if (victim < 0) break;
    cs.erase(cs.begin() + victim);
  }
  AmbiguousContract out;
  for (auto& c : cs) out.add(c);
  return out;
}

bool has_distinct_rows(const Instance& inst) {
  for (int a = 0; a < inst.n(); ++a)
    for (int b = a + 1; b < inst.n(); ++b) {
      bool same = true;
      for (int j = 0; j < inst.m(); ++j)
        if (inst.prob(a, j) != inst.prob(b, j)) {
          same = false;
          break;
        }
      if (same) return false;
    }
  return true;
}

Instance dedupe_actions(const Instance& inst, DedupeReport* report) {
  std::vector<int> keep;
  std::vector<int> removed;
  for (int i = 0; i < inst.n(); ++i) {
    bool redundant = false;
    for (int k : keep) {
      bool same = true;
      for (int j = 0; j < inst.m(); ++j)
        if (inst.prob(i, j) != inst.prob(k, j)) {
          same = false;
          break;
        }
      // Actions are cost-sorted, so an earlier kept duplicate is never
      // costlier; on a cost tie the earlier (lower original index among
      // equals after a stable sort) one is kept.
      if (same) {
        redundant = true;
        break;
      }
    }
    if (redundant)
      removed.push_back(inst.original_action(i));
    else
      keep.push_back(i);
  }
  if (report) report->removed_original = removed;
  if (removed.empty()) return inst;

  const int n2 = static_cast<int>(keep.size());
  RatVec costs(n2);
  RatMat probs(n2, inst.m());
  std::vector<std::string> labels(n2);
  for (int a = 0; a < n2; ++a) {
    costs(a) = inst.cost(keep[a]);
    labels[a] = inst.action_label(keep[a]);
    for (int j = 0; j < inst.m(); ++j) probs(a, j) = inst.prob(keep[a], j);
  }
  std::vector<std::string> olabels;
  for (int j = 0; j < inst.m(); ++j) olabels.push_back(inst.outcome_label(j));
  return Instance(costs, inst.rewards(), probs, labels, olabels);
}

bool is_mlrp(const Instance& inst, MlrpWitness* witness) {
  for (int i = 0; i < inst.n(); ++i) {
    for (int ip = 0; ip < inst.n(); ++ip) {
      if (!(inst.cost(i) > inst.cost(ip))) continue;
      for (int j = 0; j < inst.m(); ++j) {
        if (inst.prob(i, j) == 0 && inst.prob(ip, j) == 0) continue;
        for (int jp = j + 1; jp < inst.m(); ++jp) {
          if (inst.prob(i, jp) == 0 && inst.prob(ip, jp) == 0) continue;
          ExtendedRatio lo = ExtendedRatio::make(inst.prob(i, j), inst.prob(ip, j));
          ExtendedRatio hi = ExtendedRatio::make(inst.prob(i, jp), inst.prob(ip, jp));
          if (hi < lo) {
            if (witness) *witness = MlrpWitness{i, ip, j, jp};
            return false;
          }
        }
      }
    }
  }
  return true;
}

bool is_sop(const Contract& t) {
  int positive = 0;
  for (int j = 0; j < t.size(); ++j)
    if (t(j) > 0) ++positive;
  return positive == 1;
}

bool is_step(const Contract& t) {
  int k = -1;
  for (int j = 0; j < t.size(); ++j)
    if (t(j) > 0) {
      k = j;
      break;
    }
  if (k < 0) return false;
  for (int j = k + 1; j < t.size(); ++j)
    if (t(j) != t(k)) return false;
  return true;
}

bool is_monotone(const Contract& t) {
  for (int j = 0; j + 1 < t.size(); ++j)
    if (t(j) > t(j + 1)) return false;
  return true;
}

}  // namespace ambicon
