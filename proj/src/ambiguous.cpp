#include "ambicon/ambiguous.hpp"

namespace ambicon::ambiguous {

namespace {

void check_action(const Instance& inst, int i) {
  if (i < 0 || i >= inst.n()) throw std::out_of_range("action index out of range");
}

void require_distinct_rows(const Instance& inst) {
  if (!has_distinct_rows(inst))
    throw std::invalid_argument("duplicate probability rows; run dedupe_actions first");
}

Contract sop(int m, int j, const Rational& amount) {
  Contract t = RatVec::Zero(m);
  t(j) = amount;
  return t;
}

Contract step(int m, int k, const Rational& amount) {
  Contract t = RatVec::Zero(m);
  for (int j = k; j < m; ++j) t(j) = amount;
  return t;
}

// Upper-cumulative probabilities: cum(j) = sum_{j' >= j} p_{i,j'}.
RatVec upper_cumulative(const Instance& inst, int i) {
  RatVec cum = RatVec::Zero(inst.m());
  Rational acc = 0;
  for (int j = inst.m() - 1; j >= 0; --j) {
    acc += inst.prob(i, j);
    cum(j) = acc;
  }
  return cum;
}

SolveResult make_result(const Instance& inst, int i, AmbiguousContract tau,
                        const Rational& theta) {
  SolveResult r;
  r.action = i;
  r.payment = theta;
  r.agent_utility = theta - inst.cost(i);
  r.principal_utility = expected_reward(inst, i) - theta;
  for (const auto& t : tau.contracts)
    r.contract_payments.push_back(expected_payment(inst, i, t));
  r.certificate = validate(inst, tau, i);
  r.tau = std::move(tau);
  // The agent's tie-break can select a different action when several tie at
  // the water level (e.g. two zero-cost actions under the zero contract);
  // report that in-band rather than as a success.
  for (const auto& item : r.certificate)
    if (!item.pass) r.status = "not-incentivized";
  return r;
}

SolveResult best_over_actions(const Instance& inst,
                              SolveResult (*per_action)(const Instance&, int),
                              const char* empty_status = "no-incentivizable-action") {
  SolveResult best;
  best.status = empty_status;
  bool have = false;
  for (int i = 0; i < inst.n(); ++i) {
    SolveResult r = per_action(inst, i);
    if (!r.ok()) continue;
    if (!have || r.principal_utility > best.principal_utility) {
      best = std::move(r);
      have = true;
    }
  }
  return best;
}

}  // namespace

SolveResult solve_general_for_action(const Instance& inst, int i) {
  check_action(inst, i);
  require_distinct_rows(inst);
  const int m = inst.m();
  Rational theta = inst.cost(i);
  std::vector<int> chosen;  // outcome set S, insertion-ordered
  for (int ip = 0; ip < inst.n(); ++ip) {
    if (ip == i) continue;
    // j(i') = argmax over supp(p_i) of the likelihood ratio; ties toward the
    // largest outcome index.
    int jbest = -1;
    ExtendedRatio rbest;
    for (int j = 0; j < m; ++j) {
      if (inst.prob(i, j) == 0) continue;
      ExtendedRatio ratio = ExtendedRatio::make(inst.prob(i, j), inst.prob(ip, j));
      if (jbest < 0 || ratio >= rbest) {
        jbest = j;
        rbest = ratio;
      }
    }
    Rational theta_ip;
    if (inst.prob(ip, jbest) == 0) {
      theta_ip = inst.cost(i) - inst.cost(ip);
    } else {
      Rational den = inst.prob(i, jbest) - inst.prob(ip, jbest);
      if (den <= 0) throw std::logic_error("likelihood-ratio argmax not above 1");
      theta_ip = inst.prob(i, jbest) * (inst.cost(i) - inst.cost(ip)) / den;
    }
    if (theta_ip > theta) theta = theta_ip;
    bool seen = false;
    for (int j : chosen) seen |= j == jbest;
    if (!seen) chosen.push_back(jbest);
  }
  if (chosen.empty()) chosen.push_back(inst.support_hi(i));  // single-action instance
  AmbiguousContract tau;
  for (int j : chosen) tau.add(sop(m, j, theta / inst.prob(i, j)));
  return make_result(inst, i, std::move(tau), theta);
}

SolveResult solve_general(const Instance& inst) {
  return best_over_actions(inst, &solve_general_for_action);
}

SolveResult solve_monotone_for_action(const Instance& inst, int i) {
  check_action(inst, i);
  require_distinct_rows(inst);
  const int m = inst.m();
  RatVec cum_i = upper_cumulative(inst, i);
  // Cheaper actions; others are handled by the base step at the lowest
  // support outcome.
  std::vector<int> cheaper;
  for (int ip = 0; ip < inst.n(); ++ip)
    if (inst.cost(ip) < inst.cost(i)) cheaper.push_back(ip);
  for (int ip : cheaper) {
    RatVec cum_ip = upper_cumulative(inst, ip);
    bool dominated = true;
    for (int j = 0; j < m; ++j)
      if (cum_i(j) > cum_ip(j)) {
        dominated = false;
        break;
      }
    if (dominated) {
      SolveResult r;
      r.status = "not-monotone-implementable";
      r.action = i;
      return r;
    }
  }
  Rational theta = inst.cost(i);
  std::vector<int> chosen = {inst.support_lo(i)};
  for (int ip : cheaper) {
    RatVec cum_ip = upper_cumulative(inst, ip);
    int jbest = -1;
    ExtendedRatio rbest;
    for (int j = 0; j < m; ++j) {
      if (cum_i(j) == 0) continue;
      ExtendedRatio ratio = ExtendedRatio::make(cum_i(j), cum_ip(j));
      if (jbest < 0 || ratio >= rbest) {
        jbest = j;
        rbest = ratio;
      }
    }
    Rational theta_ip;
    if (cum_ip(jbest) == 0) {
      theta_ip = inst.cost(i) - inst.cost(ip);
    } else {
      Rational den = cum_i(jbest) - cum_ip(jbest);
      if (den <= 0) throw std::logic_error("cumulative argmax not above 1 after screen");
      theta_ip = cum_i(jbest) * (inst.cost(i) - inst.cost(ip)) / den;
    }
    if (theta_ip > theta) theta = theta_ip;
    bool seen = false;
    for (int j : chosen) seen |= j == jbest;
    if (!seen) chosen.push_back(jbest);
  }
  AmbiguousContract tau;
  for (int j : chosen) tau.add(step(m, j, theta / cum_i(j)));
  return make_result(inst, i, std::move(tau), theta);
}

SolveResult solve_monotone(const Instance& inst) {
  return best_over_actions(inst, &solve_monotone_for_action, "not-monotone-implementable");
}

SupportScan support_scan(const Instance& inst) {
  if (!is_mlrp(inst))
    throw std::invalid_argument("support_scan requires the monotone likelihood ratio property");
  const int n = inst.n(), m = inst.m();
  SupportScan s;
  s.l.assign(n, 0);
  s.h.assign(n, m - 1);
  int j = 0;
  for (int i = 0; i < n; ++i) {  // l is nondecreasing in cost order
    while (inst.prob(i, j) == 0) ++j;
    s.l[i] = j;
  }
  j = m - 1;
  for (int i = n - 1; i >= 0; --i) {  // h is nondecreasing in cost order
    while (inst.prob(i, j) == 0) --j;
    s.h[i] = j;
  }
  return s;
}

namespace {

// Shared water level of the MLRP fast paths: only cheaper-indexed actions
// can bind, always at i's highest support outcome.
Rational mlrp_theta(const Instance& inst, int i, int h) {
  Rational theta = inst.cost(i);
  for (int ip = 0; ip < i; ++ip) {
    Rational den = inst.prob(i, h) - inst.prob(ip, h);
    Rational theta_ip;
    if (den <= 0) {
      if (inst.cost(ip) == inst.cost(i)) continue;  // cannot bind at equal cost
      throw std::logic_error("MLRP fast path: no likelihood advantage at h(i)");
    }
    theta_ip = inst.prob(i, h) * (inst.cost(i) - inst.cost(ip)) / den;
    if (theta_ip > theta) theta = theta_ip;
  }
  return theta;
}

}  // namespace

SolveResult solve_mlrp_for_action(const Instance& inst, int i) {
  check_action(inst, i);
  require_distinct_rows(inst);
  SupportScan s = support_scan(inst);
  const int l = s.l[i], h = s.h[i];
  Rational theta = mlrp_theta(inst, i, h);
  AmbiguousContract tau;
  tau.add(sop(inst.m(), l, theta / inst.prob(i, l)));
  tau.add(sop(inst.m(), h, theta / inst.prob(i, h)));
  return make_result(inst, i, std::move(tau), theta);
}

SolveResult solve_mlrp(const Instance& inst) {
  return best_over_actions(inst, &solve_mlrp_for_action);
}

SolveResult solve_mlrp_monotone_for_action(const Instance& inst, int i) {
  check_action(inst, i);
  require_distinct_rows(inst);
  SupportScan s = support_scan(inst);
  const int l = s.l[i], h = s.h[i];
  Rational theta = mlrp_theta(inst, i, h);
  AmbiguousContract tau;
  tau.add(step(inst.m(), l, theta));  // upper-cumulative mass at l(i) is 1
  tau.add(step(inst.m(), h, theta / inst.prob(i, h)));
  return make_result(inst, i, std::move(tau), theta);
}

SolveResult solve_mlrp_monotone(const Instance& inst) {
  return best_over_actions(inst, &solve_mlrp_monotone_for_action);
}

AmbiguousContract compress_to_sop(const Instance& inst, const AmbiguousContract& tau, int i) {
  check_action(inst, i);
  require_distinct_rows(inst);
  if (!is_consistent(inst, tau, i) || maxmin_best_response(inst, tau) != i)
    throw std::invalid_argument("compression requires a consistent set incentivizing i");
  Rational payment = expected_payment(inst, i, tau.contracts.front());
  AmbiguousContract out;
  if (inst.n() == 1) {
    int j = inst.support_hi(i);
    out.add(sop(inst.m(), j, payment / inst.prob(i, j)));
    return out;
  }
  for (int ip = 0; ip < inst.n(); ++ip) {
    if (ip == i) continue;
    int jbest = -1;
    ExtendedRatio rbest;
    for (int j = 0; j < inst.m(); ++j) {
      if (inst.prob(i, j) == 0) continue;
      ExtendedRatio ratio = ExtendedRatio::make(inst.prob(i, j), inst.prob(ip, j));
      if (jbest < 0 || ratio >= rbest) {
        jbest = j;
        rbest = ratio;
      }
    }
    out.add(sop(inst.m(), jbest, payment / inst.prob(i, jbest)));
  }
  return out;
}

AmbiguousContract compress_to_step(const Instance& inst, const AmbiguousContract& tau, int i) {
  check_action(inst, i);
  require_distinct_rows(inst);
  for (const auto& t : tau.contracts)
    if (!is_monotone(t))
      throw std::invalid_argument("step compression requires monotone contracts");
  if (!is_consistent(inst, tau, i) || maxmin_best_response(inst, tau) != i)
    throw std::invalid_argument("compression requires a consistent set incentivizing i");
  Rational payment = expected_payment(inst, i, tau.contracts.front());
  RatVec cum_i = upper_cumulative(inst, i);
  AmbiguousContract out;
  if (inst.n() == 1) {
    out.add(step(inst.m(), inst.support_lo(i), payment));
    return out;
  }
  for (int ip = 0; ip < inst.n(); ++ip) {
    if (ip == i) continue;
    RatVec cum_ip = upper_cumulative(inst, ip);
    int jbest = -1;
    ExtendedRatio rbest;
    for (int j = 0; j < inst.m(); ++j) {
      if (cum_i(j) == 0) continue;
      ExtendedRatio ratio = ExtendedRatio::make(cum_i(j), cum_ip(j));
      if (jbest < 0 || ratio >= rbest) {
        jbest = j;
        rbest = ratio;
      }
    }
    out.add(step(inst.m(), jbest, payment / cum_i(jbest)));
  }
  return out;
}

std::vector<CertItem> validate(const Instance& inst, const AmbiguousContract& tau, int i) {
  check_action(inst, i);
  std::vector<CertItem> cert;
  cert.push_back({"consistency", is_consistent(inst, tau, i)});
  Rational u = min_agent_utility(inst, i, tau);
  bool ic = true;
  for (int ip = 0; ip < inst.n(); ++ip)
    if (min_agent_utility(inst, ip, tau) > u) ic = false;
  cert.push_back({"incentive-compatibility", ic});
  cert.push_back({"tie-break", maxmin_best_response(inst, tau) == i});
  cert.push_back({"individual-rationality", u >= 0});
  return cert;
}

bool validates(const Instance& inst, const AmbiguousContract& tau, int i) {
  for (const auto& item : validate(inst, tau, i))
    if (!item.pass) return false;
  return true;
}

}  // namespace ambicon::ambiguous
