#include "ambicon/manipulability.hpp"

#include "ambicon/ambiguous.hpp"
#include "ambicon/lp.hpp"

namespace ambicon::manipulability {

ContractCurve ContractCurve::linear(const Rational& alpha) {
  if (alpha < 0) throw std::invalid_argument("linear curve needs a nonnegative coefficient");
  ContractCurve c;
  c.kind_ = Kind::Linear;
  c.alpha_ = alpha;
  return c;
}

ContractCurve ContractCurve::power(const Rational& alpha, unsigned long degree) {
  if (alpha < 0) throw std::invalid_argument("power curve needs a nonnegative coefficient");
  ContractCurve c;
  c.kind_ = Kind::Power;
  c.alpha_ = alpha;
  c.degree_ = degree;
  return c;
}

ContractCurve ContractCurve::polynomial(std::vector<Rational> coeffs) {
  for (const auto& a : coeffs)
    if (a < 0) throw std::invalid_argument("polynomial curve needs nonnegative coefficients");
  ContractCurve c;
  c.kind_ = Kind::Polynomial;
  c.coeffs_ = std::move(coeffs);
  return c;
}

ContractCurve ContractCurve::table(std::vector<std::pair<Rational, Rational>> points) {
  for (size_t a = 0; a < points.size(); ++a) {
    if (points[a].second < 0)
      throw std::invalid_argument("table curve needs nonnegative payments");
    for (size_t b = a + 1; b < points.size(); ++b)
      if (points[a].first == points[b].first)
        throw std::invalid_argument("table curve needs distinct x values");
  }
  ContractCurve c;
  c.kind_ = Kind::Table;
  c.points_ = std::move(points);
  return c;
}

Rational ContractCurve::eval(const Rational& x) const {
  if (x < 0) throw std::invalid_argument("curves are defined on nonnegative rewards");
  switch (kind_) {
    case Kind::Linear:
      return alpha_ * x;
    case Kind::Power:
      return alpha_ * rational_pow(x, degree_);
    case Kind::Polynomial: {
      Rational acc = 0;
      for (size_t k = coeffs_.size(); k-- > 0;) acc = acc * x + coeffs_[k];
      return acc;
    }
    case Kind::Table:
      for (const auto& [px, py] : points_)
        if (px == x) return py;
      throw std::invalid_argument("table curve evaluated off its points");
  }
  throw std::logic_error("unreachable");
}

Contract ContractCurve::on_rewards(const RatVec& rewards) const {
  Contract t(rewards.size());
  for (int j = 0; j < rewards.size(); ++j) t(j) = eval(rewards(j));
  return t;
}

std::optional<Crossing> crossing_points(const ContractCurve& t, const ContractCurve& tp,
                                        const std::vector<Rational>& grid) {
  if (grid.empty()) throw std::invalid_argument("empty crossing grid");
  for (const auto& x1 : grid) {
    if (!(t.eval(x1) > tp.eval(x1))) continue;
    for (const auto& x2 : grid)
      if (t.eval(x2) < tp.eval(x2)) return Crossing{x1, x2};
  }
  return std::nullopt;
}

NpcReport npc_check(const std::vector<ContractCurve>& family,
                    const std::vector<Rational>& grid) {
  bool all_linear = !family.empty();
  bool all_same_power = !family.empty();
  for (const auto& c : family) all_linear &= c.kind() == ContractCurve::Kind::Linear;
  if (!family.empty() && family.front().kind() == ContractCurve::Kind::Power) {
    // Fixed-exponent power families are pointwise ordered by coefficient.
    for (const auto& c : family) all_same_power &= c.kind() == ContractCurve::Kind::Power;
    // The exponent check needs evaluation-free access; compare behavior at a
    // couple of points instead of private fields: curves with equal exponent
    // have proportional values everywhere, so cross-ratios at 2 and 3 agree.
    if (all_same_power)
      for (const auto& c : family)
        if (family.front().eval(2) * c.eval(3) != family.front().eval(3) * c.eval(2)) {
          // Zero-coefficient curves are proportional to everything.
          if (c.eval(2) != 0 || c.eval(3) != 0)
            if (family.front().eval(2) != 0 || family.front().eval(3) != 0)
              all_same_power = false;
        }
  } else {
    all_same_power = false;
  }
  NpcReport rep;
  if (all_linear || all_same_power) {
    rep.status = NpcStatus::HoldsAnalytically;
    return rep;
  }
  for (size_t a = 0; a < family.size(); ++a)
    for (size_t b = 0; b < family.size(); ++b) {
      if (a == b) continue;
      if (auto cr = crossing_points(family[a], family[b], grid)) {
        rep.status = NpcStatus::Violated;
        rep.first = static_cast<int>(a);
        rep.second = static_cast<int>(b);
        rep.at = *cr;
        return rep;
      }
    }
  rep.status = NpcStatus::HoldsOnGrid;
  return rep;
}

std::pair<Rational, Rational> q_from_crossing(const ContractCurve& t, const ContractCurve& tp,
                                              const Rational& x1, const Rational& x2) {
  Rational d1 = t.eval(x1) - tp.eval(x1);
  Rational d2 = t.eval(x2) - tp.eval(x2);
  if (!(d1 > 0 && d2 < 0)) throw std::invalid_argument("not a proper crossing");
  Rational q1 = -d2 / (d1 - d2);
  Rational q2 = d1 / (d1 - d2);
  // Balance: q1*t(x1) + q2*t(x2) == q1*t'(x1) + q2*t'(x2), by construction.
  if (q1 * d1 + q2 * d2 != 0) throw std::logic_error("crossing balance failed");
  return {q1, q2};
}

Witness build_witness(const ContractCurve& t, const ContractCurve& tp, const RatVec& rewards,
                      const RatVec& q) {
  const int m = static_cast<int>(rewards.size());
  if (q.size() != m) throw std::invalid_argument("distribution length mismatch");
  Rational qsum = 0;
  for (int j = 0; j < m; ++j) {
    if (q(j) < 0) throw std::invalid_argument("negative probability");
    qsum += q(j);
  }
  if (qsum != 1) throw std::invalid_argument("distribution does not sum to 1");
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      if (rewards(a) == rewards(b)) throw std::invalid_argument("rewards must be distinct");

  Rational pay_t = 0, pay_tp = 0;
  bool separated = false;
  for (int j = 0; j < m; ++j) {
    pay_t += q(j) * t.eval(rewards(j));
    pay_tp += q(j) * tp.eval(rewards(j));
    if (q(j) > 0 && t.eval(rewards(j)) != tp.eval(rewards(j))) separated = true;
  }
  if (pay_t != pay_tp)
    throw std::invalid_argument("curves are not balanced under the distribution");
  if (!separated)
    throw std::invalid_argument("curves coincide on the support of the distribution");

  RatVec costs(m + 1);
  RatMat probs = RatMat::Zero(m + 1, m);
  for (int i = 0; i < m; ++i) {
    probs(i, i) = 1;
    costs(i) = std::min(t.eval(rewards(i)), tp.eval(rewards(i)));
  }
  costs(m) = pay_t;
  for (int j = 0; j < m; ++j) probs(m, j) = q(j);
  Instance inst(costs, rewards, probs);
  int target = inst.action_from_original(m);

  AmbiguousContract tau;
  tau.add(t.on_rewards(inst.rewards()));
  tau.add(tp.on_rewards(inst.rewards()));

  // The pipeline's guarantees, re-verified exactly.
  if (!ambiguous::validates(inst, tau, target))
    throw std::logic_error("witness ambiguous pair fails validation");
  if (expected_payment(inst, target, tau.contracts.front()) != costs(m))
    throw std::logic_error("witness payment is not at cost");
  if (lp::implementable(inst, target))
    throw std::logic_error("witness action is implementable by a single contract");

  RatVec qs(m);  // q in the instance's sorted outcome order
  for (int j = 0; j < m; ++j) qs(j) = inst.prob(target, j);
  return Witness{t.on_rewards(inst.rewards()), tp.on_rewards(inst.rewards()),
                 qs, inst, target, tau};
}

namespace {

Instance strict_improvement_instance() {
  RatVec costs(3), rewards(3);
  costs << 0, 0, 1;
  rewards << 0, 4, 8;
  RatMat probs(3, 3);
  probs << Rational(1, 2), Rational(1, 2), 0,
      Rational(3, 4), 0, Rational(1, 4),
      Rational(1, 4), Rational(1, 2), Rational(1, 4);
  return Instance(costs, rewards, probs);
}

}  // namespace

std::vector<ClassRow> analyze_builtin_classes(const std::vector<Rational>& grid) {
  std::vector<ClassRow> rows;
  rows.push_back({"linear", "non-manipulable", "holds-analytically"});
  rows.push_back({"power-2", "non-manipulable", "holds-analytically"});

  {  // Polynomial class: x^2 vs x^4 cross properly.
    ContractCurve sq = ContractCurve::power(1, 2);
    ContractCurve quart = ContractCurve::power(1, 4);
    auto cr = crossing_points(sq, quart, grid);
    if (cr) {
      auto [q1, q2] = q_from_crossing(sq, quart, cr->x1, cr->x2);
      RatVec r(2), q(2);
      r << cr->x1, cr->x2;
      q << q1, q2;
      Witness w = build_witness(sq, quart, r, q);
      rows.push_back({"polynomial", "manipulable",
                      "witness: x^2 vs x^4 crossing at (" + rational_to_string(cr->x1) +
                          ", " + rational_to_string(cr->x2) + "), mixed action at cost " +
                          rational_to_string(w.instance.cost(w.target))});
    } else {
      rows.push_back({"polynomial", "manipulable",
                      "crossing not on supplied grid; include 1/2 and 2"});
    }
  }

  {  // Monotone class: a crossing pair of step payments.
    RatVec r(3), q(3);
    r << 0, 4, 8;
    q << Rational(1, 2), Rational(1, 4), Rational(1, 4);
    ContractCurve lo = ContractCurve::table({{0, 0}, {4, 2}, {8, 2}});
    ContractCurve hi = ContractCurve::table({{0, 0}, {4, 0}, {8, 4}});
    Witness w = build_witness(lo, hi, r, q);
    rows.push_back({"monotone", "manipulable",
                    "witness: steps (0,2,2) vs (0,0,4) on rewards (0,4,8), mixed action at cost " +
                        rational_to_string(w.instance.cost(w.target))});
  }

  {  // Unrestricted contracts: the strict-improvement instance, ratio 3/2.
    Instance inst = strict_improvement_instance();
    Rational single = lp::optimal_single(inst).principal_utility;
    Rational amb = ambiguous::solve_general(inst).principal_utility;
    Rational ratio = amb / single;
    rows.push_back({"all-contracts", "manipulable",
                    "3x3 strict-improvement instance, utility ratio " +
                        rational_to_string(ratio)});
  }
  return rows;
}

}  // namespace ambicon::manipulability
