#pragma once

// Manipulability of contract classes: payment curves over reward values,
// proper-crossing detection, no-proper-crossing (NPC) checks, and the
// constructive witness pipeline (crossing -> balancing distribution ->
// an instance where an ambiguous pair beats every single contract).

#include "ambicon/model.hpp"

#include <optional>
#include <utility>

namespace ambicon::manipulability {

// A payment function over nonnegative reward values, exact-rational valued.
class ContractCurve {
 public:
  enum class Kind { Linear, Power, Polynomial, Table };

  static ContractCurve linear(const Rational& alpha);
  // alpha * x^degree; integer degree keeps evaluations rational.
  static ContractCurve power(const Rational& alpha, unsigned long degree);
  // sum_k coeffs[k] * x^k with nonnegative coefficients.
  static ContractCurve polynomial(std::vector<Rational> coeffs);
  // Explicit (x, t(x)) points with distinct x; evaluation off the points errors.
  static ContractCurve table(std::vector<std::pair<Rational, Rational>> points);

  Kind kind() const { return kind_; }
  Rational eval(const Rational& x) const;
  // Pointwise payments on a reward vector.
  Contract on_rewards(const RatVec& rewards) const;

 private:
  ContractCurve() = default;
  Kind kind_ = Kind::Linear;
  Rational alpha_;
  unsigned long degree_ = 1;
  std::vector<Rational> coeffs_;
  std::vector<std::pair<Rational, Rational>> points_;
};

struct Crossing {
  Rational x1, x2;  // t(x1) > t'(x1) and t(x2) < t'(x2)
};

// Grid points realizing a proper crossing of the two curves, if any.
std::optional<Crossing> crossing_points(const ContractCurve& t, const ContractCurve& tp,
                                        const std::vector<Rational>& grid);

enum class NpcStatus { HoldsAnalytically, HoldsOnGrid, Violated };

struct NpcReport {
  NpcStatus status = NpcStatus::HoldsOnGrid;
  // Populated when status == Violated.
  int first = -1, second = -1;
  Crossing at;
};

// Linear families and fixed-exponent power families are pointwise ordered by
// their coefficient, so NPC holds analytically; other families are checked
// pairwise on the grid (a sample, never a proof).
NpcReport npc_check(const std::vector<ContractCurve>& family,
                    const std::vector<Rational>& grid);

// The balancing two-point distribution of a proper crossing: with
// d1 = t(x1) - t'(x1) > 0 and d2 = t(x2) - t'(x2) < 0, returns
// (-d2/(d1-d2), d1/(d1-d2)); both positive, summing to 1, and equalizing the
// two curves' expected payments.
std::pair<Rational, Rational> q_from_crossing(const ContractCurve& t, const ContractCurve& tp,
                                              const Rational& x1, const Rational& x2);

struct Witness {
  Contract t_on_r, tp_on_r;  // the two curves restricted to the rewards
  RatVec q;                  // balancing distribution over rewards
  Instance instance;         // m point-mass actions plus the mixed action
  int target;                // internal index of the mixed action
  AmbiguousContract tau;     // {t|_r, t'|_r}, incentivizes target at cost
};

// Builds the (m+1)-action instance in which the ambiguous pair {t, t'}
// incentivizes the mixed action at cost while no single contract can
// (verified exactly; failure would be an internal inconsistency).
Witness build_witness(const ContractCurve& t, const ContractCurve& tp, const RatVec& rewards,
                      const RatVec& q);

struct ClassRow {
  std::string name;     // e.g. "linear", "power-2", "polynomial"
  std::string verdict;  // "non-manipulable" or "manipulable"
  std::string detail;   // analytic basis or witness description
};

// The built-in classification table: linear and fixed-exponent power classes
// are non-manipulable; polynomial, monotone, and unrestricted classes carry
// constructive witnesses.
std::vector<ClassRow> analyze_builtin_classes(const std::vector<Rational>& grid);

}  // namespace ambicon::manipulability
