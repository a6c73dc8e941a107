#pragma once

// Exact rational scalar type and dense linear-algebra containers.
// All arithmetic in the library is exact; floating point appears only in
// numeric sanity checks and human-readable decimal approximations.

#include <gmpxx.h>

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace ambicon {

using Rational = mpq_class;

}  // namespace ambicon

namespace Eigen {

template <>
struct NumTraits<ambicon::Rational> : GenericNumTraits<ambicon::Rational> {
  typedef ambicon::Rational Real;
  typedef ambicon::Rational NonInteger;
  typedef ambicon::Rational Nested;

  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }

  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100,
  };
};

}  // namespace Eigen

namespace ambicon {

using RatVec = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using RatMat = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;

// Parses "p/q", an optionally signed integer, or an exact decimal such as
// "0.25" (-> 1/4). Throws std::invalid_argument on malformed input.
Rational parse_rational(const std::string& s);

// Canonical rendering: reduced fraction with positive denominator, printed as
// "p" when the denominator is 1 and "p/q" otherwise.
std::string rational_to_string(const Rational& q);

// Decimal approximation with `sig` significant digits (deterministic,
// round-half-away-from-zero). For reporting only; never used in computations.
std::string decimal_approx(const Rational& q, int sig = 12);

inline double to_double(const Rational& q) { return q.get_d(); }

// Floor of a rational as an arbitrary-precision integer.
mpz_class rational_floor(const Rational& q);

// q^k for integer k >= 0.
Rational rational_pow(const Rational& q, unsigned long k);

}  // namespace ambicon
