#pragma once

// Shared instance builders for the test suite.

#include "ambicon/model.hpp"

#include <initializer_list>

namespace ambicon::testing {

inline Rational Q(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline bool eq(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) return false;
  for (int j = 0; j < a.size(); ++j)
    if (a(j) != b(j)) return false;
  return true;
}

inline RatVec vec(std::initializer_list<Rational> xs) {
  RatVec v(static_cast<int>(xs.size()));
  int k = 0;
  for (const auto& x : xs) v(k++) = x;
  return v;
}

inline RatMat mat(std::initializer_list<std::initializer_list<Rational>> rows) {
  int r = static_cast<int>(rows.size());
  int c = static_cast<int>(rows.begin()->size());
  RatMat m(r, c);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (const auto& x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

// Three actions, three outcomes; the classic strict-improvement instance:
// single-contract optimum 2, ambiguous optimum 3.
inline Instance example1() {
  return Instance(vec({0, 0, 1}), vec({0, 4, 8}),
                  mat({{Q(1, 2), Q(1, 2), 0},
                       {Q(3, 4), 0, Q(1, 4)},
                       {Q(1, 4), Q(1, 2), Q(1, 4)}}));
}

// Four actions, six outcomes, satisfies the monotone likelihood ratio
// property; single best 2.987 via action 4, ambiguous best 3.095 via action 3.
inline Instance mlrp4x6() {
  return Instance(
      vec({Q(1, 10), 1, 2, Q(11, 5)}),
      vec({1, 2, 5, Q(51, 10), Q(26, 5), Q(53, 10)}),
      mat({{Q(2, 5), Q(2, 5), Q(1, 5), 0, 0, 0},
           {0, Q(7, 20), Q(7, 20), Q(3, 10), 0, 0},
           {0, 0, Q(2, 5), Q(7, 20), Q(3, 20), Q(1, 10)},
           {0, 0, 0, Q(19, 50), Q(37, 100), Q(1, 4)}}));
}

}  // namespace ambicon::testing
