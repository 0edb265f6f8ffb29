#pragma once

#include <cstddef>

#include "subshift/prefix_suffix.hpp"

namespace subshift {

/// 1 -> 14, 2 -> 14224, 3 -> 14(23)^{n+1}24, 4 -> 14(23)^n 24.
Substitution sigma_family(unsigned n);

/// X^4 - (6+n)X^3 + (10+n)X^2 - (6+n)X + 1.
IntPolynomial salem_closed_form(unsigned n);

/// Closed rational interval.
struct Interval {
  Rational lo, hi;
};

struct SalemReport {
  unsigned n = 0;
  IntMatrix matrix;
  IntPolynomial char_poly;
  bool matches_closed_form = false;
  bool reciprocal = false;
  /// s, t are the roots of Y^2 - (s+t)Y + st with Y = X + 1/X.
  Rational s_plus_t, s_times_t;
  Interval s, t;
  bool s_inside = false;    // s in (-2, 2): two conjugates on the unit circle
  bool t_above_two = false; // t > 2: a real root above 1
  bool irreducible = false;
  bool salem = false;
};

/// Works on the computed characteristic polynomial; bits sets the width of the square-root bracket.
SalemReport salem_check(unsigned n, unsigned bits = 64);
SalemReport salem_check_polynomial(const IntPolynomial& p, unsigned bits = 64);

struct CoboProbe {
  std::size_t horizon = 0;
  double forward_sum = 0;   // sum_{n=1..h} exp(-gamma(x_0 ... x_{n-1}))
  double backward_sum = 0;  // sum_{n=1..h} exp(gamma(x_{-n} ... x_{-1}))
  std::size_t forward_small = 0;   // n with |S_n| < C
  std::size_t backward_small = 0;
  double certified_lower_bound = 0; // (forward_small + backward_small) e^{-C}
};

CoboProbe cobo_divergence_probe(const WeightVector& gamma, const SymbolicPoint& point, std::size_t horizon,
                                const Rational& constant);

}  // namespace subshift
