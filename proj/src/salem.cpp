#include "subshift/salem.hpp"

#include <cmath>

namespace subshift {

Substitution sigma_family(unsigned n) {
  if (n < 1) throw Error("sigma_family needs n >= 1");
  auto tail = [](unsigned reps) {
    Word w{0, 3};
    for (unsigned i = 0; i < reps; ++i) {
      w.push_back(1);
      w.push_back(2);
    }
    w.push_back(1);
    w.push_back(3);
    return w;
  };
  return Substitution({Word{0, 3}, Word{0, 3, 1, 1, 3}, tail(n + 1), tail(n)});
}

IntPolynomial salem_closed_form(unsigned n) {
  const long m = static_cast<long>(n);
  return IntPolynomial::from_high({1, -(6 + m), 10 + m, -(6 + m), 1});
}

namespace {

// [floor(sqrt(v) 2^bits), +1] / 2^bits
Interval sqrt_bracket(const Integer& v, unsigned bits) {
  Integer scaled = v << (2 * bits);
  Integer r;
  mpz_sqrt(r.get_mpz_t(), scaled.get_mpz_t());
  Integer denom = Integer(1) << bits;
  Interval out{Rational(r, denom), Rational(r * r == scaled ? r : r + 1, denom)};
  out.lo.canonicalize();
  out.hi.canonicalize();
  return out;
}

}  // namespace

SalemReport salem_check_polynomial(const IntPolynomial& p, unsigned bits) {
  SalemReport rep;
  rep.char_poly = p;
  rep.reciprocal = p.degree() == 4 && p.leading() == 1 && p.is_palindromic();
  if (!rep.reciprocal) return rep;

  // P = X^2 (Y^2 + aY + b - 2), Y = X + 1/X
  const Integer a = p.coefficient(3), b = p.coefficient(2);
  rep.s_plus_t = Rational(-a);
  rep.s_times_t = Rational(b - 2);
  const Integer disc = a * a - 4 * (b - 2);
  if (disc > 0) {
    const auto root = sqrt_bracket(disc, bits);
    rep.s = Interval{(Rational(-a) - root.hi) / 2, (Rational(-a) - root.lo) / 2};
    rep.t = Interval{(Rational(-a) + root.lo) / 2, (Rational(-a) + root.hi) / 2};
    rep.s_inside = rep.s.lo > -2 && rep.s.hi < 2;
    rep.t_above_two = rep.t.lo > 2;
  }

  const bool no_linear = p.evaluate(Rational(1)) != 0 && p.evaluate(Rational(-1)) != 0;
  bool no_cyclotomic = true;
  for (const auto& c : {IntPolynomial::from_high({1, 1, 1}), IntPolynomial::from_high({1, 0, 1}),
                        IntPolynomial::from_high({1, -1, 1})}) {
    if (p.remainder(c).is_zero()) no_cyclotomic = false;
  }
  // with s in (-2,2) any factorization would put the unit-circle pair in a cyclotomic quadratic
  rep.irreducible = no_linear && no_cyclotomic && rep.s_inside;
  rep.salem = rep.reciprocal && rep.irreducible && rep.s_inside && rep.t_above_two;
  return rep;
}

SalemReport salem_check(unsigned n, unsigned bits) {
  const auto m = matrix_of(sigma_family(n));
  auto rep = salem_check_polynomial(char_poly(m), bits);
  rep.n = n;
  rep.matrix = m;
  rep.matches_closed_form = rep.char_poly == salem_closed_form(n);
  rep.salem = rep.salem && rep.matches_closed_form;
  return rep;
}

CoboProbe cobo_divergence_probe(const WeightVector& gamma, const SymbolicPoint& point, std::size_t horizon,
                                const Rational& constant) {
  if (point.right.size() < horizon || point.left.size() < horizon) {
    throw Error("cobo probe: window shorter than the horizon");
  }
  CoboProbe p;
  p.horizon = horizon;
  Rational fwd = 0, bwd = 0;
  for (std::size_t n = 1; n <= horizon; ++n) {
    fwd += gamma[point.right[n - 1]];
    bwd += gamma[point.left[point.left.size() - n]];
    p.forward_sum += std::exp(-fwd.get_d());
    p.backward_sum += std::exp(bwd.get_d());
    if (abs_value(fwd) < constant) ++p.forward_small;
    if (abs_value(bwd) < constant) ++p.backward_small;
  }
  p.certified_lower_bound = static_cast<double>(p.forward_small + p.backward_small) * std::exp(-constant.get_d());
  return p;
}

}  // namespace subshift
