#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "subshift/ergodic_bounds.hpp"
#include "subshift/salem.hpp"

using namespace subshift;

TEST_CASE("family images") {
  const auto one = sigma_family(1);
  CHECK(one.format(one.image(0)) == "14");
  CHECK(one.format(one.image(1)) == "14224");
  CHECK(one.format(one.image(2)) == "14232324");
  CHECK(one.format(one.image(3)) == "142324");
  for (unsigned n = 1; n <= 20; ++n) {
    const auto s = sigma_family(n);
    CHECK(image_lengths(s, 1) == std::vector<std::uint64_t>{2, 5, 2 * n + 6, 2 * n + 4});
    CHECK(is_primitive(s));
  }
}

TEST_CASE("salem property for n up to 50") {
  for (unsigned n = 1; n <= 50; ++n) {
    const auto r = salem_check(n);
    CAPTURE(n);
    CHECK(r.char_poly == salem_closed_form(n));
    CHECK(r.matches_closed_form);
    CHECK(r.reciprocal);
    CHECK(r.s_inside);
    CHECK(r.t_above_two);
    CHECK(r.irreducible);
    CHECK(r.salem);
    CHECK(r.s_plus_t == 6 + n);
    CHECK(r.s.lo <= r.s.hi);
    CHECK(r.t.lo > 2);
    CHECK(r.s_times_t == 8 + n);
  }
}

TEST_CASE("closed form against a direct evaluation") {
  for (unsigned n = 1; n <= 10; ++n) {
    const auto p = salem_closed_form(n);
    for (long x = -3; x <= 3; ++x) {
      const long v = x * x * x * x - (6 + n) * x * x * x + (10 + n) * x * x - (6 + n) * x + 1;
      CHECK(p.evaluate(Rational(x)) == v);
    }
  }
}

TEST_CASE("non-salem polynomials") {
  // (X^2 - 3X + 1)(X^2 + X + 1)
  const auto f = salem_check_polynomial(IntPolynomial::from_high({1, -3, 1}) * IntPolynomial::from_high({1, 1, 1}));
  CHECK(f.reciprocal);
  CHECK_FALSE(f.irreducible);
  CHECK_FALSE(f.salem);
  const auto g = salem_check_polynomial(IntPolynomial::from_high({1, 0, 2, 0, 1}));
  CHECK_FALSE(g.salem);
  const auto h = salem_check_polynomial(IntPolynomial::from_high({1, -7, 11, -6, 1}));
  CHECK_FALSE(h.reciprocal);
  CHECK_FALSE(h.salem);
}

TEST_CASE("divergence probe") {
  const auto s = test::sub("1:112;2:221");
  const auto g = test::gamma1(s);
  const auto c = theorem1_constant(s, g);
  const auto point = sample_point(s, 12, 3, 2000);
  const auto zero = cobo_divergence_probe(g, point, 0, c);
  CHECK(zero.certified_lower_bound == 0);
  double last = 0;
  for (std::size_t h : {10, 100, 1000}) {
    const auto p = cobo_divergence_probe(g, point, h, c);
    CHECK(p.certified_lower_bound > last);
    CHECK(p.forward_small + p.backward_small > 0);
    CHECK(p.forward_sum >= p.forward_small * std::exp(-c.get_d()) - 1e-12);
    last = p.certified_lower_bound;
  }
  CHECK_THROWS_AS(cobo_divergence_probe(g, point, 5000, c), Error);
}
