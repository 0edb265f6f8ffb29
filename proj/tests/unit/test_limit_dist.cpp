#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <map>

#include "helpers.hpp"
#include "subshift/limit_dist.hpp"

using namespace subshift;

namespace {

struct Config {
  const char* rules;
  const char* digits;
};

// law of the chain sum by enumerating all d^n position sequences
std::map<Rational, Rational> brute_law(const ChainFamily& f, const std::vector<unsigned>& digits, std::size_t n) {
  std::map<Rational, Rational> law;
  const std::size_t d = f.d;
  std::size_t paths = 1;
  for (std::size_t i = 0; i < n; ++i) paths *= d;
  const Rational p_path(1, static_cast<unsigned long>(paths));
  for (const auto& e : f.init.entries) {
    for (std::size_t code = 0; code < paths; ++code) {
      std::size_t s = e.state, c = code;
      Rational sum = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const auto& edge = f.layers[f.simplified ? 0 : digits[k]].out[s][c % d];
        c /= d;
        sum += edge.payoff;
        s = edge.target;
      }
      law[sum] += e.probability * p_path;
    }
  }
  return law;
}

std::vector<std::pair<double, double>> as_double(const std::map<Rational, Rational>& law) {
  std::vector<std::pair<double, double>> out;
  for (const auto& [v, p] : law) out.emplace_back(v.get_d(), p.get_d());
  return out;
}

}  // namespace

TEST_CASE("digit streams") {
  const auto half = DigitStream::from_rational(3, test::q(1, 2));
  CHECK(half.leading() == 1);
  CHECK(half.shift() == -1);
  CHECK(half.digits(5) == std::vector<unsigned>{1, 1, 1, 1, 1});
  const auto seven = DigitStream::from_rational(2, test::q(7, 4));
  CHECK(seven.finite());
  CHECK(seven.digits(4) == std::vector<unsigned>{1, 1, 0, 0});
  CHECK(seven.horizon(3) == 14);
  const auto p = DigitStream::parse(3, "2,0,1:12");
  CHECK(p.leading() == 2);
  CHECK(p.preperiod() == std::vector<unsigned>{0, 1});
  CHECK(p.digits(6) == std::vector<unsigned>{0, 1, 1, 2, 1, 2});
  CHECK(DigitStream::parse(2, "1:0").finite());
  CHECK_THROWS_AS(DigitStream::parse(3, "1,3"), Error);
  CHECK_THROWS_AS(DigitStream::parse(3, "0,1"), Error);
  const auto r = DigitStream::random(3, 1, 5);
  CHECK(r.digits(30) == DigitStream::random(3, 1, 5).digits(30));
  const auto long_run = r.digits(30);
  CHECK(r.digits(10) == std::vector<unsigned>(long_run.begin(), long_run.begin() + 10));
}

TEST_CASE("exact distribution against path enumeration") {
  for (const Config& c : {Config{"1:112;2:221", "1:1"}, Config{"1:112;2:221", "2,0,2,1"}, Config{"1:12;2:13;3:23", "1,1"},
                          Config{"1:11212;2:22121", "3:24"}}) {
    const auto s = test::sub(c.rules);
    const auto g = test::gamma1(s);
    const auto stream = DigitStream::parse(static_cast<unsigned>(*constant_length(s)), c.digits);
    const auto f = make_family(s, g, stream);
    const auto digits = stream.digits(6);
    for (std::size_t n = 0; n <= 4; ++n) {
      const auto dp = exact_sum_distribution(f, digits, n);
      CHECK(dp.total_mass() == 1);
      CHECK(ks_discrete(dp.marginal_double(), as_double(brute_law(f, digits, n))) < 1e-12);
    }
    CHECK(exact_sum_distribution(f, digits, 0).support_range() == std::make_pair(Rational(0), Rational(0)));
  }
}

TEST_CASE("word sums match counts along a long orbit") {
  for (const Config& c : {Config{"1:112;2:221", "1"}, Config{"1:112;2:221", "2,1,0,2"}, Config{"1:12;2:13;3:23", "1,1"},
                          Config{"1:12;2:13;3:23", "1:1"}}) {
    const auto s = test::sub(c.rules);
    const auto g = test::gamma1(s);
    const auto stream = DigitStream::parse(static_cast<unsigned>(*constant_length(s)), c.digits);
    const auto f = make_family(s, g, stream);
    const std::size_t n = *constant_length(s) == 3 ? 3 : 5;
    DistributionOptions opt;
    opt.kind = SumKind::word;
    const auto dp = exact_sum_distribution(f, stream.digits(n), n, opt);
    const std::size_t horizon = stream.horizon(n).get_ui();
    const Word orbit = iterate_prefix(s, 0, 1'000'000);
    std::vector<long> prefix{0};
    for (Letter x : orbit) prefix.push_back(prefix.back() + g[x].get_num().get_si());
    std::map<double, double> counts;
    const std::size_t windows = orbit.size() - horizon;
    for (std::size_t i = 0; i < windows; ++i) counts[double(prefix[i + horizon] - prefix[i])] += 1.0 / windows;
    CHECK(ks_discrete(dp.marginal_double(), {counts.begin(), counts.end()}) < 1e-3);
  }
}

TEST_CASE("support cap") {
  const auto s = test::sub("1:112;2:221");
  const auto stream = DigitStream::parse(3, "1:1");
  const auto f = make_family(s, test::gamma1(s), stream);
  DistributionOptions opt;
  opt.support_cap = 50;
  try {
    exact_sum_distribution(f, stream.digits(40), 40, opt);
    FAIL("cap not reported");
  } catch (const SupportCapExceeded& e) {
    CHECK(e.reached_n() > 1);
  }
}

TEST_CASE("monte carlo agrees with the exact law and is reproducible") {
  const auto s = test::sub("1:112;2:221");
  const auto g = test::gamma1(s);
  const auto stream = DigitStream::parse(3, "1,0:21");
  const auto f = make_family(s, g, stream);
  const auto digits = stream.digits(6);
  const auto dp = exact_sum_distribution(f, digits, 6);
  const auto a = monte_carlo(f, digits, 6, 40000, 9);
  CHECK(ks_sample_vs_discrete(a.values, dp.marginal_double()) <= 3 / std::sqrt(40000.0));
  const auto b = monte_carlo(f, digits, 6, 40000, 9);
  CHECK(a.scaled == b.scaled);
  setenv("SUBSHIFT_LAB_THREADS", "1", 1);
  CHECK(worker_count() == 1);
  const auto c = monte_carlo(f, digits, 6, 40000, 9);
  unsetenv("SUBSHIFT_LAB_THREADS");
  CHECK(a.scaled == c.scaled);
  CHECK(monte_carlo(f, digits, 6, 1000, 10).scaled != a.scaled);
  const auto m = moments(a.values);
  CHECK(std::abs(m.mean) <= 5 * std::sqrt(m.variance / 40000));
  CHECK_THROWS_AS(monte_carlo(f, digits, 6, 0, 1), Error);
}

TEST_CASE("word and chain identity along random points") {
  for (const char* rules : {"1:112;2:221", "1:12;2:13;3:23", "1:11212;2:22121"}) {
    const auto s = test::sub(rules);
    const auto g = test::gamma1(s);
    const auto d = static_cast<unsigned>(*constant_length(s));
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto stream = DigitStream::random(d, 1 + seed % (d - 1), seed);
      const std::size_t n = d == 5 ? 4 : 6;
      const auto r = word_vs_chain_check(s, g, stream, n, 100 + seed);
      CHECK(r.word_sum == r.chain_sum + r.first_letter);
      CHECK(r.final_letter_matches);
      CHECK(r.discrepancy <= 3 * g.max_abs());
    }
  }
  const auto s = test::sub("1:112;2:221");
  const auto r = word_vs_chain_check(s, test::gamma1(s), DigitStream::parse(3, "2"), 0, 1);
  CHECK(r.horizon == 2);
  CHECK(r.discrepancy <= 3);
}

TEST_CASE("mixture predictions") {
  const auto s = test::sub("1:112;2:221");
  const auto g = test::gamma1(s);
  const auto zero = mixture_prediction(s, g, DigitStream::parse(3, "1"), true);
  REQUIRE(zero.components.size() == 2);
  CHECK(zero.p0 == test::q(1, 2));
  CHECK(zero.components[1].variance == test::q(8, 3));
  const auto ones = mixture_prediction(s, g, DigitStream::parse(3, "1:1"));
  REQUIRE(ones.components.size() == 1);
  CHECK(ones.p0 == 0);
  CHECK(ones.components[0].weight == 1);
  const auto t = test::sub("1:12;2:13;3:23");
  const auto fin = mixture_prediction(t, test::gamma1(t), DigitStream::parse(2, "1,1,0,1"));
  CHECK(fin.p0 == 1);
  CHECK_THROWS_AS(mixture_prediction(s, g, DigitStream::random(3, 1, 1)), Error);
  CHECK_THROWS_AS(make_family(s, g, DigitStream::parse(3, "1,1"), true), Error);
}

TEST_CASE("variance growth") {
  const auto s = test::sub("1:112;2:221");
  const auto g = test::gamma1(s);
  GrowthOptions opt;
  opt.n_min = 20;
  opt.n_max = 80;
  opt.exact = true;
  const auto homogeneous = variance_growth(s, g, DigitStream::parse(3, "1:1"), opt);
  CHECK(homogeneous.slope == doctest::Approx(1).epsilon(0.03));
  for (std::size_t n = 1; n < homogeneous.variance.size(); ++n)
    CHECK(homogeneous.variance[n] <= 16.0 * static_cast<double>(n + 1) + 1e-9);
  const auto t = test::sub("1:12;2:13;3:23");
  const auto bounded = variance_growth(t, test::gamma1(t), DigitStream::parse(2, "1,1"), opt);
  CHECK(std::abs(bounded.slope) < 0.05);
  const auto fit = fit_growth({1, 2, 4, 8}, {3, 6, 12, 24}, 1, 8);
  CHECK(fit.slope == doctest::Approx(1));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)));
}

TEST_CASE("statistics helpers") {
  CHECK(normal_cdf(0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.959963985) == doctest::Approx(0.975).epsilon(1e-6));
  std::vector<double> grid;
  for (int i = 1; i < 2000; ++i) {
    // normal quantiles by bisection
    double lo = -10, hi = 10;
    for (int k = 0; k < 80; ++k) {
      const double mid = (lo + hi) / 2;
      (normal_cdf(mid) < i / 2000.0 ? lo : hi) = mid;
    }
    grid.push_back(lo);
  }
  CHECK(ks_vs_normal(grid, 1) < 1e-3);
  CHECK(ks_discrete({{0, 0.5}, {1, 0.5}}, {{0, 1}}) == doctest::Approx(0.5));
  CHECK(lattice_span({4, 10, -2}) == 6);
  const auto m = moments({1, 2, 3, 4});
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.skewness == doctest::Approx(0));
}
