#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "helpers.hpp"
#include "subshift/markov.hpp"

using namespace subshift;

namespace {

ChainGraph chain_for(const std::string& rules, int tau) {
  const auto s = test::sub(rules);
  const auto g = test::gamma1(s);
  return chain_of(tau < 0 ? build_simplified_automaton(s, g) : build_tau_automaton(s, g, static_cast<unsigned>(tau)));
}

std::vector<std::pair<std::size_t, Rational>> edge_multiset(const ChainGraph& c, std::size_t s) {
  std::vector<std::pair<std::size_t, Rational>> out;
  for (const auto& e : c.out[s]) out.emplace_back(e.target, e.payoff);
  std::sort(out.begin(), out.end());
  return out;
}

// Var(S_n) from the stationary start, by exact convolution
std::vector<Rational> class_variances(const ChainGraph& c, const RecurrentClass& cls, std::size_t n_max) {
  std::map<std::pair<std::size_t, Rational>, Rational> law;
  for (std::size_t i = 0; i < cls.states.size(); ++i) law[{cls.states[i], Rational(0)}] += cls.stationary[i];
  std::vector<Rational> out;
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::map<std::pair<std::size_t, Rational>, Rational> next;
    for (const auto& [key, p] : law)
      for (const auto& e : c.out[key.first]) next[{e.target, key.second + e.payoff}] += p * e.probability;
    law = std::move(next);
    Rational m1 = 0, m2 = 0;
    for (const auto& [key, p] : law) {
      m1 += p * key.second;
      m2 += p * key.second * key.second;
    }
    out.push_back(m2 - m1 * m1);
  }
  return out;
}

void check_witness(const ChainGraph& c, const RecurrentClass& cls) {
  const auto& w = cls.coboundary;
  std::set<std::size_t> inside(cls.states.begin(), cls.states.end());
  if (w.coboundary) {
    for (auto s : cls.states)
      for (const auto& e : c.out[s]) CHECK(e.payoff == w.potential.at(e.target) - w.potential.at(s));
    return;
  }
  REQUIRE_FALSE(w.cycle.empty());
  Rational sum = 0;
  for (std::size_t i = 0; i < w.cycle.size(); ++i) {
    const auto [s, j] = w.cycle[i];
    const auto& e = c.out.at(s).at(j);
    CHECK(inside.count(s));
    sum += e.payoff;
    CHECK(e.target == w.cycle[(i + 1) % w.cycle.size()].first);
  }
  CHECK(sum == w.cycle_sum);
  CHECK(sum != 0);
}

ChainGraph two_cycle() {
  ChainGraph c;
  c.out.resize(2);
  c.out[0].push_back(ChainEdge{1, 1, 1, 1});
  c.out[1].push_back(ChainEdge{0, 1, -1, 1});
  return c;
}

}  // namespace

TEST_CASE("chains are stochastic with uniform edges") {
  const auto c = chain_for("1:112;2:221", -1);
  for (const auto& e : c.out[1]) CHECK(e.probability == test::q(1, 3));
  CHECK_NOTHROW(chain_for("1:112;2:221", 1).check_stochastic());
  CHECK_NOTHROW(chain_for("1:12;2:13;3:23", 0).check_stochastic());
  ChainGraph bad = two_cycle();
  bad.out[0][0].probability = test::q(1, 2);
  CHECK_THROWS_AS(bad.check_stochastic(), Error);
}

TEST_CASE("recurrent classes of the examples") {
  auto c = chain_for("1:112;2:221", -1);
  auto cls = recurrent_classes(c);
  REQUIRE(cls.size() == 2);
  CHECK(cls[0].states == std::vector<std::size_t>{0, 3});
  CHECK(cls[1].states == std::vector<std::size_t>{1, 2});
  CHECK(cls[0].coboundary.coboundary);
  CHECK_FALSE(cls[1].coboundary.coboundary);
  CHECK(cls[1].stationary == std::vector<Rational>{test::q(1, 2), test::q(1, 2)});
  CHECK(cls[1].expected_payoff == 0);
  CHECK(cls[1].variance > 0);
  CHECK(cls[0].variance == 0);

  c = chain_for("1:112;2:221", 1);
  cls = recurrent_classes(c);
  REQUIRE(cls.size() == 1);
  CHECK(cls[0].states.size() == 8);
  CHECK(cls[0].period == 1);
  CHECK(cls[0].variance > 0);
  CHECK(is_strongly_connected(c));

  const auto t = two_cycle();
  CHECK(period(t, {0, 1}) == 2);
  CHECK(is_closed(t, {0, 1}));
  CHECK_FALSE(is_closed(chain_for("1:12;2:13;3:23", -1), {1}));
}

TEST_CASE("coboundary witnesses verify") {
  for (const char* rules : {"1:112;2:221", "1:12;2:13;3:23", "1:11212;2:22121", "1:1123;2:2213;3:3312"}) {
    const auto s = test::sub(rules);
    const auto d = *constant_length(s);
    for (int tau = -1; tau < static_cast<int>(d); ++tau) {
      const auto c = chain_for(rules, tau);
      for (const auto& cls : recurrent_classes(c)) {
        check_witness(c, cls);
        CHECK(cls.coboundary.coboundary == (cls.variance == 0));
      }
    }
  }
  ChainGraph zero;
  zero.out.resize(1);
  zero.out[0].push_back(ChainEdge{0, 1, 0, 1});
  const auto cls = recurrent_classes(zero);
  REQUIRE(cls.size() == 1);
  CHECK(cls[0].coboundary.coboundary);
  CHECK(cls[0].coboundary.potential.at(0) == 0);
  CHECK(cls[0].stationary == std::vector<Rational>{1});
}

TEST_CASE("stationary laws and zero mean") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 20; ++i) {
    const auto s = test::random_nonsync(rng);
    const auto g = test::gamma1(s);
    for (unsigned tau = 0; tau < *constant_length(s); ++tau) {
      const auto c = chain_of(build_tau_automaton(s, g, tau));
      const auto p = transition_matrix(c);
      for (const auto& cls : recurrent_classes(c)) {
        CHECK(cls.expected_payoff == 0);
        Rational total = 0;
        for (const auto& x : cls.stationary) total += x;
        CHECK(total == 1);
        for (std::size_t j = 0; j < cls.states.size(); ++j) {
          Rational flow = 0;
          for (std::size_t i = 0; i < cls.states.size(); ++i) flow += cls.stationary[i] * p(cls.states[i], cls.states[j]);
          CHECK(flow == cls.stationary[j]);
        }
      }
    }
  }
}

TEST_CASE("asymptotic variance against exact increments of Var(S_n)") {
  for (auto [rules, tau] : std::vector<std::pair<std::string, int>>{
           {"1:112;2:221", 1}, {"1:112;2:221", -1}, {"1:112;2:221", 2}, {"1:11212;2:22121", 3}}) {
    const auto c = chain_for(rules, tau);
    for (const auto& cls : recurrent_classes(c)) {
      const auto v = class_variances(c, cls, 14);
      const double inc = Rational(v[13] - v[12]).get_d();
      CHECK(inc == doctest::Approx(cls.variance.get_d()).epsilon(1e-5));
    }
  }
  auto biased = two_cycle();
  biased.out[1][0].payoff = 1;
  CHECK_THROWS_AS(asymptotic_variance(biased, {0, 1}), Error);
}

TEST_CASE("product chains") {
  const auto s = test::sub("1:112;2:221");
  const auto g = test::gamma1(s);
  const auto one = product_chain(s, g, {1});
  const auto direct = chain_of(build_tau_automaton(s, g, 1));
  for (std::size_t st = 0; st < one.size(); ++st) CHECK(edge_multiset(one, st) == edge_multiset(direct, st));

  const auto two = product_chain(s, g, {1, 1});
  for (std::size_t st = 0; st < two.size(); ++st) {
    CHECK(two.out[st].size() == 9);
    for (const auto& e : two.out[st]) CHECK(e.probability == test::q(1, 9));
  }
  const auto composed = compose(direct, direct);
  for (std::size_t st = 0; st < two.size(); ++st) CHECK(edge_multiset(two, st) == edge_multiset(composed, st));

  // the block automaton is the automaton of sigma^N for tau = sum tau_i d^(N-i)
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<unsigned> digit(0, 2);
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 1 + i % 3;
    std::vector<unsigned> block(n);
    unsigned tau = 0;
    for (auto& x : block) {
      x = digit(rng);
      tau = tau * 3 + x;
    }
    const auto prod = product_chain(s, g, block);
    const auto sigma_n = s.power(static_cast<unsigned>(n));
    const auto big = chain_of(build_tau_automaton(sigma_n, WeightVector(g.values(), 1), tau));
    for (std::size_t st = 0; st < prod.size(); ++st) CHECK(edge_multiset(prod, st) == edge_multiset(big, st));
  }

  const auto x3 = product_chain(s, g, {1, 1, 1});
  CHECK(is_strongly_connected(x3));
  CHECK(recurrent_classes(x3).at(0).period == 1);
  CHECK(ergodic_coefficient(transition_matrix(x3)) > 0);
}

TEST_CASE("ergodic coefficient") {
  CHECK(ergodic_coefficient(RationalMatrix::identity(2)) == 0);
  RationalMatrix u(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) u(i, j) = test::q(1, 2);
  CHECK(ergodic_coefficient(u) == 1);
  for (int tau = -1; tau < 3; ++tau) {
    const auto p = transition_matrix(chain_for("1:112;2:221", tau));
    Rational lowest = 1;
    for (std::size_t i = 0; i < p.rows(); ++i)
      for (std::size_t j = 0; j < p.cols(); ++j) lowest = std::min(lowest, p(i, j));
    CHECK(ergodic_coefficient(p) >= lowest);
  }
}

TEST_CASE("absorption probabilities") {
  const auto c = chain_for("1:12;2:13;3:23", 0);
  const auto cls = recurrent_classes(c);
  const auto a = absorption_probabilities(c, cls);
  for (std::size_t s = 0; s < c.size(); ++s) {
    Rational total = 0;
    for (const auto& x : a[s]) total += x;
    CHECK(total == 1);
  }
  for (std::size_t j = 0; j < cls.size(); ++j)
    for (auto s : cls[j].states) CHECK(a[s][j] == 1);
  CHECK_FALSE(transient_states(c, cls).empty());
}

TEST_CASE("letter and block frequencies") {
  const auto s = test::sub("1:112;2:221");
  CHECK(letter_frequencies(s) == std::vector<Rational>{test::q(1, 2), test::q(1, 2)});
  for (const char* rules : {"1:112;2:221", "1:12;2:13;3:23"}) {
    const auto t = test::sub(rules);
    const std::size_t len = *constant_length(t) + 1;
    const auto freq = block_frequencies(t, len);
    Rational total = 0;
    for (const auto& [w, p] : freq) total += p;
    CHECK(total == 1);
    const Word orbit = iterate_prefix(t, 0, 19683);
    std::map<Word, double> counts;
    const std::size_t windows = orbit.size() - len + 1;
    for (std::size_t i = 0; i < windows; ++i) counts[Word(orbit.begin() + i, orbit.begin() + i + len)] += 1.0 / windows;
    for (const auto& [w, p] : freq) CHECK(std::abs(p.get_d() - counts[w]) < 1e-3);
  }
  CHECK_THROWS_AS(letter_frequencies(test::sub("1:11;2:22")), Error);
}

TEST_CASE("initial distribution") {
  for (const char* rules : {"1:112;2:221", "1:12;2:13;3:23", "1:11212;2:22121"}) {
    const auto s = test::sub(rules);
    const auto g = test::gamma1(s);
    for (unsigned lead = 1; lead < *constant_length(s); ++lead) {
      for (bool simplified : {false, true}) {
        const auto init = initial_distribution(s, g, lead, simplified);
        CHECK(init.total() == 1);
        for (const auto& e : init.entries) CHECK(e.probability > 0);
      }
    }
  }
  CHECK_THROWS_AS(initial_distribution(test::sub("1:112;2:221"), test::gamma1(test::sub("1:112;2:221")), 0, false),
                  Error);
}
