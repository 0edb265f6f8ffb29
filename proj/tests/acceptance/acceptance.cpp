#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "subshift/ergodic_bounds.hpp"
#include "subshift/export.hpp"
#include "subshift/limit_dist.hpp"

using namespace subshift;

namespace tol {
constexpr double salem_seconds = 1.0;
constexpr double gallery_seconds = 1.0;
constexpr std::size_t random_substitutions = 20;
constexpr std::size_t bound_points = 100;
constexpr unsigned bound_exponent = 12;
constexpr std::size_t identity_configs = 100;
constexpr std::size_t identity_max_n = 10;
constexpr std::size_t oracle_samples = 100'000;
constexpr double oracle_seconds = 60.0;
constexpr std::size_t clt_n = 200;
constexpr std::size_t clt_samples = 100'000;
constexpr double clt_ks = 0.02;
constexpr double clt_skew = 0.05;
constexpr double clt_kurt = 0.1;
constexpr double mixture_ks = 0.02;
constexpr double mixture_mass = 0.01;
constexpr std::size_t growth_streams = 10;
constexpr double growth_lo = 0.8;
constexpr double growth_hi = 1.05;
constexpr double dirac_radius = 0.2;
}  // namespace tol

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Substitution parse(const char* rules) { return parse_substitution_text(rules); }
WeightVector gamma1(const Substitution& s) {
  auto g = eigenvector_for(matrix_of(s), Rational(1));
  if (!g) throw Error("1 is not an eigenvalue");
  return *g;
}

Outcome salem_family() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t bad = 0;
  for (unsigned n = 1; n <= 50; ++n) {
    const auto r = salem_check(n);
    if (!(r.char_poly == salem_closed_form(n) && r.s_inside && r.salem)) ++bad;
  }
  const double t = seconds_since(t0);
  return {bad == 0 && t < tol::salem_seconds, std::to_string(bad) + " of 50 failed, " + fmt("%.3f s", t)};
}

Outcome gallery() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto g = build_gallery();
  const double t = seconds_since(t0);
  std::size_t bad = 0;
  std::string first;
  for (const auto& c : g.claims) {
    if (c.pass) continue;
    if (bad++ == 0) first = ", first: " + c.figure + " " + c.claim;
  }
  return {g.all_pass() && t < tol::gallery_seconds,
          std::to_string(g.claims.size() - bad) + "/" + std::to_string(g.claims.size()) + " claims" + first + ", " +
              fmt("%.3f s", t)};
}

// sigma(a) a shuffle of k+1 a's and k b's, sigma(b) the letter swap
Substitution recipe(std::mt19937_64& rng) {
  const unsigned k = std::uniform_int_distribution<unsigned>(1, 4)(rng);
  Word a(k + 1, 0);
  a.insert(a.end(), k, 1);
  std::shuffle(a.begin(), a.end(), rng);
  Word b = a;
  for (auto& x : b) x = 1 - x;
  return Substitution({a, b}, {"1", "2"});
}

Outcome zero_mean() {
  std::mt19937_64 rng(2024);
  std::size_t classes = 0, chains = 0, bad = 0;
  for (std::size_t i = 0; i < tol::random_substitutions; ++i) {
    const auto s = recipe(rng);
    const auto g = gamma1(s);
    const auto d = static_cast<unsigned>(*constant_length(s));
    std::vector<TauAutomaton> automata{build_simplified_automaton(s, g)};
    for (unsigned tau = 0; tau < d; ++tau) automata.push_back(build_tau_automaton(s, g, tau));
    for (const auto& a : automata) {
      const auto chain = chain_of(a);
      ++chains;
      for (const auto& comp : strongly_connected_components(chain)) {
        if (!is_closed(chain, comp)) continue;
        ++classes;
        if (expected_payoff(chain, comp, stationary(chain, comp)) != 0) ++bad;
      }
    }
  }
  return {bad == 0 && classes > 0, std::to_string(classes) + " classes over " + std::to_string(chains) +
                                       " chains, " + std::to_string(bad) + " nonzero"};
}

Outcome bounded_sums() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  for (const char* rules : {"1:112;2:221", "1:12;2:13;3:23"}) {
    const auto s = parse(rules);
    const auto g = gamma1(s);
    const auto c = theorem1_constant(s, g);
    const std::size_t d = *constant_length(s);
    std::size_t h = 1;
    for (unsigned i = 0; i < tol::bound_exponent; ++i) h *= d;
    std::mt19937_64 rng(5);
    std::size_t fails = 0;
    Rational worst = 0;
    for (std::size_t p = 0; p < tol::bound_points; ++p) {
      const auto pt = sample_covering_point(s, h, h, rng);
      for (auto dir : {Direction::forward, Direction::backward}) {
        // one probe per scale window (d^{j-1}, d^j]
        std::size_t lo = 1;
        for (std::size_t hh = d; hh <= h; hh *= d) {
          const auto v = liminf_probe(g, pt, hh, dir, lo);
          worst = std::max(worst, v);
          if (!(v < c)) ++fails;
          lo = hh + 1;
        }
      }
    }
    out.pass = out.pass && fails == 0;
    out.detail += std::string(out.detail.empty() ? "" : "; ") + rules + " C=" + to_string(c) + " worst " +
                  to_string(worst) + " fails " + std::to_string(fails);
  }
  out.detail += ", " + fmt("%.1f s", seconds_since(t0));
  return out;
}

Outcome word_chain() {
  Outcome out;
  std::mt19937_64 rng(77);
  for (const char* rules : {"1:112;2:221", "1:12;2:13;3:23"}) {
    const auto s = parse(rules);
    const auto g = gamma1(s);
    const auto d = static_cast<unsigned>(*constant_length(s));
    const Rational bound = 3 * g.max_abs();
    Rational worst = 0;
    std::size_t fails = 0;
    for (std::size_t i = 0; i < tol::identity_configs; ++i) {
      const unsigned leading = std::uniform_int_distribution<unsigned>(1, d - 1)(rng);
      const auto stream = DigitStream::random(d, leading, rng());
      const std::size_t n = std::uniform_int_distribution<std::size_t>(0, tol::identity_max_n)(rng);
      const auto r = word_vs_chain_check(s, g, stream, n, rng());
      worst = std::max(worst, r.discrepancy);
      if (r.discrepancy > bound) ++fails;
    }
    out.pass = out.pass && fails == 0;
    out.detail += std::string(out.detail.empty() ? "" : "; ") + rules + " worst " + to_string(worst) + " <= " +
                  to_string(bound) + " fails " + std::to_string(fails);
  }
  return out;
}

Outcome oracle() {
  struct Config {
    const char* rules;
    const char* digits;
    SumKind kind;
  };
  const std::vector<Config> configs{
      {"1:112;2:221", "1:0", SumKind::chain},     {"1:112;2:221", "1:1", SumKind::chain},
      {"1:112;2:221", "1:2", SumKind::word},      {"1:112;2:221", "2,0,1:21", SumKind::word},
      {"1:12;2:13;3:23", "1:1", SumKind::chain},  {"1:12;2:13;3:23", "1,1,0,1", SumKind::word},
      {"1:12;2:13;3:23", "1:10", SumKind::word},  {"1:11212;2:22121", "1:3", SumKind::chain},
      {"1:11212;2:22121", "4,0:21", SumKind::word}, {"1:1121;2:1212", "3:1", SumKind::chain},
  };
  const auto t0 = std::chrono::steady_clock::now();
  const double bound = 3 / std::sqrt(static_cast<double>(tol::oracle_samples));
  double worst = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto s = parse(configs[i].rules);
    const auto g = gamma1(s);
    const auto stream = DigitStream::parse(static_cast<unsigned>(*constant_length(s)), configs[i].digits);
    const auto f = make_family(s, g, stream);
    const std::size_t n = 12;
    const auto digits = stream.digits(n);
    DistributionOptions opt;
    opt.kind = configs[i].kind;
    const auto dp = exact_sum_distribution(f, digits, n, opt);
    const auto mc = monte_carlo(f, digits, n, tol::oracle_samples, 100 + i, configs[i].kind);
    worst = std::max(worst, ks_sample_vs_discrete(mc.values, dp.marginal_double()));
  }
  const double t = seconds_since(t0);
  return {worst <= bound && t < tol::oracle_seconds,
          "worst KS " + fmt("%.4f", worst) + " <= " + fmt("%.4f", bound) + " over 10 configs, " + fmt("%.1f s", t)};
}

// P(|N| <= w) for a normal law discretized on a lattice of span h
double lattice_window(double w, double sd, double h) {
  return normal_cdf((w + h / 2) / sd) - normal_cdf((-w - h / 2) / sd);
}

Outcome gaussian() {
  const auto s = parse("1:112;2:221");
  const auto g = gamma1(s);
  const auto stream = DigitStream::parse(3, "1:1");
  const auto f = make_family(s, g, stream);
  const auto mc = monte_carlo(f, stream.digits(tol::clt_n), tol::clt_n, tol::clt_samples, 7, SumKind::word);
  const auto m = moments(mc.values);
  const double sd = std::sqrt(m.variance);
  const double h = static_cast<double>(lattice_span(mc.scaled)) / static_cast<double>(mc.scale);
  const double ks = ks_vs_normal(mc.values, sd, h);
  const double raw = ks_vs_normal(mc.values, sd, 0);
  const bool pass = ks <= tol::clt_ks && std::abs(m.skewness) <= tol::clt_skew &&
                    std::abs(m.excess_kurtosis) <= tol::clt_kurt;
  return {pass, "lattice KS " + fmt("%.4f", ks) + " (span " + fmt("%g", h) + ", raw " + fmt("%.4f", raw) +
                    "), skew " + fmt("%.4f", m.skewness) + ", kurt " + fmt("%.4f", m.excess_kurtosis) +
                    ", V/n " + fmt("%.4f", m.variance / tol::clt_n)};
}

Outcome mixture() {
  const auto s = parse("1:112;2:221");
  const auto g = gamma1(s);
  const auto stream = DigitStream::parse(3, "1");
  const auto pred = mixture_prediction(s, g, stream, true);
  const auto f = make_family(s, g, stream, true);
  const auto mc = monte_carlo(f, stream.digits(tol::clt_n), tol::clt_n, tol::clt_samples, 11, SumKind::word);

  std::set<std::size_t> bounded;
  for (const auto& c : pred.components)
    if (c.coboundary) bounded.insert(c.states.begin(), c.states.end());
  std::vector<double> continuous;
  std::vector<long long> continuous_scaled;
  std::size_t in_bounded = 0;
  double w = 0;
  for (std::size_t i = 0; i < mc.values.size(); ++i) {
    if (bounded.count(mc.final_state[i])) {
      ++in_bounded;
      w = std::max(w, std::abs(mc.values[i]));
    } else {
      continuous.push_back(mc.values[i]);
      continuous_scaled.push_back(mc.scaled[i]);
    }
  }
  const double p0 = pred.p0.get_d();
  const double p0_hat = static_cast<double>(in_bounded) / static_cast<double>(mc.values.size());
  const auto m = moments(continuous);
  const double sd = std::sqrt(m.variance);
  const double h = static_cast<double>(lattice_span(continuous_scaled)) / static_cast<double>(mc.scale);
  const double ks = ks_vs_normal(continuous, sd, h);
  const double raw_ks = ks_vs_normal(continuous, sd, 0);

  std::size_t inside = 0;
  for (double v : mc.values) inside += std::abs(v) <= w ? 1 : 0;
  const double raw_mass = static_cast<double>(inside) / static_cast<double>(mc.values.size());
  const double predicted_mass = p0 + (1 - p0) * lattice_window(w, sd, h);

  const bool pass = ks <= tol::mixture_ks && std::abs(p0_hat - p0) <= tol::mixture_mass &&
                    std::abs(raw_mass - predicted_mass) <= tol::mixture_mass;
  return {pass, "p0 " + to_string(pred.p0) + " vs " + fmt("%.4f", p0_hat) + ", continuous lattice KS " + fmt("%.4f", ks) +
                    " (raw " + fmt("%.4f", raw_ks) + ")" +
                    ", |S| <= " + fmt("%g", w) + " mass " + fmt("%.4f", raw_mass) + " vs " +
                    fmt("%.4f", predicted_mass) + ", V1/n " + fmt("%.4f", m.variance / tol::clt_n) + " (exact " +
                    to_string(pred.components.back().variance) + ")"};
}

Outcome growth() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = parse("1:112;2:221");
  const auto g = gamma1(s);
  double lo = 1e9, hi = -1e9;
  for (std::size_t i = 0; i < tol::growth_streams; ++i) {
    GrowthOptions opt;
    opt.n_min = 20;
    opt.n_max = 200;
    opt.samples = 100'000;
    opt.seed = i + 1;
    const auto v = variance_growth(s, g, DigitStream::random(3, 1 + i % 2, 1000 + i), opt);
    lo = std::min(lo, v.slope);
    hi = std::max(hi, v.slope);
  }
  return {lo >= tol::growth_lo && hi <= tol::growth_hi,
          "slopes in [" + fmt("%.3f", lo) + ", " + fmt("%.3f", hi) + "], " + fmt("%.1f s", seconds_since(t0))};
}

Outcome dirac() {
  const auto s = parse("1:12;2:13;3:23");
  const auto g = gamma1(s);
  Outcome out;
  for (const char* digits : {"1", "1,1", "1,0,1", "1,1,1,1"}) {
    const auto stream = DigitStream::parse(2, digits);
    const auto f = make_family(s, g, stream);
    DistributionOptions opt;
    opt.kind = SumKind::word;
    std::set<std::string> diameters;
    for (std::size_t n = 5; n <= 12; ++n) {
      const auto [lo, hi] = exact_sum_distribution(f, stream.digits(n), n, opt).support_range();
      diameters.insert(to_string(hi - lo));
    }
    const auto [lo, hi] = exact_sum_distribution(f, stream.digits(100), 100, opt).support_range();
    const double radius = std::max(std::abs(lo.get_d()), std::abs(hi.get_d())) / 10.0;
    const bool ok = diameters.size() == 1 && radius <= tol::dirac_radius;
    out.pass = out.pass && ok;
    out.detail += std::string(out.detail.empty() ? "" : "; ") + "t=" + stream.describe() + " diameter " +
                  (diameters.size() == 1 ? *diameters.begin() : std::string("varies")) + " radius " +
                  fmt("%.2f", radius);
  }
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"salem family", salem_family},
      {"gallery claims", gallery},
      {"zero mean on recurrent classes", zero_mean},
      {"bounded ergodic sums", bounded_sums},
      {"word and chain sums", word_chain},
      {"exact law vs monte carlo", oracle},
      {"gaussian limit", gaussian},
      {"mixture limit", mixture},
      {"variance growth exponent", growth},
      {"dirac limit for coboundaries", dirac},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
