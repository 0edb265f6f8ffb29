#include "subshift/limit_dist.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace subshift {

// ---------------------------------------------------------------- digit streams

namespace {

void check_digit(unsigned base, unsigned digit) {
  if (digit >= base) throw Error("digit " + std::to_string(digit) + " is not below the base " + std::to_string(base));
}

std::vector<unsigned> parse_digit_list(const std::string& text) {
  std::vector<unsigned> out;
  if (text.empty()) return out;
  if (text.find(',') == std::string::npos) {
    for (char ch : text) {
      if (ch < '0' || ch > '9') throw Error("malformed digit list '" + text + "'");
      out.push_back(static_cast<unsigned>(ch - '0'));
    }
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw Error("malformed digit list '" + text + "'");
    }
    out.push_back(static_cast<unsigned>(std::stoul(item)));
  }
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

DigitStream DigitStream::periodic(unsigned base, unsigned leading, std::vector<unsigned> preperiod,
                                  std::vector<unsigned> period) {
  if (base < 2) throw Error("digit base must be at least 2");
  if (leading < 1 || leading >= base) throw Error("leading digit must lie in 1..base-1");
  for (auto x : preperiod) check_digit(base, x);
  for (auto x : period) check_digit(base, x);
  DigitStream s;
  s.base_ = base;
  s.leading_ = leading;
  s.preperiod_ = std::move(preperiod);
  s.period_ = std::move(period);
  if (!s.period_.empty() && std::all_of(s.period_.begin(), s.period_.end(), [](unsigned x) { return x == 0; })) {
    s.period_.clear();
  }
  return s;
}

DigitStream DigitStream::random(unsigned base, unsigned leading, std::uint64_t seed) {
  DigitStream s = periodic(base, leading, {}, {});
  s.random_ = true;
  s.seed_ = seed;
  return s;
}

DigitStream DigitStream::from_rational(unsigned base, const Rational& value) {
  if (value <= 0) throw Error("t must be positive");
  if (base < 2) throw Error("digit base must be at least 2");
  Rational t = value;
  int shift = 0;
  const Rational d(base);
  while (t < 1) {
    t *= d;
    --shift;
  }
  while (t >= d) {
    t /= d;
    ++shift;
  }
  Integer lead = t.get_num() / t.get_den();
  Integer r = t.get_num() % t.get_den();
  const Integer q = t.get_den();
  std::vector<unsigned> digits;
  std::map<Integer, std::size_t> seen;
  std::vector<unsigned> preperiod, period;
  while (r != 0) {
    auto it = seen.find(r);
    if (it != seen.end()) {
      preperiod.assign(digits.begin(), digits.begin() + it->second);
      period.assign(digits.begin() + it->second, digits.end());
      break;
    }
    seen[r] = digits.size();
    r *= base;
    Integer digit = r / q;
    r = r % q;
    digits.push_back(static_cast<unsigned>(digit.get_ui()));
  }
  if (r == 0) preperiod = digits;
  DigitStream s = periodic(base, static_cast<unsigned>(lead.get_ui()), std::move(preperiod), std::move(period));
  s.shift_ = shift;
  return s;
}

DigitStream DigitStream::parse(unsigned base, const std::string& text) {
  const auto colon = text.find(':');
  auto head = parse_digit_list(text.substr(0, colon));
  if (head.empty()) throw Error("digit list needs a leading digit");
  std::vector<unsigned> period;
  if (colon != std::string::npos) {
    period = parse_digit_list(text.substr(colon + 1));
    if (period.empty()) throw Error("empty period in '" + text + "'");
  }
  const unsigned leading = head.front();
  head.erase(head.begin());
  return periodic(base, leading, std::move(head), std::move(period));
}

std::vector<unsigned> DigitStream::period() const { return period_.empty() ? std::vector<unsigned>{0} : period_; }

std::vector<unsigned> DigitStream::digits(std::size_t n) const {
  std::vector<unsigned> out;
  out.reserve(n);
  if (random_) {
    std::mt19937_64 rng(seed_);
    std::uniform_int_distribution<unsigned> pick(0, base_ - 1);
    for (std::size_t k = 0; k < n; ++k) out.push_back(pick(rng));
    return out;
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (k < preperiod_.size()) {
      out.push_back(preperiod_[k]);
    } else if (period_.empty()) {
      out.push_back(0);
    } else {
      out.push_back(period_[(k - preperiod_.size()) % period_.size()]);
    }
  }
  return out;
}

Integer DigitStream::horizon(std::size_t n) const {
  Integer big = leading_;
  for (auto x : digits(n)) big = big * base_ + x;
  return big;
}

std::string DigitStream::describe() const {
  std::ostringstream os;
  if (random_) {
    os << leading_ << ".random(seed=" << seed_ << ")";
    return os.str();
  }
  os << leading_;
  if (!preperiod_.empty() || !period_.empty()) os << '.';
  for (auto x : preperiod_) os << x << (base_ > 10 ? "," : "");
  if (!period_.empty()) {
    os << '(';
    for (auto x : period_) os << x << (base_ > 10 ? "," : "");
    os << ')';
  }
  if (shift_ != 0) os << " x " << base_ << "^" << shift_;
  return os.str();
}

// ---------------------------------------------------------------- families

ChainFamily make_family(const Substitution& sub, const WeightVector& gamma, const DigitStream& stream,
                        bool simplified) {
  auto d = constant_length(sub);
  if (!d) throw Error("limit laws need a constant-length substitution");
  if (stream.base() != *d) throw Error("digit base differs from the substitution length");
  if (gamma.eigenvalue() != 1) throw Error("the chain family needs an eigenvalue-1 weight vector");
  ChainFamily f;
  f.d = *d;
  f.simplified = simplified;
  if (simplified) {
    if (stream.is_random() || !std::all_of(stream.preperiod().begin(), stream.preperiod().end(),
                                           [](unsigned x) { return x == 0; }) || !stream.finite()) {
      throw Error("the simplified automaton only covers streams whose digits after the leading one are 0");
    }
    f.layers.push_back(chain_of(build_simplified_automaton(sub, gamma)));
  } else {
    for (unsigned tau = 0; tau < *d; ++tau) f.layers.push_back(chain_of(build_tau_automaton(sub, gamma, tau)));
  }
  f.init = initial_distribution(sub, gamma, stream.leading(), simplified);
  const std::size_t k = sub.alphabet_size();
  const std::size_t per_letter = simplified ? k : k * k;
  for (std::size_t s = 0; s < k * per_letter; ++s) f.endpoint.push_back(gamma[static_cast<Letter>(s / per_letter)]);
  return f;
}

SupportCapExceeded::SupportCapExceeded(std::size_t reached_n, std::size_t pairs)
    : Error("exact distribution support reached " + std::to_string(pairs) + " pairs at n = " +
            std::to_string(reached_n) + "; use Monte Carlo"),
      reached_n_(reached_n) {}

// ---------------------------------------------------------------- exact DP

namespace {

long to_long(const Integer& z, const char* what) {
  if (!z.fits_slong_p()) throw Error(std::string(what) + " does not fit a machine integer");
  return z.get_si();
}

struct ScaledLayer {
  std::vector<std::size_t> target;  // state * d + (m - 1)
  std::vector<long> payoff;
};

Integer family_scale(const ChainFamily& family) {
  std::vector<Rational> values;
  for (const auto& layer : family.layers)
    for (const auto& row : layer.out)
      for (const auto& e : row) values.push_back(e.payoff);
  for (const auto& e : family.init.entries) values.push_back(e.g0);
  values.insert(values.end(), family.endpoint.begin(), family.endpoint.end());
  return lcm_of_denominators(values);
}

std::vector<ScaledLayer> scale_layers(const ChainFamily& family, const Integer& scale) {
  std::vector<ScaledLayer> out;
  const Rational p(1, static_cast<unsigned long>(family.d));
  for (const auto& layer : family.layers) {
    ScaledLayer s;
    for (std::size_t st = 0; st < layer.size(); ++st) {
      if (layer.out[st].size() != family.d) throw Error("layer does not have d edges per state");
      for (const auto& e : layer.out[st]) {
        if (e.probability != p) throw Error("layer probabilities must be uniform");
        s.target.push_back(e.target);
        s.payoff.push_back(to_long(Rational(e.payoff * scale).get_num(), "scaled payoff"));
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

const ScaledLayer& layer_for(const std::vector<ScaledLayer>& layers, unsigned digit) {
  if (digit >= layers.size()) throw Error("no automaton layer for digit " + std::to_string(digit));
  return layers[digit];
}

SumDistribution initial_law(const ChainFamily& family, const Integer& scale, bool include_g0) {
  SumDistribution dist;
  dist.scale = scale;
  const std::size_t n_states = family.state_count();
  std::vector<Rational> probs;
  for (const auto& e : family.init.entries) probs.push_back(e.probability);
  dist.denominator = lcm_of_denominators(probs);
  std::vector<std::map<long, Integer>> acc(n_states);
  for (const auto& e : family.init.entries) {
    long v = include_g0 ? to_long(Rational(e.g0 * scale).get_num(), "scaled g0") : 0;
    acc[e.state][v] += Rational(e.probability * dist.denominator).get_num();
  }
  dist.offset.assign(n_states, 0);
  dist.weight.assign(n_states, {});
  for (std::size_t s = 0; s < n_states; ++s) {
    if (acc[s].empty()) continue;
    const long lo = acc[s].begin()->first, hi = acc[s].rbegin()->first;
    dist.offset[s] = lo;
    dist.weight[s].assign(static_cast<std::size_t>(hi - lo + 1), Integer(0));
    for (auto& [v, w] : acc[s]) dist.weight[s][static_cast<std::size_t>(v - lo)] = w;
  }
  return dist;
}

void dp_step(SumDistribution& dist, const ScaledLayer& layer, std::size_t d, std::size_t cap) {
  const std::size_t n_states = dist.weight.size();
  std::vector<long> lo(n_states, 0), hi(n_states, 0);
  std::vector<char> used(n_states, 0);
  for (std::size_t s = 0; s < n_states; ++s) {
    if (dist.weight[s].empty()) continue;
    const long a = dist.offset[s], b = a + static_cast<long>(dist.weight[s].size()) - 1;
    for (std::size_t m = 0; m < d; ++m) {
      const auto t = layer.target[s * d + m];
      const long p = layer.payoff[s * d + m];
      if (!used[t]) {
        used[t] = 1;
        lo[t] = a + p;
        hi[t] = b + p;
      } else {
        lo[t] = std::min(lo[t], a + p);
        hi[t] = std::max(hi[t], b + p);
      }
    }
  }
  std::size_t pairs = 0;
  for (std::size_t t = 0; t < n_states; ++t)
    if (used[t]) pairs += static_cast<std::size_t>(hi[t] - lo[t] + 1);
  if (pairs > cap) throw SupportCapExceeded(dist.n + 1, pairs);

  std::vector<std::vector<Integer>> next(n_states);
  for (std::size_t t = 0; t < n_states; ++t)
    if (used[t]) next[t].assign(static_cast<std::size_t>(hi[t] - lo[t] + 1), Integer(0));
  for (std::size_t s = 0; s < n_states; ++s) {
    const auto& w = dist.weight[s];
    if (w.empty()) continue;
    for (std::size_t m = 0; m < d; ++m) {
      const auto t = layer.target[s * d + m];
      const long shift = dist.offset[s] + layer.payoff[s * d + m] - lo[t];
      auto* dst = next[t].data() + shift;
      for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] != 0) dst[i] += w[i];
    }
  }
  // trim zero ends
  for (std::size_t t = 0; t < n_states; ++t) {
    auto& w = next[t];
    std::size_t a = 0;
    while (a < w.size() && w[a] == 0) ++a;
    if (a == w.size()) {
      w.clear();
      lo[t] = 0;
      continue;
    }
    std::size_t b = w.size();
    while (w[b - 1] == 0) --b;
    w = std::vector<Integer>(w.begin() + a, w.begin() + b);
    lo[t] += static_cast<long>(a);
  }
  dist.weight = std::move(next);
  dist.offset = std::move(lo);
  dist.denominator *= static_cast<unsigned long>(d);
  dist.n += 1;
}

}  // namespace

std::size_t SumDistribution::support_pairs() const {
  std::size_t n_pairs = 0;
  for (const auto& w : weight)
    for (const auto& x : w)
      if (x != 0) ++n_pairs;
  return n_pairs;
}

Rational SumDistribution::total_mass() const {
  Integer total = 0;
  for (const auto& w : weight)
    for (const auto& x : w) total += x;
  Rational r(total, denominator);
  r.canonicalize();
  return r;
}

std::vector<std::pair<long, Integer>> SumDistribution::marginal() const {
  std::map<long, Integer> acc;
  for (std::size_t s = 0; s < weight.size(); ++s)
    for (std::size_t i = 0; i < weight[s].size(); ++i)
      if (weight[s][i] != 0) acc[offset[s] + static_cast<long>(i)] += weight[s][i];
  return {acc.begin(), acc.end()};
}

Rational SumDistribution::mean() const {
  Integer acc = 0;
  for (const auto& [v, w] : marginal()) acc += w * v;
  Rational r(acc, denominator * scale);
  r.canonicalize();
  return r;
}

Rational SumDistribution::variance() const {
  Integer s1 = 0, s2 = 0;
  for (const auto& [v, w] : marginal()) {
    s1 += w * v;
    s2 += w * v * v;
  }
  Rational m1(s1, denominator), m2(s2, denominator);
  m1.canonicalize();
  m2.canonicalize();
  Rational var = (m2 - m1 * m1) / Rational(scale * scale);
  return var;
}

std::pair<Rational, Rational> SumDistribution::support_range() const {
  const auto m = marginal();
  if (m.empty()) throw Error("empty distribution");
  Rational lo(m.front().first, scale), hi(m.back().first, scale);
  lo.canonicalize();
  hi.canonicalize();
  return {lo, hi};
}

std::vector<std::pair<double, double>> SumDistribution::marginal_double() const {
  std::vector<std::pair<double, double>> out;
  const double sc = scale.get_d();
  for (const auto& [v, w] : marginal()) {
    Rational p(w, denominator);
    p.canonicalize();
    out.emplace_back(static_cast<double>(v) / sc, p.get_d());
  }
  return out;
}

SumDistribution exact_sum_distribution(const ChainFamily& family, const std::vector<unsigned>& digits,
                                       std::size_t n, const DistributionOptions& options) {
  if (digits.size() < n) throw Error("digit list is shorter than n");
  const Integer scale = family_scale(family);
  const auto layers = scale_layers(family, scale);
  const bool word = options.kind == SumKind::word;
  auto dist = initial_law(family, scale, word);
  for (std::size_t k = 0; k < n; ++k) dp_step(dist, layer_for(layers, digits[k]), family.d, options.support_cap);
  if (word) {
    for (std::size_t s = 0; s < dist.offset.size(); ++s)
      dist.offset[s] += to_long(Rational(family.endpoint.at(s) * scale).get_num(), "scaled endpoint");
  }
  return dist;
}

// ---------------------------------------------------------------- Monte Carlo

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SUBSHIFT_LAB_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

namespace {

constexpr std::size_t kChunk = 4096;

struct InitSampler {
  std::vector<double> cdf;
  std::vector<std::size_t> state;
  std::vector<long long> g0;

  InitSampler(const InitialDistribution& init, const Integer& scale) {
    double acc = 0;
    for (const auto& e : init.entries) {
      acc += e.probability.get_d();
      cdf.push_back(acc);
      state.push_back(e.state);
      g0.push_back(to_long(Rational(e.g0 * scale).get_num(), "scaled g0"));
    }
    cdf.back() = 1.0;
  }

  std::size_t draw(std::mt19937_64& rng) const {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
  }
};

template <class Body>
void run_chunks(std::size_t samples, Body body) {
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < chunks; c = next++) body(c, c * kChunk, std::min(samples, (c + 1) * kChunk));
  };
  const unsigned threads = std::min<std::size_t>(worker_count(), std::max<std::size_t>(chunks, 1));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

}  // namespace

EmpiricalSample monte_carlo(const ChainFamily& family, const std::vector<unsigned>& digits, std::size_t n,
                            std::size_t samples, std::uint64_t seed, SumKind kind) {
  if (samples == 0) throw Error("monte_carlo needs at least one sample");
  if (digits.size() < n) throw Error("digit list is shorter than n");
  const Integer scale = family_scale(family);
  const auto layers = scale_layers(family, scale);
  std::vector<const ScaledLayer*> path;
  for (std::size_t k = 0; k < n; ++k) path.push_back(&layer_for(layers, digits[k]));
  const InitSampler init(family.init, scale);
  const std::size_t d = family.d;
  const bool word = kind == SumKind::word;
  std::vector<long long> endpoint;
  for (const auto& g : family.endpoint) endpoint.push_back(to_long(Rational(g * scale).get_num(), "scaled endpoint"));

  EmpiricalSample out;
  out.scale = to_long(scale, "scale");
  out.seed = seed;
  out.n = n;
  out.digits.assign(digits.begin(), digits.begin() + n);
  out.scaled.assign(samples, 0);
  out.final_state.assign(samples, 0);
  run_chunks(samples, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(chunk)));
    std::uniform_int_distribution<std::size_t> pick(0, d - 1);
    for (std::size_t i = begin; i < end; ++i) {
      const auto e = init.draw(rng);
      std::size_t s = init.state[e];
      long long sum = word ? init.g0[e] : 0;
      for (const auto* layer : path) {
        const auto idx = s * d + pick(rng);
        sum += layer->payoff[idx];
        s = layer->target[idx];
      }
      out.scaled[i] = word ? sum + endpoint[s] : sum;
      out.final_state[i] = s;
    }
  });
  out.values.resize(samples);
  for (std::size_t i = 0; i < samples; ++i) out.values[i] = static_cast<double>(out.scaled[i]) / out.scale;
  return out;
}

std::vector<double> monte_carlo_variances(const ChainFamily& family, const std::vector<unsigned>& digits,
                                          std::size_t n_max, std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw Error("variance estimates need at least two samples");
  if (digits.size() < n_max) throw Error("digit list is shorter than n");
  const Integer scale = family_scale(family);
  const auto layers = scale_layers(family, scale);
  std::vector<const ScaledLayer*> path;
  for (std::size_t k = 0; k < n_max; ++k) path.push_back(&layer_for(layers, digits[k]));
  const InitSampler init(family.init, scale);
  const std::size_t d = family.d;
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  // exact integer moments per chunk, merged in chunk order
  std::vector<std::vector<__int128>> s1(chunks, std::vector<__int128>(n_max, 0)), s2 = s1;
  run_chunks(samples, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(chunk)));
    std::uniform_int_distribution<std::size_t> pick(0, d - 1);
    auto& a1 = s1[chunk];
    auto& a2 = s2[chunk];
    for (std::size_t i = begin; i < end; ++i) {
      std::size_t s = init.state[init.draw(rng)];
      long long sum = 0;
      for (std::size_t k = 0; k < n_max; ++k) {
        const auto idx = s * d + pick(rng);
        sum += path[k]->payoff[idx];
        s = path[k]->target[idx];
        a1[k] += sum;
        a2[k] += static_cast<__int128>(sum) * sum;
      }
    }
  });
  std::vector<double> var(n_max);
  const double sc = scale.get_d();
  for (std::size_t k = 0; k < n_max; ++k) {
    __int128 t1 = 0, t2 = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
      t1 += s1[c][k];
      t2 += s2[c][k];
    }
    const double n = static_cast<double>(samples);
    const double m1 = static_cast<double>(t1) / n;
    const double m2 = static_cast<double>(t2) / n;
    var[k] = (m2 - m1 * m1) * n / (n - 1) / (sc * sc);
  }
  return var;
}

// ---------------------------------------------------------------- word versus chain

WordChainResult word_vs_chain_check(const Substitution& sub, const WeightVector& gamma, const DigitStream& stream,
                                    std::size_t n, std::uint64_t point_seed) {
  const auto dd = constant_length(sub);
  if (!dd) throw Error("word_vs_chain_check needs a constant-length substitution");
  const std::size_t d = *dd;
  if (stream.base() != d) throw Error("digit base differs from the substitution length");
  const auto digits = stream.digits(n);
  const unsigned t0 = stream.leading();
  const Integer big_n = stream.horizon(n);
  if (!big_n.fits_ulong_p() || big_n > Integer(1) << 26) throw Error("horizon too long to materialize");
  const std::size_t horizon = big_n.get_ui();

  std::mt19937_64 rng(point_seed);
  PSPath path;
  Word level_n;
  for (std::size_t extra = 1;; ++extra) {
    if (extra > 64) throw Error("could not sample a point with a long enough window");
    path = sample_path(sub, n + extra, rng);
    const PSPath upper(path.begin() + static_cast<long>(n), path.end());
    level_n = point_from_path(sub, upper, d + 1).right;
    if (level_n.size() >= d + 1) break;
  }
  const auto z = point_from_path(sub, path, horizon).right;
  if (z.size() < horizon) throw Error("window shorter than the horizon");

  WordChainResult r;
  r.horizon = big_n;
  r.word_sum = gamma_of_word(gamma, std::span<const Letter>(z).first(horizon));
  r.first_letter = gamma[z[0]];

  std::vector<TauAutomaton> automata;
  for (unsigned tau = 0; tau < d; ++tau) automata.push_back(build_tau_automaton(sub, gamma, tau));
  const auto& I = level_n;
  std::size_t state = automata[0].index_of(TauState{I[0], Word{I[t0], I[t0 + 1]}});
  Rational chain = gamma_of_word(gamma, std::span<const Letter>(I).subspan(1, t0 - 1));
  for (std::size_t k = 1; k <= n; ++k) {
    const auto m = static_cast<unsigned>(path[n - k].prefix.size() + 1);
    const auto& e = automata[digits[k - 1]].edge(state, m);
    chain += e.payoff;
    state = e.target;
  }
  r.chain_sum = chain;
  r.discrepancy = abs_value(r.word_sum - r.chain_sum);
  r.final_letter_matches = automata[0].state(state).a == z[0];
  return r;
}

// ---------------------------------------------------------------- variance growth

VarianceGrowth fit_growth(const std::vector<std::size_t>& n, const std::vector<double>& variance, std::size_t n_min,
                          std::size_t n_max) {
  VarianceGrowth g;
  g.n = n;
  g.variance = variance;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] < n_min || n[i] > n_max || !(variance[i] > 0)) continue;
    const double x = std::log(static_cast<double>(n[i])), y = std::log(variance[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) {
    g.slope = 0;  // bounded or degenerate
    return g;
  }
  const double c = static_cast<double>(count);
  g.slope = (c * sxy - sx * sy) / (c * sxx - sx * sx);
  g.intercept = (sy - g.slope * sx) / c;
  return g;
}

VarianceGrowth variance_growth(const Substitution& sub, const WeightVector& gamma, const DigitStream& stream,
                               const GrowthOptions& options) {
  const auto family = make_family(sub, gamma, stream);
  const auto digits = stream.digits(options.n_max);
  std::vector<std::size_t> ns(options.n_max);
  std::iota(ns.begin(), ns.end(), std::size_t{1});
  std::vector<double> var(options.n_max);
  if (options.exact) {
    const Integer scale = family_scale(family);
    const auto layers = scale_layers(family, scale);
    auto dist = initial_law(family, scale, false);
    DistributionOptions opt;
    for (std::size_t k = 0; k < options.n_max; ++k) {
      dp_step(dist, layer_for(layers, digits[k]), family.d, opt.support_cap);
      var[k] = dist.variance().get_d();
    }
  } else {
    var = monte_carlo_variances(family, digits, options.n_max, options.samples, options.seed);
  }
  return fit_growth(ns, var, options.n_min, options.n_max);
}

// ---------------------------------------------------------------- mixture

MixturePrediction mixture_prediction(const Substitution& sub, const WeightVector& gamma, const DigitStream& stream,
                                     bool simplified) {
  if (stream.is_random()) throw Error("mixture prediction needs an eventually periodic digit stream");
  const auto family = make_family(sub, gamma, stream, simplified);
  auto mu = family.init.state_marginal(family.state_count());
  auto layer = [&](unsigned digit) -> const ChainGraph& {
    if (digit >= family.layers.size()) throw Error("no automaton layer for digit " + std::to_string(digit));
    return family.layers[digit];
  };
  for (auto digit : stream.preperiod()) {
    std::vector<Rational> next(mu.size(), Rational(0));
    for (std::size_t s = 0; s < mu.size(); ++s)
      for (const auto& e : layer(digit).out[s]) next[e.target] += mu[s] * e.probability;
    mu = std::move(next);
  }
  const auto block = stream.period();
  ChainGraph chain = layer(block.front());
  for (std::size_t i = 1; i < block.size(); ++i) chain = compose(chain, layer(block[i]));
  const auto classes = recurrent_classes(chain);
  const auto absorb = absorption_probabilities(chain, classes);

  MixturePrediction pred;
  pred.block = block.size();
  pred.p0 = 0;
  for (std::size_t j = 0; j < classes.size(); ++j) {
    MixtureComponent c;
    c.states = classes[j].states;
    c.coboundary = classes[j].coboundary.coboundary;
    c.variance = classes[j].variance / Rational(static_cast<long>(block.size()));
    c.weight = 0;
    for (std::size_t s = 0; s < mu.size(); ++s) c.weight += mu[s] * absorb[s][j];
    if (c.coboundary) pred.p0 += c.weight;
    pred.components.push_back(std::move(c));
  }
  return pred;
}

// ---------------------------------------------------------------- statistics

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_discrete(const std::vector<std::pair<double, double>>& a, const std::vector<std::pair<double, double>>& b) {
  std::size_t i = 0, j = 0;
  double fa = 0, fb = 0, best = 0;
  while (i < a.size() || j < b.size()) {
    double x;
    if (j >= b.size() || (i < a.size() && a[i].first <= b[j].first)) {
      x = a[i].first;
    } else {
      x = b[j].first;
    }
    while (i < a.size() && a[i].first == x) fa += a[i++].second;
    while (j < b.size() && b[j].first == x) fb += b[j++].second;
    best = std::max(best, std::fabs(fa - fb));
  }
  return best;
}

double ks_sample_vs_discrete(std::vector<double> sample, const std::vector<std::pair<double, double>>& law) {
  std::sort(sample.begin(), sample.end());
  std::vector<std::pair<double, double>> emp;
  const double w = 1.0 / static_cast<double>(sample.size());
  for (double x : sample) {
    if (!emp.empty() && emp.back().first == x) {
      emp.back().second += w;
    } else {
      emp.emplace_back(x, w);
    }
  }
  return ks_discrete(emp, law);
}

double ks_vs_normal(std::vector<double> sample, double sd, double lattice) {
  if (sample.empty() || !(sd > 0)) throw Error("ks_vs_normal needs samples and a positive deviation");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double best = 0;
  for (std::size_t i = 0; i < sample.size();) {
    std::size_t j = i;
    while (j < sample.size() && sample[j] == sample[i]) ++j;
    const double x = sample[i];
    const double before = static_cast<double>(i) / n, after = static_cast<double>(j) / n;
    best = std::max(best, std::fabs(after - normal_cdf((x + lattice / 2) / sd)));
    best = std::max(best, std::fabs(before - normal_cdf((x - lattice / 2) / sd)));
    i = j;
  }
  return best;
}

long long lattice_span(const std::vector<long long>& scaled) {
  long long g = 0;
  for (auto v : scaled) g = std::gcd(g, v - scaled.front());
  return g;
}

Moments moments(const std::vector<double>& sample) {
  Moments m;
  if (sample.empty()) return m;
  const double n = static_cast<double>(sample.size());
  for (double x : sample) m.mean += x;
  m.mean /= n;
  double c2 = 0, c3 = 0, c4 = 0;
  for (double x : sample) {
    const double y = x - m.mean, y2 = y * y;
    c2 += y2;
    c3 += y2 * y;
    c4 += y2 * y2;
  }
  c2 /= n;
  c3 /= n;
  c4 /= n;
  m.variance = c2;
  if (c2 > 0) {
    m.skewness = c3 / std::pow(c2, 1.5);
    m.excess_kurtosis = c4 / (c2 * c2) - 3;
  }
  return m;
}

}  // namespace subshift
