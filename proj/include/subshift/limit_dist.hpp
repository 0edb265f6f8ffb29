#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subshift/markov.hpp"
#include "subshift/prefix_suffix.hpp"

namespace subshift {

/// Base-d expansion t = tau_0 . tau_1 tau_2 ... with leading digit tau_0 in 1..d-1.
///
/// Deterministic streams are preperiod followed by a repeated period (zeros when the
/// period is empty); random streams draw tau_k, k >= 1, uniformly from a seeded generator.
class DigitStream {
 public:
  static DigitStream periodic(unsigned base, unsigned leading, std::vector<unsigned> preperiod,
                              std::vector<unsigned> period);
  static DigitStream random(unsigned base, unsigned leading, std::uint64_t seed);
  /// Exact long division. t is first multiplied by a power of the base to land in [1, base);
  /// the exponent is kept in shift().
  static DigitStream from_rational(unsigned base, const Rational& t);
  /// "LIST[:PERIOD]": comma-separated digits starting with the leading one, then the period.
  static DigitStream parse(unsigned base, const std::string& text);

  unsigned base() const noexcept { return base_; }
  unsigned leading() const noexcept { return leading_; }
  bool is_random() const noexcept { return random_; }
  std::uint64_t seed() const noexcept { return seed_; }
  int shift() const noexcept { return shift_; }
  const std::vector<unsigned>& preperiod() const noexcept { return preperiod_; }
  /// Period block; a single 0 for finite expansions.
  std::vector<unsigned> period() const;
  bool finite() const noexcept { return !random_ && period_.empty(); }

  /// tau_1 .. tau_n.
  std::vector<unsigned> digits(std::size_t n) const;
  /// floor(d^n t) = sum_{k=0..n} tau_k d^{n-k}.
  Integer horizon(std::size_t n) const;
  std::string describe() const;

 private:
  unsigned base_ = 2;
  unsigned leading_ = 1;
  std::vector<unsigned> preperiod_;
  std::vector<unsigned> period_;
  bool random_ = false;
  std::uint64_t seed_ = 0;
  int shift_ = 0;
};

/// One chain per digit value plus the initial law for the stream's leading digit.
struct ChainFamily {
  std::size_t d = 2;
  bool simplified = false;
  std::vector<ChainGraph> layers;
  InitialDistribution init;
  std::vector<Rational> endpoint;  // per state: gamma of its first letter
  std::size_t state_count() const { return layers.front().size(); }
};

/// The simplified family is only accepted when every digit after the leading one is 0.
ChainFamily make_family(const Substitution& sub, const WeightVector& gamma, const DigitStream& stream,
                        bool simplified = false);

class SupportCapExceeded : public Error {
 public:
  SupportCapExceeded(std::size_t reached_n, std::size_t pairs);
  std::size_t reached_n() const noexcept { return reached_n_; }

 private:
  std::size_t reached_n_;
};

/// Joint law of (X_n, sum) as integer weights over a common denominator.
/// A sum value v stands for v / scale.
struct SumDistribution {
  std::size_t n = 0;
  Integer scale = 1;
  Integer denominator = 1;
  std::vector<long> offset;                  // per state: sum value of weight[s][0]
  std::vector<std::vector<Integer>> weight;  // per state, dense over [offset, offset + size)

  std::size_t support_pairs() const;
  Rational total_mass() const;
  /// Marginal law of the sum, sorted by value.
  std::vector<std::pair<long, Integer>> marginal() const;
  Rational mean() const;
  Rational variance() const;
  /// Smallest and largest sum value carrying mass, already divided by scale.
  std::pair<Rational, Rational> support_range() const;
  /// (value, probability) in floating point for goodness-of-fit work.
  std::vector<std::pair<double, double>> marginal_double() const;
};

/// chain: sum_{k=1..n} g_k.  word: g_0 + sum_k g_k + gamma of the final state's letter, which is
/// the ergodic sum S_{floor(d^n t)} itself.
enum class SumKind { chain, word };

struct DistributionOptions {
  std::size_t support_cap = 1'000'000;
  SumKind kind = SumKind::chain;
};

/// Digit-by-digit convolution through layers tau_1..tau_n.
SumDistribution exact_sum_distribution(const ChainFamily& family, const std::vector<unsigned>& digits,
                                       std::size_t n, const DistributionOptions& options = {});

struct EmpiricalSample {
  std::vector<double> values;        // sum values (already divided by the scale)
  std::vector<long long> scaled;     // exact lattice values
  std::vector<std::size_t> final_state;
  long long scale = 1;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::vector<unsigned> digits;
};

/// Worker count: hardware concurrency capped by SUBSHIFT_LAB_THREADS.
unsigned worker_count();

/// Samples are drawn in fixed chunks with per-chunk seeds, so the output does not depend on the
/// number of threads.
EmpiricalSample monte_carlo(const ChainFamily& family, const std::vector<unsigned>& digits, std::size_t n,
                            std::size_t samples, std::uint64_t seed, SumKind kind = SumKind::chain);

/// Sample variances of S_1 .. S_{n_max} from shared trajectories.
std::vector<double> monte_carlo_variances(const ChainFamily& family, const std::vector<unsigned>& digits,
                                          std::size_t n_max, std::size_t samples, std::uint64_t seed);

struct WordChainResult {
  Integer horizon;    // N = floor(d^n t)
  Rational word_sum;  // gamma(z_0 ... z_{N-1})
  Rational chain_sum; // g_0(X_0) + sum_k g_k(X_{k-1}, m_k)
  Rational discrepancy;
  Rational first_letter;  // gamma(z_0)
  bool final_letter_matches = false;  // chain's final letter equals z_0
};

/// Compares the direct ergodic sum on a random point with the chain sum along its path.
WordChainResult word_vs_chain_check(const Substitution& sub, const WeightVector& gamma, const DigitStream& stream,
                                    std::size_t n, std::uint64_t point_seed);

struct VarianceGrowth {
  std::vector<std::size_t> n;
  std::vector<double> variance;
  double slope = 0;
  double intercept = 0;
};

/// Least squares fit of log V_n against log n over n in [n_min, n_max] with V_n > 0.
VarianceGrowth fit_growth(const std::vector<std::size_t>& n, const std::vector<double>& variance, std::size_t n_min,
                          std::size_t n_max);

struct GrowthOptions {
  std::size_t n_min = 20;
  std::size_t n_max = 200;
  std::size_t samples = 100'000;
  std::uint64_t seed = 1;
  bool exact = false;
};

VarianceGrowth variance_growth(const Substitution& sub, const WeightVector& gamma, const DigitStream& stream,
                               const GrowthOptions& options);

struct MixtureComponent {
  std::vector<std::size_t> states;  // recurrent class of the period-block chain
  Rational weight;                  // absorption probability from the initial law
  Rational variance;                // asymptotic variance per layer
  bool coboundary = false;
};

struct MixturePrediction {
  std::vector<MixtureComponent> components;
  Rational p0;  // total weight of coboundary classes
  std::size_t block = 1;
};

/// Eventually periodic streams only: pushes the initial law through the preperiod, composes the
/// period block, and reads weights from absorption probabilities.
MixturePrediction mixture_prediction(const Substitution& sub, const WeightVector& gamma, const DigitStream& stream,
                                     bool simplified = false);

double normal_cdf(double x);

/// sup |F - G| over two discrete laws given as sorted (value, probability) lists.
double ks_discrete(const std::vector<std::pair<double, double>>& a, const std::vector<std::pair<double, double>>& b);
/// Empirical law of the sample against a discrete law.
double ks_sample_vs_discrete(std::vector<double> sample, const std::vector<std::pair<double, double>>& law);
/// Lattice sample against N(0, sd^2): F_emp(x) is compared with Phi((x + h/2)/sd) and
/// F_emp(x-) with Phi((x - h/2)/sd). h = 0 gives the plain statistic.
double ks_vs_normal(std::vector<double> sample, double sd, double lattice = 0);
/// gcd of differences between sample values on the integer lattice.
long long lattice_span(const std::vector<long long>& scaled);

struct Moments {
  double mean = 0;
  double variance = 0;
  double skewness = 0;
  double excess_kurtosis = 0;
};
Moments moments(const std::vector<double>& sample);

}  // namespace subshift
