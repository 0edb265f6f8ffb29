#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "subshift/prefix_suffix.hpp"

namespace subshift {

/// partials[n] = gamma(w_0) + ... + gamma(w_{n-1}); partials[0] = 0.
struct SumTrace {
  std::vector<Rational> partials;
};

SumTrace ergodic_sums(const WeightVector& gamma, std::span<const Letter> w);

/// max_c |gamma(c)| + max over PS-automaton suffixes |gamma(s)| + max over proper image prefixes |gamma(P)|.
///
/// Throws unless M gamma = theta gamma holds with |theta| = 1.
Rational theorem1_constant(const Substitution& sub, const WeightVector& gamma);

struct WkTerm {
  unsigned k = 0;
  std::uint64_t length = 0;
  Rational value;     // gamma(W_k) summed letter by letter
  Rational expected;  // theta^k (gamma(c_k) + gamma(s_k) + gamma(Pi_k))
  bool prefix_of_window = false;
};

struct WkReport {
  std::vector<WkTerm> terms;
  std::vector<unsigned> skipped;  // levels with s_{k+1} empty, no c_k in sigma(s_{k+1}), or too long
  bool second_case = false;       // every suffix on the path is empty
};

/// W_k = S_k sigma^k(s_k) sigma^k(Pi_k) P_k for k = 0..K-2 where sigma(s_{k+1}) = Pi_k c_k Sigma_k
/// at the first occurrence of c_k. Words longer than `max_length` are skipped.
/// Throws Error if gamma(W_k) differs from the closed form.
WkReport wk_prefixes(const Substitution& sub, const WeightVector& gamma, const PSPath& path,
                     std::uint64_t max_length = std::uint64_t{1} << 20);

enum class Direction { forward, backward };

/// min over from <= n <= horizon of |S_n| along x_0 x_1 ... (forward) or
/// x_{-1} x_{-2} ... (backward). Throws if the window is shorter than the horizon.
Rational liminf_probe(const WeightVector& gamma, const SymbolicPoint& point, std::size_t horizon,
                      Direction direction = Direction::forward, std::size_t from = 1);

}  // namespace subshift
