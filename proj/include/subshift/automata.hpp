#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "subshift/substitution.hpp"

namespace subshift {

/// sigma(W) = prefix . center . suffix with |prefix| = m - 1.
struct SplitDecomposition {
  Word prefix;
  Letter center = 0;
  Word suffix;
};

/// Throws unless 1 <= m <= |sigma(W)|.
SplitDecomposition split(const Substitution& sub, std::span<const Letter> w, std::size_t m);

struct TauState {
  Letter a = 0;
  Word v;  // two letters, or one for the simplified automaton

  bool operator==(const TauState&) const = default;
};

struct TauEdge {
  std::size_t source = 0;
  unsigned m = 0;  // 1..d
  Rational payoff;
  std::size_t target = 0;
};

/// Complete automaton: every state of A x A^2 (or A x A), d edges each, ordered by m.
class TauAutomaton {
 public:
  TauAutomaton(std::size_t alphabet_size, std::size_t d, unsigned tau, bool simplified);

  std::size_t alphabet_size() const noexcept { return k_; }
  std::size_t length() const noexcept { return d_; }
  unsigned tau() const noexcept { return tau_; }
  bool simplified() const noexcept { return simplified_; }

  std::size_t state_count() const noexcept { return simplified_ ? k_ * k_ : k_ * k_ * k_; }
  TauState state(std::size_t index) const;
  std::size_t index_of(const TauState& s) const;

  const std::vector<TauEdge>& edges() const noexcept { return edges_; }
  std::span<const TauEdge> out_edges(std::size_t source) const {
    return std::span<const TauEdge>(edges_).subspan(source * d_, d_);
  }
  const TauEdge& edge(std::size_t source, unsigned m) const { return edges_.at(source * d_ + (m - 1)); }

  void set_edges(std::vector<TauEdge> edges);

 private:
  std::size_t k_, d_;
  unsigned tau_;
  bool simplified_;
  std::vector<TauEdge> edges_;
};

/// Edge (a,V) --m--> (c^{a,m}, c^{V,m+tau} c^{V,m+tau+1}) with payoff gamma(S^{a,m}) + gamma(P^{V,m+tau}).
TauAutomaton build_tau_automaton(const Substitution& sub, const WeightVector& gamma, unsigned tau);

/// tau = 0 on A x A: (a,b) --m--> (c^{a,m}, c^{b,m}) with payoff gamma(S^{a,m}) + gamma(P^{b,m}).
TauAutomaton build_simplified_automaton(const Substitution& sub, const WeightVector& gamma);

/// Letters occurring at the same position in the images of two distinct letters.
std::vector<Letter> synchronizable_letters(const Substitution& sub);
/// Letter found at a common position of sigma(b) and sigma(c), if any.
std::optional<std::pair<Letter, std::size_t>> common_letter(const Substitution& sub, Letter b, Letter c);
/// Every pair of letters shares a letter at some position.
bool is_synchronizable(const Substitution& sub);
bool is_strongly_non_synchronizable(const Substitution& sub);

struct TwoLetterForm {
  std::size_t k = 0;
  std::size_t d = 0;
};

/// (k, 2k+1) when a 2-letter strongly non-synchronizable substitution has eigenvalue 1,
/// with sigma(b) the letter swap of sigma(a) and M = [[k+1,k],[k,k+1]].
std::optional<TwoLetterForm> nonsync_two_letter(const Substitution& sub);

}  // namespace subshift
