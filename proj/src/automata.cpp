#include "subshift/automata.hpp"

#include <algorithm>
#include <set>

namespace subshift {

SplitDecomposition split(const Substitution& sub, std::span<const Letter> w, std::size_t m) {
  const Word image = sub.apply(w);
  if (m < 1 || m > image.size()) {
    throw Error("split position " + std::to_string(m) + " outside 1.." + std::to_string(image.size()));
  }
  return SplitDecomposition{Word(image.begin(), image.begin() + (m - 1)), image[m - 1],
                            Word(image.begin() + m, image.end())};
}

TauAutomaton::TauAutomaton(std::size_t alphabet_size, std::size_t d, unsigned tau, bool simplified)
    : k_(alphabet_size), d_(d), tau_(tau), simplified_(simplified) {}

TauState TauAutomaton::state(std::size_t index) const {
  if (index >= state_count()) throw Error("state index out of range");
  if (simplified_) return TauState{static_cast<Letter>(index / k_), Word{static_cast<Letter>(index % k_)}};
  return TauState{static_cast<Letter>(index / (k_ * k_)),
                  Word{static_cast<Letter>((index / k_) % k_), static_cast<Letter>(index % k_)}};
}

std::size_t TauAutomaton::index_of(const TauState& s) const {
  const std::size_t want = simplified_ ? 1 : 2;
  if (s.v.size() != want || s.a >= k_) throw Error("state does not belong to this automaton");
  for (Letter x : s.v)
    if (x >= k_) throw Error("state does not belong to this automaton");
  if (simplified_) return s.a * k_ + s.v[0];
  return (s.a * k_ + s.v[0]) * k_ + s.v[1];
}

void TauAutomaton::set_edges(std::vector<TauEdge> edges) {
  if (edges.size() != state_count() * d_) throw Error("automaton needs exactly d edges per state");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].source != i / d_ || edges[i].m != i % d_ + 1 || edges[i].target >= state_count()) {
      throw Error("automaton edges must be ordered by (source, m)");
    }
  }
  edges_ = std::move(edges);
}

namespace {

std::size_t require_constant_length(const Substitution& sub) {
  auto d = constant_length(sub);
  if (!d) throw Error("the automata family needs a constant-length substitution");
  return *d;
}

}  // namespace

TauAutomaton build_tau_automaton(const Substitution& sub, const WeightVector& gamma, unsigned tau) {
  const auto d = require_constant_length(sub);
  if (tau >= d) throw Error("tau must lie in 0.." + std::to_string(d - 1));
  if (gamma.size() != sub.alphabet_size()) throw Error("weight vector size does not match the alphabet");
  TauAutomaton aut(sub.alphabet_size(), d, tau, false);
  std::vector<TauEdge> edges;
  edges.reserve(aut.state_count() * d);
  for (std::size_t s = 0; s < aut.state_count(); ++s) {
    const auto st = aut.state(s);
    const Word& own = sub.image(st.a);
    const Word pair = sub.apply(st.v);  // length 2d
    for (unsigned m = 1; m <= d; ++m) {
      const std::size_t j = m + tau;  // 1-based position of the first target letter in sigma(V)
      if (j + 1 > pair.size()) throw Error("split position m+tau+1 exceeds |sigma(V)|");
      Rational v = gamma_of_word(gamma, std::span<const Letter>(own).subspan(m)) +
                   gamma_of_word(gamma, std::span<const Letter>(pair).first(j - 1));
      const TauState target{own[m - 1], Word{pair[j - 1], pair[j]}};
      edges.push_back(TauEdge{s, m, std::move(v), aut.index_of(target)});
    }
  }
  aut.set_edges(std::move(edges));
  return aut;
}

TauAutomaton build_simplified_automaton(const Substitution& sub, const WeightVector& gamma) {
  const auto d = require_constant_length(sub);
  if (gamma.size() != sub.alphabet_size()) throw Error("weight vector size does not match the alphabet");
  TauAutomaton aut(sub.alphabet_size(), d, 0, true);
  std::vector<TauEdge> edges;
  edges.reserve(aut.state_count() * d);
  for (std::size_t s = 0; s < aut.state_count(); ++s) {
    const auto st = aut.state(s);
    const Word& own = sub.image(st.a);
    const Word& other = sub.image(st.v[0]);
    for (unsigned m = 1; m <= d; ++m) {
      Rational v = gamma_of_word(gamma, std::span<const Letter>(own).subspan(m)) +
                   gamma_of_word(gamma, std::span<const Letter>(other).first(m - 1));
      const TauState target{own[m - 1], Word{other[m - 1]}};
      edges.push_back(TauEdge{s, m, std::move(v), aut.index_of(target)});
    }
  }
  aut.set_edges(std::move(edges));
  return aut;
}

std::optional<std::pair<Letter, std::size_t>> common_letter(const Substitution& sub, Letter b, Letter c) {
  const auto& x = sub.image(b);
  const auto& y = sub.image(c);
  for (std::size_t j = 0; j < std::min(x.size(), y.size()); ++j) {
    if (x[j] == y[j]) return std::make_pair(x[j], j + 1);
  }
  return std::nullopt;
}

std::vector<Letter> synchronizable_letters(const Substitution& sub) {
  std::set<Letter> found;
  const auto k = sub.alphabet_size();
  for (Letter b = 0; b < k; ++b)
    for (Letter c = b + 1; c < k; ++c) {
      const auto& x = sub.image(b);
      const auto& y = sub.image(c);
      for (std::size_t j = 0; j < std::min(x.size(), y.size()); ++j)
        if (x[j] == y[j]) found.insert(x[j]);
    }
  return {found.begin(), found.end()};
}

bool is_synchronizable(const Substitution& sub) {
  const auto k = sub.alphabet_size();
  for (Letter b = 0; b < k; ++b)
    for (Letter c = b + 1; c < k; ++c)
      if (!common_letter(sub, b, c)) return false;
  return true;
}

bool is_strongly_non_synchronizable(const Substitution& sub) { return synchronizable_letters(sub).empty(); }

std::optional<TwoLetterForm> nonsync_two_letter(const Substitution& sub) {
  if (sub.alphabet_size() != 2) return std::nullopt;
  const auto d = constant_length(sub);
  if (!d || !is_strongly_non_synchronizable(sub)) return std::nullopt;
  const auto mat = matrix_of(sub);
  if (!eigenvector_for(mat, Rational(1))) return std::nullopt;
  Word swapped = sub.image(0);
  for (auto& x : swapped) x = 1 - x;
  if (swapped != sub.image(1)) return std::nullopt;
  const long k = mat(0, 1).get_si();
  if (mat != IntMatrix::from_rows({{k + 1, k}, {k, k + 1}}) || static_cast<std::size_t>(2 * k + 1) != *d) {
    return std::nullopt;
  }
  return TwoLetterForm{static_cast<std::size_t>(k), *d};
}

}  // namespace subshift
