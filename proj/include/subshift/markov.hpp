#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "subshift/automata.hpp"
#include "subshift/linalg.hpp"

namespace subshift {

struct ChainEdge {
  std::size_t target = 0;
  Rational probability;
  Rational payoff;
  std::size_t label = 0;  // automaton position m, or the composed position for products
};

/// Finite chain with exact transition probabilities and edge payoffs.
struct ChainGraph {
  std::vector<std::vector<ChainEdge>> out;
  std::vector<unsigned> digits;  // layer digits this chain was built from

  std::size_t size() const noexcept { return out.size(); }
  /// Throws unless every row sums to exactly 1 and targets are in range.
  void check_stochastic() const;
};

/// Probability 1/d on each edge of the automaton.
ChainGraph chain_of(const TauAutomaton& automaton);

/// Tarjan; components listed in reverse topological order, states sorted inside each.
std::vector<std::vector<std::size_t>> strongly_connected_components(const ChainGraph& chain);
bool is_strongly_connected(const ChainGraph& chain);
bool is_closed(const ChainGraph& chain, const std::vector<std::size_t>& states);

/// gcd of cycle lengths inside the class.
std::size_t period(const ChainGraph& chain, const std::vector<std::size_t>& states);

/// Edge reference (source, index into out[source]).
using EdgeRef = std::pair<std::size_t, std::size_t>;

struct CoboundaryWitness {
  bool coboundary = false;
  std::map<std::size_t, Rational> potential;  // payoff(e) = h(target) - h(source) when coboundary
  std::vector<EdgeRef> cycle;                 // closed walk with nonzero payoff sum otherwise
  Rational cycle_sum;
};

CoboundaryWitness coboundary_on_class(const ChainGraph& chain, const std::vector<std::size_t>& states);

/// Stationary law of the closed class, aligned with `states`.
std::vector<Rational> stationary(const ChainGraph& chain, const std::vector<std::size_t>& states);
Rational expected_payoff(const ChainGraph& chain, const std::vector<std::size_t>& states,
                         const std::vector<Rational>& pi);
/// lim Var(S_n)/n from the Poisson equation; throws on a nonzero mean.
Rational asymptotic_variance(const ChainGraph& chain, const std::vector<std::size_t>& states);

struct RecurrentClass {
  std::vector<std::size_t> states;
  std::size_t period = 1;
  std::vector<Rational> stationary;
  Rational expected_payoff;
  CoboundaryWitness coboundary;
  Rational variance;
};

/// Closed strongly connected components with their full analysis.
std::vector<RecurrentClass> recurrent_classes(const ChainGraph& chain);
std::vector<std::size_t> transient_states(const ChainGraph& chain, const std::vector<RecurrentClass>& classes);

/// One step of `first` followed by one step of `second`; labels combine as (l1 - 1) * deg + l2.
ChainGraph compose(const ChainGraph& first, const ChainGraph& second);
/// Composition of chain_of(A_tau) over the digits of the block.
ChainGraph product_chain(const Substitution& sub, const WeightVector& gamma, const std::vector<unsigned>& block);

RationalMatrix transition_matrix(const ChainGraph& chain);
/// alpha = 1 - max_{a,b,c} |P(a,c) - P(b,c)|.
Rational ergodic_coefficient(const RationalMatrix& p);

/// result[s][j] = probability of entering classes[j] from state s.
std::vector<std::vector<Rational>> absorption_probabilities(const ChainGraph& chain,
                                                            const std::vector<RecurrentClass>& classes);

/// Frequencies of letters for a primitive constant-length substitution.
std::vector<Rational> letter_frequencies(const Substitution& sub);
/// Frequencies of the legal blocks of the given length (left eigenvector of the block matrix).
std::map<Word, Rational> block_frequencies(const Substitution& sub, std::size_t length);

struct InitialEntry {
  std::size_t state = 0;
  Rational g0;
  Rational probability;
};

/// Law of (X_0, g_0) from the frequencies of (d+1)-blocks I:
/// X_0 = (I_0, I_tau0 I_{tau0+1}) (or (I_0, I_tau0) when simplified), g_0 = gamma(I_1 ... I_{tau0-1}).
struct InitialDistribution {
  std::vector<InitialEntry> entries;

  std::vector<Rational> state_marginal(std::size_t state_count) const;
  Rational total() const;
};

InitialDistribution initial_distribution(const Substitution& sub, const WeightVector& gamma, unsigned leading_digit,
                                         bool simplified);

}  // namespace subshift
