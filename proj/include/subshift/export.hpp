#pragma once

#include <optional>
#include <string>
#include <vector>

#include "subshift/io.hpp"
#include "subshift/markov.hpp"
#include "subshift/prefix_suffix.hpp"
#include "subshift/salem.hpp"

namespace subshift {

/// "a|VW" (or "a|V" when simplified) in the substitution's symbols.
std::string state_label(const Substitution& sub, const TauAutomaton& automaton, std::size_t state);

/// Letters as nodes, one edge per split labelled "p|c|s".
std::string ps_automaton_dot(const Substitution& sub, const PSAutomaton& automaton);
/// Edges labelled "m:v"; recurrent classes are filled with one color each, transient states stay white.
std::string tau_automaton_dot(const Substitution& sub, const TauAutomaton& automaton,
                              const std::vector<RecurrentClass>& classes = {});
std::string chain_dot(const ChainGraph& chain, const std::vector<std::string>& labels,
                      const std::vector<RecurrentClass>& classes);

Json automaton_json(const Substitution& sub, const TauAutomaton& automaton);
Json chain_json(const ChainGraph& chain, const std::vector<std::string>& labels,
                const std::vector<RecurrentClass>& classes);

/// Matrix, char poly, primitivity, length, eigenvalue-1 eigenvector and the deviation constant.
Json analyze_json(const Substitution& sub, const std::optional<WeightVector>& gamma);
Json salem_json(const SalemReport& report);

struct GalleryClaim {
  std::string figure;
  std::string claim;
  bool pass = false;
  std::string detail;
};

struct GalleryFigure {
  std::string name;
  Substitution sub;
  WeightVector gamma;
  TauAutomaton automaton;
  std::vector<RecurrentClass> classes;
};

/// The four example automata and their structural claims.
struct Gallery {
  std::vector<GalleryFigure> figures;
  std::vector<GalleryClaim> claims;
  bool all_pass() const;
};
Gallery build_gallery();

}  // namespace subshift
