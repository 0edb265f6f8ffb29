#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "subshift/substitution.hpp"

namespace subshift {

/// One split sigma(parent) = prefix . center . suffix.
struct PSTriple {
  Word prefix;
  Letter center = 0;
  Word suffix;
  Letter parent = 0;

  bool operator==(const PSTriple&) const = default;
};

/// States are letters; the edges out of `parent` are the |sigma(parent)| splits of its image.
class PSAutomaton {
 public:
  explicit PSAutomaton(const Substitution& sub);

  std::size_t state_count() const noexcept { return edges_.size(); }
  std::size_t edge_count() const noexcept;
  const std::vector<PSTriple>& edges_from(Letter parent) const { return edges_.at(parent); }
  const PSTriple& edge(Letter parent, std::size_t position) const { return edges_.at(parent).at(position); }

 private:
  std::vector<std::vector<PSTriple>> edges_;
};

PSAutomaton build_ps_automaton(const Substitution& sub);

/// Level 0 first: path[i+1].center == path[i].parent.
using PSPath = std::vector<PSTriple>;

enum class PointKind { random_path, periodic_tail };

/// Finite window x[-|left|..|right|-1] of a point of the subshift.
///
/// The window sits inside sigma^level(top) with x_0 at offset `origin`.
struct SymbolicPoint {
  Word left;
  Word right;
  PSPath path;
  Letter top = 0;
  unsigned level = 0;
  std::uint64_t origin = 0;
  PointKind kind = PointKind::random_path;
};

/// Throws Error if some triple does not split its parent's image or levels do not chain.
void validate_path(const Substitution& sub, const PSPath& path);

/// Window of x^- = sigma^{K-1}(p_{K-1})...p_0 and x^+ = c_0 s_0 ... sigma^{K-1}(s_{K-1}),
/// each side capped at `window` letters.
SymbolicPoint point_from_path(const Substitution& sub, const PSPath& path, std::size_t window);

/// Top letter uniform, then a uniform position in the image at each level going down.
PSPath sample_path(const Substitution& sub, std::size_t depth, std::mt19937_64& rng);
SymbolicPoint sample_point(const Substitution& sub, std::size_t depth, std::uint64_t seed,
                           std::size_t window = 4096);

/// Random point whose window has at least `min_left` and `min_right` letters on each side.
/// Deepens the sampled path until sigma^K(top) covers both sides.
SymbolicPoint sample_covering_point(const Substitution& sub, std::uint64_t min_left, std::uint64_t min_right,
                                    std::mt19937_64& rng, unsigned max_depth = 64);

/// PS-path of the position `origin` inside sigma^level(top).
PSPath decompose(const Substitution& sub, Letter top, unsigned level, std::uint64_t origin);

/// `count` letters of sigma^level(top) starting at offset `from`, by descent.
Word extract(const Substitution& sub, Letter top, unsigned level, std::uint64_t from, std::size_t count);

/// Checks the window against sigma^level(top) read independently at the recorded offset.
bool window_is_consistent(const Substitution& sub, const SymbolicPoint& point);

/// Points x = lim sigma^{nq}(b) . lim sigma^{nq}(a) for legal words ba with b fixed by the
/// last-letter map and a by the first-letter map, and their shifts T^{-j}, 0 <= j < shifts.
/// Every level above the origin then has an empty suffix.
std::vector<SymbolicPoint> periodic_tail_points(const Substitution& sub, std::size_t window, std::size_t shifts);

}  // namespace subshift
