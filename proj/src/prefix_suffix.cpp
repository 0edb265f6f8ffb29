#include "subshift/prefix_suffix.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace subshift {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

// lens[p][x] = |sigma^p(x)| for p = 0..level.
std::vector<std::vector<std::uint64_t>> length_table(const Substitution& sub, unsigned level) {
  std::vector<std::vector<std::uint64_t>> lens;
  lens.reserve(level + 1);
  lens.push_back(std::vector<std::uint64_t>(sub.alphabet_size(), 1));
  for (unsigned p = 1; p <= level; ++p) {
    std::vector<std::uint64_t> next(sub.alphabet_size(), 0);
    for (Letter a = 0; a < sub.alphabet_size(); ++a)
      for (Letter b : sub.image(a)) {
        const auto add = lens.back()[b];
        next[a] = next[a] > kSaturated - add ? kSaturated : next[a] + add;
      }
    lens.push_back(std::move(next));
  }
  return lens;
}

void require_unsaturated(std::uint64_t v) {
  if (v == kSaturated) throw Error("block length overflows 64-bit offsets; use a smaller level");
}

void emit_range(const Substitution& sub, const std::vector<std::vector<std::uint64_t>>& lens, Letter x, unsigned p,
                std::uint64_t lo, std::uint64_t hi, Word& out) {
  if (p == 0) {
    if (lo == 0 && hi >= 1) out.push_back(x);
    return;
  }
  std::uint64_t offset = 0;
  for (Letter y : sub.image(x)) {
    const auto len = lens[p - 1][y];
    require_unsaturated(len);
    if (offset >= hi) return;
    if (offset + len > lo) {
      auto sub_lo = lo > offset ? lo - offset : 0;
      auto sub_hi = std::min(hi - offset, len);
      emit_range(sub, lens, y, p - 1, sub_lo, sub_hi, out);
    }
    offset += len;
  }
}

std::size_t map_period(const std::vector<Letter>& f, Letter a) {
  Letter x = a;
  for (std::size_t q = 1; q <= f.size(); ++q) {
    x = f[x];
    if (x == a) return q;
  }
  return 0;
}

}  // namespace

PSAutomaton::PSAutomaton(const Substitution& sub) : edges_(sub.alphabet_size()) {
  for (Letter a = 0; a < sub.alphabet_size(); ++a) {
    const auto& img = sub.image(a);
    for (std::size_t j = 0; j < img.size(); ++j) {
      edges_[a].push_back(PSTriple{Word(img.begin(), img.begin() + j), img[j], Word(img.begin() + j + 1, img.end()), a});
    }
  }
}

std::size_t PSAutomaton::edge_count() const noexcept {
  std::size_t n = 0;
  for (const auto& e : edges_) n += e.size();
  return n;
}

PSAutomaton build_ps_automaton(const Substitution& sub) { return PSAutomaton(sub); }

void validate_path(const Substitution& sub, const PSPath& path) {
  if (path.empty()) throw Error("prefix-suffix path must have at least one level");
  for (std::size_t i = 0; i < path.size(); ++i) {
    const auto& t = path[i];
    if (t.parent >= sub.alphabet_size() || t.center >= sub.alphabet_size()) {
      throw Error("path level " + std::to_string(i) + " uses an unknown letter");
    }
    Word joined = t.prefix;
    joined.push_back(t.center);
    joined.insert(joined.end(), t.suffix.begin(), t.suffix.end());
    if (joined != sub.image(t.parent)) {
      throw Error("path level " + std::to_string(i) + " is not a split of sigma(" + sub.symbol(t.parent) + ")");
    }
    if (i + 1 < path.size() && path[i + 1].center != t.parent) {
      throw Error("path levels " + std::to_string(i) + " and " + std::to_string(i + 1) + " do not chain");
    }
  }
}

SymbolicPoint point_from_path(const Substitution& sub, const PSPath& path, std::size_t window) {
  validate_path(sub, path);
  const auto depth = static_cast<unsigned>(path.size());
  SymbolicPoint pt;
  pt.path = path;
  pt.top = path.back().parent;
  pt.level = depth;
  pt.kind = PointKind::random_path;

  // right: c_0 s_0 sigma(s_1) ... sigma^{K-1}(s_{K-1})
  if (window > 0) pt.right.push_back(path[0].center);
  for (unsigned i = 0; i < depth && pt.right.size() < window; ++i) {
    auto piece = expand_prefix(sub, path[i].suffix, i, window - pt.right.size());
    pt.right.insert(pt.right.end(), piece.begin(), piece.end());
  }
  // left, built from p_0 outwards: sigma^{K-1}(p_{K-1}) ... sigma(p_1) p_0
  Word reversed;
  for (unsigned i = 0; i < depth && reversed.size() < window; ++i) {
    auto piece = expand_suffix(sub, path[i].prefix, i, window - reversed.size());
    reversed.insert(reversed.end(), piece.rbegin(), piece.rend());
  }
  pt.left.assign(reversed.rbegin(), reversed.rend());

  const auto lens = length_table(sub, depth);
  std::uint64_t origin = 0;
  for (unsigned i = 0; i < depth; ++i)
    for (Letter x : path[i].prefix) {
      require_unsaturated(lens[i][x]);
      origin += lens[i][x];
    }
  pt.origin = origin;
  return pt;
}

PSPath sample_path(const Substitution& sub, std::size_t depth, std::mt19937_64& rng) {
  if (depth == 0) throw Error("sample_path needs depth >= 1");
  std::uniform_int_distribution<Letter> pick_letter(0, static_cast<Letter>(sub.alphabet_size() - 1));
  PSPath path(depth);
  Letter parent = pick_letter(rng);
  for (std::size_t i = depth; i-- > 0;) {
    const auto& img = sub.image(parent);
    std::uniform_int_distribution<std::size_t> pick_pos(0, img.size() - 1);
    const auto j = pick_pos(rng);
    path[i] = PSTriple{Word(img.begin(), img.begin() + j), img[j], Word(img.begin() + j + 1, img.end()), parent};
    parent = img[j];
  }
  return path;
}

SymbolicPoint sample_point(const Substitution& sub, std::size_t depth, std::uint64_t seed, std::size_t window) {
  std::mt19937_64 rng(seed);
  return point_from_path(sub, sample_path(sub, depth, rng), window);
}

SymbolicPoint sample_covering_point(const Substitution& sub, std::uint64_t min_left, std::uint64_t min_right,
                                    std::mt19937_64& rng, unsigned max_depth) {
  // occurrences[c] = (parent, position) pairs with sigma(parent)[position] == c
  std::vector<std::vector<std::pair<Letter, std::size_t>>> occurrences(sub.alphabet_size());
  for (Letter a = 0; a < sub.alphabet_size(); ++a)
    for (std::size_t j = 0; j < sub.image(a).size(); ++j) occurrences[sub.image(a)[j]].emplace_back(a, j);

  std::uniform_int_distribution<Letter> pick_letter(0, static_cast<Letter>(sub.alphabet_size() - 1));
  Letter c = pick_letter(rng);
  PSPath path;
  std::uint64_t left = 0, right = 1;
  std::vector<std::uint64_t> lens(sub.alphabet_size(), 1);  // |sigma^level(x)|
  while (left < min_left || right < min_right) {
    if (path.size() >= max_depth) throw Error("sample_covering_point: window not covered within the depth limit");
    const auto& occ = occurrences[c];
    if (occ.empty()) throw Error("letter " + sub.symbol(c) + " occurs in no image");
    std::uniform_int_distribution<std::size_t> pick(0, occ.size() - 1);
    const auto [parent, j] = occ[pick(rng)];
    const auto& img = sub.image(parent);
    PSTriple t{Word(img.begin(), img.begin() + j), img[j], Word(img.begin() + j + 1, img.end()), parent};
    for (Letter x : t.prefix) left += lens[x];
    for (Letter x : t.suffix) right += lens[x];
    require_unsaturated(left);
    require_unsaturated(right);
    path.push_back(std::move(t));
    std::vector<std::uint64_t> next(sub.alphabet_size(), 0);
    for (Letter a = 0; a < sub.alphabet_size(); ++a)
      for (Letter b : sub.image(a)) next[a] += lens[b];
    lens = std::move(next);
    c = parent;
  }
  return point_from_path(sub, path, static_cast<std::size_t>(std::max(min_left, min_right)));
}

PSPath decompose(const Substitution& sub, Letter top, unsigned level, std::uint64_t origin) {
  if (level == 0) throw Error("decompose needs level >= 1");
  const auto lens = length_table(sub, level);
  require_unsaturated(lens[level][top]);
  if (origin >= lens[level][top]) throw Error("decompose: offset lies outside sigma^level(top)");
  PSPath path(level);
  Letter c = top;
  std::uint64_t o = origin;
  for (unsigned i = level; i-- > 0;) {
    const auto& img = sub.image(c);
    for (std::size_t j = 0; j < img.size(); ++j) {
      const auto len = lens[i][img[j]];
      if (o < len) {
        path[i] = PSTriple{Word(img.begin(), img.begin() + j), img[j], Word(img.begin() + j + 1, img.end()), c};
        c = img[j];
        break;
      }
      o -= len;
    }
  }
  return path;
}

Word extract(const Substitution& sub, Letter top, unsigned level, std::uint64_t from, std::size_t count) {
  const auto lens = length_table(sub, level);
  require_unsaturated(lens[level][top]);
  if (from > lens[level][top] || count > lens[level][top] - from) {
    throw Error("extract: range lies outside sigma^level(top)");
  }
  Word out;
  out.reserve(count);
  emit_range(sub, lens, top, level, from, from + count, out);
  return out;
}

bool window_is_consistent(const Substitution& sub, const SymbolicPoint& point) {
  if (point.origin < point.left.size()) return false;
  Word joined = point.left;
  joined.insert(joined.end(), point.right.begin(), point.right.end());
  try {
    return extract(sub, point.top, point.level, point.origin - point.left.size(), joined.size()) == joined;
  } catch (const Error&) {
    return false;
  }
}

std::vector<SymbolicPoint> periodic_tail_points(const Substitution& sub, std::size_t window, std::size_t shifts) {
  const auto k = sub.alphabet_size();
  std::vector<Letter> first(k), last(k);
  for (Letter a = 0; a < k; ++a) {
    first[a] = sub.image(a).front();
    last[a] = sub.image(a).back();
  }
  std::vector<SymbolicPoint> out;
  for (const auto& ba : legal_factors(sub, 2)) {
    const Letter b = ba[0], a = ba[1];
    const auto qa = map_period(first, a), qb = map_period(last, b);
    if (qa == 0 || qb == 0) continue;
    const auto q = static_cast<unsigned>(std::lcm(qa, qb));

    // smallest multiple of q making both blocks long enough
    unsigned power = q;
    for (;; power += q) {
      auto lens = image_lengths(sub, power);
      if (lens[b] >= window + shifts && lens[a] >= window) break;
      if (power > 64 * q) throw Error("periodic_tail_points: letters do not grow");
    }

    // host block sigma^M(c) containing ba
    bool found = false;
    Letter host = 0;
    unsigned host_level = 0;
    std::size_t host_pos = 0;
    for (unsigned m = 1; m <= 16 && !found; ++m) {
      for (Letter c = 0; c < k && !found; ++c) {
        auto w = expand_prefix(sub, Word{c}, m, std::size_t{1} << 20);
        for (std::size_t i = 0; i + 1 < w.size(); ++i) {
          if (w[i] == b && w[i + 1] == a) {
            found = true;
            host = c;
            host_level = m;
            host_pos = i;
            break;
          }
        }
      }
    }
    if (!found) continue;

    const auto host_word = expand_prefix(sub, Word{host}, host_level, host_pos + 1);
    const auto lens = image_lengths(sub, power);
    std::uint64_t boundary = 0;  // start of the sigma^power(a) block
    for (Letter x : host_word) {
      require_unsaturated(lens[x]);
      boundary += lens[x];
    }
    for (std::size_t j = 1; j <= shifts; ++j) {
      SymbolicPoint pt;
      pt.kind = PointKind::periodic_tail;
      pt.top = host;
      pt.level = host_level + power;
      pt.origin = boundary - j;
      pt.left = extract(sub, pt.top, pt.level, pt.origin - window, window);
      pt.right = extract(sub, pt.top, pt.level, pt.origin, window);
      pt.path = decompose(sub, pt.top, pt.level, pt.origin);
      out.push_back(std::move(pt));
    }
  }
  return out;
}

}  // namespace subshift
