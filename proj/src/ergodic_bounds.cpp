#include "subshift/ergodic_bounds.hpp"

#include <algorithm>
#include <limits>

namespace subshift {

SumTrace ergodic_sums(const WeightVector& gamma, std::span<const Letter> w) {
  SumTrace t;
  t.partials.reserve(w.size() + 1);
  t.partials.emplace_back(0);
  for (Letter a : w) t.partials.push_back(t.partials.back() + gamma[a]);
  return t;
}

Rational theorem1_constant(const Substitution& sub, const WeightVector& gamma) {
  if (abs_value(gamma.eigenvalue()) != 1) {
    throw Error("theorem1_constant needs an eigenvalue of modulus one, got " + to_string(gamma.eigenvalue()));
  }
  if (!satisfies_eigen_relation(matrix_of(sub), gamma)) {
    throw Error("weight vector is not an eigenvector for the stated eigenvalue");
  }
  Rational letters = 0, suffixes = 0, prefixes = 0;
  for (Letter a = 0; a < sub.alphabet_size(); ++a) letters = std::max(letters, abs_value(gamma[a]));
  for (const auto& img : sub.images()) {
    const std::span<const Letter> w(img);
    for (std::size_t j = 0; j < img.size(); ++j) {
      suffixes = std::max(suffixes, abs_value(gamma_of_word(gamma, w.subspan(j + 1))));
      prefixes = std::max(prefixes, abs_value(gamma_of_word(gamma, w.first(j))));
    }
  }
  return letters + suffixes + prefixes;
}

WkReport wk_prefixes(const Substitution& sub, const WeightVector& gamma, const PSPath& path,
                     std::uint64_t max_length) {
  validate_path(sub, path);
  constexpr auto kSaturated = std::numeric_limits<std::uint64_t>::max();
  auto add = [](std::uint64_t a, std::uint64_t b) { return a > kSaturated - b ? kSaturated : a + b; };
  auto len_of = [&](const Word& w, const std::vector<std::uint64_t>& lens) {
    std::uint64_t n = 0;
    for (Letter x : w) n = add(n, lens[x]);
    return n;
  };

  WkReport report;
  report.second_case = std::all_of(path.begin(), path.end(), [](const PSTriple& t) { return t.suffix.empty(); });

  struct Plan {
    unsigned k;
    Word pi;
    std::uint64_t length;
  };
  std::vector<Plan> plans;
  std::uint64_t s_hat = 1, p_hat = 0;  // |S_k|, |P_k|
  for (unsigned k = 0; k + 2 <= path.size(); ++k) {
    const auto lens = image_lengths(sub, k);
    const auto& next_suffix = path[k + 1].suffix;
    const Letter ck = path[k].center;
    bool usable = !next_suffix.empty();
    Word pi;
    if (usable) {
      const auto image = sub.apply(next_suffix);
      auto it = std::find(image.begin(), image.end(), ck);
      usable = it != image.end();
      pi.assign(image.begin(), it);
    }
    if (usable) {
      auto length = add(add(s_hat, len_of(path[k].suffix, lens)), add(len_of(pi, lens), p_hat));
      if (length <= max_length) {
        plans.push_back({k, std::move(pi), length});
      } else {
        usable = false;
      }
    }
    if (!usable) report.skipped.push_back(k);
    s_hat = add(s_hat, len_of(path[k].suffix, lens));
    p_hat = add(p_hat, len_of(path[k].prefix, lens));
  }
  if (plans.empty()) return report;

  std::uint64_t longest = 0;
  for (const auto& p : plans) longest = std::max(longest, p.length);
  const auto window = point_from_path(sub, path, static_cast<std::size_t>(longest)).right;

  const Rational theta = gamma.eigenvalue();
  for (const auto& plan : plans) {
    const unsigned k = plan.k;
    Word w{path[0].center};
    const auto limit = std::numeric_limits<std::size_t>::max();
    for (unsigned i = 0; i < k; ++i) {
      auto piece = expand_prefix(sub, path[i].suffix, i, limit);
      w.insert(w.end(), piece.begin(), piece.end());
    }
    auto sk = expand_prefix(sub, path[k].suffix, k, limit);
    w.insert(w.end(), sk.begin(), sk.end());
    auto pik = expand_prefix(sub, plan.pi, k, limit);
    w.insert(w.end(), pik.begin(), pik.end());
    for (unsigned i = k; i-- > 0;) {
      auto piece = expand_prefix(sub, path[i].prefix, i, limit);
      w.insert(w.end(), piece.begin(), piece.end());
    }

    WkTerm term;
    term.k = k;
    term.length = w.size();
    term.value = gamma_of_word(gamma, w);
    Rational theta_k = 1;
    for (unsigned i = 0; i < k; ++i) theta_k *= theta;
    term.expected = theta_k * (gamma[path[k].center] + gamma_of_word(gamma, path[k].suffix) + gamma_of_word(gamma, plan.pi));
    term.prefix_of_window = w.size() <= window.size() && std::equal(w.begin(), w.end(), window.begin());
    if (term.value != term.expected) {
      throw Error("gamma(W_" + std::to_string(k) + ") = " + to_string(term.value) + " differs from the closed form " +
                  to_string(term.expected));
    }
    report.terms.push_back(std::move(term));
  }
  return report;
}

Rational liminf_probe(const WeightVector& gamma, const SymbolicPoint& point, std::size_t horizon,
                      Direction direction, std::size_t from) {
  if (horizon == 0 || from == 0 || from > horizon) throw Error("liminf_probe needs 1 <= from <= horizon");
  const Word& side = direction == Direction::forward ? point.right : point.left;
  if (side.size() < horizon) {
    throw Error("window has " + std::to_string(side.size()) + " letters, horizon needs " + std::to_string(horizon));
  }
  // integer arithmetic over the common denominator
  const Integer scale = lcm_of_denominators(gamma.values());
  std::vector<Integer> scaled;
  for (const auto& g : gamma.values()) scaled.emplace_back(Rational(g * scale).get_num());
  Integer s = 0;
  std::optional<Integer> best;
  for (std::size_t n = 1; n <= horizon; ++n) {
    const Letter x = direction == Direction::forward ? side[n - 1] : side[side.size() - n];
    s += scaled[x];
    if (n >= from) {
      Integer a = abs(s);
      if (!best || a < *best) best = a;
    }
  }
  Rational out(*best, scale);
  out.canonicalize();
  return out;
}

}  // namespace subshift
