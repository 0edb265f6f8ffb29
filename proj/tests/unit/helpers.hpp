#pragma once

#include <random>
#include <string>

#include "subshift/io.hpp"

namespace test {

inline subshift::Substitution sub(const std::string& rules) { return subshift::parse_substitution_text(rules); }

inline subshift::Word word(const subshift::Substitution& s, const std::string& letters) {
  subshift::Word w;
  for (char c : letters) {
    for (subshift::Letter a = 0; a < s.alphabet_size(); ++a)
      if (s.symbol(a) == std::string(1, c)) w.push_back(a);
  }
  return w;
}

inline subshift::WeightVector gamma1(const subshift::Substitution& s) {
  return *subshift::eigenvector_for(subshift::matrix_of(s), subshift::Rational(1));
}

inline subshift::Rational q(long p, long r = 1) {
  subshift::Rational x(p, r);
  x.canonicalize();
  return x;
}

/// 2-letter eigenvalue-1 substitution: sigma(a) a shuffle of k+1 a's and k b's, sigma(b) its swap.
inline subshift::Substitution random_nonsync(std::mt19937_64& rng, unsigned k_max = 3) {
  std::uniform_int_distribution<unsigned> pick_k(1, k_max);
  const unsigned k = pick_k(rng);
  subshift::Word a(k + 1, 0);
  a.insert(a.end(), k, 1);
  std::shuffle(a.begin(), a.end(), rng);
  subshift::Word b = a;
  for (auto& x : b) x = 1 - x;
  return subshift::Substitution({a, b}, {"1", "2"});
}

}  // namespace test
