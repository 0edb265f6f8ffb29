#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subshift/types.hpp"

namespace subshift {

/// A non-erasing substitution on the alphabet {0, ..., k-1}.
///
/// Symbols are display names only; every algorithm works on letter indices.
class Substitution {
 public:
  Substitution(std::vector<Word> images, std::vector<std::string> symbols = {});

  std::size_t alphabet_size() const noexcept { return images_.size(); }
  const Word& image(Letter a) const { return images_.at(a); }
  const std::vector<Word>& images() const noexcept { return images_; }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  const std::string& symbol(Letter a) const { return symbols_.at(a); }

  /// Morphism extension to words.
  Word apply(std::span<const Letter> w) const;
  Substitution power(unsigned k) const;

  /// Symbols concatenated; separated by spaces when any symbol is longer than one character.
  std::string format(std::span<const Letter> w) const;

  bool operator==(const Substitution& rhs) const { return images_ == rhs.images_; }

 private:
  std::vector<Word> images_;
  std::vector<std::string> symbols_;
};

/// Square matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(std::size_t n);
  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);

  std::size_t size() const noexcept { return n_; }
  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

  IntMatrix operator*(const IntMatrix& rhs) const;
  IntMatrix transpose() const;
  Integer trace() const;
  bool operator==(const IntMatrix& rhs) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<Integer> data_;
};

/// Integer polynomial, coefficients stored from the constant term upwards.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<Integer> coefficients);
  static IntPolynomial from_high(const std::vector<long>& high_to_low);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Integer>& coefficients() const noexcept { return coeffs_; }
  Integer coefficient(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Integer(0); }
  Integer leading() const { return coeffs_.empty() ? Integer(0) : coeffs_.back(); }

  Rational evaluate(const Rational& x) const;
  bool is_palindromic() const;
  /// Exact remainder modulo a monic divisor.
  IntPolynomial remainder(const IntPolynomial& monic) const;
  bool is_zero() const noexcept { return coeffs_.empty(); }

  IntPolynomial operator*(const IntPolynomial& rhs) const;
  IntPolynomial operator+(const IntPolynomial& rhs) const;
  IntPolynomial operator-(const IntPolynomial& rhs) const;
  bool operator==(const IntPolynomial& rhs) const = default;

  /// e.g. "X^4 - 7X^3 + 11X^2 - 7X + 1".
  std::string to_string() const;

 private:
  void trim();
  std::vector<Integer> coeffs_;
};

/// Exact weight vector gamma with the eigenvalue it was computed for.
///
/// The invariant M gamma = theta gamma is established by eigenvector_for; user-supplied
/// vectors are checked with satisfies_eigen_relation before any theorem-level use.
class WeightVector {
 public:
  WeightVector(std::vector<Rational> values, Rational eigenvalue);

  std::size_t size() const noexcept { return values_.size(); }
  const Rational& operator[](Letter a) const { return values_.at(a); }
  const std::vector<Rational>& values() const noexcept { return values_; }
  const Rational& eigenvalue() const noexcept { return eigenvalue_; }
  Rational max_abs() const;

  bool operator==(const WeightVector& rhs) const = default;

 private:
  std::vector<Rational> values_;
  Rational eigenvalue_;
};

IntMatrix matrix_of(const Substitution& sub);
bool is_primitive(const IntMatrix& m);
bool is_primitive(const Substitution& sub);
std::optional<std::size_t> constant_length(const Substitution& sub);

/// det(X I - M) by Faddeev-LeVerrier in exact integer arithmetic.
IntPolynomial char_poly(const IntMatrix& m);

/// Kernel vector of (M - theta I) with coprime integer entries, first nonzero entry positive.
std::optional<WeightVector> eigenvector_for(const IntMatrix& m, const Rational& theta);
bool satisfies_eigen_relation(const IntMatrix& m, const WeightVector& gamma);

Rational gamma_of_word(const WeightVector& gamma, std::span<const Letter> w);

/// |sigma^power(x)| for every letter, saturating at UINT64_MAX.
std::vector<std::uint64_t> image_lengths(const Substitution& sub, unsigned power);

/// First `limit` letters of sigma^power(w), expanded lazily.
Word expand_prefix(const Substitution& sub, std::span<const Letter> w, unsigned power, std::size_t limit);
/// Last `limit` letters of sigma^power(w), expanded lazily.
Word expand_suffix(const Substitution& sub, std::span<const Letter> w, unsigned power, std::size_t limit);

/// First `length` letters of sigma^n(a) for the smallest n with |sigma^n(a)| >= length.
Word iterate_prefix(const Substitution& sub, Letter a, std::size_t length);

/// Words of the given length occurring in some sigma^N(a), sorted lexicographically.
std::vector<Word> legal_factors(const Substitution& sub, std::size_t length);

}  // namespace subshift
