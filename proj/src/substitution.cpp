#include "subshift/substitution.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include "subshift/linalg.hpp"

namespace subshift {

Substitution::Substitution(std::vector<Word> images, std::vector<std::string> symbols)
    : images_(std::move(images)), symbols_(std::move(symbols)) {
  if (images_.empty()) throw Error("substitution needs a nonempty alphabet");
  const auto k = images_.size();
  for (std::size_t a = 0; a < k; ++a) {
    if (images_[a].empty()) throw Error("image of letter " + std::to_string(a + 1) + " is empty");
    for (Letter b : images_[a]) {
      if (b >= k) throw Error("image of letter " + std::to_string(a + 1) + " uses an unknown letter");
    }
  }
  if (symbols_.empty()) {
    for (std::size_t a = 0; a < k; ++a) symbols_.push_back(std::to_string(a + 1));
  }
  if (symbols_.size() != k) throw Error("symbol table size does not match the alphabet");
}

Word Substitution::apply(std::span<const Letter> w) const {
  Word out;
  for (Letter a : w) {
    const auto& img = image(a);
    out.insert(out.end(), img.begin(), img.end());
  }
  return out;
}

Substitution Substitution::power(unsigned k) const {
  if (k == 0) throw Error("substitution power must be positive");
  std::vector<Word> imgs = images_;
  for (unsigned i = 1; i < k; ++i) {
    for (auto& w : imgs) w = apply(w);
  }
  return Substitution(std::move(imgs), symbols_);
}

std::string Substitution::format(std::span<const Letter> w) const {
  bool wide = std::any_of(symbols_.begin(), symbols_.end(), [](const auto& s) { return s.size() != 1; });
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (wide && i > 0) out.push_back(' ');
    out += symbol(w[i]);
  }
  return out;
}

IntMatrix::IntMatrix(std::size_t n) : n_(n), data_(n * n) {}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
  IntMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw Error("IntMatrix must be square");
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  if (n_ != rhs.n_) throw Error("matrix dimension mismatch");
  IntMatrix out(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = 0; k < n_; ++k) {
      if ((*this)(i, k) == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) out(i, j) += (*this)(i, k) * rhs(k, j);
    }
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix out(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Integer IntMatrix::trace() const {
  Integer t = 0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

IntPolynomial::IntPolynomial(std::vector<Integer> coefficients) : coeffs_(std::move(coefficients)) { trim(); }

IntPolynomial IntPolynomial::from_high(const std::vector<long>& high_to_low) {
  std::vector<Integer> c;
  for (auto it = high_to_low.rbegin(); it != high_to_low.rend(); ++it) c.emplace_back(*it);
  return IntPolynomial(std::move(c));
}

void IntPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational IntPolynomial::evaluate(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + Rational(*it);
  return acc;
}

bool IntPolynomial::is_palindromic() const {
  const auto n = coeffs_.size();
  for (std::size_t i = 0; i < n / 2; ++i)
    if (coeffs_[i] != coeffs_[n - 1 - i]) return false;
  return true;
}

IntPolynomial IntPolynomial::remainder(const IntPolynomial& monic) const {
  if (monic.is_zero() || monic.leading() != 1) throw Error("remainder needs a monic divisor");
  std::vector<Integer> r = coeffs_;
  const int dq = monic.degree();
  for (int i = static_cast<int>(r.size()) - 1; i >= dq; --i) {
    Integer f = r[i];
    if (f == 0) continue;
    for (int j = 0; j <= dq; ++j) r[i - dq + j] -= f * monic.coeffs_[j];
  }
  return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::operator*(const IntPolynomial& rhs) const {
  if (is_zero() || rhs.is_zero()) return {};
  std::vector<Integer> out(coeffs_.size() + rhs.coeffs_.size() - 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * rhs.coeffs_[j];
  return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::operator+(const IntPolynomial& rhs) const {
  std::vector<Integer> out(std::max(coeffs_.size(), rhs.coeffs_.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = coefficient(i) + rhs.coefficient(i);
  return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::operator-(const IntPolynomial& rhs) const {
  std::vector<Integer> out(std::max(coeffs_.size(), rhs.coeffs_.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = coefficient(i) - rhs.coefficient(i);
  return IntPolynomial(std::move(out));
}

std::string IntPolynomial::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const Integer& c = coeffs_[k];
    if (c == 0) continue;
    Integer mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (mag != 1 || k == 0) os << mag.get_str();
    if (k >= 1) os << "X";
    if (k >= 2) os << "^" << k;
    first = false;
  }
  return os.str();
}

WeightVector::WeightVector(std::vector<Rational> values, Rational eigenvalue)
    : values_(std::move(values)), eigenvalue_(std::move(eigenvalue)) {
  if (values_.empty() || std::all_of(values_.begin(), values_.end(), [](const Rational& q) { return q == 0; })) {
    throw Error("weight vector must be nonzero");
  }
}

Rational WeightVector::max_abs() const {
  Rational best = 0;
  for (const auto& v : values_) best = std::max(best, abs_value(v));
  return best;
}

IntMatrix matrix_of(const Substitution& sub) {
  IntMatrix m(sub.alphabet_size());
  for (Letter a = 0; a < sub.alphabet_size(); ++a)
    for (Letter b : sub.image(a)) m(a, b) += 1;
  return m;
}

bool is_primitive(const IntMatrix& m) {
  const auto n = m.size();
  if (n == 0) return false;
  std::vector<char> cur(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
      cur[i * n + j] = m(i, j) != 0;
      any = any || cur[i * n + j];
    }
    if (!any) return false;  // a zero row is never primitive
  }
  // With no zero rows, positivity of M^k persists for all larger k.
  std::size_t exponent = 1;
  while (exponent < n * n) {
    std::vector<char> next(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        if (!cur[i * n + k]) continue;
        for (std::size_t j = 0; j < n; ++j) next[i * n + j] |= cur[k * n + j];
      }
    cur = std::move(next);
    exponent *= 2;
  }
  return std::all_of(cur.begin(), cur.end(), [](char c) { return c != 0; });
}

bool is_primitive(const Substitution& sub) { return is_primitive(matrix_of(sub)); }

std::optional<std::size_t> constant_length(const Substitution& sub) {
  const auto d = sub.image(0).size();
  for (const auto& w : sub.images())
    if (w.size() != d) return std::nullopt;
  return d;
}

IntPolynomial char_poly(const IntMatrix& m) {
  const auto n = m.size();
  std::vector<Integer> c(n + 1);
  c[n] = 1;
  IntMatrix mk(n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    IntMatrix next = m * mk;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    mk = std::move(next);
    Integer tr = (m * mk).trace();
    Integer q;
    mpz_divexact_ui(q.get_mpz_t(), tr.get_mpz_t(), k);
    c[n - k] = -q;
  }
  return IntPolynomial(std::move(c));
}

std::optional<WeightVector> eigenvector_for(const IntMatrix& m, const Rational& theta) {
  const auto n = m.size();
  RationalMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = Rational(m(i, j)) - (i == j ? theta : Rational(0));
  auto basis = kernel_basis(a);
  if (basis.empty()) return std::nullopt;
  auto v = std::move(basis.front());
  Integer l = lcm_of_denominators(v);
  Integer g = 0;
  std::vector<Integer> ints(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rational scaled = v[i] * l;
    ints[i] = scaled.get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints[i].get_mpz_t());
  }
  auto first = std::find_if(ints.begin(), ints.end(), [](const Integer& z) { return z != 0; });
  if (*first < 0) g = -g;
  std::vector<Rational> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = Rational(ints[i] / g);
  return WeightVector(std::move(out), theta);
}

bool satisfies_eigen_relation(const IntMatrix& m, const WeightVector& gamma) {
  if (gamma.size() != m.size()) return false;
  for (std::size_t i = 0; i < m.size(); ++i) {
    Rational row = 0;
    for (std::size_t j = 0; j < m.size(); ++j) row += Rational(m(i, j)) * gamma[static_cast<Letter>(j)];
    if (row != gamma.eigenvalue() * gamma[static_cast<Letter>(i)]) return false;
  }
  return true;
}

Rational gamma_of_word(const WeightVector& gamma, std::span<const Letter> w) {
  Rational s = 0;
  for (Letter a : w) s += gamma[a];
  return s;
}

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) { return a > kSaturated - b ? kSaturated : a + b; }

std::vector<std::uint64_t> next_lengths(const Substitution& sub, const std::vector<std::uint64_t>& len) {
  std::vector<std::uint64_t> out(sub.alphabet_size(), 0);
  for (Letter a = 0; a < sub.alphabet_size(); ++a)
    for (Letter b : sub.image(a)) out[a] = saturating_add(out[a], len[b]);
  return out;
}

void emit_prefix(const Substitution& sub, Letter x, unsigned power, std::size_t limit, Word& out) {
  if (out.size() >= limit) return;
  if (power == 0) {
    out.push_back(x);
    return;
  }
  for (Letter y : sub.image(x)) {
    if (out.size() >= limit) return;
    emit_prefix(sub, y, power - 1, limit, out);
  }
}

void emit_suffix(const Substitution& sub, Letter x, unsigned power, std::size_t limit, Word& out) {
  if (out.size() >= limit) return;
  if (power == 0) {
    out.push_back(x);
    return;
  }
  const auto& img = sub.image(x);
  for (auto it = img.rbegin(); it != img.rend(); ++it) {
    if (out.size() >= limit) return;
    emit_suffix(sub, *it, power - 1, limit, out);
  }
}

}  // namespace

std::vector<std::uint64_t> image_lengths(const Substitution& sub, unsigned power) {
  std::vector<std::uint64_t> len(sub.alphabet_size(), 1);
  for (unsigned i = 0; i < power; ++i) len = next_lengths(sub, len);
  return len;
}

Word expand_prefix(const Substitution& sub, std::span<const Letter> w, unsigned power, std::size_t limit) {
  Word out;
  for (Letter x : w) {
    if (out.size() >= limit) break;
    emit_prefix(sub, x, power, limit, out);
  }
  return out;
}

Word expand_suffix(const Substitution& sub, std::span<const Letter> w, unsigned power, std::size_t limit) {
  Word out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (out.size() >= limit) break;
    emit_suffix(sub, *it, power, limit, out);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

Word iterate_prefix(const Substitution& sub, Letter a, std::size_t length) {
  if (length == 0) throw Error("iterate_prefix needs a positive length");
  if (a >= sub.alphabet_size()) throw Error("iterate_prefix: letter out of range");
  std::vector<std::uint64_t> len(sub.alphabet_size(), 1);
  unsigned n = 0;
  std::size_t stalled = 0;
  while (len[a] < length) {
    auto next = next_lengths(sub, len);
    // a run of alphabet_size+1 non-growing steps means the orbit of a only meets letters with 1-letter images
    stalled = next[a] == len[a] ? stalled + 1 : 0;
    if (stalled > sub.alphabet_size()) {
      throw Error("iterate_prefix: sigma^n(" + sub.symbol(a) + ") never reaches the requested length");
    }
    len = std::move(next);
    ++n;
  }
  const Word start{a};
  return expand_prefix(sub, start, n, length);
}

}  // namespace subshift

namespace subshift {

namespace {

void collect_factors(const Word& w, std::size_t length, std::set<Word>& out) {
  if (w.size() < length) return;
  for (std::size_t i = 0; i + length <= w.size(); ++i) out.emplace(w.begin() + i, w.begin() + i + length);
}

}  // namespace

std::vector<Word> legal_factors(const Substitution& sub, std::size_t length) {
  if (length == 0) return {Word{}};
  std::set<Word> letters;
  for (const auto& img : sub.images()) collect_factors(img, 1, letters);
  if (length == 1) return {letters.begin(), letters.end()};

  // Two-letter words: factors of the images, closed under taking factors of sigma(uv).
  std::set<Word> pairs;
  for (const auto& img : sub.images()) collect_factors(img, 2, pairs);
  std::vector<Word> frontier(pairs.begin(), pairs.end());
  while (!frontier.empty()) {
    Word uv = std::move(frontier.back());
    frontier.pop_back();
    std::set<Word> found;
    collect_factors(sub.apply(uv), 2, found);
    for (auto& w : found) {
      if (pairs.insert(w).second) frontier.push_back(w);
    }
  }
  if (length == 2) return {pairs.begin(), pairs.end()};

  // Longer words lie inside sigma^j(uv) once every sigma^j(x) has length >= length-1.
  unsigned j = 0;
  std::size_t stalled = 0;
  for (;;) {
    auto lens = image_lengths(sub, j);
    if (*std::min_element(lens.begin(), lens.end()) >= length - 1) break;
    auto next = image_lengths(sub, j + 1);
    stalled = next == lens ? stalled + 1 : 0;
    if (stalled > sub.alphabet_size()) throw Error("legal_factors: some letter does not grow under iteration");
    ++j;
  }
  std::set<Word> out;
  for (const auto& uv : pairs) collect_factors(expand_prefix(sub, uv, j, std::numeric_limits<std::size_t>::max()), length, out);
  return {out.begin(), out.end()};
}

}  // namespace subshift
