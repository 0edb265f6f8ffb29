#include "subshift/types.hpp"

namespace subshift {

std::string to_string(const Rational& q) { return q.get_str(10); }

std::string to_string(const Integer& z) { return z.get_str(10); }

Rational parse_rational(const std::string& text) {
  Rational q;
  std::string trimmed;
  for (char ch : text) {
    if (ch != ' ' && ch != '\t') trimmed.push_back(ch);
  }
  if (trimmed.empty()) throw Error("empty rational literal");
  auto dot = trimmed.find('.');
  if (dot != std::string::npos) {
    // decimal literal, converted exactly
    std::string digits = trimmed.substr(0, dot) + trimmed.substr(dot + 1);
    std::size_t frac_len = trimmed.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") throw Error("malformed rational '" + text + "'");
    Integer numer;
    if (numer.set_str(digits[0] == '+' ? digits.substr(1) : digits, 10) != 0) {
      throw Error("malformed rational '" + text + "'");
    }
    Integer denom;
    mpz_ui_pow_ui(denom.get_mpz_t(), 10, frac_len);
    q = Rational(numer, denom);
    q.canonicalize();
    return q;
  }
  if (q.set_str(trimmed[0] == '+' ? trimmed.substr(1) : trimmed, 10) != 0) {
    throw Error("malformed rational '" + text + "'");
  }
  if (q.get_den() == 0) throw Error("zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

Rational abs_value(const Rational& q) { return q < 0 ? Rational(-q) : q; }

Integer lcm_of_denominators(const std::vector<Rational>& values) {
  Integer l = 1;
  for (const auto& v : values) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  }
  return l;
}

}  // namespace subshift
