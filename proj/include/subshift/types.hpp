#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace subshift {

using Integer = mpz_class;
using Rational = mpq_class;

/// Letters are 0-based indices into the alphabet.
using Letter = std::uint32_t;
using Word = std::vector<Letter>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

Rational parse_rational(const std::string& text);

Rational abs_value(const Rational& q);
Integer lcm_of_denominators(const std::vector<Rational>& values);

}  // namespace subshift
