#pragma once

#include <string>

#include <json.hpp>

#include "subshift/substitution.hpp"

namespace subshift {

using Json = nlohmann::ordered_json;

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_, column_;
};

/// One rule per line ("1: 112", "a -> ab"); ';' also separates rules. '#' starts a comment.
/// Symbols are single characters, or whitespace-separated tokens when an image contains spaces.
/// Rules keyed 1..k are ordered numerically, other keys by first appearance.
Substitution parse_substitution_text(const std::string& text);

/// {"alphabet": ["1","2"] | 2, "images": ["112","221"] | [[0,0,1],[1,1,0]]}; integer images are 0-based.
Substitution parse_substitution_json(const Json& doc);

/// JSON when the first non-blank character is '{', text otherwise.
Substitution parse_substitution(const std::string& text);
Substitution load_substitution(const std::string& path);

/// "auto" picks the eigenvalue-1 eigenvector; otherwise a comma-separated list of rationals.
WeightVector parse_gamma(const std::string& text, const Substitution& sub);

Json to_json(const Rational& q);
Json to_json(const IntMatrix& m);
/// Coefficients from the leading term down, as decimal strings.
Json to_json(const IntPolynomial& p);
Json to_json(const Substitution& sub);
Json to_json(const WeightVector& gamma);
Json to_json(const std::vector<Rational>& v);
/// Fixed precision for byte-stable output.
Json rounded(double x);

}  // namespace subshift
