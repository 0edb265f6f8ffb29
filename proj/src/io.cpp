#include "subshift/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace subshift {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  std::string text;
  std::size_t column;
};

struct Rule {
  Token key;
  std::vector<Token> image;
  std::size_t line;
};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::vector<Token> split_symbols(const std::string& s, std::size_t base_column, bool by_space) {
  std::vector<Token> out;
  if (by_space) {
    std::size_t i = 0;
    while (i < s.size()) {
      while (i < s.size() && is_space(s[i])) ++i;
      std::size_t j = i;
      while (j < s.size() && !is_space(s[j])) ++j;
      if (j > i) out.push_back(Token{s.substr(i, j - i), base_column + i});
      i = j;
    }
  } else {
    for (std::size_t i = 0; i < s.size(); ++i)
      if (!is_space(s[i])) out.push_back(Token{std::string(1, s[i]), base_column + i});
  }
  return out;
}

bool is_positive_integer(const std::string& s) {
  return !s.empty() && s[0] != '0' && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

Substitution parse_substitution_text(const std::string& text) {
  std::vector<Rule> rules;
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t end = line.find(';', start);
      if (end == std::string::npos) end = line.size();
      const std::string piece = line.substr(start, end - start);
      if (piece.find_first_not_of(" \t\r") != std::string::npos) {
        std::size_t sep = piece.find("->");
        std::size_t sep_len = 2;
        const std::size_t colon = piece.find(':');
        if (sep == std::string::npos || (colon != std::string::npos && colon < sep)) {
          sep = colon;
          sep_len = 1;
        }
        const std::size_t col0 = start + 1;
        if (sep == std::string::npos) throw ParseError("expected 'letter: image'", line_no, col0);
        auto keys = split_symbols(piece.substr(0, sep), col0, true);
        if (keys.size() != 1) throw ParseError("expected exactly one letter before the separator", line_no, col0);
        const std::string image = piece.substr(sep + sep_len);
        const std::size_t image_col = col0 + sep + sep_len;
        const auto first = image.find_first_not_of(" \t\r");
        if (first == std::string::npos) throw ParseError("empty image", line_no, image_col);
        const auto last = image.find_last_not_of(" \t\r");
        const std::string body = image.substr(first, last - first + 1);
        const bool by_space = std::any_of(body.begin(), body.end(), is_space);
        rules.push_back(Rule{keys[0], split_symbols(body, image_col + first, by_space), line_no});
      }
      start = end + 1;
    }
  }
  if (rules.empty()) throw ParseError("no substitution rules found", line_no == 0 ? 1 : line_no, 1);

  // alphabet order
  std::vector<std::string> symbols;
  std::map<std::string, Letter> index;
  for (const auto& r : rules) {
    if (index.count(r.key.text)) throw ParseError("letter '" + r.key.text + "' defined twice", r.line, r.key.column);
    index[r.key.text] = static_cast<Letter>(symbols.size());
    symbols.push_back(r.key.text);
  }
  bool numeric = std::all_of(symbols.begin(), symbols.end(), is_positive_integer);
  if (numeric) {
    std::vector<std::string> sorted = symbols;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return std::stoul(a) < std::stoul(b); });
    for (std::size_t i = 0; i < sorted.size(); ++i) numeric = numeric && std::stoul(sorted[i]) == i + 1;
    if (numeric) {
      symbols = sorted;
      for (std::size_t i = 0; i < symbols.size(); ++i) index[symbols[i]] = static_cast<Letter>(i);
    }
  }
  const bool wide = std::any_of(symbols.begin(), symbols.end(), [](const auto& s) { return s.size() != 1; });

  std::vector<Word> images(symbols.size());
  for (const auto& r : rules) {
    Word w;
    for (const auto& tok : r.image) {
      auto it = index.find(tok.text);
      if (it == index.end()) {
        throw ParseError("unknown letter '" + tok.text + "'" + (wide ? " (separate multi-character letters by spaces)" : ""),
                         r.line, tok.column);
      }
      w.push_back(it->second);
    }
    images[index.at(r.key.text)] = std::move(w);
  }
  return Substitution(std::move(images), std::move(symbols));
}

Substitution parse_substitution_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("images")) throw Error("substitution JSON needs an 'images' array");
  const auto& imgs = doc.at("images");
  if (!imgs.is_array() || imgs.empty()) throw Error("'images' must be a nonempty array");
  std::vector<std::string> symbols;
  if (doc.contains("alphabet")) {
    const auto& alpha = doc.at("alphabet");
    if (alpha.is_number_unsigned()) {
      for (std::size_t i = 0; i < alpha.get<std::size_t>(); ++i) symbols.push_back(std::to_string(i + 1));
    } else if (alpha.is_array()) {
      for (const auto& s : alpha) symbols.push_back(s.is_string() ? s.get<std::string>() : s.dump());
    } else {
      throw Error("'alphabet' must be a count or an array of symbols");
    }
  } else {
    for (std::size_t i = 0; i < imgs.size(); ++i) symbols.push_back(std::to_string(i + 1));
  }
  if (symbols.size() != imgs.size()) throw Error("'alphabet' and 'images' sizes differ");
  std::map<std::string, Letter> index;
  for (std::size_t i = 0; i < symbols.size(); ++i) index[symbols[i]] = static_cast<Letter>(i);
  const bool wide = std::any_of(symbols.begin(), symbols.end(), [](const auto& s) { return s.size() != 1; });

  std::vector<Word> images;
  for (std::size_t a = 0; a < imgs.size(); ++a) {
    const auto& img = imgs[a];
    Word w;
    if (img.is_array()) {
      for (const auto& x : img) {
        if (!x.is_number_unsigned()) throw Error("image " + std::to_string(a) + " must list letter indices");
        w.push_back(x.get<Letter>());
      }
    } else if (img.is_string()) {
      const auto toks = split_symbols(img.get<std::string>(), 1, wide);
      for (const auto& t : toks) {
        auto it = index.find(t.text);
        if (it == index.end()) throw Error("image " + std::to_string(a) + " uses unknown letter '" + t.text + "'");
        w.push_back(it->second);
      }
    } else {
      throw Error("image " + std::to_string(a) + " must be a string or an array");
    }
    images.push_back(std::move(w));
  }
  return Substitution(std::move(images), std::move(symbols));
}

Substitution parse_substitution(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(std::string("malformed substitution JSON: ") + e.what());
    }
    return parse_substitution_json(doc);
  }
  return parse_substitution_text(text);
}

Substitution load_substitution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_substitution(ss.str());
}

WeightVector parse_gamma(const std::string& text, const Substitution& sub) {
  const auto m = matrix_of(sub);
  if (text.empty() || text == "auto") {
    auto g = eigenvector_for(m, Rational(1));
    if (!g) throw Error("1 is not an eigenvalue of the substitution matrix");
    return *g;
  }
  std::vector<Rational> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(parse_rational(item));
  if (values.size() != sub.alphabet_size()) throw Error("gamma needs one value per letter");
  for (const Rational& theta : {Rational(1), Rational(-1)}) {
    WeightVector g(values, theta);
    if (satisfies_eigen_relation(m, g)) return g;
  }
  throw Error("gamma is not an eigenvector for eigenvalue 1 or -1");
}

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j).get_str());
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const IntPolynomial& p) {
  Json coeffs = Json::array();
  for (int k = p.degree(); k >= 0; --k) coeffs.push_back(p.coefficient(static_cast<std::size_t>(k)).get_str());
  return coeffs;
}

Json to_json(const Substitution& sub) {
  Json images = Json::array();
  for (const auto& w : sub.images()) images.push_back(sub.format(w));
  return Json{{"alphabet", sub.symbols()}, {"images", images}};
}

Json to_json(const WeightVector& gamma) {
  return Json{{"eigenvalue", to_string(gamma.eigenvalue())}, {"values", to_json(gamma.values())}};
}

Json to_json(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& q : v) out.push_back(to_string(q));
  return out;
}

Json rounded(double x) {
  if (!std::isfinite(x)) return nullptr;
  double r = std::round(x * 1e9) / 1e9;
  if (r == 0) r = 0;  // drop negative zero
  return r;
}

}  // namespace subshift
