#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "subshift/export.hpp"

using namespace subshift;

TEST_CASE("text substitutions") {
  const auto s = parse_substitution_text("# comment\n2: 221\n1 -> 112\n");
  REQUIRE(s.alphabet_size() == 2);
  CHECK(s.symbol(0) == "1");
  CHECK(s.image(0) == Word{0, 0, 1});
  CHECK(s.image(1) == Word{1, 1, 0});
  const auto inline_rules = parse_substitution_text("a: ab; b: a");
  CHECK(inline_rules.symbol(0) == "a");
  CHECK(inline_rules.image(1) == Word{0});
  const auto wide = parse_substitution_text("x1: x1 x2\nx2: x2 x1");
  CHECK(wide.image(0) == Word{0, 1});
  CHECK(wide.format(wide.image(0)) == "x1 x2");
}

TEST_CASE("parse errors carry positions") {
  auto expect = [](const std::string& text, std::size_t line, std::size_t column) {
    try {
      parse_substitution_text(text);
      FAIL("accepted " << text);
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
      CHECK(e.column() == column);
    }
  };
  expect("1: 12; 2 21", 1, 7);
  expect("1: 12\n2: 13", 2, 5);
  expect("1: 12\n1: 21", 2, 1);
  expect("1: 12\n2:", 2, 3);
  expect("", 1, 1);
}

TEST_CASE("json substitutions") {
  const auto a = parse_substitution(R"({"alphabet": 2, "images": ["112", "221"]})");
  const auto b = parse_substitution(R"({"images": [[0, 0, 1], [1, 1, 0]]})");
  CHECK(a.images() == b.images());
  const auto c = parse_substitution(R"({"alphabet": ["a", "b"], "images": ["ab", "a"]})");
  CHECK(c.image(0) == Word{0, 1});
  CHECK_THROWS_AS(parse_substitution(R"({"images": ["13"]})"), Error);
  CHECK_THROWS_AS(parse_substitution(R"({"images": [)"), Error);
  CHECK(to_json(a)["images"][1] == "221");
}

TEST_CASE("weight vectors from text") {
  const auto s = test::sub("1:112;2:221");
  const auto g = parse_gamma("auto", s);
  CHECK(g.values() == std::vector<Rational>{1, -1});
  CHECK(parse_gamma("2,-2", s).values() == std::vector<Rational>{2, -2});
  CHECK_THROWS_AS(parse_gamma("1,1", s), Error);
  CHECK_THROWS_AS(parse_gamma("1", s), Error);
  CHECK_THROWS_AS(parse_gamma("auto", test::sub("1:12;2:1")), Error);
  const auto t = test::sub("1:12;2:13;3:23");
  CHECK(parse_gamma("1/2,0,-1/2", t).values()[0] == test::q(1, 2));
}

TEST_CASE("dot labels") {
  const auto s = test::sub("1:112;2:221");
  const auto g = test::gamma1(s);
  const auto ps = ps_automaton_dot(s, build_ps_automaton(s));
  CHECK(ps.find("11|2|") != std::string::npos);
  const auto a = build_tau_automaton(s, g, 1);
  CHECK(state_label(s, a, 0) == "1|11");
  const auto dot = tau_automaton_dot(s, a, recurrent_classes(chain_of(a)));
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(dot.find("fillcolor") != std::string::npos);
  const auto simple = build_simplified_automaton(s, g);
  CHECK(state_label(s, simple, 1) == "1|2");
}

TEST_CASE("json output is stable") {
  const auto s = test::sub("1:112;2:221");
  const auto g = test::gamma1(s);
  const auto a = build_tau_automaton(s, g, 2);
  const auto j1 = automaton_json(s, a).dump();
  CHECK(j1 == automaton_json(s, build_tau_automaton(s, g, 2)).dump());
  const auto info = analyze_json(s, g);
  CHECK(info["theorem1_constant"] == "4");
  CHECK(info["primitive"] == true);
  CHECK(salem_json(salem_check(3))["salem"] == true);
  CHECK(rounded(-1e-12) == 0.0);
  CHECK(!std::signbit(rounded(-1e-12).get<double>()));
}

TEST_CASE("gallery claims") {
  const auto gallery = build_gallery();
  CHECK(gallery.figures.size() == 4);
  for (const auto& c : gallery.claims) {
    CAPTURE(c.figure);
    CAPTURE(c.claim);
    CHECK(c.pass);
  }
  CHECK(gallery.all_pass());
}
