#include "subshift/export.hpp"

#include <algorithm>
#include <sstream>

#include "subshift/ergodic_bounds.hpp"

namespace subshift {

namespace {

const char* const kPalette[] = {"lightblue", "palegreen", "lightsalmon", "khaki", "plum", "lightcyan", "pink", "wheat"};

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::vector<int> class_of_states(std::size_t n, const std::vector<RecurrentClass>& classes) {
  std::vector<int> owner(n, -1);
  for (std::size_t j = 0; j < classes.size(); ++j)
    for (auto s : classes[j].states) owner.at(s) = static_cast<int>(j);
  return owner;
}

void write_nodes(std::ostringstream& os, const std::vector<std::string>& labels,
                 const std::vector<RecurrentClass>& classes) {
  const auto owner = class_of_states(labels.size(), classes);
  for (std::size_t s = 0; s < labels.size(); ++s) {
    os << "  s" << s << " [label=" << quoted(labels[s]);
    if (owner[s] >= 0) {
      os << ", style=filled, fillcolor=" << kPalette[owner[s] % std::size(kPalette)];
      if (classes[owner[s]].coboundary.coboundary) os << ", peripheries=2";
    }
    os << "];\n";
  }
}

std::vector<std::string> tau_labels(const Substitution& sub, const TauAutomaton& aut) {
  std::vector<std::string> labels;
  for (std::size_t s = 0; s < aut.state_count(); ++s) labels.push_back(state_label(sub, aut, s));
  return labels;
}

Json class_json(const RecurrentClass& c) {
  Json states = Json::array();
  for (auto s : c.states) states.push_back(s);
  Json out{{"states", states},
           {"period", c.period},
           {"coboundary", c.coboundary.coboundary},
           {"stationary", to_json(c.stationary)},
           {"expected_payoff", to_string(c.expected_payoff)},
           {"variance", to_string(c.variance)}};
  if (c.coboundary.coboundary) {
    Json h = Json::object();
    for (const auto& [s, v] : c.coboundary.potential) h[std::to_string(s)] = to_string(v);
    out["potential"] = h;
  } else {
    Json cycle = Json::array();
    for (const auto& [s, i] : c.coboundary.cycle) cycle.push_back(Json::array({s, i}));
    out["cycle"] = cycle;
    out["cycle_sum"] = to_string(c.coboundary.cycle_sum);
  }
  return out;
}

}  // namespace

std::string state_label(const Substitution& sub, const TauAutomaton& automaton, std::size_t state) {
  const auto st = automaton.state(state);
  return sub.symbol(st.a) + "|" + sub.format(st.v);
}

std::string ps_automaton_dot(const Substitution& sub, const PSAutomaton& automaton) {
  std::ostringstream os;
  os << "digraph prefix_suffix {\n  rankdir=LR;\n";
  for (Letter a = 0; a < automaton.state_count(); ++a) os << "  l" << a << " [label=" << quoted(sub.symbol(a)) << "];\n";
  for (Letter a = 0; a < automaton.state_count(); ++a)
    for (const auto& e : automaton.edges_from(a)) {
      const std::string label = sub.format(e.prefix) + "|" + sub.symbol(e.center) + "|" + sub.format(e.suffix);
      os << "  l" << e.parent << " -> l" << e.center << " [label=" << quoted(label) << "];\n";
    }
  os << "}\n";
  return os.str();
}

std::string tau_automaton_dot(const Substitution& sub, const TauAutomaton& automaton,
                              const std::vector<RecurrentClass>& classes) {
  std::ostringstream os;
  os << "digraph tau_" << automaton.tau() << " {\n";
  write_nodes(os, tau_labels(sub, automaton), classes);
  for (const auto& e : automaton.edges()) {
    os << "  s" << e.source << " -> s" << e.target << " [label="
       << quoted(std::to_string(e.m) + ":" + to_string(e.payoff)) << "];\n";
  }
  os << "}\n";
  return os.str();
}

std::string chain_dot(const ChainGraph& chain, const std::vector<std::string>& labels,
                      const std::vector<RecurrentClass>& classes) {
  if (labels.size() != chain.size()) throw Error("one label per chain state is required");
  std::ostringstream os;
  os << "digraph chain {\n";
  write_nodes(os, labels, classes);
  for (std::size_t s = 0; s < chain.size(); ++s)
    for (const auto& e : chain.out[s]) {
      os << "  s" << s << " -> s" << e.target << " [label="
         << quoted(std::to_string(e.label) + ":" + to_string(e.payoff) + " (" + to_string(e.probability) + ")")
         << "];\n";
    }
  os << "}\n";
  return os.str();
}

Json automaton_json(const Substitution& sub, const TauAutomaton& automaton) {
  Json states = Json::array();
  for (std::size_t s = 0; s < automaton.state_count(); ++s) states.push_back(state_label(sub, automaton, s));
  Json edges = Json::array();
  for (const auto& e : automaton.edges()) {
    edges.push_back(Json{{"source", e.source}, {"m", e.m}, {"payoff", to_string(e.payoff)}, {"target", e.target}});
  }
  return Json{{"tau", automaton.tau()},
              {"simplified", automaton.simplified()},
              {"d", automaton.length()},
              {"states", states},
              {"edges", edges}};
}

Json chain_json(const ChainGraph& chain, const std::vector<std::string>& labels,
                const std::vector<RecurrentClass>& classes) {
  Json cls = Json::array();
  for (const auto& c : classes) cls.push_back(class_json(c));
  Json transient = Json::array();
  for (auto s : transient_states(chain, classes)) transient.push_back(s);
  Json absorption = Json::array();
  for (const auto& row : absorption_probabilities(chain, classes)) absorption.push_back(to_json(row));
  return Json{{"states", labels},
              {"strongly_connected", is_strongly_connected(chain)},
              {"classes", cls},
              {"transient", transient},
              {"absorption_probabilities", absorption}};
}

Json analyze_json(const Substitution& sub, const std::optional<WeightVector>& gamma) {
  const auto m = matrix_of(sub);
  const auto d = constant_length(sub);
  Json out{{"substitution", to_json(sub)},
           {"matrix", to_json(m)},
           {"char_poly", to_json(char_poly(m))},
           {"char_poly_text", char_poly(m).to_string()},
           {"primitive", is_primitive(m)},
           {"constant_length", d ? Json(*d) : Json(nullptr)}};
  const auto eig = eigenvector_for(m, Rational(1));
  out["eigenvalue_one"] = eig ? to_json(eig->values()) : Json(nullptr);
  if (gamma) {
    out["gamma"] = to_json(*gamma);
    out["theorem1_constant"] = to_string(theorem1_constant(sub, *gamma));
  } else {
    out["gamma"] = nullptr;
    out["theorem1_constant"] = nullptr;
  }
  if (d) {
    Json sync = Json::array();
    for (auto a : synchronizable_letters(sub)) sync.push_back(sub.symbol(a));
    out["synchronizable_letters"] = sync;
    out["synchronizable"] = is_synchronizable(sub);
    out["strongly_non_synchronizable"] = is_strongly_non_synchronizable(sub);
  }
  Json warnings = Json::array();
  if (!is_primitive(m)) warnings.push_back("substitution is not primitive");
  if (!d) warnings.push_back("substitution is not of constant length; automata commands are unavailable");
  out["warnings"] = warnings;
  return out;
}

Json salem_json(const SalemReport& r) {
  auto interval = [](const Interval& i) { return Json::array({to_string(i.lo), to_string(i.hi)}); };
  return Json{{"n", r.n},
              {"matrix", to_json(r.matrix)},
              {"char_poly", to_json(r.char_poly)},
              {"matches_closed_form", r.matches_closed_form},
              {"reciprocal", r.reciprocal},
              {"s_plus_t", to_string(r.s_plus_t)},
              {"s_times_t", to_string(r.s_times_t)},
              {"s", interval(r.s)},
              {"t", interval(r.t)},
              {"s_inside", r.s_inside},
              {"t_above_two", r.t_above_two},
              {"irreducible", r.irreducible},
              {"salem", r.salem}};
}

bool Gallery::all_pass() const {
  return std::all_of(claims.begin(), claims.end(), [](const GalleryClaim& c) { return c.pass; });
}

namespace {

GalleryFigure make_figure(const std::string& name, const std::string& rules, unsigned tau, bool simplified) {
  auto sub = parse_substitution_text(rules);
  auto gamma = *eigenvector_for(matrix_of(sub), Rational(1));
  auto aut = simplified ? build_simplified_automaton(sub, gamma) : build_tau_automaton(sub, gamma, tau);
  auto classes = recurrent_classes(chain_of(aut));
  return GalleryFigure{name, std::move(sub), std::move(gamma), std::move(aut), std::move(classes)};
}

bool on_diagonal(const TauAutomaton& aut, const RecurrentClass& c) {
  return std::all_of(c.states.begin(), c.states.end(), [&](std::size_t s) {
    const auto st = aut.state(s);
    return std::all_of(st.v.begin(), st.v.end(), [&](Letter x) { return x == st.a; });
  });
}

std::string describe_classes(const Substitution& sub, const GalleryFigure& f) {
  std::ostringstream os;
  for (std::size_t j = 0; j < f.classes.size(); ++j) {
    const auto& c = f.classes[j];
    if (j) os << "; ";
    os << "{";
    for (std::size_t i = 0; i < c.states.size(); ++i) os << (i ? "," : "") << state_label(sub, f.automaton, c.states[i]);
    os << "} period " << c.period << (c.coboundary.coboundary ? " coboundary" : " variance " + to_string(c.variance));
  }
  return os.str();
}

}  // namespace

Gallery build_gallery() {
  Gallery g;
  g.figures.push_back(make_figure("figure2", "1: 12\n2: 13\n3: 23\n", 0, true));
  g.figures.push_back(make_figure("figure3", "1: 112\n2: 221\n", 0, true));
  g.figures.push_back(make_figure("figure4", "1: 112\n2: 221\n", 1, false));
  g.figures.push_back(make_figure("figure5", "1: 112\n2: 221\n", 2, false));

  auto add = [&](const GalleryFigure& f, const std::string& claim, bool pass) {
    g.claims.push_back(GalleryClaim{f.name, claim, pass, describe_classes(f.sub, f)});
  };
  auto count_cobo = [](const GalleryFigure& f) {
    return std::count_if(f.classes.begin(), f.classes.end(),
                         [](const RecurrentClass& c) { return c.coboundary.coboundary; });
  };
  auto positive = [](const RecurrentClass& c) { return !c.coboundary.coboundary && c.variance > 0; };

  {
    const auto& f = g.figures[0];
    const auto chain = chain_of(f.automaton);
    add(f, "one recurrent class", f.classes.size() == 1);
    add(f, "not strongly connected", !is_strongly_connected(chain));
    add(f, "recurrent class is the diagonal and a coboundary",
        f.classes.size() == 1 && on_diagonal(f.automaton, f.classes[0]) && f.classes[0].coboundary.coboundary);
  }
  {
    const auto& f = g.figures[1];
    add(f, "exactly two recurrent classes", f.classes.size() == 2);
    const auto diag = std::find_if(f.classes.begin(), f.classes.end(),
                                   [&](const RecurrentClass& c) { return on_diagonal(f.automaton, c); });
    add(f, "diagonal class is a coboundary", diag != f.classes.end() && diag->coboundary.coboundary);
    const auto off = std::find_if(f.classes.begin(), f.classes.end(),
                                  [&](const RecurrentClass& c) { return !on_diagonal(f.automaton, c); });
    add(f, "off-diagonal class is not a coboundary, variance > 0", off != f.classes.end() && positive(*off));
  }
  {
    const auto& f = g.figures[2];
    const auto chain = chain_of(f.automaton);
    add(f, "strongly connected", is_strongly_connected(chain));
    add(f, "aperiodic", f.classes.size() == 1 && f.classes[0].period == 1);
    add(f, "not a coboundary, variance > 0", f.classes.size() == 1 && positive(f.classes[0]));
  }
  {
    const auto& f = g.figures[3];
    add(f, "two recurrent classes", f.classes.size() == 2);
    add(f, "exactly one coboundary class", count_cobo(f) == 1);
    add(f, "other class has variance > 0",
        std::count_if(f.classes.begin(), f.classes.end(), positive) == 1);
  }
  return g;
}

}  // namespace subshift
