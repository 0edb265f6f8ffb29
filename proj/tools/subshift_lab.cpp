#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "subshift/ergodic_bounds.hpp"
#include "subshift/export.hpp"
#include "subshift/limit_dist.hpp"
#include "subshift/salem.hpp"

using namespace subshift;
namespace fs = std::filesystem;

namespace {

struct RunConfig {
  std::string sub_file;
  std::string inline_sub;
  std::string gamma = "auto";
  int tau = -1;
  bool simplified = false;
  std::string t;
  std::string digits;
  long long random_digits = -1;
  unsigned leading = 1;
  std::size_t n = 10;
  std::size_t samples = 100'000;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  std::size_t horizon = 0;
  std::size_t points = 100;
  bool exact = false;
  bool mc = false;
  std::string sum = "word";
  std::string block;
  unsigned n_max = 10;
  bool table = false;
  std::size_t n_min = 20;
};

Substitution load(const RunConfig& c) {
  if (!c.sub_file.empty() && !c.inline_sub.empty()) throw Error("--sub and --inline are mutually exclusive");
  if (!c.inline_sub.empty()) return parse_substitution(c.inline_sub);
  if (!c.sub_file.empty()) return load_substitution(c.sub_file);
  throw Error("a substitution is required (--sub FILE or --inline STR)");
}

std::size_t length_of(const Substitution& sub) {
  auto d = constant_length(sub);
  if (!d) throw Error("this command needs a constant-length substitution; the images have different lengths");
  return *d;
}

DigitStream stream_of(const RunConfig& c, unsigned d) {
  const int given = !c.t.empty() + !c.digits.empty() + (c.random_digits >= 0);
  if (given > 1) throw Error("--t, --digits and --random-digits are mutually exclusive");
  if (!c.digits.empty()) return DigitStream::parse(d, c.digits);
  if (c.random_digits >= 0) return DigitStream::random(d, c.leading, static_cast<std::uint64_t>(c.random_digits));
  if (!c.t.empty()) {
    if (c.t.find(',') != std::string::npos) return DigitStream::parse(d, c.t);
    return DigitStream::from_rational(d, parse_rational(c.t));
  }
  return DigitStream::periodic(d, 1, {}, {});
}

std::vector<unsigned> parse_block(const std::string& text) {
  std::vector<unsigned> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(static_cast<unsigned>(std::stoul(item)));
  return out;
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw Error("cannot write '" + c.out + "'");
  f << text;
}

void emit(const RunConfig& c, const Json& j) { emit(c, j.dump(2) + "\n"); }

Json stream_json(const DigitStream& s) {
  Json out{{"base", s.base()}, {"description", s.describe()}, {"leading", s.leading()}};
  if (s.is_random()) out["random_seed"] = s.seed();
  if (s.shift() != 0) out["shift"] = s.shift();
  return out;
}

std::string histogram_csv(const std::vector<std::pair<double, double>>& law) {
  std::ostringstream os;
  os << "bin,mass\n" << std::setprecision(12);
  for (const auto& [v, p] : law) os << v << ',' << p << '\n';
  return os.str();
}

std::vector<std::pair<double, double>> empirical_law(const EmpiricalSample& s) {
  std::map<long long, std::size_t> counts;
  for (auto v : s.scaled) ++counts[v];
  std::vector<std::pair<double, double>> out;
  for (const auto& [v, k] : counts) {
    out.emplace_back(static_cast<double>(v) / static_cast<double>(s.scale),
                     static_cast<double>(k) / static_cast<double>(s.scaled.size()));
  }
  return out;
}

SumKind kind_of(const RunConfig& c) {
  if (c.sum == "word") return SumKind::word;
  if (c.sum == "chain") return SumKind::chain;
  throw Error("--sum must be 'word' or 'chain'");
}

// ---------------------------------------------------------------- commands

int cmd_analyze(const RunConfig& c) {
  const auto sub = load(c);
  std::optional<WeightVector> gamma;
  Json report;
  try {
    gamma = parse_gamma(c.gamma, sub);
  } catch (const Error& e) {
    if (c.gamma != "auto") throw;
  }
  report = analyze_json(sub, gamma);
  emit(c, report);
  return 0;
}

TauAutomaton automaton_of(const RunConfig& c, const Substitution& sub, const WeightVector& gamma) {
  const auto d = length_of(sub);
  if (c.simplified) return build_simplified_automaton(sub, gamma);
  if (c.tau < 0 || static_cast<std::size_t>(c.tau) >= d) {
    throw Error("--tau must be given in 0.." + std::to_string(d - 1) + " (or use --simplified)");
  }
  return build_tau_automaton(sub, gamma, static_cast<unsigned>(c.tau));
}

int cmd_automaton(const RunConfig& c) {
  const auto sub = load(c);
  if (c.format != "ps") length_of(sub);
  const auto gamma = parse_gamma(c.gamma, sub);
  if (c.format == "ps") {
    emit(c, ps_automaton_dot(sub, build_ps_automaton(sub)));
    return 0;
  }
  const auto aut = automaton_of(c, sub, gamma);
  if (c.format == "dot") {
    emit(c, tau_automaton_dot(sub, aut, recurrent_classes(chain_of(aut))));
  } else if (c.format == "json") {
    emit(c, automaton_json(sub, aut));
  } else {
    throw Error("automaton output format must be json, dot or ps");
  }
  return 0;
}

int cmd_classify(const RunConfig& c) {
  const auto sub = load(c);
  length_of(sub);
  const auto gamma = parse_gamma(c.gamma, sub);
  ChainGraph chain;
  std::vector<std::string> labels;
  if (!c.block.empty()) {
    chain = product_chain(sub, gamma, parse_block(c.block));
    const TauAutomaton shape(sub.alphabet_size(), *constant_length(sub), 0, false);
    for (std::size_t s = 0; s < chain.size(); ++s) labels.push_back(state_label(sub, shape, s));
  } else {
    const auto aut = automaton_of(c, sub, gamma);
    chain = chain_of(aut);
    for (std::size_t s = 0; s < aut.state_count(); ++s) labels.push_back(state_label(sub, aut, s));
  }
  const auto classes = recurrent_classes(chain);
  if (c.format == "dot") {
    emit(c, chain_dot(chain, labels, classes));
    return 0;
  }
  auto j = chain_json(chain, labels, classes);
  j["ergodic_coefficient"] = to_string(ergodic_coefficient(transition_matrix(chain)));
  emit(c, j);
  return 0;
}

int cmd_simulate(const RunConfig& c) {
  const auto sub = load(c);
  const auto d = static_cast<unsigned>(length_of(sub));
  const auto gamma = parse_gamma(c.gamma, sub);
  const auto stream = stream_of(c, d);
  const auto family = make_family(sub, gamma, stream, c.simplified);
  const auto sample = monte_carlo(family, stream.digits(c.n), c.n, c.samples, c.seed, kind_of(c));
  if (c.format == "csv") {
    emit(c, histogram_csv(empirical_law(sample)));
    return 0;
  }
  const auto m = moments(sample.values);
  emit(c, Json{{"n", c.n},
               {"samples", c.samples},
               {"seed", c.seed},
               {"sum", c.sum},
               {"stream", stream_json(stream)},
               {"mean", rounded(m.mean)},
               {"V_n", rounded(m.variance)},
               {"V_n_over_n", rounded(c.n ? m.variance / static_cast<double>(c.n) : 0.0)},
               {"skewness", rounded(m.skewness)},
               {"excess_kurtosis", rounded(m.excess_kurtosis)},
               {"lattice_span", rounded(static_cast<double>(lattice_span(sample.scaled)) / sample.scale)}});
  return 0;
}

Json prediction_json(const MixturePrediction& p) {
  Json comps = Json::array();
  for (const auto& k : p.components) {
    comps.push_back(Json{{"states", k.states},
                         {"weight", to_string(k.weight)},
                         {"variance", to_string(k.variance)},
                         {"coboundary", k.coboundary}});
  }
  return Json{{"p0", to_string(p.p0)}, {"block", p.block}, {"components", comps}};
}

int cmd_dist(const RunConfig& c) {
  const auto sub = load(c);
  const auto d = static_cast<unsigned>(length_of(sub));
  const auto gamma = parse_gamma(c.gamma, sub);
  const auto stream = stream_of(c, d);
  const auto family = make_family(sub, gamma, stream, c.simplified);
  const auto digits = stream.digits(c.n);
  const bool exact = c.exact || !c.mc;
  const bool mc = c.mc;
  const auto kind = kind_of(c);

  Json report{{"n", c.n}, {"seed", c.seed}, {"sum", c.sum}, {"stream", stream_json(stream)}};
  std::optional<SumDistribution> dist;
  std::vector<std::string> warnings;
  if (exact) {
    DistributionOptions opt;
    opt.kind = kind;
    try {
      dist = exact_sum_distribution(family, digits, c.n, opt);
    } catch (const SupportCapExceeded& e) {
      if (!mc) throw;
      warnings.push_back(e.what());
    }
  }
  std::optional<EmpiricalSample> sample;
  if (mc) sample = monte_carlo(family, digits, c.n, c.samples, c.seed, kind);

  if (c.format == "csv") {
    emit(c, histogram_csv(dist ? dist->marginal_double() : empirical_law(*sample)));
    return 0;
  }
  if (dist) {
    const auto [lo, hi] = dist->support_range();
    report["exact"] = Json{{"mean", to_string(dist->mean())},
                           {"V_n", to_string(dist->variance())},
                           {"V_n_over_n", rounded(c.n ? dist->variance().get_d() / static_cast<double>(c.n) : 0.0)},
                           {"support", Json::array({to_string(lo), to_string(hi)})},
                           {"support_pairs", dist->support_pairs()},
                           {"total_mass", to_string(dist->total_mass())}};
  }
  if (sample) {
    const auto m = moments(sample->values);
    const double h = static_cast<double>(lattice_span(sample->scaled)) / static_cast<double>(sample->scale);
    report["mc"] = Json{{"samples", c.samples},
                        {"mean", rounded(m.mean)},
                        {"V_n", rounded(m.variance)},
                        {"skewness", rounded(m.skewness)},
                        {"excess_kurtosis", rounded(m.excess_kurtosis)},
                        {"KS_normal", rounded(ks_vs_normal(sample->values, std::sqrt(m.variance), h))}};
  }
  if (dist && sample) {
    const double ks = ks_sample_vs_discrete(sample->values, dist->marginal_double());
    const double tol = 3.0 / std::sqrt(static_cast<double>(c.samples));
    report["KS"] = rounded(ks);
    report["KS_tolerance"] = rounded(tol);
    report["agree"] = ks <= tol;
  }
  if (!stream.is_random()) report["prediction"] = prediction_json(mixture_prediction(sub, gamma, stream, c.simplified));
  report["warnings"] = warnings;
  emit(c, report);
  return report.contains("agree") && !report["agree"].get<bool>() ? 1 : 0;
}

int cmd_growth(const RunConfig& c) {
  const auto sub = load(c);
  const auto d = static_cast<unsigned>(length_of(sub));
  const auto gamma = parse_gamma(c.gamma, sub);
  const auto stream = stream_of(c, d);
  if (c.n <= c.n_min) throw Error("--n must exceed --n-min (" + std::to_string(c.n_min) + ")");
  GrowthOptions opt;
  opt.n_min = c.n_min;
  opt.n_max = c.n;
  opt.samples = c.samples;
  opt.seed = c.seed;
  opt.exact = c.exact;
  const auto g = variance_growth(sub, gamma, stream, opt);
  Json vn = Json::array();
  for (double v : g.variance) vn.push_back(rounded(v));
  emit(c, Json{{"n", g.n},
               {"V_n", vn},
               {"slope", rounded(g.slope)},
               {"intercept", rounded(g.intercept)},
               {"fit_range", Json::array({c.n_min, c.n})},
               {"seed", c.seed},
               {"stream", stream_json(stream)}});
  return 0;
}

int cmd_salem(const RunConfig& c) {
  std::vector<SalemReport> reports;
  for (unsigned n = 1; n <= c.n_max; ++n) reports.push_back(salem_check(n));
  const bool ok = std::all_of(reports.begin(), reports.end(),
                              [](const SalemReport& r) { return r.salem && r.matches_closed_form; });
  if (c.table) {
    std::ostringstream os;
    os << std::left << std::setw(5) << "n" << std::setw(44) << "char poly" << std::setw(8) << "closed" << std::setw(7)
       << "salem" << "result\n";
    for (const auto& r : reports) {
      os << std::setw(5) << r.n << std::setw(44) << r.char_poly.to_string() << std::setw(8)
         << (r.matches_closed_form ? "yes" : "no") << std::setw(7) << (r.salem ? "yes" : "no")
         << (r.salem && r.matches_closed_form ? "PASS" : "FAIL") << '\n';
    }
    emit(c, os.str());
  } else {
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(salem_json(r));
    emit(c, arr);
  }
  return ok ? 0 : 1;
}

int cmd_gallery(const RunConfig& c) {
  const auto g = build_gallery();
  const fs::path dir = c.out.empty() ? fs::path("gallery") : fs::path(c.out);
  fs::create_directories(dir);
  for (const auto& f : g.figures) {
    std::ofstream(dir / (f.name + ".dot")) << tau_automaton_dot(f.sub, f.automaton, f.classes);
  }
  Json claims = Json::array();
  for (const auto& cl : g.claims) {
    std::cout << (cl.pass ? "PASS " : "FAIL ") << cl.figure << ": " << cl.claim << "  [" << cl.detail << "]\n";
    claims.push_back(Json{{"figure", cl.figure}, {"claim", cl.claim}, {"pass", cl.pass}, {"detail", cl.detail}});
  }
  std::ofstream(dir / "claims.json") << claims.dump(2) << "\n";
  return g.all_pass() ? 0 : 1;
}

int cmd_bounds(const RunConfig& c) {
  const auto sub = load(c);
  const auto gamma = parse_gamma(c.gamma, sub);
  const Rational constant = theorem1_constant(sub, gamma);
  std::size_t horizon = c.horizon;
  if (horizon == 0) {
    horizon = 1;
    const auto d = constant_length(sub).value_or(2);
    for (int i = 0; i < 8; ++i) horizon *= d;
  }
  std::mt19937_64 rng(c.seed);
  Json probes = Json::array();
  Rational worst = 0;
  bool ok = true;
  for (std::size_t p = 0; p < c.points; ++p) {
    const auto point = sample_covering_point(sub, horizon, horizon, rng);
    const auto fwd = liminf_probe(gamma, point, horizon, Direction::forward, horizon / 2 + 1);
    const auto bwd = liminf_probe(gamma, point, horizon, Direction::backward, horizon / 2 + 1);
    worst = std::max({worst, fwd, bwd});
    ok = ok && fwd < constant && bwd < constant;
    probes.push_back(Json{{"forward", to_string(fwd)}, {"backward", to_string(bwd)}});
  }
  emit(c, Json{{"C", to_string(constant)},
               {"horizon", horizon},
               {"window", Json::array({horizon / 2 + 1, horizon})},
               {"seed", c.seed},
               {"probes", probes},
               {"max_probe", to_string(worst)}});
  return ok ? 0 : 1;
}

void add_sub_options(CLI::App* app, RunConfig& c) {
  app->add_option("--sub", c.sub_file, "substitution file (text rules or JSON)");
  app->add_option("--inline", c.inline_sub, "substitution given inline, e.g. \"1:112;2:221\"");
  app->add_option("--gamma", c.gamma, "auto or comma-separated rationals");
  app->add_option("--out", c.out, "output file (directory for gallery)");
}

void add_stream_options(CLI::App* app, RunConfig& c) {
  app->add_option("--t", c.t, "rational t, or a digit list");
  app->add_option("--digits", c.digits, "LIST[:PERIOD], leading digit first");
  app->add_option("--random-digits", c.random_digits, "seed of a uniformly random digit stream");
  app->add_option("--leading", c.leading, "leading digit of a random stream");
  app->add_option("--n", c.n, "number of layers");
  app->add_option("--samples", c.samples, "Monte Carlo samples");
  app->add_option("--seed", c.seed, "Monte Carlo seed");
  app->add_flag("--simplified", c.simplified, "use the simplified automaton (digits 0 after the leading one)");
  app->add_option("--sum", c.sum, "word (the ergodic sum) or chain (layer payoffs only)");
}

void print_error(const std::exception& e) {
  Json err{{"message", e.what()}};
  if (auto* pe = dynamic_cast<const ParseError*>(&e)) {
    err["line"] = pe->line();
    err["column"] = pe->column();
  }
  std::cerr << Json{{"error", err}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Substitution subshifts: automata, ergodic sums and their limit laws"};
  app.require_subcommand(1);
  RunConfig c;
  std::function<int(const RunConfig&)> run;

  auto* analyze = app.add_subcommand("analyze", "matrix, char poly, eigenvector and deviation constant");
  add_sub_options(analyze, c);
  analyze->callback([&] { run = cmd_analyze; });

  auto* automaton = app.add_subcommand("automaton", "export an automaton A_tau (json, dot, or ps for prefix-suffix)");
  add_sub_options(automaton, c);
  automaton->add_option("--tau", c.tau, "digit tau");
  automaton->add_flag("--simplified", c.simplified, "simplified tau = 0 automaton on pairs of letters");
  automaton->add_option("--format", c.format, "json, dot or ps");
  automaton->callback([&] { run = cmd_automaton; });

  auto* classify = app.add_subcommand("classify", "recurrent classes, periods, coboundaries, variances");
  add_sub_options(classify, c);
  classify->add_option("--tau", c.tau, "digit tau");
  classify->add_flag("--simplified", c.simplified, "simplified tau = 0 automaton");
  classify->add_option("--block", c.block, "comma-separated digit block for the product chain");
  classify->add_option("--format", c.format, "json or dot");
  classify->callback([&] { run = cmd_classify; });

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo law of the ergodic sum");
  add_sub_options(simulate, c);
  add_stream_options(simulate, c);
  simulate->add_option("--format", c.format, "json or csv");
  simulate->callback([&] { run = cmd_simulate; });

  auto* dist = app.add_subcommand("dist", "exact and/or Monte Carlo law; both compares them");
  add_sub_options(dist, c);
  add_stream_options(dist, c);
  dist->add_flag("--exact", c.exact, "exact dynamic programming");
  dist->add_flag("--mc", c.mc, "Monte Carlo");
  dist->add_option("--format", c.format, "json or csv");
  dist->callback([&] { run = cmd_dist; });

  auto* growth = app.add_subcommand("growth", "growth exponent of V_n");
  add_sub_options(growth, c);
  add_stream_options(growth, c);
  growth->add_option("--n-min", c.n_min, "first n of the fit");
  growth->add_flag("--exact", c.exact, "exact variances instead of Monte Carlo");
  growth->callback([&] { run = cmd_growth; });

  auto* salem = app.add_subcommand("salem", "Salem check of the interval exchange family");
  salem->add_option("--n-max", c.n_max, "largest n");
  salem->add_flag("--table", c.table, "text table instead of JSON");
  salem->add_option("--out", c.out, "output file");
  salem->callback([&] { run = cmd_salem; });

  auto* gallery = app.add_subcommand("gallery", "four example automata and their structural claims");
  gallery->add_option("--out", c.out, "output directory");
  gallery->callback([&] { run = cmd_gallery; });

  auto* bounds = app.add_subcommand("bounds", "liminf probes against the deviation constant");
  add_sub_options(bounds, c);
  bounds->add_option("--horizon", c.horizon, "largest n (default d^8)");
  bounds->add_option("--points", c.points, "number of sampled points");
  bounds->add_option("--seed", c.seed, "sampling seed");
  bounds->callback([&] { run = cmd_bounds; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    return run(c);
  } catch (const std::exception& e) {
    print_error(e);
    return 2;
  }
}
