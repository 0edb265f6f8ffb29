#include "subshift/markov.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace subshift {

void ChainGraph::check_stochastic() const {
  for (std::size_t s = 0; s < out.size(); ++s) {
    Rational total = 0;
    for (const auto& e : out[s]) {
      if (e.target >= out.size()) throw Error("chain edge leaves the state space");
      if (e.probability < 0) throw Error("negative transition probability");
      total += e.probability;
    }
    if (total != 1) throw Error("row " + std::to_string(s) + " sums to " + to_string(total));
  }
}

ChainGraph chain_of(const TauAutomaton& automaton) {
  ChainGraph chain;
  chain.out.resize(automaton.state_count());
  chain.digits = {automaton.tau()};
  const Rational p(1, static_cast<unsigned long>(automaton.length()));
  for (const auto& e : automaton.edges()) chain.out[e.source].push_back(ChainEdge{e.target, p, e.payoff, e.m});
  return chain;
}

std::vector<std::vector<std::size_t>> strongly_connected_components(const ChainGraph& chain) {
  const std::size_t n = chain.size();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnset), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t counter = 0;

  // explicit DFS frames: (state, next edge)
  std::vector<std::pair<std::size_t, std::size_t>> frames;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      if (next < chain.out[v].size()) {
        const std::size_t w = chain.out[v][next++].target;
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
      if (low[done] == index[done]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != done);
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
    }
  }
  return components;
}

bool is_strongly_connected(const ChainGraph& chain) { return strongly_connected_components(chain).size() == 1; }

bool is_closed(const ChainGraph& chain, const std::vector<std::size_t>& states) {
  std::vector<char> inside(chain.size(), 0);
  for (auto s : states) inside[s] = 1;
  for (auto s : states)
    for (const auto& e : chain.out[s])
      if (!inside[e.target]) return false;
  return true;
}

namespace {

// BFS from states.front() restricted to the class; returns levels (or -1) and tree parents.
struct Bfs {
  std::vector<long> level;
  std::vector<EdgeRef> parent;
};

Bfs bfs_in_class(const ChainGraph& chain, const std::vector<std::size_t>& states, bool reverse) {
  const std::size_t n = chain.size();
  std::vector<char> inside(n, 0);
  for (auto s : states) inside[s] = 1;
  Bfs b{std::vector<long>(n, -1), std::vector<EdgeRef>(n, {0, 0})};
  std::vector<std::vector<EdgeRef>> incoming;
  if (reverse) {
    incoming.resize(n);
    for (auto s : states)
      for (std::size_t i = 0; i < chain.out[s].size(); ++i)
        if (inside[chain.out[s][i].target]) incoming[chain.out[s][i].target].emplace_back(s, i);
  }
  std::deque<std::size_t> queue{states.front()};
  b.level[states.front()] = 0;
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    if (!reverse) {
      for (std::size_t i = 0; i < chain.out[v].size(); ++i) {
        auto w = chain.out[v][i].target;
        if (!inside[w] || b.level[w] >= 0) continue;
        b.level[w] = b.level[v] + 1;
        b.parent[w] = {v, i};
        queue.push_back(w);
      }
    } else {
      for (const auto& ref : incoming[v]) {
        auto w = ref.first;
        if (b.level[w] >= 0) continue;
        b.level[w] = b.level[v] + 1;
        b.parent[w] = ref;  // edge w -> v
        queue.push_back(w);
      }
    }
  }
  return b;
}

// root -> s along the forward tree
std::vector<EdgeRef> tree_path_from_root(const Bfs& fwd, std::size_t root, std::size_t s) {
  std::vector<EdgeRef> path;
  while (s != root) {
    path.push_back(fwd.parent[s]);
    s = fwd.parent[s].first;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

// s -> root along the reverse tree
std::vector<EdgeRef> tree_path_to_root(const ChainGraph& chain, const Bfs& rev, std::size_t root, std::size_t s) {
  std::vector<EdgeRef> path;
  while (s != root) {
    path.push_back(rev.parent[s]);
    s = chain.out[rev.parent[s].first][rev.parent[s].second].target;
  }
  return path;
}

Rational walk_sum(const ChainGraph& chain, const std::vector<EdgeRef>& walk) {
  Rational s = 0;
  for (const auto& [v, i] : walk) s += chain.out[v][i].payoff;
  return s;
}

}  // namespace

std::size_t period(const ChainGraph& chain, const std::vector<std::size_t>& states) {
  if (states.empty()) throw Error("period of an empty class");
  auto b = bfs_in_class(chain, states, false);
  std::vector<char> inside(chain.size(), 0);
  for (auto s : states) inside[s] = 1;
  long g = 0;
  for (auto s : states) {
    if (b.level[s] < 0) throw Error("period: class is not strongly connected");
    for (const auto& e : chain.out[s]) {
      if (!inside[e.target]) continue;
      g = std::gcd(g, std::labs(b.level[s] + 1 - b.level[e.target]));
    }
  }
  return g == 0 ? 0 : static_cast<std::size_t>(g);
}

CoboundaryWitness coboundary_on_class(const ChainGraph& chain, const std::vector<std::size_t>& states) {
  if (states.empty()) throw Error("coboundary test on an empty class");
  const auto root = states.front();
  auto fwd = bfs_in_class(chain, states, false);
  std::vector<char> inside(chain.size(), 0);
  for (auto s : states) inside[s] = 1;

  CoboundaryWitness w;
  w.potential[root] = 0;
  // potentials in BFS order along tree edges
  std::vector<std::size_t> order(states.begin(), states.end());
  for (auto s : order)
    if (fwd.level[s] < 0) throw Error("coboundary test: class is not strongly connected");
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return fwd.level[x] < fwd.level[y]; });
  for (auto s : order) {
    if (s == root) continue;
    const auto [p, i] = fwd.parent[s];
    w.potential[s] = w.potential.at(p) + chain.out[p][i].payoff;
  }
  for (auto s : states) {
    for (std::size_t i = 0; i < chain.out[s].size(); ++i) {
      const auto& e = chain.out[s][i];
      if (!inside[e.target]) continue;
      if (w.potential.at(e.target) - w.potential.at(s) == e.payoff) continue;
      // C1 = root ~> t ~> root and C2 = root ~> s -e-> t ~> root differ in sum by the defect of e.
      auto rev = bfs_in_class(chain, states, true);
      auto back = tree_path_to_root(chain, rev, root, e.target);
      auto c1 = tree_path_from_root(fwd, root, e.target);
      c1.insert(c1.end(), back.begin(), back.end());
      auto c2 = tree_path_from_root(fwd, root, s);
      c2.emplace_back(s, i);
      c2.insert(c2.end(), back.begin(), back.end());
      Rational s1 = walk_sum(chain, c1), s2 = walk_sum(chain, c2);
      w.coboundary = false;
      w.potential.clear();
      if (s1 != 0 && !c1.empty()) {
        w.cycle = std::move(c1);
        w.cycle_sum = s1;
      } else {
        w.cycle = std::move(c2);
        w.cycle_sum = s2;
      }
      return w;
    }
  }
  w.coboundary = true;
  return w;
}

std::vector<Rational> stationary(const ChainGraph& chain, const std::vector<std::size_t>& states) {
  const std::size_t n = states.size();
  std::map<std::size_t, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) pos[states[i]] = i;
  // rows: (P^T - I) pi = 0 plus sum(pi) = 1
  RationalMatrix a(n + 1, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) -= 1;
    for (const auto& e : chain.out[states[i]]) {
      auto it = pos.find(e.target);
      if (it == pos.end()) throw Error("stationary: class is not closed");
      a(it->second, i) += e.probability;
    }
  }
  for (std::size_t j = 0; j < n; ++j) a(n, j) = 1;
  std::vector<Rational> b(n + 1, Rational(0));
  b[n] = 1;
  auto pi = solve_unique(a, b);
  if (!pi) throw Error("stationary law is not unique on this class");
  return *pi;
}

Rational expected_payoff(const ChainGraph& chain, const std::vector<std::size_t>& states,
                         const std::vector<Rational>& pi) {
  Rational mean = 0;
  for (std::size_t i = 0; i < states.size(); ++i)
    for (const auto& e : chain.out[states[i]]) mean += pi[i] * e.probability * e.payoff;
  return mean;
}

Rational asymptotic_variance(const ChainGraph& chain, const std::vector<std::size_t>& states) {
  const std::size_t n = states.size();
  const auto pi = stationary(chain, states);
  if (expected_payoff(chain, states, pi) != 0) throw Error("asymptotic variance needs a zero-mean class");
  std::map<std::size_t, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) pos[states[i]] = i;

  // (I - P) u = r with pi . u = 0
  RationalMatrix a(n + 1, n);
  std::vector<Rational> r(n + 1, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) += 1;
    for (const auto& e : chain.out[states[i]]) {
      a(i, pos.at(e.target)) -= e.probability;
      r[i] += e.probability * e.payoff;
    }
  }
  for (std::size_t j = 0; j < n; ++j) a(n, j) = pi[j];
  auto u = solve_unique(a, r);
  if (!u) throw Error("Poisson equation has no unique solution on this class");

  Rational var = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& e : chain.out[states[i]]) {
      Rational dm = e.payoff + (*u)[pos.at(e.target)] - (*u)[i];
      var += pi[i] * e.probability * dm * dm;
    }
  return var;
}

std::vector<RecurrentClass> recurrent_classes(const ChainGraph& chain) {
  std::vector<RecurrentClass> classes;
  for (auto& comp : strongly_connected_components(chain)) {
    if (!is_closed(chain, comp)) continue;
    RecurrentClass c;
    c.states = comp;
    c.period = period(chain, comp);
    c.stationary = stationary(chain, comp);
    c.expected_payoff = expected_payoff(chain, comp, c.stationary);
    c.coboundary = coboundary_on_class(chain, comp);
    c.variance = c.expected_payoff == 0 ? asymptotic_variance(chain, comp) : Rational(-1);
    classes.push_back(std::move(c));
  }
  std::sort(classes.begin(), classes.end(),
            [](const RecurrentClass& x, const RecurrentClass& y) { return x.states.front() < y.states.front(); });
  return classes;
}

std::vector<std::size_t> transient_states(const ChainGraph& chain, const std::vector<RecurrentClass>& classes) {
  std::vector<char> recurrent(chain.size(), 0);
  for (const auto& c : classes)
    for (auto s : c.states) recurrent[s] = 1;
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < chain.size(); ++s)
    if (!recurrent[s]) out.push_back(s);
  return out;
}

ChainGraph compose(const ChainGraph& first, const ChainGraph& second) {
  if (first.size() != second.size()) throw Error("compose: state spaces differ");
  ChainGraph out;
  out.out.resize(first.size());
  out.digits = first.digits;
  out.digits.insert(out.digits.end(), second.digits.begin(), second.digits.end());
  for (std::size_t s = 0; s < first.size(); ++s) {
    for (const auto& e1 : first.out[s]) {
      const auto& next = second.out[e1.target];
      for (const auto& e2 : next) {
        out.out[s].push_back(ChainEdge{e2.target, e1.probability * e2.probability, e1.payoff + e2.payoff,
                                       (e1.label - 1) * next.size() + e2.label});
      }
    }
  }
  return out;
}

ChainGraph product_chain(const Substitution& sub, const WeightVector& gamma, const std::vector<unsigned>& block) {
  if (block.empty()) throw Error("product chain needs a nonempty digit block");
  ChainGraph acc = chain_of(build_tau_automaton(sub, gamma, block.front()));
  for (std::size_t i = 1; i < block.size(); ++i) acc = compose(acc, chain_of(build_tau_automaton(sub, gamma, block[i])));
  return acc;
}

RationalMatrix transition_matrix(const ChainGraph& chain) {
  RationalMatrix p(chain.size(), chain.size());
  for (std::size_t s = 0; s < chain.size(); ++s)
    for (const auto& e : chain.out[s]) p(s, e.target) += e.probability;
  return p;
}

Rational ergodic_coefficient(const RationalMatrix& p) {
  if (p.rows() != p.cols()) throw Error("ergodic coefficient needs a square matrix");
  for (std::size_t a = 0; a < p.rows(); ++a) {
    Rational row = 0;
    for (std::size_t c = 0; c < p.cols(); ++c) {
      if (p(a, c) < 0) throw Error("ergodic coefficient needs a stochastic matrix");
      row += p(a, c);
    }
    if (row != 1) throw Error("ergodic coefficient needs a stochastic matrix");
  }
  Rational delta = 0;
  for (std::size_t c = 0; c < p.cols(); ++c) {
    Rational lo = p(0, c), hi = p(0, c);
    for (std::size_t a = 1; a < p.rows(); ++a) {
      lo = std::min(lo, p(a, c));
      hi = std::max(hi, p(a, c));
    }
    delta = std::max(delta, Rational(hi - lo));
  }
  return 1 - delta;
}

std::vector<std::vector<Rational>> absorption_probabilities(const ChainGraph& chain,
                                                            const std::vector<RecurrentClass>& classes) {
  const std::size_t n = chain.size();
  std::vector<std::vector<Rational>> result(n, std::vector<Rational>(classes.size(), Rational(0)));
  std::vector<long> owner(n, -1);
  for (std::size_t j = 0; j < classes.size(); ++j)
    for (auto s : classes[j].states) {
      owner[s] = static_cast<long>(j);
      result[s][j] = 1;
    }
  const auto transient = transient_states(chain, classes);
  if (transient.empty()) return result;
  std::map<std::size_t, std::size_t> pos;
  for (std::size_t i = 0; i < transient.size(); ++i) pos[transient[i]] = i;
  const std::size_t m = transient.size();
  RationalMatrix a(m, m);
  std::vector<std::vector<Rational>> rhs(classes.size(), std::vector<Rational>(m, Rational(0)));
  for (std::size_t i = 0; i < m; ++i) {
    a(i, i) += 1;
    for (const auto& e : chain.out[transient[i]]) {
      if (owner[e.target] >= 0) {
        rhs[owner[e.target]][i] += e.probability;
      } else {
        a(i, pos.at(e.target)) -= e.probability;
      }
    }
  }
  for (std::size_t j = 0; j < classes.size(); ++j) {
    auto h = solve_unique(a, rhs[j]);
    if (!h) throw Error("absorption system is singular");
    for (std::size_t i = 0; i < m; ++i) result[transient[i]][j] = (*h)[i];
  }
  return result;
}

namespace {

std::vector<Rational> normalized_left_eigenvector(const RationalMatrix& b, const Rational& lambda) {
  const std::size_t n = b.rows();
  RationalMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = b(j, i) - (i == j ? lambda : Rational(0));
  auto basis = kernel_basis(a);
  if (basis.size() != 1) throw Error("frequency vector is not unique; is the substitution primitive?");
  auto v = std::move(basis.front());
  Rational total = 0;
  for (const auto& x : v) total += x;
  for (auto& x : v) {
    x /= total;
    if (x < 0) throw Error("frequency vector has a negative entry");
  }
  return v;
}

std::size_t require_primitive_constant(const Substitution& sub) {
  auto d = constant_length(sub);
  if (!d) throw Error("frequencies are implemented for constant-length substitutions");
  if (!is_primitive(sub)) throw Error("frequencies need a primitive substitution");
  return *d;
}

}  // namespace

std::vector<Rational> letter_frequencies(const Substitution& sub) {
  const auto d = require_primitive_constant(sub);
  const auto m = matrix_of(sub);
  RationalMatrix b(m.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) b(i, j) = Rational(m(i, j));
  return normalized_left_eigenvector(b, Rational(static_cast<long>(d)));
}

std::map<Word, Rational> block_frequencies(const Substitution& sub, std::size_t length) {
  const auto d = require_primitive_constant(sub);
  if (length == 0) throw Error("block length must be positive");
  const auto blocks = legal_factors(sub, length);
  std::map<Word, std::size_t> index;
  for (std::size_t i = 0; i < blocks.size(); ++i) index[blocks[i]] = i;
  // block w maps to the d blocks of the same length starting at positions 0..d-1 of sigma(w)
  RationalMatrix b(blocks.size(), blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto image = sub.apply(blocks[i]);
    for (std::size_t p = 0; p < d; ++p) {
      Word w(image.begin() + p, image.begin() + p + length);
      b(i, index.at(w)) += 1;
    }
  }
  const auto v = normalized_left_eigenvector(b, Rational(static_cast<long>(d)));
  std::map<Word, Rational> out;
  for (std::size_t i = 0; i < blocks.size(); ++i) out[blocks[i]] = v[i];
  return out;
}

std::vector<Rational> InitialDistribution::state_marginal(std::size_t state_count) const {
  std::vector<Rational> m(state_count, Rational(0));
  for (const auto& e : entries) m.at(e.state) += e.probability;
  return m;
}

Rational InitialDistribution::total() const {
  Rational t = 0;
  for (const auto& e : entries) t += e.probability;
  return t;
}

InitialDistribution initial_distribution(const Substitution& sub, const WeightVector& gamma, unsigned leading_digit,
                                         bool simplified) {
  const auto d = require_primitive_constant(sub);
  if (leading_digit < 1 || leading_digit >= d) throw Error("leading digit must lie in 1..d-1");
  const std::size_t k = sub.alphabet_size();
  std::map<std::pair<std::size_t, Rational>, Rational> acc;
  for (const auto& [block, freq] : block_frequencies(sub, d + 1)) {
    if (freq == 0) continue;
    const auto t = leading_digit;
    std::size_t state = simplified ? block[0] * k + block[t] : (block[0] * k + block[t]) * k + block[t + 1];
    Rational g0 = gamma_of_word(gamma, std::span<const Letter>(block).subspan(1, t - 1));
    acc[{state, g0}] += freq;
  }
  InitialDistribution init;
  for (auto& [key, p] : acc) init.entries.push_back(InitialEntry{key.first, key.second, p});
  return init;
}

}  // namespace subshift
