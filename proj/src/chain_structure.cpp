#include "persist/chain_structure.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <sstream>

#include "persist/errors.hpp"

namespace persist {

namespace {

using Adjacency = std::vector<std::vector<std::size_t>>;

Adjacency support_graph(const StochasticMatrix& s, double zero_tol) {
  const std::size_t n = s.size();
  Adjacency adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (s(i, j) > zero_tol) adj[i].push_back(j);
  return adj;
}

// Tarjan's algorithm, iterative. Returns the component id of every vertex.
std::vector<std::size_t> strongly_connected(const Adjacency& adj, std::size_t& n_components) {
  const std::size_t n = adj.size();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // (vertex, next edge)
  std::size_t counter = 0;
  n_components = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, e] = call.back();
      if (e < adj[v].size()) {
        const std::size_t w = adj[v][e++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      call.pop_back();
      if (!call.empty()) {
        const std::size_t parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = n_components;
        } while (w != done);
        ++n_components;
      }
    }
  }
  return comp;
}

// BFS depth from root, restricted to `members`; unreachable vertices keep -1.
std::vector<long> bfs_levels(const Adjacency& adj, std::size_t root,
                             const std::vector<bool>& members) {
  std::vector<long> level(adj.size(), -1);
  std::queue<std::size_t> q;
  level[root] = 0;
  q.push(root);
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    for (std::size_t v : adj[u]) {
      if (!members[v] || level[v] >= 0) continue;
      level[v] = level[u] + 1;
      q.push(v);
    }
  }
  return level;
}

std::vector<bool> membership(std::size_t n, std::span<const std::size_t> states) {
  std::vector<bool> in(n, false);
  for (std::size_t v : states) {
    if (v >= n) {
      std::ostringstream os;
      os << "state " << v << " out of range for a " << n << "-state chain";
      throw ArgumentError(ErrorKind::NotAClass, os.str());
    }
    in[v] = true;
  }
  return in;
}

void require_closed_class(const Adjacency& adj, std::span<const std::size_t> states,
                          const std::vector<bool>& in) {
  if (states.empty()) throw ArgumentError(ErrorKind::NotAClass, "empty state set");
  for (std::size_t u : states)
    for (std::size_t v : adj[u])
      if (!in[v]) {
        std::ostringstream os;
        os << "state set is not closed: edge " << u << " -> " << v << " leaves it";
        throw ArgumentError(ErrorKind::NotAClass, os.str());
      }
  const std::size_t root = *std::min_element(states.begin(), states.end());
  const auto forward = bfs_levels(adj, root, in);
  Adjacency reverse(adj.size());
  for (std::size_t u = 0; u < adj.size(); ++u)
    for (std::size_t v : adj[u]) reverse[v].push_back(u);
  const auto backward = bfs_levels(reverse, root, in);
  for (std::size_t u : states)
    if (forward[u] < 0 || backward[u] < 0) {
      throw ArgumentError(ErrorKind::NotAClass, "state set is not strongly connected");
    }
}

std::size_t period_from_levels(const Adjacency& adj, std::span<const std::size_t> states,
                               const std::vector<bool>& in, const std::vector<long>& level) {
  long g = 0;
  for (std::size_t u : states)
    for (std::size_t v : adj[u])
      if (in[v]) g = std::gcd(g, level[u] + 1 - level[v]);
  return static_cast<std::size_t>(g);
}

}  // namespace

std::size_t ReducedForm::total_period() const {
  std::size_t total = 0;
  for (const auto& c : classes) total += c.period;
  return total;
}

StateClassification classify_states(const StochasticMatrix& s, double zero_tol) {
  const auto adj = support_graph(s, zero_tol);
  std::size_t n_comp = 0;
  const auto comp = strongly_connected(adj, n_comp);
  std::vector<bool> closed(n_comp, true);
  for (std::size_t u = 0; u < adj.size(); ++u)
    for (std::size_t v : adj[u])
      if (comp[u] != comp[v]) closed[comp[u]] = false;

  StateClassification out;
  std::vector<StateSet> by_comp(n_comp);
  for (std::size_t u = 0; u < adj.size(); ++u) {
    if (closed[comp[u]]) by_comp[comp[u]].push_back(u);
    else out.transient.push_back(u);
  }
  for (auto& c : by_comp)
    if (!c.empty()) out.recurrent.push_back(std::move(c));
  std::sort(out.recurrent.begin(), out.recurrent.end(),
            [](const StateSet& a, const StateSet& b) { return a.front() < b.front(); });
  return out;
}

std::size_t class_period(const StochasticMatrix& s, std::span<const std::size_t> class_states,
                         double zero_tol) {
  const auto adj = support_graph(s, zero_tol);
  const auto in = membership(s.size(), class_states);
  require_closed_class(adj, class_states, in);
  const std::size_t root = *std::min_element(class_states.begin(), class_states.end());
  return period_from_levels(adj, class_states, in, bfs_levels(adj, root, in));
}

std::vector<StateSet> cyclic_classes(const StochasticMatrix& s,
                                     std::span<const std::size_t> class_states, std::size_t d,
                                     double zero_tol) {
  if (d == 0) throw ArgumentError(ErrorKind::NotAClass, "period must be positive");
  const auto adj = support_graph(s, zero_tol);
  const auto in = membership(s.size(), class_states);
  if (class_states.empty()) throw ArgumentError(ErrorKind::NotAClass, "empty state set");
  const std::size_t root = *std::min_element(class_states.begin(), class_states.end());
  const auto level = bfs_levels(adj, root, in);
  std::vector<StateSet> out(d);
  for (std::size_t u : class_states) {
    if (level[u] < 0) throw ArgumentError(ErrorKind::NotAClass, "state set is not strongly connected");
    out[static_cast<std::size_t>(level[u]) % d].push_back(u);
  }
  for (auto& c : out) std::sort(c.begin(), c.end());
  return out;
}

ReducedForm canonical_form(const StochasticMatrix& s, double zero_tol) {
  const auto classification = classify_states(s, zero_tol);
  if (classification.recurrent.empty()) {
    // A finite stochastic matrix always has a closed class.
    throw VerificationError(ErrorKind::VerificationFailed, "no recurrent class found");
  }
  ReducedForm rf;
  rf.transient = classification.transient;
  rf.order = rf.transient;
  rf.lcm_period = 1;
  for (const auto& states : classification.recurrent) {
    RecurrentClass c;
    c.states = states;
    c.period = class_period(s, states, zero_tol);
    c.cyclic_classes = cyclic_classes(s, states, c.period, zero_tol);
    for (const auto& cc : c.cyclic_classes) rf.order.insert(rf.order.end(), cc.begin(), cc.end());
    rf.lcm_period = std::lcm(rf.lcm_period, c.period);
    rf.classes.push_back(std::move(c));
  }
  rf.permutation.assign(s.size(), 0);
  for (std::size_t pos = 0; pos < rf.order.size(); ++pos) rf.permutation[rf.order[pos]] = pos;
  return rf;
}

DenseMatrix reduced_matrix(const StochasticMatrix& s, const ReducedForm& rf) {
  return permute_symmetric(s.matrix(), rf.order);
}

DenseMatrix transient_block(const StochasticMatrix& s, const ReducedForm& rf) {
  const std::size_t t = rf.transient.size();
  DenseMatrix b(t, t);
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j < t; ++j) b(i, j) = s(rf.transient[i], rf.transient[j]);
  return b;
}

DenseMatrix class_block(const StochasticMatrix& s, const ReducedForm& rf, std::size_t j) {
  const auto& c = rf.classes.at(j);
  StateSet order;
  for (const auto& cc : c.cyclic_classes) order.insert(order.end(), cc.begin(), cc.end());
  DenseMatrix b(order.size(), order.size());
  for (std::size_t a = 0; a < order.size(); ++a)
    for (std::size_t k = 0; k < order.size(); ++k) b(a, k) = s(order[a], order[k]);
  return b;
}

bool is_irreducible(const StochasticMatrix& s, double zero_tol) {
  std::size_t n_comp = 0;
  strongly_connected(support_graph(s, zero_tol), n_comp);
  return n_comp == 1;
}

std::vector<StateSet> invariant_faces_bruteforce(const StochasticMatrix& s, double zero_tol,
                                                 std::size_t max_n) {
  const std::size_t n = s.size();
  if (n > max_n || n >= 63) {
    std::ostringstream os;
    os << "face enumeration limited to " << max_n << " states, got " << n;
    throw ArgumentError(ErrorKind::TooLarge, os.str());
  }
  // Column j of S is S e_j; its support must stay inside J.
  std::vector<std::uint64_t> column_support(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (s(i, j) > zero_tol) column_support[j] |= std::uint64_t{1} << i;

  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::vector<StateSet> faces;
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    bool invariant = true;
    for (std::size_t j = 0; j < n && invariant; ++j)
      if ((mask >> j) & 1U) invariant = (column_support[j] & ~mask) == 0;
    if (!invariant) continue;
    StateSet face;
    for (std::size_t j = 0; j < n; ++j)
      if ((mask >> j) & 1U) face.push_back(j);
    faces.push_back(std::move(face));
  }
  return faces;
}

}  // namespace persist
