#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "gwcut/graph.hpp"
#include "gwcut/objective.hpp"
#include "gwcut/rng.hpp"

namespace gwcut::testing {

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) edges.push_back({u, v, 1.0});
  return Graph::from_edge_list(n, std::move(edges));
}

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u + 1 < n; ++u) edges.push_back({u, u + 1, 1.0});
  return Graph::from_edge_list(n, std::move(edges));
}

inline Graph cycle_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) edges.push_back({u, static_cast<NodeId>((u + 1) % n), 1.0});
  return Graph::from_edge_list(n, std::move(edges));
}

inline Graph complete_bipartite(std::size_t a, std::size_t b) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < a; ++u)
    for (NodeId v = 0; v < b; ++v) edges.push_back({u, static_cast<NodeId>(a + v), 1.0});
  return Graph::from_edge_list(a + b, std::move(edges));
}

// ER graph with weights drawn from [lo, hi).
inline Graph weighted_er(std::size_t n, double p, std::uint64_t seed, double lo, double hi) {
  const Graph base = gen_erdos_renyi(n, p, seed);
  Rng rng(seed ^ 0x5eedULL);
  std::vector<Edge> edges(base.edges().begin(), base.edges().end());
  for (auto& e : edges) e.w = rng.uniform(lo, hi);
  return Graph::from_edge_list(n, std::move(edges));
}

// Reference cut by direct enumeration of the edge list.
inline double naive_cut(const Graph& g, const SpinState& s) {
  double c = 0.0;
  for (const Edge& e : g.edges())
    if (s[e.u] != s[e.v]) c += e.w;
  return c;
}

inline SpinState spins_from_mask(std::size_t n, std::uint64_t mask) {
  SpinState s(n);
  for (std::size_t m = 0; m < n; ++m)
    if ((mask >> m) & 1U) s.flip(m);
  return s;
}

// Maximum cut by plain enumeration over all 2^n states.
inline double naive_maxcut(const Graph& g) {
  const std::size_t n = g.num_nodes();
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask)
    best = std::max(best, naive_cut(g, spins_from_mask(n, mask)));
  return best;
}

}  // namespace gwcut::testing
