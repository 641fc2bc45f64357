#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "gwcut/error.hpp"
#include "gwcut/graph.hpp"
#include "gwcut/rng.hpp"

namespace gwcut {

namespace {

std::vector<Edge> sample_gnp(std::size_t n, double p, Rng& rng) {
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (rng.uniform() < p) edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), 1.0});
    }
  }
  return edges;
}

}  // namespace

Graph gen_erdos_renyi(std::size_t n, double p, std::uint64_t seed, bool require_connected,
                      int retries) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "G(n, p) needs n >= 2");
  if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "p must lie in (0, 1]");
  const int attempts = require_connected ? std::max(retries, 1) : 1;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(attempt));
    Graph g = Graph::from_edge_list(n, sample_gnp(n, p, rng));
    if (!require_connected || g.connected()) return g;
  }
  throw Error(ErrorCode::ConnectivityRetryExhausted,
              "no connected G(" + std::to_string(n) + ", " + std::to_string(p) + ") after " +
                  std::to_string(attempts) + " draws");
}

Graph gen_d_regular(std::size_t n, std::size_t d, std::uint64_t seed, int retries) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "regular graph needs n >= 1");
  if (d >= n || (n * d) % 2 != 0) {
    throw Error(ErrorCode::InfeasibleDegree,
                "no simple " + std::to_string(d) + "-regular graph on " + std::to_string(n) + " nodes");
  }
  std::vector<NodeId> points(n * d);
  std::vector<std::pair<NodeId, NodeId>> keys;
  for (int attempt = 0; attempt < std::max(retries, 1); ++attempt) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(attempt));
    for (std::size_t i = 0; i < points.size(); ++i) points[i] = static_cast<NodeId>(i / d);
    for (std::size_t i = points.size(); i > 1; --i) {
      std::swap(points[i - 1], points[rng.below(i)]);
    }
    keys.clear();
    bool simple = true;
    for (std::size_t i = 0; i + 1 < points.size(); i += 2) {
      const NodeId a = points[i];
      const NodeId b = points[i + 1];
      if (a == b) {
        simple = false;
        break;
      }
      keys.emplace_back(std::min(a, b), std::max(a, b));
    }
    if (!simple) continue;
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) continue;

    std::vector<Edge> edges;
    edges.reserve(keys.size());
    for (const auto& [a, b] : keys) edges.push_back({a, b, 1.0});
    return Graph::from_edge_list(n, std::move(edges));
  }
  throw Error(ErrorCode::RetryExhausted, "pairing model did not produce a simple graph");
}

}  // namespace gwcut
