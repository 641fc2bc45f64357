#include "gwcut/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <utility>

#include "gwcut/error.hpp"

namespace gwcut {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::ConnectivityRetryExhausted: return "ConnectivityRetryExhausted";
    case ErrorCode::InfeasibleDegree: return "InfeasibleDegree";
    case ErrorCode::RetryExhausted: return "RetryExhausted";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::KinkProximity: return "KinkProximity";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Graph Graph::from_edge_list(std::size_t n, std::vector<Edge> edges) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "graph needs at least one node");
  if (n > std::size_t{0xffffffffu}) throw Error(ErrorCode::TooLarge, "node count exceeds 32-bit ids");

  std::vector<std::pair<NodeId, NodeId>> keys;
  keys.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw Error(ErrorCode::IndexOutOfRange, "edge (" + std::to_string(e.u) + ", " +
                                                  std::to_string(e.v) + ") with n = " +
                                                  std::to_string(n));
    }
    if (e.u == e.v) throw Error(ErrorCode::SelfLoop, "self-loop at node " + std::to_string(e.u));
    if (!std::isfinite(e.w)) throw Error(ErrorCode::InvalidArgument, "non-finite edge weight");
    keys.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
  }
  std::sort(keys.begin(), keys.end());
  if (auto it = std::adjacent_find(keys.begin(), keys.end()); it != keys.end()) {
    throw Error(ErrorCode::DuplicateEdge, "edge {" + std::to_string(it->first) + ", " +
                                              std::to_string(it->second) + "} given twice");
  }

  Graph g;
  g.edges_ = std::move(edges);
  g.offsets_.assign(n + 1, 0);
  for (const Edge& e : g.edges_) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
    g.total_weight_ += e.w;
    g.max_abs_weight_ = std::max(g.max_abs_weight_, std::abs(e.w));
    if (e.w != 1.0) g.unit_weighted_ = false;
  }
  for (std::size_t m = 0; m < n; ++m) {
    g.max_degree_ = std::max(g.max_degree_, g.offsets_[m + 1]);
    g.offsets_[m + 1] += g.offsets_[m];
  }
  g.adjacency_.resize(g.offsets_[n]);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : g.edges_) {
    g.adjacency_[cursor[e.u]++] = {e.v, e.w};
    g.adjacency_[cursor[e.v]++] = {e.u, e.w};
  }
  return g;
}

bool Graph::connected() const {
  const std::size_t n = num_nodes();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const NodeId m = stack.back();
    stack.pop_back();
    for (const Neighbor& nb : neighbors(m)) {
      if (!seen[nb.node]) {
        seen[nb.node] = 1;
        ++reached;
        stack.push_back(nb.node);
      }
    }
  }
  return reached == n;
}

bool same_graph(const Graph& a, const Graph& b) {
  if (a.num_nodes() != b.num_nodes() || a.num_edges() != b.num_edges()) return false;
  auto canonical = [](const Graph& g) {
    std::vector<std::tuple<NodeId, NodeId, double>> out;
    out.reserve(g.num_edges());
    for (const Edge& e : g.edges()) out.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v), e.w);
    std::sort(out.begin(), out.end());
    return out;
  };
  return canonical(a) == canonical(b);
}

}  // namespace gwcut
