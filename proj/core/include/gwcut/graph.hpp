#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gwcut {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double w = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  NodeId node = 0;
  double weight = 1.0;
};

// Immutable weighted undirected graph. Adjacency is stored in compressed
// (CSR) form so that each undirected edge is visited once per endpoint.
class Graph {
 public:
  Graph() = default;

  // Throws IndexOutOfRange, SelfLoop or DuplicateEdge.
  static Graph from_edge_list(std::size_t n, std::vector<Edge> edges);

  std::size_t num_nodes() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const { return edges_.size(); }
  double total_weight() const { return total_weight_; }
  double max_abs_weight() const { return max_abs_weight_; }
  std::size_t max_degree() const { return max_degree_; }
  bool unit_weighted() const { return unit_weighted_; }

  std::span<const Edge> edges() const { return edges_; }
  std::span<const Neighbor> neighbors(NodeId m) const {
    return {adjacency_.data() + offsets_[m], adjacency_.data() + offsets_[m + 1]};
  }
  std::size_t degree(NodeId m) const { return offsets_[m + 1] - offsets_[m]; }

  bool connected() const;

 private:
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  double total_weight_ = 0.0;
  double max_abs_weight_ = 0.0;
  std::size_t max_degree_ = 0;
  bool unit_weighted_ = true;
};

// Equality of node count and undirected edge multiset, ignoring edge order
// and endpoint orientation.
bool same_graph(const Graph& a, const Graph& b);

// --- generators ------------------------------------------------------------

inline constexpr int kDefaultConnectivityRetries = 100;
inline constexpr int kDefaultPairingRetries = 10000;

// G(n, p) with unit weights. With require_connected the whole instance is
// redrawn (at most `retries` times) until it is connected.
Graph gen_erdos_renyi(std::size_t n, double p, std::uint64_t seed, bool require_connected = false,
                      int retries = kDefaultConnectivityRetries);

// Uniform simple d-regular graph via the pairing model with rejection.
Graph gen_d_regular(std::size_t n, std::size_t d, std::uint64_t seed,
                    int retries = kDefaultPairingRetries);

// --- edge-list files -------------------------------------------------------
//
// '#' comment lines, then "N M", then M lines "u v [w]" with 1-based ids.

Graph read_graph(const std::filesystem::path& path);
Graph parse_graph(std::string_view text);
void write_graph(const Graph& g, const std::filesystem::path& path);
std::string format_graph(const Graph& g);

}  // namespace gwcut
