#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gwcut/graph.hpp"
#include "gwcut/objective.hpp"

namespace gwcut {

// Two X components belong to one level group iff they differ by at most this.
inline constexpr double kGroupTolerance = 1e-9;

// Native state of the GW2 machine: xi = sigma + X (mod 4), X in (-1, 1].
struct SxState {
  SpinState sigma;
  std::vector<double> x;

  SxState() = default;
  SxState(SpinState s, std::vector<double> xs);
  // Binary state with X = 0.
  explicit SxState(SpinState s);

  std::size_t size() const { return x.size(); }
  // Throws LengthMismatch or DomainViolation.
  void validate() const;
};

struct Decomposed {
  int sigma = 1;
  double x = 0.0;
  std::int64_t k = 0;
};

// Unique xi = sigma + X + 4k with X in (-1, 1]. Points with xi = 0 (mod 2)
// resolve to X = 1.
Decomposed decompose(double xi);
SxState decompose(std::span<const double> xi);
// xi_m = sigma_m + X_m. Throws DomainViolation for X outside (-1, 1].
ContinuousState compose(const SpinState& s, std::span<const double> x);

// X <- X + dX followed by boundary wrapping: X > 1 maps to X - 2 and X <= -1
// maps to X + 2, each time inverting the spin. Requires |dX|_inf < 2.
SxState update(SxState state, std::span<const double> dx);
// In-place form; returns the number of inverted spins.
std::size_t update_in_place(SxState& state, std::span<const double> dx);
// Wraps one already-advanced component back into (-1, 1]. Returns true when
// the spin was inverted. Requires x in (-3, 3].
bool wrap_component(std::int8_t& sigma, double& x);

// sigma(r) from xi - r = sigma(r) + X(r) (mod 4).
SpinState round_at(const Graph& g, std::span<const double> xi, double r);

// Nodes sorted by X and partitioned into level groups (consecutive sorted
// values closer than `eps` chain into one group).
struct LevelGroups {
  std::vector<NodeId> order;         // nodes sorted by ascending X
  std::vector<std::size_t> starts;   // group g spans order[starts[g] .. starts[g+1])
  std::vector<double> levels;        // representative (lowest) X of each group
  std::vector<std::uint32_t> group_of;

  std::size_t count() const { return levels.size(); }
  std::span<const NodeId> members(std::size_t gidx) const {
    return {order.data() + starts[gidx], order.data() + starts[gidx + 1]};
  }
};

LevelGroups group_levels(std::span<const double> x, double eps = kGroupTolerance);

// Binary states visited by rounding centers r in [0, 2). centers[0] = 0 and
// centers[i] = 1 + X^(i) for each level group with X^(i) < 1; states[i] is
// obtained from states[i-1] by inverting group i.
struct RoundingOrbit {
  std::vector<double> centers;
  std::vector<SpinState> states;
  std::vector<double> cuts;
  std::vector<std::vector<NodeId>> flipped;  // flipped[i] is the group inverted at centers[i], empty for i = 0

  bool cuts_equal(double tol = 0.0) const;
};

RoundingOrbit rounding_orbit(const Graph& g, std::span<const double> xi);

struct BestRounding {
  SpinState sigma;
  double cut = 0.0;
  double r_star = 0.0;
};

// Exact maximiser of cut_size(round_at(xi, r)) over r in [0, 2); probes r = 0
// and the midpoint of every interval between consecutive breakpoints.
BestRounding best_rounding(const Graph& g, std::span<const double> xi);

}  // namespace gwcut
