#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "gwcut/graph.hpp"
#include "gwcut/objective.hpp"

namespace gwcut {

inline constexpr std::size_t kBruteForceMaxNodes = 26;
inline constexpr std::size_t kSaddleProbeMaxNodes = 20;

struct MaxCut {
  double cut = 0.0;
  SpinState sigma;
};

// Exhaustive maximum cut with sigma_0 = +1 fixed. Nodes 1..n-1 are
// enumerated in Gray-code order inside 2^b fixed prefix blocks, so the
// returned argmax does not depend on `threads`. Throws TooLarge for n > 26.
MaxCut brute_force_maxcut(const Graph& g, int threads = 1);

// Largest violation of each identity over the sampled inputs.
struct IdentityReport {
  std::size_t samples = 0;
  double edge_split = 0.0;       // Phi_GW(X_m - X_n + s_m - s_n) = (1 - s_m s_n)/2 + s_m s_n Phi_GW(X_m - X_n)
  double sx_objective = 0.0;     // C_GW(sigma, X) = C_GW(sigma + X)
  double scaling = 0.0;          // C_GW(sigma, lambda X) = C(sigma) + |lambda| tail(sigma, X)
  double cut_variation = 0.0;    // tail(sigma, delta(sigma'|sigma)) = (C(sigma') - C(sigma)) / 2

  double max_violation() const;
};

IdentityReport verify_identities(const Graph& g, std::size_t samples, std::uint64_t seed);

enum class CriticalKind { Minimum, Maximum, Saddle };

std::string_view to_string(CriticalKind kind);

// Classifies a binary state as a minimum, maximum or saddle of C_GW and
// measures the directional slopes of C_GW along the segments towards a lower
// and a higher cut. By homogeneity each slope equals half the cut difference.
struct SaddleReport {
  CriticalKind kind = CriticalKind::Saddle;
  double cut = 0.0;
  double max_cut = 0.0;
  std::optional<SpinState> lower;
  std::optional<SpinState> higher;
  double slope_down = 0.0;
  double slope_up = 0.0;
  double expected_down = 0.0;
  double expected_up = 0.0;
  bool consistent = false;
};

// Throws TooLarge for n > 20.
SaddleReport saddle_probe(const Graph& g, const SpinState& s);

// max_m |analytic gradient - central difference| for Sdp or Triangular.
// Throws KinkProximity if any edge difference lies within 10h of a kink.
double finite_diff_check(const Graph& g, std::span<const double> xi, ModelKind model, double h);

}  // namespace gwcut
