#include "gwcut/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <vector>

#include "gwcut/dynamics.hpp"
#include "gwcut/error.hpp"
#include "gwcut/parallel.hpp"
#include "gwcut/rng.hpp"
#include "gwcut/state.hpp"

namespace gwcut {

namespace {

struct BlockBest {
  double cut = -1.0;
  std::vector<std::int8_t> spins;
};

BlockBest enumerate_block(const Graph& g, std::size_t low_bits, std::size_t high_bits, std::uint64_t prefix) {
  const std::size_t n = g.num_nodes();
  std::vector<std::int8_t> spins(n, 1);
  for (std::size_t b = 0; b < high_bits; ++b) {
    if ((prefix >> b) & 1u) spins[1 + low_bits + b] = -1;
  }
  SpinState s(spins);
  std::vector<double> field = node_fields(g, s);
  double cut = cut_size(g, s);

  BlockBest best{cut, spins};
  const std::uint64_t count = std::uint64_t{1} << low_bits;
  for (std::uint64_t i = 1; i < count; ++i) {
    const NodeId m = static_cast<NodeId>(1 + std::countr_zero(i));
    cut += field[m];
    const int old = spins[m];
    field[m] = -field[m];
    for (const Neighbor& nb : g.neighbors(m)) field[nb.node] -= 2.0 * nb.weight * spins[nb.node] * old;
    spins[m] = static_cast<std::int8_t>(-old);
    if (cut > best.cut) {
      best.cut = cut;
      best.spins = spins;
    }
  }
  return best;
}

}  // namespace

MaxCut brute_force_maxcut(const Graph& g, int threads) {
  const std::size_t n = g.num_nodes();
  if (n > kBruteForceMaxNodes) {
    throw Error(ErrorCode::TooLarge, "exhaustive search limited to " + std::to_string(kBruteForceMaxNodes) + " nodes");
  }
  if (n == 0) return {};
  const std::size_t free_bits = n - 1;
  const std::size_t high_bits = std::min<std::size_t>(free_bits, 6);
  const std::size_t low_bits = free_bits - high_bits;
  const std::size_t blocks = std::size_t{1} << high_bits;

  std::vector<BlockBest> results(blocks);
  parallel_for(blocks, threads, [&](std::size_t b) { results[b] = enumerate_block(g, low_bits, high_bits, b); });
  std::size_t best = 0;
  for (std::size_t b = 1; b < blocks; ++b) {
    if (results[b].cut > results[best].cut) best = b;
  }
  SpinState sigma(std::move(results[best].spins));
  const double cut = cut_size(g, sigma);
  return {cut, std::move(sigma)};
}

double IdentityReport::max_violation() const {
  return std::max({edge_split, sx_objective, scaling, cut_variation});
}

IdentityReport verify_identities(const Graph& g, std::size_t samples, std::uint64_t seed) {
  const std::size_t n = g.num_nodes();
  IdentityReport report;
  report.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng = Rng::derive(seed, i);
    const SpinState s = SpinState::random(n, rng);
    std::vector<double> x(n);
    for (double& v : x) v = 1.0 - 2.0 * rng.uniform();  // (-1, 1]

    {
      const int sm = rng.coin() ? 1 : -1;
      const int sn = rng.coin() ? 1 : -1;
      const double xm = 1.0 - 2.0 * rng.uniform();
      const double xn = 1.0 - 2.0 * rng.uniform();
      const double lhs = core_phi(ModelKind::Gw, xm - xn + sm - sn);
      const double rhs = 0.5 * (1.0 - sm * sn) + sm * sn * core_phi(ModelKind::Gw, xm - xn);
      report.edge_split = std::max(report.edge_split, std::abs(lhs - rhs));
    }

    const double cut = cut_size(g, s);
    const double sx = gw_objective_sx(g, s, x);
    report.sx_objective =
        std::max(report.sx_objective, std::abs(sx - relaxed_objective(g, compose(s, x), ModelKind::Gw)));

    const double lambda = rng.uniform(-1.0, 1.0);
    std::vector<double> scaled(x);
    for (double& v : scaled) v *= lambda;
    if (std::all_of(scaled.begin(), scaled.end(), [](double v) { return v > -1.0 && v <= 1.0; })) {
      const double lhs = gw_objective_sx(g, s, scaled);
      const double rhs = cut + std::abs(lambda) * gw_objective_tail(g, s, x);
      report.scaling = std::max(report.scaling, std::abs(lhs - rhs));
    }

    const SpinState other = SpinState::random(n, rng);
    std::vector<double> delta(n);
    for (std::size_t m = 0; m < n; ++m) delta[m] = other[m] == s[m] ? 0.0 : 1.0;
    const double lhs = gw_objective_tail(g, s, delta);
    const double rhs = 0.5 * (cut_size(g, other) - cut);
    report.cut_variation = std::max(report.cut_variation, std::abs(lhs - rhs));
  }
  return report;
}

std::string_view to_string(CriticalKind kind) {
  switch (kind) {
    case CriticalKind::Minimum: return "minimum";
    case CriticalKind::Maximum: return "maximum";
    case CriticalKind::Saddle: return "saddle";
  }
  return "?";
}

namespace {

// Slope of t -> C_GW(sigma + t delta(target|sigma)) on (0, 1], measured at t = 1/2.
double directional_slope(const Graph& g, const SpinState& s, const SpinState& target) {
  constexpr double t = 0.5;
  std::vector<double> x(s.size());
  for (std::size_t m = 0; m < s.size(); ++m) x[m] = target[m] == s[m] ? 0.0 : t;
  return (relaxed_objective(g, compose(s, x), ModelKind::Gw) - cut_size(g, s)) / t;
}

}  // namespace

SaddleReport saddle_probe(const Graph& g, const SpinState& s) {
  if (g.num_nodes() > kSaddleProbeMaxNodes) {
    throw Error(ErrorCode::TooLarge, "saddle probe limited to " + std::to_string(kSaddleProbeMaxNodes) + " nodes");
  }
  if (s.size() != g.num_nodes()) throw Error(ErrorCode::LengthMismatch, "state length differs from graph");
  constexpr double tol = 1e-9;
  const MaxCut best = brute_force_maxcut(g);

  SaddleReport r;
  r.cut = cut_size(g, s);
  r.max_cut = best.cut;
  const std::vector<double> field = node_fields(g, s);

  const SpinState uniform(s.size(), 1);
  if (cut_size(g, uniform) < r.cut - tol) r.lower = uniform;
  if (best.cut > r.cut + tol) r.higher = best.sigma;

  if (r.lower) {
    r.slope_down = directional_slope(g, s, *r.lower);
    r.expected_down = 0.5 * (cut_size(g, *r.lower) - r.cut);
  }
  if (r.higher) {
    r.slope_up = directional_slope(g, s, *r.higher);
    r.expected_up = 0.5 * (cut_size(g, *r.higher) - r.cut);
  }
  const bool slopes_match =
      std::abs(r.slope_down - r.expected_down) <= tol && std::abs(r.slope_up - r.expected_up) <= tol;

  if (!r.higher) {
    r.kind = CriticalKind::Maximum;
    r.consistent = slopes_match && std::all_of(field.begin(), field.end(), [&](double f) { return f <= tol; });
  } else if (!r.lower) {
    r.kind = CriticalKind::Minimum;
    r.consistent = slopes_match && r.slope_up > 0.0 &&
                   std::all_of(field.begin(), field.end(), [&](double f) { return f >= -tol; });
  } else {
    r.kind = CriticalKind::Saddle;
    r.consistent = slopes_match && r.slope_down < 0.0 && r.slope_up > 0.0;
  }
  return r;
}

double finite_diff_check(const Graph& g, std::span<const double> xi, ModelKind model, double h) {
  if (model != ModelKind::Sdp && model != ModelKind::Triangular) {
    throw Error(ErrorCode::InvalidModel, "finite-difference check needs the sdp or triangular model");
  }
  if (xi.size() != g.num_nodes()) throw Error(ErrorCode::LengthMismatch, "state length differs from graph");
  if (model == ModelKind::Triangular) {
    for (const Edge& e : g.edges()) {
      const double a = std::abs(wrap_period(xi[e.u] - xi[e.v]));
      if (std::abs(a - 1.0) <= 10.0 * h || std::abs(a - 2.0) <= 10.0 * h) {
        throw Error(ErrorCode::KinkProximity, "edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                                  ") sits on a kink of the triangular core function");
      }
    }
  }
  const std::vector<double> grad = relax_gradient(g, xi, model);
  double worst = 0.0;
  for (NodeId m = 0; m < g.num_nodes(); ++m) {
    double plus = 0.0;
    double minus = 0.0;
    for (const Neighbor& nb : g.neighbors(m)) {
      const double d = xi[m] - xi[nb.node];
      plus += nb.weight * core_phi(model, d + h);
      minus += nb.weight * core_phi(model, d - h);
    }
    worst = std::max(worst, std::abs(grad[m] - (plus - minus) / (2.0 * h)));
  }
  return worst;
}

}  // namespace gwcut
