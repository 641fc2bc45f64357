#include "gwcut/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gwcut/error.hpp"

namespace gwcut {

SxState::SxState(SpinState s, std::vector<double> xs) : sigma(std::move(s)), x(std::move(xs)) { validate(); }

SxState::SxState(SpinState s) : sigma(std::move(s)), x(sigma.size(), 0.0) {}

void SxState::validate() const {
  if (sigma.size() != x.size()) throw Error(ErrorCode::LengthMismatch, "sigma and X differ in length");
  for (double v : x) {
    if (!(v > -1.0 && v <= 1.0)) {
      throw Error(ErrorCode::DomainViolation, "X component " + std::to_string(v) + " outside (-1, 1]");
    }
  }
}

Decomposed decompose(double xi) {
  Decomposed d;
  d.k = static_cast<std::int64_t>(std::ceil((xi - 2.0) / kPeriod));
  const double y = xi - kPeriod * static_cast<double>(d.k);  // y in (-2, 2]
  if (y > 0.0) {
    d.sigma = 1;
    d.x = y - 1.0;
  } else {
    d.sigma = -1;
    d.x = y + 1.0;
  }
  // Guard the half-open interval against rounding at the lower edge.
  if (d.x <= -1.0) d.x = std::nextafter(-1.0, 0.0);
  if (d.x > 1.0) d.x = 1.0;
  return d;
}

SxState decompose(std::span<const double> xi) {
  std::vector<std::int8_t> spins(xi.size());
  std::vector<double> x(xi.size());
  for (std::size_t m = 0; m < xi.size(); ++m) {
    const Decomposed d = decompose(xi[m]);
    spins[m] = static_cast<std::int8_t>(d.sigma);
    x[m] = d.x;
  }
  return SxState(SpinState(std::move(spins)), std::move(x));
}

ContinuousState compose(const SpinState& s, std::span<const double> x) {
  if (s.size() != x.size()) throw Error(ErrorCode::LengthMismatch, "sigma and X differ in length");
  ContinuousState xi(x.size());
  for (std::size_t m = 0; m < x.size(); ++m) {
    if (!(x[m] > -1.0 && x[m] <= 1.0)) {
      throw Error(ErrorCode::DomainViolation, "X component " + std::to_string(x[m]) + " outside (-1, 1]");
    }
    xi[m] = s[m] + x[m];
  }
  return xi;
}

bool wrap_component(std::int8_t& sigma, double& x) {
  if (x > 1.0) {
    x -= 2.0;
    sigma = static_cast<std::int8_t>(-sigma);
    return true;
  }
  if (x <= -1.0) {
    x += 2.0;
    sigma = static_cast<std::int8_t>(-sigma);
    return true;
  }
  return false;
}

std::size_t update_in_place(SxState& state, std::span<const double> dx) {
  if (dx.size() != state.size()) throw Error(ErrorCode::LengthMismatch, "dX length differs from state");
  for (double d : dx) {
    if (!(std::abs(d) < 2.0)) throw Error(ErrorCode::StepTooLarge, "|dX|_inf must be below 2");
  }
  std::size_t flips = 0;
  for (std::size_t m = 0; m < dx.size(); ++m) {
    double xm = state.x[m] + dx[m];
    std::int8_t s = static_cast<std::int8_t>(state.sigma[m]);
    if (wrap_component(s, xm)) {
      state.sigma.flip(m);
      ++flips;
    }
    state.x[m] = xm;
  }
  return flips;
}

SxState update(SxState state, std::span<const double> dx) {
  update_in_place(state, dx);
  return state;
}

SpinState round_at(const Graph& g, std::span<const double> xi, double r) {
  if (xi.size() != g.num_nodes()) throw Error(ErrorCode::LengthMismatch, "state length differs from graph");
  std::vector<std::int8_t> spins(xi.size());
  for (std::size_t m = 0; m < xi.size(); ++m) spins[m] = static_cast<std::int8_t>(decompose(xi[m] - r).sigma);
  return SpinState(std::move(spins));
}

LevelGroups group_levels(std::span<const double> x, double eps) {
  LevelGroups out;
  const std::size_t n = x.size();
  out.order.resize(n);
  std::iota(out.order.begin(), out.order.end(), NodeId{0});
  std::stable_sort(out.order.begin(), out.order.end(), [&](NodeId a, NodeId b) { return x[a] < x[b]; });
  out.group_of.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || x[out.order[i]] - x[out.order[i - 1]] > eps) {
      out.starts.push_back(i);
      out.levels.push_back(x[out.order[i]]);
    }
    out.group_of[out.order[i]] = static_cast<std::uint32_t>(out.starts.size() - 1);
  }
  out.starts.push_back(n);
  return out;
}

bool RoundingOrbit::cuts_equal(double tol) const {
  if (cuts.empty()) return true;
  const auto [lo, hi] = std::minmax_element(cuts.begin(), cuts.end());
  return *hi - *lo <= tol;
}

RoundingOrbit rounding_orbit(const Graph& g, std::span<const double> xi) {
  if (xi.size() != g.num_nodes()) throw Error(ErrorCode::LengthMismatch, "state length differs from graph");
  const SxState base = decompose(xi);
  const LevelGroups groups = group_levels(base.x);

  RoundingOrbit orbit;
  SpinState current = base.sigma;
  std::vector<double> field = node_fields(g, current);
  double cut = cut_size(g, current);
  orbit.centers.push_back(0.0);
  orbit.states.push_back(current);
  orbit.cuts.push_back(cut);
  orbit.flipped.emplace_back();

  for (std::size_t gi = 0; gi < groups.count(); ++gi) {
    const double center = 1.0 + groups.levels[gi];
    if (!(center < 2.0)) break;  // X = 1 flips at r = 2, i.e. r = 0 of the next period
    std::vector<NodeId> members(groups.members(gi).begin(), groups.members(gi).end());
    for (NodeId m : members) {
      cut += field[m];
      field[m] = -field[m];
      const int sm_old = current[m];
      for (const Neighbor& nb : g.neighbors(m)) field[nb.node] -= 2.0 * nb.weight * current[nb.node] * sm_old;
      current.flip(m);
    }
    orbit.centers.push_back(center);
    orbit.states.push_back(current);
    orbit.cuts.push_back(cut);
    orbit.flipped.push_back(std::move(members));
  }
  return orbit;
}

BestRounding best_rounding(const Graph& g, std::span<const double> xi) {
  RoundingOrbit orbit = rounding_orbit(g, xi);
  std::size_t best = 0;
  for (std::size_t i = 1; i < orbit.cuts.size(); ++i) {
    if (orbit.cuts[i] > orbit.cuts[best]) best = i;
  }
  BestRounding out;
  out.sigma = std::move(orbit.states[best]);
  out.cut = orbit.cuts[best];
  if (best == 0) {
    out.r_star = 0.0;
  } else {
    const double hi = best + 1 < orbit.centers.size() ? orbit.centers[best + 1] : 2.0;
    out.r_star = 0.5 * (orbit.centers[best] + hi);
  }
  return out;
}

}  // namespace gwcut
