#include "gwcut/dynamics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gwcut/error.hpp"
#include "gwcut/rng.hpp"

namespace gwcut {

namespace {

// Velocities are sums of +-w/2; anything below this is rounding residue.
double velocity_tolerance(const Graph& g) {
  return 1e-12 * std::max(1.0, g.max_abs_weight()) * static_cast<double>(std::max<std::size_t>(1, g.max_degree()));
}

double max_abs(std::span<const double> v) {
  double out = 0.0;
  for (double x : v) out = std::max(out, std::abs(x));
  return out;
}

}  // namespace

std::string_view to_string(Integrator integrator) {
  return integrator == Integrator::Euler ? "euler" : "exact";
}

Integrator parse_integrator(std::string_view name) {
  if (name == "euler") return Integrator::Euler;
  if (name == "exact") return Integrator::Exact;
  throw Error(ErrorCode::InvalidArgument, "unknown integrator '" + std::string(name) + "'");
}

// --- Schedule --------------------------------------------------------------

void Schedule::validate(const Graph& g) const {
  if (restarts < 1) throw Error(ErrorCode::InvalidArgument, "restarts must be at least 1");
  if (!(dt0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt0 must be positive");
  if (!(step_growth >= 1.0)) throw Error(ErrorCode::InvalidArgument, "step_growth must be >= 1");
  if (!(dt_shrink > 0.0 && dt_shrink <= 1.0)) throw Error(ErrorCode::InvalidArgument, "dt_shrink must lie in (0, 1]");
  if (!(reinit_amplitude >= 0.0 && reinit_amplitude < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "reinit_amplitude must lie in [0, 1)");
  }
  const double bound = dt0 * static_cast<double>(g.max_degree()) * g.max_abs_weight();
  if (!(bound < 2.0)) {
    throw Error(ErrorCode::StepTooLarge, "dt0 * max_degree * max_weight = " + std::to_string(bound) + " must be below 2");
  }
}

Schedule Schedule::fitted_to(const Graph& g) const {
  Schedule out = *this;
  const double scale = static_cast<double>(g.max_degree()) * g.max_abs_weight();
  if (scale > 0.0) out.dt0 = std::min(dt0, 1.0 / scale);
  return out;
}

std::size_t Schedule::steps_at(int restart) const {
  return static_cast<std::size_t>(std::llround(static_cast<double>(steps0) * std::pow(step_growth, restart)));
}

double Schedule::dt_at(int restart) const { return dt0 * std::pow(dt_shrink, restart); }

// --- GW2 vector field -------------------------------------------------------

void gw2_velocity(const Graph& g, const SxState& state, std::span<double> out) {
  if (state.size() != g.num_nodes() || out.size() != g.num_nodes()) {
    throw Error(ErrorCode::LengthMismatch, "state length differs from graph");
  }
  std::fill(out.begin(), out.end(), 0.0);
  const auto& x = state.x;
  for (const Edge& e : g.edges()) {
    const double d = x[e.u] - x[e.v];
    if (std::abs(d) <= kGroupTolerance) continue;
    const double c = 0.5 * e.w * state.sigma[e.u] * state.sigma[e.v] * (d > 0.0 ? 1.0 : -1.0);
    out[e.u] += c;
    out[e.v] -= c;
  }
}

std::vector<double> gw2_velocity(const Graph& g, const SxState& state) {
  std::vector<double> v(g.num_nodes());
  gw2_velocity(g, state, v);
  return v;
}

namespace {

class ClusterResolver {
 public:
  ClusterResolver(const Graph& g, const SxState& state, std::span<double> v, double tol)
      : g_(g), state_(state), v_(v), tol_(tol), stamp_(g.num_nodes(), 0), upper_(g.num_nodes(), 0) {}

  void resolve(std::vector<NodeId> members) {
    if (members.size() < 2) return;
    std::sort(members.begin(), members.end(), [&](NodeId a, NodeId b) {
      return v_[a] != v_[b] ? v_[a] > v_[b] : a < b;
    });
    const std::uint32_t tag = ++tag_;
    for (NodeId m : members) {
      stamp_[m] = tag;
      upper_[m] = 0;
    }

    // Try every velocity-ordered prefix as the part that moves up.
    const std::size_t size = members.size();
    double upper_sum = 0.0;
    double lower_sum = 0.0;
    for (NodeId m : members) lower_sum += v_[m];
    double crossing = 0.0;  // sum of couplings between the two parts
    double best_rate = 0.0;
    std::size_t best_k = 0;
    for (std::size_t k = 0; k + 1 < size; ++k) {
      const NodeId u = members[k];
      for (const Neighbor& nb : g_.neighbors(u)) {
        if (stamp_[nb.node] != tag || nb.node == u) continue;
        const double coupling = nb.weight * state_.sigma[u] * state_.sigma[nb.node];
        crossing += upper_[nb.node] ? -coupling : coupling;
      }
      upper_[u] = 1;
      upper_sum += v_[u];
      lower_sum -= v_[u];
      const double rate = (upper_sum + 0.5 * crossing) / static_cast<double>(k + 1) -
                          (lower_sum - 0.5 * crossing) / static_cast<double>(size - k - 1);
      if (rate > best_rate) {
        best_rate = rate;
        best_k = k + 1;
      }
    }

    if (best_rate <= tol_) {
      double mean = 0.0;
      for (NodeId m : members) mean += v_[m];
      mean /= static_cast<double>(size);
      for (NodeId m : members) v_[m] = mean;
      return;
    }

    std::vector<NodeId> upper(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(best_k));
    std::vector<NodeId> lower(members.begin() + static_cast<std::ptrdiff_t>(best_k), members.end());
    for (NodeId m : members) upper_[m] = 0;
    for (NodeId m : upper) upper_[m] = 1;
    for (NodeId u : upper) {
      for (const Neighbor& nb : g_.neighbors(u)) {
        if (stamp_[nb.node] != tag || upper_[nb.node]) continue;
        const double c = 0.5 * nb.weight * state_.sigma[u] * state_.sigma[nb.node];
        v_[u] += c;
        v_[nb.node] -= c;
      }
    }
    resolve(std::move(upper));
    resolve(std::move(lower));
  }

 private:
  const Graph& g_;
  const SxState& state_;
  std::span<double> v_;
  double tol_;
  std::vector<std::uint32_t> stamp_;
  std::vector<char> upper_;
  std::uint32_t tag_ = 0;
};

}  // namespace

namespace {

LevelGroups sliding_velocity_with_groups(const Graph& g, const SxState& state, std::span<double> out) {
  gw2_velocity(g, state, out);
  LevelGroups groups = group_levels(state.x);
  if (groups.count() == state.size()) return groups;
  ClusterResolver resolver(g, state, out, velocity_tolerance(g));
  for (std::size_t p = 0; p < groups.count(); ++p) {
    const auto members = groups.members(p);
    if (members.size() > 1) resolver.resolve({members.begin(), members.end()});
  }
  return groups;
}

}  // namespace

void sliding_velocity(const Graph& g, const SxState& state, std::span<double> out) {
  sliding_velocity_with_groups(g, state, out);
}

std::vector<double> sliding_velocity(const Graph& g, const SxState& state) {
  std::vector<double> v(g.num_nodes());
  sliding_velocity(g, state, v);
  return v;
}

SxState gw2_step(const Graph& g, const SxState& state, double dt) {
  std::vector<double> dx = gw2_velocity(g, state);
  for (double& d : dx) d *= dt;
  if (!(max_abs(dx) < 2.0)) throw Error(ErrorCode::StepTooLarge, "dt * |velocity|_inf must be below 2");
  return update(state, dx);
}

SliceStats gw2_advance(const Graph& g, SxState& state, double duration) {
  const std::size_t n = state.size();
  if (n != g.num_nodes()) throw Error(ErrorCode::LengthMismatch, "state length differs from graph");
  const double tol = velocity_tolerance(g);
  const std::size_t event_cap = 64 * n + 1024;
  const SpinState initial = state.sigma;
  auto& x = state.x;

  SliceStats stats;
  std::vector<double> v(n);
  double remaining = duration;
  std::vector<NodeId> wrapping;
  while (true) {
    const LevelGroups groups = sliding_velocity_with_groups(g, state, v);
    if (max_abs(v) <= tol) {
      stats.critical = true;
      break;
    }
    if (remaining <= 0.0) break;
    if (stats.events >= event_cap) {
      stats.event_cap = true;
      break;
    }

    // Levels sitting on the boundary and moving outwards wrap to the far end.
    wrapping.clear();
    for (NodeId m = 0; m < n; ++m) {
      if ((x[m] >= 1.0 && v[m] > tol) || (x[m] <= -1.0 && v[m] < -tol)) wrapping.push_back(m);
    }
    if (!wrapping.empty()) {
      if (wrapping.size() == 1 && node_field(g, state.sigma, wrapping[0]) <= tol) ++stats.bad_flips;
      for (NodeId m : wrapping) {
        x[m] = x[m] >= 1.0 ? -1.0 : 1.0;
        state.sigma.flip(m);
      }
      ++stats.events;
      continue;
    }

    // Earliest event: a level reaching the boundary or two adjacent levels meeting.
    double t = remaining;
    std::size_t meet = groups.count();  // index p of the lower level of a meeting pair
    for (NodeId m = 0; m < n; ++m) {
      if (v[m] > tol) {
        t = std::min(t, (1.0 - x[m]) / v[m]);
      } else if (v[m] < -tol) {
        t = std::min(t, (x[m] + 1.0) / -v[m]);
      }
    }
    std::vector<double> vmax(groups.count());
    std::vector<double> vmin(groups.count());
    for (std::size_t p = 0; p < groups.count(); ++p) {
      vmax[p] = -std::numeric_limits<double>::infinity();
      vmin[p] = std::numeric_limits<double>::infinity();
      for (NodeId m : groups.members(p)) {
        vmax[p] = std::max(vmax[p], v[m]);
        vmin[p] = std::min(vmin[p], v[m]);
      }
    }
    for (std::size_t p = 0; p + 1 < groups.count(); ++p) {
      const double closing = vmax[p] - vmin[p + 1];
      if (closing <= tol) continue;
      const double top = x[groups.members(p).back()];
      const double bottom = x[groups.members(p + 1).front()];
      const double tm = (bottom - top) / closing;
      if (tm < t) {
        t = tm;
        meet = p;
      }
    }
    t = std::max(t, 0.0);

    for (NodeId m = 0; m < n; ++m) x[m] += t * v[m];
    remaining -= t;

    if (meet < groups.count()) {
      // Glue the fastest part of the lower level to the slowest part of the upper one.
      double sum = 0.0;
      std::size_t count = 0;
      for (NodeId m : groups.members(meet)) {
        if (v[m] == vmax[meet]) sum += x[m], ++count;
      }
      for (NodeId m : groups.members(meet + 1)) {
        if (v[m] == vmin[meet + 1]) sum += x[m], ++count;
      }
      const double level = sum / static_cast<double>(count);
      for (NodeId m : groups.members(meet)) {
        if (v[m] == vmax[meet]) x[m] = level;
      }
      for (NodeId m : groups.members(meet + 1)) {
        if (v[m] == vmin[meet + 1]) x[m] = level;
      }
    }
    for (NodeId m = 0; m < n; ++m) {
      if (v[m] > tol && x[m] >= 1.0 - 1e-12) x[m] = 1.0;
      if (v[m] < -tol && x[m] <= -1.0 + 1e-12) x[m] = -1.0;
    }
    if (remaining > 0.0 || meet < groups.count()) ++stats.events;
  }

  for (NodeId m = 0; m < n; ++m) {
    std::int8_t s = static_cast<std::int8_t>(state.sigma[m]);
    if (wrap_component(s, x[m])) state.sigma.flip(m);
    if (state.sigma[m] != initial[m]) ++stats.flips;
  }
  return stats;
}

std::vector<double> grouped_derivatives(const Graph& g, const SxState& state, const LevelGroups& groups) {
  std::vector<double> out(groups.count(), 0.0);
  for (const Edge& e : g.edges()) {
    const std::uint32_t gu = groups.group_of[e.u];
    const std::uint32_t gv = groups.group_of[e.v];
    if (gu == gv) continue;
    const double c = 0.5 * e.w * state.sigma[e.u] * state.sigma[e.v] * (gu > gv ? 1.0 : -1.0);
    out[gu] += c;
    out[gv] -= c;
  }
  return out;
}

bool equilibrium_test(const Graph& g, const SxState& state) {
  const double tol = velocity_tolerance(g);
  if (max_abs(gw2_velocity(g, state)) > tol) return false;
  const LevelGroups groups = group_levels(state.x);
  return max_abs(grouped_derivatives(g, state, groups)) <= tol;
}

bool critical_test(const Graph& g, const SxState& state) {
  if (state.size() != g.num_nodes()) throw Error(ErrorCode::LengthMismatch, "state length differs from graph");
  const LevelGroups groups = group_levels(state.x);
  return max_abs(grouped_derivatives(g, state, groups)) <= velocity_tolerance(g);
}

// --- integration -------------------------------------------------------------

StageResult gw2_integrate(const Graph& g, SxState start, const StageOptions& options) {
  start.validate();
  if (start.size() != g.num_nodes()) throw Error(ErrorCode::LengthMismatch, "state length differs from graph");

  StageResult result;
  result.state = std::move(start);
  SxState& state = result.state;
  const double tol = velocity_tolerance(g);
  const std::size_t window = std::max<std::size_t>(2 * g.num_nodes(), 16);

  std::vector<double> velocity(g.num_nodes());
  result.objective_start = gw_objective_sx(g, state.sigma, state.x);
  double window_objective = result.objective_start;
  double cut = cut_size(g, state.sigma);

  for (std::size_t step = 0; step < options.max_steps; ++step) {
    std::size_t flips = 0;
    if (options.integrator == Integrator::Exact) {
      const SliceStats stats = gw2_advance(g, state, options.dt);
      if (stats.critical && stats.events == 0 && options.early_exit) break;
      flips = stats.flips;
      result.events += stats.events;
      result.bad_flips += stats.bad_flips;
    } else {
      gw2_velocity(g, state, velocity);
      if (options.early_exit && max_abs(velocity) <= tol) break;
      for (double& v : velocity) v *= options.dt;
      flips = update_in_place(state, velocity);
    }
    ++result.steps;
    if (flips > 0) {
      result.flips += flips;
      const double after = cut_size(g, state.sigma);
      if (after < cut - tol) ++result.downhill_flip_steps;
      cut = after;
    }
    if (options.early_exit && result.steps % window == 0) {
      const double objective = gw_objective_sx(g, state.sigma, state.x);
      if (objective - window_objective <= 1e-9) {
        result.stalled = true;
        break;
      }
      window_objective = objective;
    }
  }
  gw2_velocity(g, state, velocity);
  result.equilibrium = max_abs(velocity) <= tol;
  result.critical = critical_test(g, state);
  result.objective_end = gw_objective_sx(g, state.sigma, state.x);
  return result;
}

Trajectory gw2_run(const Graph& g, const SxState& init, const Schedule& schedule, std::uint64_t seed) {
  schedule.validate(g);
  init.validate();
  if (init.size() != g.num_nodes()) throw Error(ErrorCode::LengthMismatch, "state length differs from graph");

  Trajectory traj;
  SxState state = init;
  traj.best_cut = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < schedule.restarts; ++k) {
    if (k > 0) {
      Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(k));
      const double amplitude = schedule.reinit_amplitude * std::pow(schedule.dt_shrink, k);
      for (double& x : state.x) x = amplitude * rng.uniform(-1.0, 1.0);
    }
    StageOptions options;
    options.max_steps = schedule.steps_at(k);
    options.dt = schedule.dt_at(k);
    options.early_exit = schedule.early_exit;
    options.integrator = schedule.integrator;
    StageResult stage = gw2_integrate(g, std::move(state), options);

    traj.objective_series.push_back(stage.objective_start);
    traj.objective_series.push_back(stage.objective_end);
    traj.flips += stage.flips;
    traj.downhill_flip_steps += stage.downhill_flip_steps;
    traj.bad_flips += stage.bad_flips;
    traj.steps_taken += stage.steps;
    if (stage.equilibrium) ++traj.equilibria;
    if (stage.critical) ++traj.criticals;
    traj.converged = stage.critical;
    ++traj.restarts_run;

    const double cut = cut_size(g, stage.state.sigma);
    traj.cut_series.push_back(cut);
    if (cut > traj.best_cut) {
      traj.best_cut = cut;
      traj.best_restart = k;
      traj.terminal = SxState(stage.state.sigma);
    }
    state = std::move(stage.state);
  }
  traj.last_state = std::move(state);
  return traj;
}

// --- smooth relaxations -------------------------------------------------------

std::vector<double> relax_gradient(const Graph& g, std::span<const double> xi, ModelKind model) {
  if (model != ModelKind::Sdp && model != ModelKind::Triangular) {
    throw Error(ErrorCode::InvalidModel, "relaxation gradient needs the sdp or triangular model");
  }
  if (xi.size() != g.num_nodes()) throw Error(ErrorCode::LengthMismatch, "state length differs from graph");
  std::vector<double> grad(xi.size(), 0.0);
  for (const Edge& e : g.edges()) {
    const double c = e.w * core_phi_deriv(model, xi[e.u] - xi[e.v]);
    grad[e.u] += c;
    grad[e.v] -= c;
  }
  return grad;
}

ContinuousState relax_run(const Graph& g, ContinuousState xi, ModelKind model, std::size_t steps, double dt) {
  if (model != ModelKind::Sdp && model != ModelKind::Triangular) {
    throw Error(ErrorCode::InvalidModel, "relaxation run needs the sdp or triangular model");
  }
  if (xi.size() != g.num_nodes()) throw Error(ErrorCode::LengthMismatch, "state length differs from graph");
  for (std::size_t step = 0; step < steps; ++step) {
    const std::vector<double> grad = relax_gradient(g, xi, model);
    for (std::size_t m = 0; m < xi.size(); ++m) xi[m] += dt * grad[m];
  }
  return xi;
}

double relax_stable_dt(const Graph& g) {
  const double scale = static_cast<double>(g.max_degree()) * g.max_abs_weight();
  return scale > 0.0 ? 0.5 / scale : 0.05;
}

// --- pipelines ------------------------------------------------------------------

ContinuousState random_continuous_state(std::size_t n, Rng& rng) {
  ContinuousState xi(n);
  for (double& v : xi) v = 2.0 - 4.0 * rng.uniform();  // (-2, 2]
  return xi;
}

RunResult gw2_solve(const Graph& g, const Schedule& schedule, std::uint64_t seed) {
  Rng rng = Rng::derive(seed, 0);
  const SxState init = decompose(random_continuous_state(g.num_nodes(), rng));
  Trajectory traj = gw2_run(g, init, schedule, derive_seed(seed, 1));
  RunResult out;
  out.sigma = traj.terminal.sigma;
  out.cut = traj.best_cut;
  out.steps = traj.steps_taken;
  out.restarts = traj.restarts_run;
  out.converged = traj.converged;
  out.flips = traj.flips;
  return out;
}

RunResult hetero_run(const Graph& g, const HeteroConfig& config, std::uint64_t seed) {
  Rng rng = Rng::derive(seed, 0);
  const double dt = config.relax_dt > 0.0 ? config.relax_dt : std::min(0.05, relax_stable_dt(g));
  const ContinuousState relaxed =
      relax_run(g, random_continuous_state(g.num_nodes(), rng), config.first_stage, config.relax_steps, dt);
  const BestRounding stage1 = best_rounding(g, relaxed);

  Trajectory traj = gw2_run(g, decompose(relaxed), config.schedule, derive_seed(seed, 1));
  RunResult out;
  out.sigma = traj.terminal.sigma;
  out.cut = traj.best_cut;
  out.stage1_rounding_cut = stage1.cut;
  out.rounding_contract_met = out.cut >= stage1.cut - 1e-9 * std::max(1.0, g.total_weight());
  assert(out.rounding_contract_met && "GW2 stage fell below the best rounding of its initial state");
  out.steps = traj.steps_taken + config.relax_steps;
  out.restarts = traj.restarts_run;
  out.converged = traj.converged;
  out.flips = traj.flips;
  return out;
}

}  // namespace gwcut
