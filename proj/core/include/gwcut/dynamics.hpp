#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "gwcut/graph.hpp"
#include "gwcut/objective.hpp"
#include "gwcut/state.hpp"

namespace gwcut {

// How one time slice of length dt is advanced.
//   Euler: one explicit Euler step with boundary wrapping (gw2_step).
//   Exact: the flow is piecewise constant between events (two levels meeting,
//          a level reaching the X boundary), so the slice is advanced event by
//          event with coincident levels moving as sliding clusters.
enum class Integrator { Euler, Exact };

std::string_view to_string(Integrator integrator);
Integrator parse_integrator(std::string_view name);

// Restart schedule of the GW2 stage. Restart k integrates
// round(steps0 * step_growth^k) time slices of length dt0 * dt_shrink^k; every
// restart after the first keeps sigma and redraws X uniformly on
// (-a_k, a_k) with a_k = reinit_amplitude * dt_shrink^k.
struct Schedule {
  int restarts = 50;
  std::size_t steps0 = 200;
  double dt0 = 0.05;
  double step_growth = 1.05;
  double dt_shrink = 0.95;
  double reinit_amplitude = 0.5;
  // Stop a restart once it reaches a critical state or stops improving.
  bool early_exit = true;
  Integrator integrator = Integrator::Euler;

  // Throws InvalidArgument for malformed values and StepTooLarge unless
  // dt0 * max_degree * max_weight < 2.
  void validate(const Graph& g) const;
  // Copy with dt0 lowered (never raised) so that validate(g) holds.
  Schedule fitted_to(const Graph& g) const;

  std::size_t steps_at(int restart) const;
  double dt_at(int restart) const;
};

// Velocity of every X component:
//   dX_m/dt = 1/2 sum_n A_mn s_m s_n sgn(X_m - X_n),
// with sgn taken as 0 whenever |X_m - X_n| <= kGroupTolerance.
std::vector<double> gw2_velocity(const Graph& g, const SxState& state);
void gw2_velocity(const Graph& g, const SxState& state, std::span<double> out);

// Velocity with coincident level groups treated as sliding clusters. Each
// group is split at the velocity-ordered prefix that separates fastest (the
// parts then feel each other's edges with the new order) until no split
// separates; every remaining cluster moves rigidly at its members' mean
// velocity. A zero result implies a zero grouped derivative for every level
// group; the converse fails when some subset of a balanced group can still
// split off.
std::vector<double> sliding_velocity(const Graph& g, const SxState& state);
void sliding_velocity(const Graph& g, const SxState& state, std::span<double> out);

// One explicit Euler step followed by boundary wrapping. Throws StepTooLarge
// when dt * |velocity|_inf >= 2.
SxState gw2_step(const Graph& g, const SxState& state, double dt);

struct SliceStats {
  std::size_t flips = 0;
  std::size_t events = 0;
  // Single-node boundary crossings whose node field was not positive.
  std::size_t bad_flips = 0;
  bool critical = false;   // the slice ended early at a critical state
  bool event_cap = false;  // gave up after too many events in one slice
};

// Advances `state` by `duration` along the sliding flow (Exact integrator).
SliceStats gw2_advance(const Graph& g, SxState& state, double duration);

// Grouped derivative dC_GW/dX^(p) for every level group of `groups`.
std::vector<double> grouped_derivatives(const Graph& g, const SxState& state, const LevelGroups& groups);

// True iff every velocity component vanishes and every level group has a
// zero grouped derivative.
bool equilibrium_test(const Graph& g, const SxState& state);

// True iff every level group has a zero grouped derivative (the critical
// condition under which all roundings of the state cut equally).
bool critical_test(const Graph& g, const SxState& state);

struct StageOptions {
  std::size_t max_steps = 1000;
  double dt = 0.05;
  bool early_exit = true;
  Integrator integrator = Integrator::Euler;
};

struct StageResult {
  SxState state;
  std::size_t steps = 0;
  bool equilibrium = false;
  bool critical = false;
  bool stalled = false;
  std::size_t flips = 0;
  // Steps whose spin inversions lowered the cut.
  std::size_t downhill_flip_steps = 0;
  std::size_t bad_flips = 0;
  std::size_t events = 0;
  double objective_start = 0.0;
  double objective_end = 0.0;
};

// Integrates one GW2 stage from `start`.
StageResult gw2_integrate(const Graph& g, SxState start, const StageOptions& options);

struct Trajectory {
  SxState terminal;    // best sigma over restart terminals, X = 0
  SxState last_state;  // machine state at the end of the final restart
  std::vector<double> objective_series;  // C_GW at the start and end of every restart
  std::vector<double> cut_series;        // cut of sigma after every restart
  std::size_t flips = 0;
  std::size_t downhill_flip_steps = 0;
  std::size_t bad_flips = 0;
  std::size_t steps_taken = 0;
  std::size_t equilibria = 0;  // restarts that ended at equilibrium
  std::size_t criticals = 0;   // restarts that ended at a critical state
  int restarts_run = 0;
  int best_restart = 0;
  double best_cut = 0.0;
  bool converged = false;  // final restart ended at a critical state
};

Trajectory gw2_run(const Graph& g, const SxState& init, const Schedule& schedule, std::uint64_t seed);

// Gradient of C_M for the smooth relaxations (Sdp, Triangular).
std::vector<double> relax_gradient(const Graph& g, std::span<const double> xi, ModelKind model);
// Explicit Euler ascent of C_M.
ContinuousState relax_run(const Graph& g, ContinuousState xi, ModelKind model, std::size_t steps, double dt);
// Largest relaxation step that keeps Euler ascent stable on g.
double relax_stable_dt(const Graph& g);

struct RunResult {
  SpinState sigma;
  double cut = 0.0;
  // Best rounding of the first-stage terminal (heterogeneous runs only).
  double stage1_rounding_cut = 0.0;
  bool rounding_contract_met = true;
  std::size_t steps = 0;
  int restarts = 0;
  bool converged = false;
  std::size_t flips = 0;
};

struct HeteroConfig {
  ModelKind first_stage = ModelKind::Triangular;
  std::size_t relax_steps = 1000;
  double relax_dt = 0.0;  // 0 selects relax_stable_dt(g) capped at 0.05
  Schedule schedule;
};

// GW2 machine alone from a uniformly random xi on (-2, 2].
RunResult gw2_solve(const Graph& g, const Schedule& schedule, std::uint64_t seed);
// Smooth relaxation stage followed by the GW2 stage.
RunResult hetero_run(const Graph& g, const HeteroConfig& config, std::uint64_t seed);

ContinuousState random_continuous_state(std::size_t n, Rng& rng);

}  // namespace gwcut
