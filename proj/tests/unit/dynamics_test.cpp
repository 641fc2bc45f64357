#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "gwcut/dynamics.hpp"
#include "gwcut/error.hpp"
#include "gwcut/oracle.hpp"
#include "gwcut/rng.hpp"

namespace gwcut {
namespace {

using testing::complete_graph;

SxState random_sx(std::size_t n, Rng& rng) {
  SxState s(SpinState::random(n, rng), std::vector<double>(n));
  for (double& v : s.x) v = 1.0 - rng.uniform(0.0, 2.0);
  return s;
}

TEST(Velocity, SingleEdge) {
  const Graph k2 = complete_graph(2);
  EXPECT_EQ(gw2_velocity(k2, SxState(SpinState{1, 1}, {0.2, -0.2})), (std::vector{0.5, -0.5}));
  EXPECT_EQ(gw2_velocity(k2, SxState(SpinState{1, -1}, {0.2, -0.2})), (std::vector{-0.5, 0.5}));
}

TEST(Velocity, CoincidentLevelsExertNoForce) {
  const Graph g = gen_erdos_renyi(20, 0.4, 1);
  Rng rng(2);
  SxState s(SpinState::random(20, rng), std::vector<double>(20, 0.3));
  for (double v : gw2_velocity(g, s)) EXPECT_EQ(v, 0.0);
  s.x[3] += 5e-10;
  for (double v : gw2_velocity(g, s)) EXPECT_EQ(v, 0.0);
}

// Direct evaluation of the velocity formula, and half-integer values for
// unit weights.
TEST(Velocity, MatchesFormula) {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng.below(20);
    const Graph g = gen_erdos_renyi(n, 0.4, 100 + t);
    const SxState s = random_sx(n, rng);
    const auto v = gw2_velocity(g, s);
    for (NodeId m = 0; m < n; ++m) {
      double ref = 0.0;
      for (const Edge& e : g.edges()) {
        if (e.u != m && e.v != m) continue;
        const NodeId o = e.u == m ? e.v : e.u;
        const double d = s.x[m] - s.x[o];
        ref += 0.5 * s.sigma[m] * s.sigma[o] * (d > 0 ? 1.0 : d < 0 ? -1.0 : 0.0);
      }
      ASSERT_EQ(v[m], ref);
      ASSERT_EQ(2.0 * v[m], std::round(2.0 * v[m]));
    }
  }
}

TEST(Step, WrapsBothSpinsOnSingleEdge) {
  const Graph k2 = complete_graph(2);
  const SxState out = gw2_step(k2, SxState(SpinState{1, 1}, {0.9, -0.9}), 0.4);
  EXPECT_EQ(out.sigma, (SpinState{-1, -1}));
  EXPECT_NEAR(out.x[0], -0.9, 1e-12);
  EXPECT_NEAR(out.x[1], 0.9, 1e-12);
  EXPECT_EQ(cut_size(k2, out.sigma), 0.0);
}

TEST(Step, FixedPointAndStepLimit) {
  const Graph k3 = complete_graph(3);
  const SxState s(SpinState{1, 1, -1}, {0.1, 0.1, 0.1});
  const SxState out = gw2_step(k3, s, 0.5);
  EXPECT_EQ(out.sigma, s.sigma);
  EXPECT_EQ(out.x, s.x);
  const Graph k2 = complete_graph(2);
  EXPECT_THROW(gw2_step(k2, SxState(SpinState{1, 1}, {0.2, -0.2}), 4.0), Error);
}

TEST(Step, ObjectiveWithinEulerBand) {
  Rng rng(4);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 2 + rng.below(30);
    const Graph g = gen_erdos_renyi(n, 0.3, 200 + t);
    const SxState s = random_sx(n, rng);
    const double dt = 0.01;
    const double before = gw_objective_sx(g, s.sigma, s.x);
    const SxState next = gw2_step(g, s, dt);
    const double after = gw_objective_sx(g, next.sigma, next.x);
    ASSERT_GE(after, before - dt * dt * n * std::max<std::size_t>(g.max_degree(), 1));
  }
}

TEST(Equilibrium, Examples) {
  const Graph k3 = complete_graph(3);
  for (std::uint64_t mask = 0; mask < 8; ++mask) {
    const SxState s(testing::spins_from_mask(3, mask));
    EXPECT_TRUE(equilibrium_test(k3, s));
    EXPECT_TRUE(critical_test(k3, s));
  }
  const Graph k2 = complete_graph(2);
  EXPECT_FALSE(equilibrium_test(k2, SxState(SpinState{1, 1}, {0.2, -0.2})));
  EXPECT_FALSE(critical_test(k2, SxState(SpinState{1, 1}, {0.2, -0.2})));
}

TEST(SlidingVelocity, ZeroExactlyAtCriticalStates) {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng.below(15);
    const Graph g = gen_erdos_renyi(n, 0.4, 300 + t);
    SxState s = random_sx(n, rng);
    // Collapse onto a few levels so that groups are non-trivial.
    for (double& v : s.x) v = std::round(v * 2.0) / 2.0;
    for (double& v : s.x) if (v <= -1.0) v = 1.0;
    const auto v = sliding_velocity(g, s);
    const bool zero = std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
    if (zero) EXPECT_TRUE(critical_test(g, s));
    if (!critical_test(g, s)) EXPECT_FALSE(zero);
    // Splitting and averaging redistribute velocity inside a group but keep
    // its total.
    const auto raw = gw2_velocity(g, s);
    double sum_raw = 0.0, sum_sliding = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      sum_raw += raw[m];
      sum_sliding += v[m];
    }
    EXPECT_NEAR(sum_raw, sum_sliding, 1e-9);
  }
}

// Path 0-1-2 with sigma = (+1, +1, -1) all on one level: the group derivative
// is zero (one cut and one uncut edge), but node 0 repels node 1 and node 2
// attracts it, so the flow splits the group.
TEST(SlidingVelocity, BalancedGroupCanSplit) {
  const Graph p3 = testing::path_graph(3);
  const SxState s(SpinState{1, 1, -1}, {0.0, 0.0, 0.0});
  EXPECT_TRUE(critical_test(p3, s));
  const auto v = sliding_velocity(p3, s);
  EXPECT_TRUE(std::any_of(v.begin(), v.end(), [](double x) { return x != 0.0; }));
  EXPECT_NEAR(v[0] + v[1] + v[2], 0.0, 1e-12);
}

TEST(Advance, ReachesCriticalStateWithoutBadFlips) {
  Rng rng(6);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 4 + rng.below(20);
    const Graph g = gen_erdos_renyi(n, 0.3, 400 + t);
    SxState s = random_sx(n, rng);
    const double start = gw_objective_sx(g, s.sigma, s.x);
    SliceStats total;
    for (int k = 0; k < 2000 && !critical_test(g, s); ++k) {
      const SliceStats st = gw2_advance(g, s, 0.05);
      total.bad_flips += st.bad_flips;
      ASSERT_FALSE(st.event_cap);
    }
    EXPECT_TRUE(critical_test(g, s));
    EXPECT_EQ(total.bad_flips, 0U);
    EXPECT_NO_THROW(s.validate());
    EXPECT_GE(gw_objective_sx(g, s.sigma, s.x), start - 1e-9);
  }
}

TEST(Integrate, ExactStageIsMonotone) {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 4 + rng.below(30);
    const Graph g = gen_erdos_renyi(n, 0.2, 500 + t);
    const SxState s = random_sx(n, rng);
    StageOptions opt;
    opt.integrator = Integrator::Exact;
    opt.max_steps = 100000;
    opt.dt = 0.05;
    const StageResult r = gw2_integrate(g, s, opt);
    EXPECT_TRUE(r.critical);
    EXPECT_EQ(r.bad_flips, 0U);
    EXPECT_EQ(r.downhill_flip_steps, 0U);
    EXPECT_GE(r.objective_end, r.objective_start - 1e-9);
    EXPECT_GE(cut_size(g, r.state.sigma), cut_size(g, s.sigma));
  }
}

// With dt <= 0.01 the stage reaches a critical state within 4 * C_max / dt
// steps on small instances.
TEST(Integrate, FiniteTimeConvergence) {
  Rng rng(8);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 4 + rng.below(17);
    const Graph g = gen_erdos_renyi(n, 0.3, 600 + t);
    if (g.num_edges() == 0) continue;
    const double cmax = brute_force_maxcut(g).cut;
    StageOptions opt;
    opt.integrator = Integrator::Exact;
    opt.dt = 0.01;
    opt.max_steps = static_cast<std::size_t>(std::ceil(4.0 * cmax / opt.dt));
    const StageResult r = gw2_integrate(g, random_sx(n, rng), opt);
    EXPECT_TRUE(r.critical) << "trial " << t;
    // At rest: no cluster moves and none can split.
    for (double v : sliding_velocity(g, r.state)) EXPECT_EQ(v, 0.0) << "trial " << t;
  }
}

// The reported terminal is the best spin state with X = 0, which is always an
// equilibrium.
TEST(Run, TerminalIsEquilibrium) {
  Rng rng(13);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 4 + rng.below(37);
    const Graph g = gen_erdos_renyi(n, 0.2, 1100 + t);
    Schedule sched;
    sched.restarts = 10;
    const Trajectory tr = gw2_run(g, random_sx(n, rng), sched.fitted_to(g), t);
    EXPECT_TRUE(equilibrium_test(g, tr.terminal));
    EXPECT_EQ(cut_size(g, tr.terminal.sigma), tr.best_cut);
  }
}

// Every non-critical state of a unit-weight graph has a gradient component of
// at least 1/2, so the squared norm is at least 1/4.
TEST(Integrate, GradientNormLowerBound) {
  Rng rng(9);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 2 + rng.below(20);
    const Graph g = gen_erdos_renyi(n, 0.4, 700 + t);
    const SxState s = random_sx(n, rng);
    if (equilibrium_test(g, s)) continue;
    const auto v = gw2_velocity(g, s);
    double norm2 = 0.0;
    for (double x : v) norm2 += x * x;
    EXPECT_GE(norm2, 0.25);
  }
}

TEST(Run, SingleEdgeReachesMaxCut) {
  const Graph k2 = complete_graph(2);
  const Trajectory tr = gw2_run(k2, SxState(SpinState{1, 1}, {0.3, -0.3}), Schedule{}, 1);
  EXPECT_EQ(tr.best_cut, 1.0);
  EXPECT_EQ(cut_size(k2, tr.terminal.sigma), 1.0);
  for (double x : tr.terminal.x) EXPECT_EQ(x, 0.0);
}

TEST(Run, StarAndMaxCutStart) {
  const Graph star = testing::complete_bipartite(1, 3);
  Rng rng(10);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Trajectory tr = gw2_run(star, random_sx(4, rng), Schedule{}, seed);
    EXPECT_EQ(tr.best_cut, 3.0);
  }
  for (int t = 0; t < 20; ++t) {
    const Graph g = gen_erdos_renyi(12, 0.4, 800 + t);
    const MaxCut mc = brute_force_maxcut(g);
    const Trajectory tr = gw2_run(g, SxState(mc.sigma), Schedule{}.fitted_to(g), t);
    EXPECT_EQ(tr.best_cut, mc.cut);
  }
}

TEST(Run, CutSeriesNeverBelowStartingCut) {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const Graph g = gen_erdos_renyi(25, 0.2, 900 + t);
    const SxState s = random_sx(25, rng);
    Schedule sched;
    sched.restarts = 10;
    sched.integrator = Integrator::Exact;
    const Trajectory tr = gw2_run(g, s, sched, t);
    double prev = cut_size(g, s.sigma);
    for (double c : tr.cut_series) {
      EXPECT_GE(c, prev);
      prev = c;
    }
    EXPECT_EQ(tr.best_cut, *std::max_element(tr.cut_series.begin(), tr.cut_series.end()));
  }
}

TEST(Run, Deterministic) {
  const Graph g = gen_erdos_renyi(40, 0.2, 3);
  Rng a(1), b(1);
  const Trajectory x = gw2_run(g, random_sx(40, a), Schedule{}.fitted_to(g), 5);
  const Trajectory y = gw2_run(g, random_sx(40, b), Schedule{}.fitted_to(g), 5);
  EXPECT_EQ(x.terminal.sigma, y.terminal.sigma);
  EXPECT_EQ(x.cut_series, y.cut_series);
  EXPECT_EQ(x.steps_taken, y.steps_taken);
}

TEST(ScheduleRules, ValidateAndFit) {
  const Graph g = complete_graph(50);
  Schedule s;
  EXPECT_THROW(s.validate(g), Error);
  const Schedule fitted = s.fitted_to(g);
  EXPECT_NO_THROW(fitted.validate(g));
  EXPECT_LT(fitted.dt0, s.dt0);
  const Graph small = complete_graph(3);
  EXPECT_EQ(s.fitted_to(small).dt0, s.dt0);
  Schedule bad;
  bad.restarts = 0;
  EXPECT_THROW(bad.validate(small), Error);
  EXPECT_EQ(s.steps_at(0), 200U);
  EXPECT_EQ(s.steps_at(1), 210U);
  EXPECT_DOUBLE_EQ(s.dt_at(1), 0.05 * 0.95);
}

TEST(Relax, GradientHandValues) {
  const Graph k2 = complete_graph(2);
  const auto gsdp = relax_gradient(k2, std::vector{0.0, 1.0}, ModelKind::Sdp);
  EXPECT_NEAR(gsdp[0], -std::numbers::pi / 4, 1e-15);
  EXPECT_NEAR(gsdp[1], std::numbers::pi / 4, 1e-15);
  const Graph g = gen_erdos_renyi(15, 0.4, 2);
  Rng rng(3);
  const SpinState s = SpinState::random(15, rng);
  ContinuousState xi(15);
  for (std::size_t m = 0; m < 15; ++m) xi[m] = s[m];
  for (double v : relax_gradient(g, xi, ModelKind::Sdp)) EXPECT_NEAR(v, 0.0, 1e-12);
  EXPECT_THROW(relax_gradient(k2, std::vector{0.0, 1.0}, ModelKind::Gw), Error);
}

TEST(Relax, SingleEdgeConvergesToCut) {
  const Graph k2 = complete_graph(2);
  const ContinuousState start{0.0, 0.1};
  EXPECT_EQ(relax_run(k2, start, ModelKind::Sdp, 0, 0.05), start);
  const ContinuousState end = relax_run(k2, start, ModelKind::Sdp, 2000, 0.05);
  EXPECT_NEAR(std::abs(end[1] - end[0]), 2.0, 1e-6);
  EXPECT_NEAR(relaxed_objective(k2, end, ModelKind::Sdp), 1.0, 1e-9);
}

TEST(Relax, ObjectiveDoesNotDecrease) {
  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    const Graph g = gen_erdos_renyi(30, 0.2, 1000 + t);
    const ContinuousState xi = random_continuous_state(30, rng);
    const double dt = std::min(0.05, relax_stable_dt(g));
    for (ModelKind m : {ModelKind::Sdp, ModelKind::Triangular}) {
      const ContinuousState out = relax_run(g, xi, m, 200, dt);
      EXPECT_GE(relaxed_objective(g, out, m), relaxed_objective(g, xi, m) - 1e-9);
    }
  }
}

TEST(Hetero, SmallGraphs) {
  HeteroConfig cfg;
  const Graph k23 = testing::complete_bipartite(2, 3);
  const Graph k3 = complete_graph(3);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    EXPECT_EQ(hetero_run(k23, cfg, seed).cut, 6.0);
    EXPECT_EQ(hetero_run(k3, cfg, seed).cut, 2.0);
  }
}

TEST(Hetero, AttainsMaxCutOnMostSeeds) {
  const Graph g = gen_erdos_renyi(12, 0.3, 5);
  const double cmax = brute_force_maxcut(g).cut;
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const RunResult r = hetero_run(g, HeteroConfig{}, seed);
    EXPECT_LE(r.cut, cmax);
    EXPECT_GE(r.cut, r.stage1_rounding_cut);
    EXPECT_TRUE(r.rounding_contract_met);
    hits += r.cut == cmax;
  }
  EXPECT_GE(hits, 80);
}

TEST(IntegratorNames, RoundTrip) {
  EXPECT_EQ(parse_integrator("euler"), Integrator::Euler);
  EXPECT_EQ(parse_integrator(to_string(Integrator::Exact)), Integrator::Exact);
  EXPECT_THROW(parse_integrator("rk4"), Error);
}

}  // namespace
}  // namespace gwcut
