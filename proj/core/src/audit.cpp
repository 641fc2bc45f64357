#include "gwcut/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

#include "gwcut/dynamics.hpp"
#include "gwcut/error.hpp"
#include "gwcut/graph.hpp"
#include "gwcut/local_search.hpp"
#include "gwcut/objective.hpp"
#include "gwcut/oracle.hpp"
#include "gwcut/parallel.hpp"
#include "gwcut/rng.hpp"
#include "gwcut/state.hpp"

namespace gwcut {

namespace {

constexpr double kIdentityTolerance = 1e-12;
constexpr double kGradientTolerance = 1e-6;
constexpr double kFiniteDiffStep = 1e-5;
constexpr double kCutTolerance = 1e-9;

enum class Agg { Sum, Max, Min, Mean };

struct MetricSpec {
  const char* name;
  Agg agg;
};

struct TrialOutcome {
  bool pass = true;
  double violation = 0.0;
  std::vector<double> values;  // one per MetricSpec
  std::string detail;
};

using TrialFn = std::function<TrialOutcome(std::size_t trial, Rng& rng)>;

AuditReport run_trials(AuditSuite suite, const AuditOptions& options, const std::vector<MetricSpec>& specs,
                       const TrialFn& fn) {
  std::vector<TrialOutcome> outcomes(options.trials);
  parallel_for(options.trials, options.threads, [&](std::size_t t) {
    Rng rng(derive_seed(options.seed, t));
    outcomes[t] = fn(t, rng);
  });

  AuditReport report;
  report.suite = suite;
  report.seed = options.seed;
  report.trials = options.trials;
  std::vector<double> agg(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    switch (specs[i].agg) {
      case Agg::Max: agg[i] = -std::numeric_limits<double>::infinity(); break;
      case Agg::Min: agg[i] = std::numeric_limits<double>::infinity(); break;
      default: agg[i] = 0.0;
    }
  }
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    const TrialOutcome& o = outcomes[t];
    if (o.pass) {
      ++report.passed;
    } else {
      report.failures.push_back({t, derive_seed(options.seed, t), o.detail});
    }
    report.max_violation = std::max(report.max_violation, o.violation);
    for (std::size_t i = 0; i < specs.size() && i < o.values.size(); ++i) {
      switch (specs[i].agg) {
        case Agg::Max: agg[i] = std::max(agg[i], o.values[i]); break;
        case Agg::Min: agg[i] = std::min(agg[i], o.values[i]); break;
        default: agg[i] += o.values[i];
      }
    }
  }
  for (std::size_t i = 0; i < specs.size(); ++i) {
    double value = agg[i];
    if (specs[i].agg == Agg::Mean) value = outcomes.empty() ? 0.0 : value / static_cast<double>(outcomes.size());
    if (!std::isfinite(value)) value = 0.0;
    report.metrics.emplace_back(specs[i].name, value);
  }
  return report;
}

std::size_t uniform_size(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

// Same topology with weights drawn uniformly from [0.5, 2).
Graph reweighted(const Graph& g, Rng& rng) {
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  for (Edge& e : edges) e.w = rng.uniform(0.5, 2.0);
  return Graph::from_edge_list(g.num_nodes(), std::move(edges));
}

Graph random_er(Rng& rng, std::size_t n_lo, std::size_t n_hi, double p_lo, double p_hi) {
  const std::size_t n = uniform_size(rng, n_lo, n_hi);
  const double p = p_lo == p_hi ? p_lo : rng.uniform(p_lo, p_hi);
  return gen_erdos_renyi(n, p, rng.next());
}

std::vector<double> random_x(std::size_t n, Rng& rng) {
  std::vector<double> x(n);
  for (double& v : x) v = 1.0 - 2.0 * rng.uniform();  // (-1, 1]
  return x;
}

double stage_dt(const Graph& g) {
  const double scale = static_cast<double>(g.max_degree()) * g.max_abs_weight();
  return scale > 0.0 ? std::min(0.05, 1.0 / scale) : 0.05;
}

StageResult run_to_critical(const Graph& g, SxState start) {
  StageOptions options;
  options.max_steps = 1000000;
  options.dt = stage_dt(g);
  options.integrator = Integrator::Exact;
  return gw2_integrate(g, std::move(start), options);
}

Schedule exact_schedule(const Graph& g) {
  Schedule s;
  s.integrator = Integrator::Exact;
  return s.fitted_to(g);
}

std::string describe(const Graph& g) {
  return "n=" + std::to_string(g.num_nodes()) + " m=" + std::to_string(g.num_edges());
}

// --- suites -------------------------------------------------------------------

AuditReport audit_identities(const AuditOptions& options) {
  // `trials` counts samples, spread over at most 100 graphs.
  AuditOptions per_graph = options;
  const std::size_t graphs = std::min<std::size_t>(100, options.trials);
  per_graph.trials = graphs;
  const std::vector<MetricSpec> specs = {{"samples", Agg::Sum},        {"edge_split", Agg::Max},
                                         {"sx_objective", Agg::Max},   {"scaling", Agg::Max},
                                         {"cut_variation", Agg::Max}};
  AuditReport report = run_trials(AuditSuite::Identities, per_graph, specs, [&](std::size_t t, Rng& rng) {
    const std::size_t samples = options.trials / graphs + (t < options.trials % graphs ? 1 : 0);
    Graph g = random_er(rng, 2, 32, 0.1, 0.6);
    if (t % 2 == 1) g = reweighted(g, rng);
    const IdentityReport r = verify_identities(g, samples, rng.next());
    TrialOutcome o;
    o.violation = r.max_violation();
    o.pass = o.violation <= kIdentityTolerance;
    o.values = {static_cast<double>(samples), r.edge_split, r.sx_objective, r.scaling, r.cut_variation};
    if (!o.pass) o.detail = describe(g) + " max violation " + std::to_string(o.violation);
    return o;
  });
  return report;
}

// Checks the rounding-orbit statement on one critical state; returns an
// empty string on success.
std::string check_critical_state(const Graph& g, const SxState& s, double& violation, bool& nontrivial) {
  if (!critical_test(g, s)) return "state is not critical";
  const RoundingOrbit orbit = rounding_orbit(g, compose(s.sigma, s.x));
  const auto [lo, hi] = std::minmax_element(orbit.cuts.begin(), orbit.cuts.end());
  violation = std::max(violation, *hi - *lo);
  nontrivial = group_levels(s.x).count() > 1;
  if (!orbit.cuts_equal(g.unit_weighted() ? 0.0 : kCutTolerance)) {
    return "orbit cuts range over [" + std::to_string(*lo) + ", " + std::to_string(*hi) + "]";
  }

  // The lowest level group is balanced against the rest of the graph.
  const LevelGroups groups = group_levels(s.x);
  double balance = 0.0;
  for (const Edge& e : g.edges()) {
    const bool u_low = groups.group_of[e.u] == 0;
    const bool v_low = groups.group_of[e.v] == 0;
    if (u_low != v_low) balance += e.w * s.sigma[e.u] * s.sigma[e.v];
  }
  violation = std::max(violation, std::abs(balance));
  if (std::abs(balance) > (g.unit_weighted() ? 0.0 : kCutTolerance)) {
    return "lowest level group unbalanced by " + std::to_string(balance);
  }

  // Contracting X towards zero keeps the objective and the critical condition.
  const double cut = cut_size(g, s.sigma);
  for (double lambda : {1.0, 0.5, 0.125}) {
    std::vector<double> x(s.x);
    for (double& v : x) v *= lambda;
    const double drift = std::abs(gw_objective_sx(g, s.sigma, x) - cut);
    violation = std::max(violation, drift);
    if (drift > kCutTolerance) return "objective moves by " + std::to_string(drift) + " under contraction";
    if (!critical_test(g, SxState(s.sigma, x))) return "contraction leaves the critical set";
  }
  return {};
}

AuditReport audit_rounding(const AuditOptions& options) {
  const std::vector<MetricSpec> specs = {{"critical_states", Agg::Sum}, {"nontrivial_states", Agg::Sum},
                                         {"max_orbit_length", Agg::Max}, {"extended_runs", Agg::Sum}};
  return run_trials(AuditSuite::Rounding, options, specs, [&](std::size_t, Rng& rng) {
    const Graph g = random_er(rng, 8, 40, 0.2, 0.2);
    TrialOutcome o;
    double critical = 0.0;
    double nontrivial = 0.0;
    double orbit_length = 0.0;

    // A single stage from a generic state, then the full restart schedule.
    const StageResult stage = run_to_critical(g, decompose(random_continuous_state(g.num_nodes(), rng)));
    const Trajectory traj = gw2_run(g, decompose(random_continuous_state(g.num_nodes(), rng)), exact_schedule(g),
                                    rng.next());
    // The schedule's final restart may end before the levels settle; keep
    // integrating it until the state is critical.
    const double extended = traj.converged ? 0.0 : 1.0;
    const SxState settled = traj.converged ? traj.last_state : run_to_critical(g, traj.last_state).state;
    for (const SxState* s : {&stage.state, &settled}) {
      bool rich = false;
      const std::string error = check_critical_state(g, *s, o.violation, rich);
      if (!error.empty()) {
        o.pass = false;
        o.detail = describe(g) + ": " + error;
        break;
      }
      critical += 1.0;
      nontrivial += rich ? 1.0 : 0.0;
      orbit_length = std::max(orbit_length, static_cast<double>(rounding_orbit(g, compose(s->sigma, s->x)).cuts.size()));
    }
    o.values = {critical, nontrivial, orbit_length, extended};
    return o;
  });
}

AuditReport audit_monotonicity(const AuditOptions& options) {
  const std::vector<MetricSpec> specs = {{"stage_min_gain", Agg::Min},   {"run_min_gain", Agg::Min},
                                         {"critical_stages", Agg::Sum},  {"flips", Agg::Sum},
                                         {"bad_flips", Agg::Sum},        {"downhill_flip_steps", Agg::Sum}};
  return run_trials(AuditSuite::Monotonicity, options, specs, [&](std::size_t, Rng& rng) {
    const Graph g = random_er(rng, 4, 40, 0.1, 0.5);
    const std::size_t n = g.num_nodes();
    const SpinState sigma = SpinState::random(n, rng);
    const SxState start(sigma, random_x(n, rng));
    const double initial = cut_size(g, sigma);

    const StageResult stage = run_to_critical(g, start);
    const Trajectory traj = gw2_run(g, start, exact_schedule(g), rng.next());
    const double stage_gain = cut_size(g, stage.state.sigma) - initial;
    const double run_gain = traj.best_cut - initial;

    TrialOutcome o;
    o.violation = std::max({0.0, -stage_gain, -run_gain});
    o.values = {stage_gain,
                run_gain,
                stage.critical ? 1.0 : 0.0,
                static_cast<double>(stage.flips + traj.flips),
                static_cast<double>(stage.bad_flips + traj.bad_flips),
                static_cast<double>(stage.downhill_flip_steps + traj.downhill_flip_steps)};
    std::ostringstream why;
    if (stage_gain < -kCutTolerance) why << "stage lowered the cut by " << -stage_gain << "; ";
    if (run_gain < -kCutTolerance) why << "run lowered the cut by " << -run_gain << "; ";
    if (!stage.critical) why << "stage did not reach a critical state; ";
    if (stage.bad_flips + traj.bad_flips > 0) why << "a single-node crossing had a non-positive field; ";
    if (stage.downhill_flip_steps + traj.downhill_flip_steps > 0) why << "a step lowered the cut; ";
    o.detail = why.str();
    o.pass = o.detail.empty();
    if (!o.pass) o.detail = describe(g) + ": " + o.detail;
    return o;
  });
}

AuditReport audit_optimal_rounding(const AuditOptions& options) {
  const std::vector<MetricSpec> specs = {{"stage_min_margin", Agg::Min}, {"run_min_margin", Agg::Min},
                                         {"mean_rounding_cut", Agg::Mean}, {"mean_stage_cut", Agg::Mean},
                                         {"resampled", Agg::Sum}};
  return run_trials(AuditSuite::OptimalRounding, options, specs, [&](std::size_t, Rng& rng) {
    const Graph g = random_er(rng, 4, 40, 0.1, 0.5);
    const std::size_t n = g.num_nodes();
    ContinuousState xi = random_continuous_state(n, rng);
    double resampled = 0.0;
    while (g.num_edges() > 0 && critical_test(g, decompose(xi)) && resampled < 100) {
      xi = random_continuous_state(n, rng);
      resampled += 1.0;
    }
    const BestRounding rounding = best_rounding(g, xi);
    const StageResult stage = run_to_critical(g, decompose(xi));
    const Trajectory traj = gw2_run(g, decompose(xi), exact_schedule(g), rng.next());
    const double stage_cut = cut_size(g, stage.state.sigma);
    const double stage_margin = stage_cut - rounding.cut;
    const double run_margin = traj.best_cut - rounding.cut;

    TrialOutcome o;
    o.violation = std::max({0.0, -stage_margin, -run_margin});
    o.values = {stage_margin, run_margin, rounding.cut, stage_cut, resampled};
    o.pass = stage_margin >= -kCutTolerance && run_margin >= -kCutTolerance;
    if (!o.pass) {
      o.detail = describe(g) + ": best rounding " + std::to_string(rounding.cut) + ", stage " +
                 std::to_string(stage_cut) + ", run " + std::to_string(traj.best_cut);
    }
    return o;
  });
}

AuditReport audit_exactness(const AuditOptions& options) {
  const std::vector<MetricSpec> specs = {{"gw2_attains_max", Agg::Sum},   {"tr_gw2_attains_max", Agg::Sum},
                                         {"sdp_gw2_attains_max", Agg::Sum}, {"ls2_attains_max", Agg::Sum},
                                         {"gw2_attain_rate", Agg::Mean}};
  return run_trials(AuditSuite::Exactness, options, specs, [&](std::size_t, Rng& rng) {
    const Graph g = random_er(rng, 4, 16, 0.2, 0.6);
    const std::size_t n = g.num_nodes();
    const double best = brute_force_maxcut(g).cut;
    double excess = -std::numeric_limits<double>::infinity();
    auto bound = [&](double value) { excess = std::max(excess, value - best); };

    const Schedule schedule = Schedule{}.fitted_to(g);
    const RunResult gw2 = gw2_solve(g, schedule, rng.next());
    bound(gw2.cut);
    HeteroConfig hetero;
    hetero.schedule = schedule;
    const RunResult tr = hetero_run(g, hetero, rng.next());
    bound(tr.cut);
    bound(tr.stage1_rounding_cut);
    hetero.first_stage = ModelKind::Sdp;
    const RunResult sdp = hetero_run(g, hetero, rng.next());
    bound(sdp.cut);
    bound(sdp.stage1_rounding_cut);
    const LsResult ls1 = multistart(g, LsVariant::OneOpt, 10, rng.next());
    const LsResult ls2 = multistart(g, LsVariant::TwoOpt, 10, rng.next());
    bound(ls1.cut);
    bound(ls2.cut);

    // Relaxed objective of machine states and of arbitrary points.
    const StageResult stage = run_to_critical(g, decompose(random_continuous_state(n, rng)));
    bound(gw_objective_sx(g, stage.state.sigma, stage.state.x));
    for (int i = 0; i < 16; ++i) {
      const ContinuousState xi = random_continuous_state(n, rng);
      bound(relaxed_objective(g, xi, ModelKind::Gw));
      bound(best_rounding(g, xi).cut);
    }

    TrialOutcome o;
    o.violation = std::max(0.0, excess);
    o.pass = excess <= kCutTolerance;
    auto hit = [&](double cut) { return cut >= best - kCutTolerance ? 1.0 : 0.0; };
    o.values = {hit(gw2.cut), hit(tr.cut), hit(sdp.cut), hit(ls2.cut), hit(gw2.cut)};
    if (!o.pass) o.detail = describe(g) + ": a value exceeds the maximum cut by " + std::to_string(excess);
    return o;
  });
}

AuditReport audit_gradients(const AuditOptions& options) {
  const std::vector<MetricSpec> specs = {{"sdp_max_error", Agg::Max}, {"tr_max_error", Agg::Max},
                                         {"kink_resamples", Agg::Sum}};
  return run_trials(AuditSuite::Gradients, options, specs, [&](std::size_t t, Rng& rng) {
    Graph g = random_er(rng, 2, 40, 0.1, 0.6);
    if (t % 2 == 1) g = reweighted(g, rng);
    const std::size_t n = g.num_nodes();
    const ContinuousState xi = random_continuous_state(n, rng);
    const double sdp = finite_diff_check(g, xi, ModelKind::Sdp, kFiniteDiffStep);

    double resamples = 0.0;
    double tr = 0.0;
    ContinuousState probe = xi;
    while (true) {
      try {
        tr = finite_diff_check(g, probe, ModelKind::Triangular, kFiniteDiffStep);
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::KinkProximity || resamples >= 100) throw;
        probe = random_continuous_state(n, rng);
        resamples += 1.0;
      }
    }
    TrialOutcome o;
    o.violation = std::max(sdp, tr);
    o.pass = o.violation <= kGradientTolerance;
    o.values = {sdp, tr, resamples};
    if (!o.pass) o.detail = describe(g) + ": gradient error " + std::to_string(o.violation);
    return o;
  });
}

AuditReport audit_local_search(const AuditOptions& options) {
  const std::vector<MetricSpec> specs = {{"one_opt_stable", Agg::Sum}, {"two_opt_stable", Agg::Sum},
                                         {"mean_two_opt_gain", Agg::Mean}};
  return run_trials(AuditSuite::LocalSearch, options, specs, [&](std::size_t t, Rng& rng) {
    Graph g = random_er(rng, 2, 60, 0.05, 0.5);
    if (t % 4 == 3) g = reweighted(g, rng);
    const SpinState start = SpinState::random(g.num_nodes(), rng);
    const double initial = cut_size(g, start);
    const LsResult one = one_opt(g, start);
    const LsResult two = two_opt(g, start);
    const bool one_ok = is_one_opt_stable(g, one.sigma) && one.cut >= initial;
    const bool two_ok = is_two_opt_stable(g, two.sigma) && two.cut >= initial;

    // Unit weights: the pair condition reads F_m + F_n <= -2 literally.
    bool literal = true;
    if (g.unit_weighted()) {
      const std::vector<double> f = node_fields(g, two.sigma);
      for (const Edge& e : g.edges()) {
        if (two.sigma[e.u] != two.sigma[e.v] && f[e.u] + f[e.v] > -2.0) literal = false;
      }
    }
    TrialOutcome o;
    o.pass = one_ok && two_ok && literal;
    o.violation = o.pass ? 0.0 : 1.0;
    o.values = {one_ok ? 1.0 : 0.0, two_ok && literal ? 1.0 : 0.0, two.cut - initial};
    if (!o.pass) o.detail = describe(g) + ": local-search terminal condition violated";
    return o;
  });
}

}  // namespace

std::string_view to_string(AuditSuite suite) {
  switch (suite) {
    case AuditSuite::Identities: return "identities";
    case AuditSuite::Rounding: return "thm3";
    case AuditSuite::Monotonicity: return "thm4";
    case AuditSuite::OptimalRounding: return "thm5";
    case AuditSuite::Exactness: return "exactness";
    case AuditSuite::Gradients: return "gradients";
    case AuditSuite::LocalSearch: return "local-search";
  }
  return "?";
}

AuditSuite parse_audit_suite(std::string_view name) {
  for (AuditSuite s : all_audit_suites()) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown audit suite '" + std::string(name) + "'");
}

std::vector<AuditSuite> all_audit_suites() {
  return {AuditSuite::Identities, AuditSuite::Rounding,  AuditSuite::Monotonicity, AuditSuite::OptimalRounding,
          AuditSuite::Exactness,  AuditSuite::Gradients, AuditSuite::LocalSearch};
}

double AuditReport::metric(std::string_view name) const {
  for (const auto& [key, value] : metrics) {
    if (key == name) return value;
  }
  throw Error(ErrorCode::InvalidArgument, "report has no metric '" + std::string(name) + "'");
}

AuditReport run_audit(AuditSuite suite, const AuditOptions& options) {
  if (options.trials == 0) throw Error(ErrorCode::InvalidArgument, "audit needs at least one trial");
  switch (suite) {
    case AuditSuite::Identities: return audit_identities(options);
    case AuditSuite::Rounding: return audit_rounding(options);
    case AuditSuite::Monotonicity: return audit_monotonicity(options);
    case AuditSuite::OptimalRounding: return audit_optimal_rounding(options);
    case AuditSuite::Exactness: return audit_exactness(options);
    case AuditSuite::Gradients: return audit_gradients(options);
    case AuditSuite::LocalSearch: return audit_local_search(options);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown audit suite");
}

std::string format_report_text(const AuditReport& r) {
  std::ostringstream out;
  char buf[64];
  out << "suite " << to_string(r.suite) << " seed " << r.seed << ": " << r.passed << "/" << r.trials << " passed ("
      << (r.ok() ? "pass" : "FAIL") << ")\n";
  std::snprintf(buf, sizeof buf, "%.6g", r.max_violation);
  out << "  max_violation " << buf << "\n";
  for (const auto& [name, value] : r.metrics) {
    std::snprintf(buf, sizeof buf, "%.6g", value);
    out << "  " << name << " " << buf << "\n";
  }
  for (const AuditFailure& f : r.failures) {
    out << "  failure trial " << f.trial << " instance_seed " << f.instance_seed << ": " << f.detail << "\n";
  }
  return out.str();
}

}  // namespace gwcut
