#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gwcut/audit.hpp"
#include "gwcut/bench.hpp"
#include "gwcut/config.hpp"
#include "gwcut/error.hpp"
#include "gwcut/graph.hpp"
#include "gwcut/oracle.hpp"
#include "gwcut/rng.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace gwcut;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitIo = 2;
constexpr int kExitUsage = 3;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError:
    case ErrorCode::ParseError:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::SelfLoop:
    case ErrorCode::DuplicateEdge:
    case ErrorCode::LengthMismatch:
    case ErrorCode::InfeasibleDegree:
    case ErrorCode::RetryExhausted:
    case ErrorCode::ConnectivityRetryExhausted:
      return kExitIo;
    default:
      return kExitUsage;
  }
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags shared by every subcommand. Values left unset on the command line
// fall back to the config file, then to built-in defaults.
struct Common {
  std::uint64_t seed = 1;
  int threads = 1;
  int restarts = 50;
  std::size_t steps0 = 200;
  double dt0 = 0.05;
  double step_growth = 1.05;
  double dt_shrink = 0.95;
  std::string integrator = "euler";
  std::size_t ls_tries = 100;
  std::size_t relax_steps = 1000;
  std::string config_path;
  std::string out;
  std::string format = "csv";

  bool dt0_given = false;
};

template <typename T>
T convert(const std::string& key, const std::string& text) {
  T value{};
  std::istringstream in(text);
  in >> value;
  if (!in || !in.eof()) throw UsageError("config key '" + key + "': cannot parse '" + text + "'");
  return value;
}

template <>
std::string convert<std::string>(const std::string&, const std::string& text) {
  return text;
}

class Options {
 public:
  explicit Options(CLI::App& app) : app_(app) {}

  template <typename T>
  void add(const std::string& name, T& target, const std::string& help) {
    CLI::Option* opt = app_.add_option("--" + name, target, help)->capture_default_str();
    bindings_.push_back({name, opt, [&target, name](const std::string& text) { target = convert<T>(name, text); }});
  }

  // Applies config values for every flag absent from the command line.
  void apply_config(const Config& config) {
    for (const auto& b : bindings_) {
      if (b.option->count() > 0) continue;
      if (auto value = config.get(b.name)) b.assign(*value);
    }
  }

  bool given(const std::string& name, const Config* config) const {
    for (const auto& b : bindings_) {
      if (b.name == name) return b.option->count() > 0 || (config && config->contains(name));
    }
    return false;
  }

 private:
  struct Binding {
    std::string name;
    CLI::Option* option;
    std::function<void(const std::string&)> assign;
  };
  CLI::App& app_;
  std::vector<Binding> bindings_;
};

SolverOptions solver_options(const Common& c) {
  SolverOptions o;
  o.schedule.restarts = c.restarts;
  o.schedule.steps0 = c.steps0;
  o.schedule.dt0 = c.dt0;
  o.schedule.step_growth = c.step_growth;
  o.schedule.dt_shrink = c.dt_shrink;
  o.schedule.integrator = parse_integrator(c.integrator);
  o.fit_schedule = !c.dt0_given;
  o.ls_tries = c.ls_tries;
  o.relax_steps = c.relax_steps;
  o.threads = c.threads;
  return o;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(c.out);
  if (!file || !(file << text)) throw Error(ErrorCode::IoError, "cannot write " + c.out);
}

void check_format(const Common& c) {
  if (c.format != "csv" && c.format != "json") throw UsageError("--format must be csv or json");
}

json record_json(const BenchRecord& r) {
  json j;
  j["graph_id"] = r.graph_id;
  j["n"] = r.n;
  j["m"] = r.m;
  j["family"] = r.family;
  j["param"] = r.param;
  j["seed"] = r.seed;
  j["solver"] = r.solver;
  j["cut"] = r.cut;
  j["best_known"] = r.best_known ? json(*r.best_known) : json(nullptr);
  j["delta_pct"] = r.delta_pct ? json(*r.delta_pct) : json(nullptr);
  j["time_ms"] = r.time_ms;
  j["steps"] = r.steps;
  j["restarts"] = r.restarts;
  j["status"] = r.status;
  return j;
}

json report_json(const AuditReport& r) {
  json j;
  j["suite"] = std::string(to_string(r.suite));
  j["seed"] = r.seed;
  j["trials"] = r.trials;
  j["passed"] = r.passed;
  j["ok"] = r.ok();
  j["max_violation"] = r.max_violation;
  json metrics = json::object();
  for (const auto& [name, value] : r.metrics) metrics[name] = value;
  j["metrics"] = metrics;
  json failures = json::array();
  for (const AuditFailure& f : r.failures) {
    failures.push_back({{"trial", f.trial}, {"instance_seed", f.instance_seed}, {"detail", f.detail}});
  }
  j["failures"] = failures;
  return j;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// --- subcommands ----------------------------------------------------------------

int cmd_gen(const Common& c, const std::string& family, std::size_t n, const std::string& param,
            std::uint64_t seed, const std::string& path) {
  Graph g;
  if (family == "er") {
    if (param == "-") throw UsageError("er needs an edge probability");
    g = gen_erdos_renyi(n, convert<double>("p", param), seed);
  } else if (family == "reg3" || family == "reg4") {
    g = gen_d_regular(n, family == "reg3" ? 3 : 4, seed);
  } else {
    throw UsageError("unknown family '" + family + "' (er, reg3, reg4)");
  }
  const std::string target = path.empty() ? c.out : path;
  if (target.empty()) {
    std::cout << format_graph(g);
    return kExitOk;
  }
  write_graph(g, target);
  std::cout << "n " << g.num_nodes() << " m " << g.num_edges() << "\n";
  return kExitOk;
}

int cmd_solve(const Common& c, const std::string& path, const std::string& solver_name) {
  check_format(c);
  const SolverKind solver = parse_solver(solver_name);
  const Graph g = read_graph(path);
  const SolverOptions options = solver_options(c);
  if (!options.fit_schedule && solver != SolverKind::Ls1 && solver != SolverKind::Ls2 &&
      solver != SolverKind::Brute) {
    options.schedule.validate(g);
  }

  BenchRecord r;
  r.graph_id = std::filesystem::path(path).stem().string();
  r.n = g.num_nodes();
  r.m = g.num_edges();
  r.family = "file";
  r.param = "-";
  r.seed = c.seed;
  r.solver = solver_name;
  const auto start = std::chrono::steady_clock::now();
  const SolveOutcome out = run_solver(g, solver, options, c.seed);
  r.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  r.cut = out.cut;
  r.steps = out.steps;
  r.restarts = out.restarts;
  if (out.exact) r.best_known = out.cut;

  emit(c, c.format == "json" ? record_json(r).dump() + "\n" : format_bench_csv({r}));
  return kExitOk;
}

int cmd_bench(const Common& c, const std::string& families, const std::string& sizes, const std::string& seeds,
              const std::string& solvers, const std::string& svg_path, bool no_timing) {
  check_format(c);
  SweepSpec spec;
  for (const auto& f : split_list(families)) spec.families.push_back(parse_family(f));
  for (const auto& s : split_list(sizes)) spec.sizes.push_back(convert<std::size_t>("sizes", s));
  for (const auto& s : split_list(seeds)) spec.seeds.push_back(convert<std::uint64_t>("seeds", s));
  for (const auto& s : split_list(solvers)) spec.solvers.push_back(parse_solver(s));
  if (spec.cell_count() == 0) throw UsageError("empty sweep: families, sizes, seeds and solvers must be non-empty");
  spec.options = solver_options(c);
  spec.options.schedule.early_exit = false;  // fixed step count per restart for timing
  spec.threads = c.threads;

  const std::vector<BenchRecord> rows = run_sweep(spec);
  if (c.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      json j = record_json(r);
      if (no_timing) j["time_ms"] = nullptr;
      arr.push_back(j);
    }
    emit(c, arr.dump(2) + "\n");
  } else {
    emit(c, format_bench_csv(rows, !no_timing));
  }
  if (!svg_path.empty()) {
    std::ofstream svg(svg_path);
    if (!svg || !(svg << render_svg(rows))) throw Error(ErrorCode::IoError, "cannot write " + svg_path);
  }

  std::size_t ok = 0;
  for (const auto& r : rows) ok += r.ok() ? 1 : 0;
  std::ostream& log = c.out.empty() ? std::cerr : std::cout;
  log << "rows " << rows.size() << " ok " << ok << "\n";
  for (SolverKind s : spec.solvers) {
    const std::string name(to_string(s));
    if (!no_timing) {
      if (const auto e = fit_time_exponent(rows, name)) log << "time_exponent " << name << " " << *e << "\n";
    }
    if (const auto d = median_abs_delta(rows, name)) log << "median_abs_delta_pct " << name << " " << *d << "\n";
  }
  return 10 * ok >= 9 * rows.size() ? kExitOk : kExitViolation;
}

int cmd_audit(const Common& c, const std::string& suite_name, std::optional<std::uint64_t> seed, std::size_t trials) {
  check_format(c);
  std::vector<AuditSuite> suites;
  if (suite_name == "all") {
    suites = all_audit_suites();
  } else {
    suites.push_back(parse_audit_suite(suite_name));
  }
  bool ok = true;
  std::string text;
  json arr = json::array();
  for (AuditSuite s : suites) {
    const AuditReport r = run_audit(s, {seed.value_or(c.seed), trials, c.threads});
    ok = ok && r.ok();
    if (c.format == "json") {
      arr.push_back(report_json(r));
    } else {
      text += format_report_text(r);
    }
  }
  if (c.format == "json") text = (arr.size() == 1 ? arr[0] : arr).dump(2) + "\n";
  emit(c, text);
  return ok ? kExitOk : kExitViolation;
}

SpinState parse_spins(const std::string& text, std::size_t n) {
  std::vector<std::int8_t> spins;
  for (char ch : text) {
    if (ch == '+' || ch == '1') {
      spins.push_back(1);
    } else if (ch == '-' || ch == '0') {
      spins.push_back(-1);
    } else {
      throw UsageError("spins must be written with '+' and '-'");
    }
  }
  if (spins.size() != n) throw UsageError("spin string length differs from node count");
  return SpinState(std::move(spins));
}

std::string spins_string(const SpinState& s) {
  std::string out;
  for (std::size_t m = 0; m < s.size(); ++m) out.push_back(s[m] > 0 ? '+' : '-');
  return out;
}

int cmd_oracle(const Common& c, const std::string& check, const std::string& path, const std::string& spins,
               std::size_t samples, const std::string& model, double h) {
  check_format(c);
  const Graph g = read_graph(path);
  json j;
  j["check"] = check;
  bool ok = true;
  if (check == "maxcut") {
    const MaxCut best = brute_force_maxcut(g, c.threads);
    j["cut"] = best.cut;
    j["sigma"] = spins_string(best.sigma);
  } else if (check == "identities") {
    const IdentityReport r = verify_identities(g, samples, c.seed);
    j["samples"] = r.samples;
    j["edge_split"] = r.edge_split;
    j["sx_objective"] = r.sx_objective;
    j["scaling"] = r.scaling;
    j["cut_variation"] = r.cut_variation;
    j["max_violation"] = r.max_violation();
    ok = r.max_violation() <= 1e-12;
  } else if (check == "saddle") {
    Rng rng(c.seed);
    const SpinState s = spins.empty() ? SpinState::random(g.num_nodes(), rng) : parse_spins(spins, g.num_nodes());
    const SaddleReport r = saddle_probe(g, s);
    j["sigma"] = spins_string(s);
    j["kind"] = std::string(to_string(r.kind));
    j["cut"] = r.cut;
    j["max_cut"] = r.max_cut;
    j["slope_down"] = r.slope_down;
    j["expected_down"] = r.expected_down;
    j["slope_up"] = r.slope_up;
    j["expected_up"] = r.expected_up;
    j["consistent"] = r.consistent;
    ok = r.consistent;
  } else if (check == "gradients") {
    Rng rng(c.seed);
    const ModelKind kind = parse_model(model);
    const ContinuousState xi = random_continuous_state(g.num_nodes(), rng);
    const double error = finite_diff_check(g, xi, kind, h);
    j["model"] = model;
    j["h"] = h;
    j["max_error"] = error;
    ok = error <= 1e-6;
  } else {
    throw UsageError("unknown oracle check '" + check + "' (maxcut, identities, saddle, gradients)");
  }
  j["ok"] = ok;

  if (c.format == "json") {
    emit(c, j.dump(2) + "\n");
  } else {
    std::string text;
    for (const auto& [key, value] : j.items()) {
      text += key + " " + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
    }
    emit(c, text);
  }
  return ok ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Max-cut solvers built on the GW2 dynamical Ising machine"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  Options opts(app);
  opts.add("seed", c.seed, "Master seed");
  opts.add("threads", c.threads, "Worker threads");
  opts.add("restarts", c.restarts, "GW2 restarts");
  opts.add("steps0", c.steps0, "Time slices in the first restart");
  opts.add("dt0", c.dt0, "Initial time step (lowered to fit the graph when not given)");
  opts.add("step-growth", c.step_growth, "Per-restart growth of the slice count");
  opts.add("dt-shrink", c.dt_shrink, "Per-restart shrink of the time step");
  opts.add("integrator", c.integrator, "GW2 integrator: euler or exact");
  opts.add("ls-tries", c.ls_tries, "Random starts for local search");
  opts.add("relax-steps", c.relax_steps, "Relaxation steps before the GW2 stage");
  opts.add("out", c.out, "Output file (stdout when empty)");
  opts.add("format", c.format, "Output format: csv or json");
  app.add_option("--config", c.config_path, "key=value file with defaults for the flags above");

  std::string family;
  std::string param;
  std::string path;
  std::size_t n = 0;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("family", family, "er, reg3 or reg4")->required();
  gen->add_option("n", n, "Node count")->required();
  gen->add_option("param", param, "Edge probability for er, '-' for regular families")->required();
  gen->add_option("gen_seed", gen_seed, "Instance seed")->required();
  gen->add_option("path", path, "Output edge-list file");

  std::string solver = "gw2";
  auto* solve = app.add_subcommand("solve", "Run one solver on an edge-list file");
  solve->add_option("graph", path, "Edge-list file")->required();
  solve->add_option("--solver", solver, "gw2, tr_gw2, sdp_gw2, ls1, ls2 or brute")->capture_default_str();

  std::string families = "er:0.1";
  std::string sizes;
  std::string seeds = "1";
  std::string solvers = "gw2,ls2";
  std::string svg;
  bool no_timing = false;
  auto* bench = app.add_subcommand("bench", "Run a benchmark sweep and write CSV");
  bench->add_option("--families", families, "Comma list: er:<p>, reg3, reg4")->capture_default_str();
  bench->add_option("--sizes", sizes, "Comma list of node counts");
  bench->add_option("--seeds", seeds, "Comma list of instance seeds")->capture_default_str();
  bench->add_option("--solvers", solvers, "Comma list of solvers")->capture_default_str();
  bench->add_option("--svg", svg, "Also write a log-log scatter plot");
  bench->add_flag("--no-timing", no_timing, "Leave time_ms empty (for diffing runs)");

  std::string suite;
  std::optional<std::uint64_t> audit_seed;
  std::size_t trials = 100;
  auto* audit = app.add_subcommand("audit", "Run a property suite");
  audit->add_option("suite", suite, "identities, thm3, thm4, thm5, exactness, gradients, local-search or all")
      ->required();
  audit->add_option("audit_seed", audit_seed, "Master seed (overrides --seed)");
  audit->add_option("trials", trials, "Trial count")->capture_default_str();

  std::string check;
  std::string spins;
  std::size_t samples = 1000;
  std::string model = "sdp";
  double h = 1e-5;
  auto* oracle = app.add_subcommand("oracle", "Ground-truth checks on one instance");
  oracle->add_option("check", check, "maxcut, identities, saddle or gradients")->required();
  oracle->add_option("graph", path, "Edge-list file")->required();
  oracle->add_option("--spins", spins, "Binary state for saddle, e.g. +-+-");
  oracle->add_option("--samples", samples, "Samples for identities")->capture_default_str();
  oracle->add_option("--model", model, "sdp or tr for gradients")->capture_default_str();
  oracle->add_option("--fd-step", h, "Finite-difference step")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    std::optional<Config> config;
    if (!c.config_path.empty()) {
      config = Config::load(c.config_path);
      opts.apply_config(*config);
    }
    c.dt0_given = opts.given("dt0", config ? &*config : nullptr);
    if (c.threads < 1) throw UsageError("--threads must be at least 1");

    if (*gen) return cmd_gen(c, family, n, param, gen_seed, path);
    if (*solve) return cmd_solve(c, path, solver);
    if (*bench) return cmd_bench(c, families, sizes, seeds, solvers, svg, no_timing);
    if (*audit) return cmd_audit(c, suite, audit_seed, trials);
    if (*oracle) return cmd_oracle(c, check, path, spins, samples, model, h);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
