#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gwcut/dynamics.hpp"
#include "gwcut/graph.hpp"
#include "gwcut/objective.hpp"

namespace gwcut {

enum class SolverKind { Gw2, TrGw2, SdpGw2, Ls1, Ls2, Brute };

std::string_view to_string(SolverKind solver);
SolverKind parse_solver(std::string_view name);

struct SolverOptions {
  Schedule schedule;
  // Lower dt0 to fit the graph (Schedule::fitted_to) before running.
  bool fit_schedule = true;
  std::size_t ls_tries = 100;
  std::size_t relax_steps = 1000;
  int threads = 1;
};

struct SolveOutcome {
  SpinState sigma;
  double cut = 0.0;
  std::size_t steps = 0;
  int restarts = 0;
  bool exact = false;  // cut is the proven maximum
};

SolveOutcome run_solver(const Graph& g, SolverKind solver, const SolverOptions& options, std::uint64_t seed);

// One CSV row. Optional columns are written empty when absent.
struct BenchRecord {
  std::string graph_id;
  std::size_t n = 0;
  std::size_t m = 0;
  std::string family;  // er | reg3 | reg4 | file
  std::string param;   // p for er, d for regular families, '-' otherwise
  std::uint64_t seed = 0;
  std::string solver;
  double cut = 0.0;
  std::optional<double> best_known;
  std::optional<double> delta_pct;
  double time_ms = 0.0;
  std::size_t steps = 0;
  int restarts = 0;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

inline constexpr std::string_view kBenchCsvHeader =
    "graph_id,n,m,family,param,seed,solver,cut,best_known,delta_pct,time_ms,steps,restarts,status";

std::string format_bench_csv(const std::vector<BenchRecord>& records, bool include_timing = true);
// Throws ParseError on malformed input.
std::vector<BenchRecord> parse_bench_csv(std::string_view text);

struct FamilySpec {
  std::string family;  // er | reg3 | reg4
  double p = 0.1;      // er only
};

// "er:0.1", "er" (p = 0.1), "reg3", "reg4".
FamilySpec parse_family(std::string_view text);
Graph generate_instance(const FamilySpec& family, std::size_t n, std::uint64_t seed);
std::string graph_id(const FamilySpec& family, std::size_t n, std::uint64_t seed);

struct SweepSpec {
  std::vector<FamilySpec> families;
  std::vector<std::size_t> sizes;
  std::vector<std::uint64_t> seeds;
  std::vector<SolverKind> solvers;
  SolverOptions options;
  int threads = 1;

  std::size_t cell_count() const { return families.size() * sizes.size() * seeds.size() * solvers.size(); }
};

// Reference solver for the discrepancy column: ls2, else ls1, else brute.
std::optional<SolverKind> reference_solver(const std::vector<SolverKind>& solvers);

// Runs every cell; rows come back in sweep order (family, size, seed,
// solver) whatever the thread count. Each cell generates its instance from
// its own seed and runs the solver with that seed. Failures become rows
// with a non-ok status.
std::vector<BenchRecord> run_sweep(const SweepSpec& spec);

// Least-squares slope of log(time_ms) against log(m) over ok rows of
// `solver`; empty if fewer than two distinct edge counts are available.
std::optional<double> fit_time_exponent(const std::vector<BenchRecord>& records, std::string_view solver);

// Median |delta_pct| over ok rows of `solver` that carry a discrepancy.
std::optional<double> median_abs_delta(const std::vector<BenchRecord>& records, std::string_view solver);

// Log-log scatter of time against edge count per solver with a
// discrepancy-vs-edges inset when any row carries delta_pct.
std::string render_svg(const std::vector<BenchRecord>& records);

}  // namespace gwcut
