#include <gtest/gtest.h>

#include <algorithm>

#include "gwcut/bench.hpp"
#include "gwcut/error.hpp"
#include "gwcut/oracle.hpp"

namespace gwcut {
namespace {

SweepSpec small_sweep() {
  SweepSpec spec;
  spec.families = {parse_family("er:0.2"), parse_family("reg3")};
  spec.sizes = {10, 16};
  spec.seeds = {1, 2};
  spec.solvers = {SolverKind::Gw2, SolverKind::Ls2, SolverKind::Brute};
  spec.options.schedule.restarts = 5;
  spec.options.ls_tries = 10;
  return spec;
}

TEST(Bench, SolverNamesRoundTrip) {
  for (auto s : {SolverKind::Gw2, SolverKind::TrGw2, SolverKind::SdpGw2, SolverKind::Ls1, SolverKind::Ls2, SolverKind::Brute})
    EXPECT_EQ(parse_solver(to_string(s)), s);
  EXPECT_THROW(parse_solver("circut"), Error);
}

TEST(Bench, FamiliesAndIds) {
  const FamilySpec er = parse_family("er:0.3");
  EXPECT_EQ(er.family, "er");
  EXPECT_DOUBLE_EQ(er.p, 0.3);
  EXPECT_DOUBLE_EQ(parse_family("er").p, 0.1);
  EXPECT_THROW(parse_family("er:2"), Error);
  EXPECT_THROW(parse_family("grid"), Error);
  const Graph g = generate_instance(parse_family("reg4"), 20, 3);
  for (NodeId m = 0; m < 20; ++m) EXPECT_EQ(g.degree(m), 4U);
  EXPECT_EQ(graph_id(parse_family("er:0.1"), 100, 7), "er_n100_0.1_s7");
}

TEST(Bench, SolversRespectMaxCut) {
  const Graph g = generate_instance(parse_family("er:0.3"), 14, 5);
  const double cmax = brute_force_maxcut(g).cut;
  SolverOptions opt;
  opt.schedule.restarts = 10;
  opt.ls_tries = 10;
  opt.relax_steps = 200;
  for (auto s : {SolverKind::Gw2, SolverKind::TrGw2, SolverKind::SdpGw2, SolverKind::Ls1, SolverKind::Ls2}) {
    const SolveOutcome out = run_solver(g, s, opt, 1);
    EXPECT_LE(out.cut, cmax);
    EXPECT_EQ(cut_size(g, out.sigma), out.cut);
    EXPECT_FALSE(out.exact);
  }
  const SolveOutcome b = run_solver(g, SolverKind::Brute, opt, 1);
  EXPECT_TRUE(b.exact);
  EXPECT_EQ(b.cut, cmax);
}

TEST(Bench, CsvRoundTrip) {
  const auto rows = run_sweep(small_sweep());
  const std::string csv = format_bench_csv(rows);
  EXPECT_EQ(csv.substr(0, kBenchCsvHeader.size()), kBenchCsvHeader);
  const auto back = parse_bench_csv(csv);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].graph_id, rows[i].graph_id);
    EXPECT_EQ(back[i].cut, rows[i].cut);
    EXPECT_EQ(back[i].best_known, rows[i].best_known);
    EXPECT_EQ(back[i].steps, rows[i].steps);
    EXPECT_EQ(back[i].solver, rows[i].solver);
  }
  EXPECT_EQ(format_bench_csv(back, false), format_bench_csv(rows, false));
  EXPECT_THROW(parse_bench_csv("nope\n"), Error);
  EXPECT_THROW(parse_bench_csv(std::string(kBenchCsvHeader) + "\na,b\n"), Error);
}

TEST(Bench, SweepContents) {
  const auto rows = run_sweep(small_sweep());
  ASSERT_EQ(rows.size(), small_sweep().cell_count());
  for (const auto& r : rows) {
    EXPECT_TRUE(r.ok());
    ASSERT_TRUE(r.best_known.has_value());
    EXPECT_LE(r.cut, *r.best_known);
    if (r.solver == "brute") EXPECT_EQ(r.cut, *r.best_known);
    ASSERT_TRUE(r.delta_pct.has_value());
    EXPECT_GE(r.time_ms, 0.0);
  }
  EXPECT_EQ(reference_solver(small_sweep().solvers), SolverKind::Ls2);
  EXPECT_EQ(reference_solver({SolverKind::Gw2}), std::nullopt);
  EXPECT_TRUE(median_abs_delta(rows, "gw2").has_value());
  EXPECT_FALSE(median_abs_delta(rows, "ls1").has_value());
  const std::string svg = render_svg(rows);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Bench, SweepThreadInvariant) {
  SweepSpec spec = small_sweep();
  const std::string a = format_bench_csv(run_sweep(spec), false);
  spec.threads = 8;
  EXPECT_EQ(format_bench_csv(run_sweep(spec), false), a);
}

TEST(Bench, EmptySweepRejected) {
  SweepSpec spec = small_sweep();
  spec.sizes.clear();
  EXPECT_THROW(run_sweep(spec), Error);
}

TEST(Bench, TimeExponentFit) {
  std::vector<BenchRecord> rows;
  for (double m : {100.0, 200.0, 400.0, 800.0}) {
    BenchRecord r;
    r.solver = "gw2";
    r.m = static_cast<std::size_t>(m);
    r.time_ms = 0.01 * m * m;
    rows.push_back(r);
  }
  EXPECT_NEAR(*fit_time_exponent(rows, "gw2"), 2.0, 1e-9);
  EXPECT_FALSE(fit_time_exponent(rows, "ls2").has_value());
  rows.resize(1);
  EXPECT_FALSE(fit_time_exponent(rows, "gw2").has_value());
}

}  // namespace
}  // namespace gwcut
