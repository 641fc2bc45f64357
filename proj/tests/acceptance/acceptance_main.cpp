// Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if any
// criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "gwcut/audit.hpp"
#include "gwcut/bench.hpp"

namespace {

using namespace gwcut;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kSeed = 1;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Timed {
  AuditReport report;
  std::size_t requested = 0;  // trials as passed in; identities reports graphs instead
  double seconds = 0.0;
};

Timed timed_audit(AuditSuite suite, std::size_t trials, int threads = 1) {
  const auto t0 = Clock::now();
  Timed t{run_audit(suite, AuditOptions{kSeed, trials, threads}), trials, 0.0};
  t.seconds = seconds_since(t0);
  return t;
}

int failures = 0;

void verdict(int id, bool pass, const std::string& detail) {
  std::printf("%s %d %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string first_failure(const AuditReport& r) {
  if (r.failures.empty()) return "";
  const auto& f = r.failures.front();
  return fmt("; first failure trial %zu seed %llu: %s", f.trial, static_cast<unsigned long long>(f.instance_seed),
             f.detail.c_str());
}

SweepSpec scaling_sweep(int threads) {
  SweepSpec spec;
  spec.families = {parse_family("er:0.1")};
  spec.sizes = {50, 100, 200, 400};
  spec.seeds = {1, 2, 3};
  spec.solvers = {SolverKind::Gw2, SolverKind::Ls2};
  spec.options.schedule.restarts = 50;
  // Fixed step count per restart so that time measures per-step cost.
  spec.options.schedule.early_exit = false;
  spec.options.ls_tries = 100;
  spec.threads = threads;
  return spec;
}

}  // namespace

int main() {
  std::vector<Timed> audits;

  {
    auto t = timed_audit(AuditSuite::Identities, 10000);
    const bool pass = t.report.ok() && t.report.max_violation <= 1e-12 && t.seconds < 10.0;
    verdict(1, pass,
            fmt("identities: %.0f samples, max violation %.3g (<= 1e-12), %.2f s (< 10 s)%s",
                t.report.metric("samples"), t.report.max_violation, t.seconds, first_failure(t.report).c_str()));
    audits.push_back(std::move(t));
  }
  {
    auto t = timed_audit(AuditSuite::Rounding, 100);
    const bool pass = t.report.ok() && t.seconds < 60.0;
    verdict(2, pass,
            fmt("equal-cut rounding orbits at critical states: %zu/%zu instances, %.0f non-trivial orbits, %.2f s (< 60 s)%s",
                t.report.passed, t.report.trials, t.report.metric("nontrivial_states"), t.seconds,
                first_failure(t.report).c_str()));
    audits.push_back(std::move(t));
  }
  {
    auto t = timed_audit(AuditSuite::Monotonicity, 1000);
    const bool pass = t.report.ok() && t.seconds < 120.0;
    verdict(3, pass,
            fmt("terminal cut >= initial cut: %zu/%zu trials, min gain %.3g, bad flips %.0f, %.2f s (< 120 s)%s",
                t.report.passed, t.report.trials, t.report.metric("stage_min_gain"), t.report.metric("bad_flips"),
                t.seconds, first_failure(t.report).c_str()));
    audits.push_back(std::move(t));
  }
  {
    auto t = timed_audit(AuditSuite::OptimalRounding, 1000);
    const bool pass = t.report.ok() && t.seconds < 180.0;
    verdict(4, pass,
            fmt("terminal cut >= best rounding of start: %zu/%zu trials, min margin %.3g, %.2f s (< 180 s)%s",
                t.report.passed, t.report.trials, t.report.metric("stage_min_margin"), t.seconds,
                first_failure(t.report).c_str()));
    audits.push_back(std::move(t));
  }
  {
    auto t = timed_audit(AuditSuite::Exactness, 200);
    const double rate = t.report.metric("gw2_attain_rate");
    verdict(5, t.report.ok(),
            fmt("no state above brute-force max cut: %zu/%zu instances, max excess %.3g; gw2 attains max cut on %.1f%% "
                "(soft target 80%%, %s), %.2f s%s",
                t.report.passed, t.report.trials, t.report.max_violation, 100.0 * rate,
                rate >= 0.8 ? "met" : "missed", t.seconds, first_failure(t.report).c_str()));
    audits.push_back(std::move(t));
  }
  {
    auto t = timed_audit(AuditSuite::LocalSearch, 1000);
    verdict(6, t.report.ok(),
            fmt("1-opt and 2-opt terminal conditions: %zu/%zu instances, %.2f s%s", t.report.passed, t.report.trials,
                t.seconds, first_failure(t.report).c_str()));
    audits.push_back(std::move(t));
  }
  {
    auto t = timed_audit(AuditSuite::Gradients, 1000);
    const bool pass = t.report.ok() && t.report.max_violation <= 1e-6;
    verdict(7, pass,
            fmt("analytic vs central difference (h=1e-5): %zu/%zu states, sdp max %.3g, triangular max %.3g (<= 1e-6), "
                "%.2f s%s",
                t.report.passed, t.report.trials, t.report.metric("sdp_max_error"), t.report.metric("tr_max_error"),
                t.seconds, first_failure(t.report).c_str()));
    audits.push_back(std::move(t));
  }

  std::vector<BenchRecord> rows;
  {
    const auto t0 = Clock::now();
    rows = run_sweep(scaling_sweep(1));
    const double secs = seconds_since(t0);
    const auto exponent = fit_time_exponent(rows, "gw2");
    const auto delta = median_abs_delta(rows, "gw2");
    std::size_t ok = 0;
    for (const auto& r : rows) ok += r.ok();
    const bool pass = ok == rows.size() && exponent && delta && *delta <= 5.0 && *exponent >= 0.8 &&
                      *exponent <= 1.3 && secs < 900.0;
    verdict(8, pass,
            fmt("er p=0.1 n=50..400 gw2 vs 2-opt x100: median |delta| %.3f%% (<= 5%%), time exponent %.3f (in "
                "[0.8, 1.3]), %zu/%zu rows ok, %.1f s (< 900 s)",
                delta.value_or(NAN), exponent.value_or(NAN), ok, rows.size(), secs));
  }

  {
    const auto t0 = Clock::now();
    std::size_t mismatched = 0;
    std::string first;
    for (const auto& a : audits) {
      const AuditReport again = run_audit(a.report.suite, AuditOptions{kSeed, a.requested, 8});
      if (format_report_text(again) != format_report_text(a.report)) {
        ++mismatched;
        if (first.empty()) first = std::string(to_string(a.report.suite));
      }
    }
    const bool bench_same = format_bench_csv(run_sweep(scaling_sweep(8)), false) == format_bench_csv(rows, false);
    const bool pass = mismatched == 0 && bench_same;
    verdict(9, pass,
            fmt("1 vs 8 threads: %zu/%zu audit reports identical%s%s, bench csv %s, %.1f s", audits.size() - mismatched,
                audits.size(), first.empty() ? "" : " (first mismatch: ", first.empty() ? "" : (first + ")").c_str(),
                bench_same ? "identical" : "differs", seconds_since(t0)));
  }

  std::printf("%s: %d of 9 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
