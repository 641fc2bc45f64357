#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gwcut {

enum class AuditSuite { Identities, Rounding, Monotonicity, OptimalRounding, Exactness, Gradients, LocalSearch };

// CLI names: identities, thm3, thm4, thm5, exactness, gradients, local-search.
std::string_view to_string(AuditSuite suite);
AuditSuite parse_audit_suite(std::string_view name);
std::vector<AuditSuite> all_audit_suites();

struct AuditOptions {
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  int threads = 1;
};

struct AuditFailure {
  std::size_t trial = 0;
  std::uint64_t instance_seed = 0;  // derive_seed(seed, trial); regenerates the instance
  std::string detail;
};

struct AuditReport {
  AuditSuite suite = AuditSuite::Identities;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t passed = 0;
  double max_violation = 0.0;
  // Suite-specific figures in a fixed order.
  std::vector<std::pair<std::string, double>> metrics;
  // Every failing trial in trial order.
  std::vector<AuditFailure> failures;

  bool ok() const { return passed == trials; }
  double metric(std::string_view name) const;
};

// Trials are independent and seeded by derive_seed(seed, trial), so the
// report is identical for every thread count.
AuditReport run_audit(AuditSuite suite, const AuditOptions& options);

// Human-readable multi-line summary; contains no timing information.
std::string format_report_text(const AuditReport& report);

}  // namespace gwcut
