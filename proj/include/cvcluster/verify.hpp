#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cvcluster {

struct CheckResult {
  std::string name;
  bool passed = false;
  /** Largest deviation observed (check-specific meaning). */
  double defect = 0;
  double tolerance = 0;
  std::string detail;
};

struct VerificationReport {
  std::string suite;
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<CheckResult> checks;

  int failures() const;
  bool all_passed() const { return failures() == 0; }
};

/** Suites: "core", "rules", "boundary", "pipelines", "all". */
std::vector<std::string> suite_names();
bool is_suite(const std::string& name);

/**
 * Runs one named suite. All randomness derives from the seed, and every
 * traversal is ordered, so two runs with equal arguments produce identical
 * reports. `trials` scales the randomized checks (0 picks the default).
 */
VerificationReport run_suite(const std::string& suite, std::uint64_t seed, int trials = 0);

/** Deterministic JSON rendering of a report (17 significant digits). */
std::string serialize_report(const VerificationReport& report);

// Individual checks (exposed for the acceptance harness).
CheckResult check_exponential_identity(std::uint64_t seed, int trials);
CheckResult check_cluster_closed_forms(std::uint64_t seed, int trials);
CheckResult check_clipping(std::uint64_t seed);
CheckResult check_contamination_locality(std::uint64_t seed);
CheckResult check_rule_equivalence_random(std::uint64_t seed, int trials);
CheckResult check_rule_involutions(std::uint64_t seed, int trials);
CheckResult check_wire_pipeline();
CheckResult check_wire_targets();
CheckResult check_lattice_pipeline();
CheckResult check_lattice_targets();
CheckResult check_lattice_width_validation();
CheckResult check_live_mode_bounds();
CheckResult check_oracle_agreement(std::uint64_t seed, int trials);
CheckResult check_report_determinism(std::uint64_t seed);

}  // namespace cvcluster
