#pragma once
#include <string>
#include <vector>

namespace bil {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  bool pass = true;
  std::vector<CheckResult> checks;
};

// Suites: circle-closed-forms, circle-wave-invariant, ellipse-cross-pipeline,
// eight-orbits, lazutkin-defect, angle-band, stationary-phase-order,
// poncelet, ft-identity, properties. "circle" = the two circle suites,
// "all" = everything.
std::vector<SuiteResult> run_verify(const std::string& suite);

std::string format_verify_table(const std::vector<SuiteResult>& results);

bool all_passed(const std::vector<SuiteResult>& results);

}  // namespace bil
