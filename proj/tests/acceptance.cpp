// Acceptance gate: runs every acceptance criterion and prints one PASS/FAIL
// line per criterion. Exits nonzero if any criterion fails.
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "verify.hpp"

namespace {

struct Criterion {
  const char* label;
  const char* suite;
};

const std::vector<Criterion> kCriteria = {
    {"1. circle closed forms (t_j, omega, domega1/dq')", "circle-closed-forms"},
    {"2. wave-invariant circle oracle", "circle-wave-invariant"},
    {"3. cross-pipeline ellipse agreement + circle limit",
     "ellipse-cross-pipeline"},
    {"4. 8-orbit theorem realization", "eight-orbits"},
    {"5. Lazutkin Jacobian structure + symplecticity", "lazutkin-defect"},
    {"6. angle-band lemma", "angle-band"},
    {"7. stationary-phase order dichotomy", "stationary-phase-order"},
    {"8. Poncelet/caustic consistency", "poncelet"},
    {"9. homogeneous-FT identity", "ft-identity"},
    {"10. property suites", "properties"},
};

}  // namespace

int main() {
  int failures = 0;
  for (const auto& c : kCriteria) {
    bool pass = false;
    std::string detail;
    try {
      auto results = bil::run_verify(c.suite);
      pass = bil::all_passed(results);
      if (!pass) {
        for (const auto& sr : results)
          for (const auto& ck : sr.checks)
            if (!ck.pass) detail += "\n      failed: " + ck.name +
                                    (ck.detail.empty() ? "" : "  [" +
                                     ck.detail + "]");
      }
    } catch (const std::exception& e) {
      detail = std::string("\n      exception: ") + e.what();
    }
    std::printf("%s  %s%s\n", pass ? "PASS" : "FAIL", c.label, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  if (failures) std::printf("%d of 10 criteria FAILED\n", failures);
  else std::printf("all 10 criteria passed\n");
  return failures ? 1 : 0;
}
