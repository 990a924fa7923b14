// Runs every property suite once and prints one PASS/FAIL line per criterion.
#include <cstdio>
#include <map>
#include <string>

#include "sessile/suites.hpp"

int main() {
  using namespace sessile;
  // Wall-clock budgets in seconds; suites without an entry are unbounded.
  const std::map<std::string, double> budget = {{"symmetrization", 120.0}, {"wulff", 10.0}};
  int failed = 0, index = 0;
  for (const std::string& name : suite_names()) {
    ++index;
    SuiteResult r = run_suite(name);
    auto it = budget.find(name);
    if (it != budget.end() && r.seconds > it->second) {
      r.passed = false;
      r.failures.push_back("runtime over budget");
    }
    std::printf("%s %2d %-15s %s [%.2f s]\n", r.passed ? "PASS" : "FAIL", index, name.c_str(), r.summary.c_str(),
                r.seconds);
    for (const std::string& f : r.failures) std::printf("     - %s\n", f.c_str());
    std::fflush(stdout);
    if (!r.passed) ++failed;
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
