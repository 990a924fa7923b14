#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sessile/profile.hpp"

namespace sessile {

struct Metric {
  std::string name;
  double value = 0.0;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string summary;
  std::vector<Metric> metrics;
  std::vector<std::string> failures;  // first few offending cases
  double seconds = 0.0;
};

struct SuiteOptions {
  std::uint64_t seed = 0;
  int trials = 0;  // 0 = suite default
};

// symmetrization, jensen, lower_bound, wulff, el_order, young, cross_solver,
// monotonicity, convexity, barycenter, gradient, bridge
std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, const SuiteOptions& opts = {});

// Max |r_a - r_b| over the union of both knot sets, each profile read as
// piecewise linear and zero above its top.
double linf_distance(const Profile& a, const Profile& b);

}  // namespace sessile
