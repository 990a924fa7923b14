#pragma once

#include <vector>

namespace sessile {

// Radial description of a symmetric set: the slice at height t is r(t) K_h,
// with r piecewise linear between knots.
struct Profile {
  std::vector<double> t;
  std::vector<double> r;

  size_t size() const { return t.size(); }
  double top() const { return t.empty() ? 0.0 : t.back(); }
  double max_r() const;
  // Linear interpolation; zero outside [t.front(), t.back()].
  double r_at(double s) const;
  // Throws invalid_input unless knots strictly increase from 0 and r >= 0.
  void validate() const;
};

struct GaussRule {
  std::vector<double> x;  // nodes on [0, 1]
  std::vector<double> w;  // weights summing to 1
};

GaussRule gauss_legendre(int n);
const GaussRule& gauss8();

// Exact integral of r^k over a slab of width dt with r linear from r0 to r1.
double slab_power_integral(double r0, double r1, double dt, int k);

}  // namespace sessile
