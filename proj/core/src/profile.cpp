#include "sessile/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sessile/error.hpp"

namespace sessile {

double Profile::max_r() const {
  double m = 0.0;
  for (double v : r) m = std::max(m, v);
  return m;
}

double Profile::r_at(double s) const {
  if (t.empty() || s < t.front() || s > t.back()) return 0.0;
  const auto it = std::upper_bound(t.begin(), t.end(), s);
  if (it == t.end()) return r.back();
  const size_t j = static_cast<size_t>(it - t.begin());
  const double x = (s - t[j - 1]) / (t[j] - t[j - 1]);
  return r[j - 1] + x * (r[j] - r[j - 1]);
}

void Profile::validate() const {
  if (t.size() != r.size() || t.size() < 2)
    throw Error(Errc::invalid_input, "profile needs >= 2 knots and matching columns");
  if (t.front() != 0.0) throw Error(Errc::invalid_input, "profile must start at t = 0");
  for (size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(r[i])) throw Error(Errc::invalid_input, "non-finite profile entry");
    if (r[i] < 0.0) throw Error(Errc::invalid_input, "profile radius must be >= 0");
    if (i > 0 && !(t[i] > t[i - 1])) throw Error(Errc::invalid_input, "profile knots must strictly increase");
  }
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw Error(Errc::invalid_input, "gauss_legendre needs n >= 1");
  GaussRule g;
  g.x.resize(n);
  g.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    g.x[i] = 0.5 * (1.0 - z);
    g.w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
  return g;
}

const GaussRule& gauss8() {
  static const GaussRule rule = gauss_legendre(8);
  return rule;
}

double slab_power_integral(double r0, double r1, double dt, int k) {
  if (k == 0) return dt;
  double acc = 0.0, a = 1.0;
  for (int j = 0; j <= k; ++j) {
    acc += a * std::pow(r1, k - j);
    a *= r0;
  }
  return dt * acc / (k + 1);
}

}  // namespace sessile
