#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sessile/error.hpp"
#include "sessile/io.hpp"
#include "sessile/tension.hpp"

using namespace sessile;

namespace {

SurfaceTension pnorm(double p, HSpec h = {}) { return SurfaceTension(3, {PhiFamily::pnorm, p}, h); }

}  // namespace

TEST(Tension, EvalFMatchesNorms) {
  const double x[] = {3.0, 4.0, 0.0};
  EXPECT_NEAR(pnorm(2.0).eval_f(x), 5.0, 1e-14);
  const double zero[] = {0.0, 0.0, 0.0};
  EXPECT_EQ(pnorm(3.7).eval_f(zero), 0.0);
  const double ones[] = {1.0, 1.0, 1.0};
  EXPECT_NEAR(pnorm(3.0, {HFamily::lp, 3.0}).eval_f(ones), std::cbrt(3.0), 1e-14);
}

TEST(Tension, EuclidPartialsClosedForm) {
  const SurfaceTension f;
  PhiPartials d = f.phi_partials(0.0, 1.0);
  EXPECT_NEAR(d.d1, 0.0, 1e-15);
  EXPECT_NEAR(d.d2, 1.0, 1e-15);
  EXPECT_NEAR(d.d11, 1.0, 1e-15);
  // s/rho, t/rho, t^2/rho^3 with rho = 5
  d = f.phi_partials(3.0, 4.0);
  EXPECT_NEAR(d.d1, 0.6, 1e-15);
  EXPECT_NEAR(d.d2, 0.8, 1e-15);
  EXPECT_NEAR(d.d11, 16.0 / 125.0, 1e-15);
}

TEST(Tension, QuarticNormFlatAtPole) {
  const PhiPartials d = pnorm(4.0).phi_partials(0.0, 1.0);
  EXPECT_NEAR(d.d1, 0.0, 1e-15);
  EXPECT_NEAR(d.d2, 1.0, 1e-15);
  EXPECT_NEAR(d.d11, 0.0, 1e-15);
}

TEST(Tension, DegeneratePointThrows) {
  try {
    SurfaceTension().phi_partials(0.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::degenerate_point);
  }
}

TEST(Tension, ClosedFormPartialsAgreeWithDifferences) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const std::string& name : preset_names()) {
    const SurfaceTension f = preset(name);
    for (int k = 0; k < 200; ++k) {
      const double s = std::fabs(u(rng)) + 0.1, t = std::copysign(std::fabs(u(rng)) + 0.1, u(rng));
      const PhiPartials d = f.phi_partials(s, t);
      const double h = 1e-5;
      const double d1 = (f.phi(s + h, t) - f.phi(s - h, t)) / (2 * h);
      const double d2 = (f.phi(s, t + h) - f.phi(s, t - h)) / (2 * h);
      const double d11 = (f.phi(s + h, t) - 2 * f.phi(s, t) + f.phi(s - h, t)) / (h * h);
      EXPECT_NEAR(d.d1, d1, 1e-8) << name;
      EXPECT_NEAR(d.d2, d2, 1e-8) << name;
      EXPECT_NEAR(d.d11, d11, 2e-4 * (1 + std::fabs(d11))) << name;
    }
  }
}

TEST(Tension, PositiveHomogeneity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0), l(0.01, 50.0);
  for (const std::string& name : preset_names()) {
    const SurfaceTension f = preset(name);
    for (int k = 0; k < 500; ++k) {
      const double s = std::fabs(u(rng)), t = u(rng), lam = l(rng);
      EXPECT_NEAR(f.phi(lam * s, lam * t), lam * f.phi(s, t), 1e-10 * lam * f.phi(s, t)) << name;
      const double x[] = {u(rng), u(rng)};
      EXPECT_GT(f.h(Vec2{x[0] / std::hypot(x[0], x[1]), x[1] / std::hypot(x[0], x[1])}), 0.0);
    }
  }
}

TEST(Tension, ConvexAlongSegments) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-3.0, 3.0), w(0.0, 1.0);
  for (const std::string& name : preset_names()) {
    const SurfaceTension f = preset(name);
    for (int k = 0; k < 500; ++k) {
      const double a[] = {u(rng), u(rng), u(rng)}, b[] = {u(rng), u(rng), u(rng)};
      const double l = w(rng);
      const double m[] = {l * a[0] + (1 - l) * b[0], l * a[1] + (1 - l) * b[1], l * a[2] + (1 - l) * b[2]};
      EXPECT_LE(f.eval_f(m), l * f.eval_f(a) + (1 - l) * f.eval_f(b) + 1e-12) << name;
    }
  }
}

TEST(Tension, DualNorms) {
  const SurfaceTension l1(3, {}, {HFamily::lp, 1.0});
  EXPECT_NEAR(l1.h_star({1.0, 0.0}), 1.0, 1e-9);
  EXPECT_NEAR(l1.h_star({1.0, 1.0}), 1.0, 1e-9);  // sup norm
  const SurfaceTension l2;
  for (double a : {0.0, 0.4, 1.3, 2.9}) EXPECT_NEAR(l2.h_star({std::cos(a), std::sin(a)}), 1.0, 1e-12);
}

TEST(Tension, DualIsSupportOfUnitBall) {
  // h*(x) = max over h(y) <= 1 of x . y, sampled on a fine circle
  for (const std::string& name : preset_names()) {
    const SurfaceTension f = preset(name);
    for (double a : {0.1, 0.7, 2.0, 4.0}) {
      const Vec2 x{std::cos(a), std::sin(a)};
      double best = 0.0;
      for (int i = 0; i < 20000; ++i) {
        const double th = 2 * M_PI * i / 20000.0;
        const Vec2 y{std::cos(th), std::sin(th)};
        best = std::max(best, dot(x, y) / f.h(y));
      }
      EXPECT_NEAR(f.h_star(x), best, 1e-6) << name;
    }
  }
}

TEST(Tension, Admissibility) {
  EXPECT_TRUE(pnorm(1.5).check_admissible().admissible);
  EXPECT_TRUE(pnorm(2.0).check_admissible().admissible);
  const SurfaceTension manhattan(3, {PhiFamily::manhattan}, {});
  const AdmissibilityReport r = manhattan.check_admissible();
  EXPECT_FALSE(r.admissible);
  EXPECT_NEAR(r.d1phi_pole_up, 1.0, 1e-9);
  for (const std::string& name : preset_names()) EXPECT_TRUE(preset(name).check_admissible().admissible) << name;
}

TEST(Tension, OmegaRange) {
  const auto [lo, hi] = SurfaceTension().omega_range();
  EXPECT_DOUBLE_EQ(lo, -1.0);
  EXPECT_DOUBLE_EQ(hi, 1.0);
  EXPECT_FALSE(SurfaceTension().omega_in_range(1.0));
  EXPECT_TRUE(SurfaceTension().omega_in_range(-0.999));
}

TEST(Tension, InvertD1PhiRoundTrip) {
  for (const std::string& name : preset_names()) {
    const SurfaceTension f = preset(name);
    for (double s : {0.0, 1e-6, 0.3, 2.0, 40.0}) {
      const double y = f.phi_partials(s, 2.0).d1;
      EXPECT_NEAR(f.invert_d1phi(2.0, y), s, 1e-9 * (1 + s)) << name;
    }
  }
}

TEST(Tension, JsonRoundTrip) {
  for (const std::string& name : preset_names()) {
    const SurfaceTension f = preset(name);
    const SurfaceTension g = tension_from_json(tension_to_json(f));
    EXPECT_EQ(g.describe(), f.describe());
    EXPECT_DOUBLE_EQ(g.phi(0.3, -0.7), f.phi(0.3, -0.7));
  }
}

TEST(Tension, JsonRejectsUnknownFamily) {
  try {
    tension_from_json(R"({"N": 3, "phi": {"family": "crystal"}})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_input);
  }
  EXPECT_THROW(tension_from_json("{not json"), Error);
}
