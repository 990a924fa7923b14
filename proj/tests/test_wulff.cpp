#include <cmath>

#include <gtest/gtest.h>

#include "sessile/io.hpp"
#include "sessile/wulff.hpp"

using namespace sessile;

namespace {

SurfaceTension with_h(HSpec h) { return SurfaceTension(3, PhiSpec{}, h); }

// Area of {h* <= 1} in polar coordinates: (1/2) int rho(theta)^2 with
// rho = 1 / h*(direction); for h = l^p the dual is l^q, 1/p + 1/q = 1.
double dual_ball_area(double q, int n = 200000) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double th = 2 * M_PI * (i + 0.5) / n;
    const double norm = std::pow(std::pow(std::fabs(std::cos(th)), q) + std::pow(std::fabs(std::sin(th)), q), 1.0 / q);
    s += 0.5 / (norm * norm);
  }
  return s * 2 * M_PI / n;
}

}  // namespace

TEST(Wulff, EuclidDisk) {
  const WulffBody K = build_wulff_body(with_h({HFamily::euclid}), 1024);
  EXPECT_NEAR(K.area(), M_PI, 1e-3 * M_PI);
  EXPECT_NEAR(K.aniso_perimeter, 2 * M_PI, 2e-3 * M_PI);
  EXPECT_NEAR(K.lambda, 2.0, 1e-12);
  EXPECT_TRUE(is_convex(K.geometry));
}

TEST(Wulff, L1GivesSquare) {
  const WulffBody K = build_wulff_body(with_h({HFamily::lp, 1.0}), 1024);
  EXPECT_NEAR(K.area(), 4.0, 1e-9);
  EXPECT_NEAR(K.aniso_perimeter, 8.0, 1e-9);
  EXPECT_NEAR(K.lambda, 2.0, 1e-12);
}

TEST(Wulff, L3MatchesDualBallQuadrature) {
  const WulffBody K = build_wulff_body(with_h({HFamily::lp, 3.0}), 1024);
  EXPECT_NEAR(K.area(), dual_ball_area(1.5), 1e-3 * K.area());
}

TEST(Wulff, RegularizedL1IsSquarePlusDisk) {
  // {h* <= 1} for |x|_1 + e|x|_2 is the square plus the disk of radius e
  const double e = 0.25;
  const WulffBody K = build_wulff_body(with_h({HFamily::l1reg, 1.0, e}), 4096);
  EXPECT_NEAR(K.area(), 4.0 + 8.0 * e + M_PI * e * e, 1e-5);
}

TEST(Wulff, LambdaIsSliceDimension) {
  for (const std::string& name : preset_names())
    for (int M : {64, 1024, 4096}) EXPECT_NEAR(build_wulff_body(preset(name), M).lambda, 2.0, 1e-12) << name;
}

TEST(Wulff, InvalidNormalCountThrows) { EXPECT_THROW(build_wulff_body(SurfaceTension(), 2), std::exception); }

TEST(Wulff, AlphaEuclid) {
  const SurfaceTension f;
  EXPECT_NEAR(wulff_alpha(f, 0.0), 1.0, 1e-12);
  EXPECT_NEAR(wulff_alpha(f, 1.0), 0.0, 1e-12);
  EXPECT_NEAR(wulff_alpha(f, 0.6), 0.8, 1e-10);
  EXPECT_EQ(wulff_alpha(f, 1.5), 0.0);
  for (double t = -0.95; t < 0.96; t += 0.05) EXPECT_NEAR(wulff_alpha(f, t), std::sqrt(1 - t * t), 1e-9);
}

TEST(Wulff, BoundaryEuclidIsCircle) {
  const SurfaceTension f;
  for (double th = -1.5; th <= 1.5; th += 0.1) {
    const WulffPoint p = wulff_boundary(f, th);
    EXPECT_NEAR(p.radius, std::cos(th), 1e-12);
    EXPECT_NEAR(p.height, std::sin(th), 1e-12);
    EXPECT_NEAR(wulff_theta_at_height(f, p.height), th, 1e-9);
  }
}

TEST(Wulff, BoundaryAgreesWithAlpha) {
  for (const std::string& name : preset_names()) {
    const SurfaceTension f = preset(name);
    for (double th = -1.4; th <= 1.4; th += 0.2) {
      const WulffPoint p = wulff_boundary(f, th);
      EXPECT_NEAR(wulff_alpha(f, p.height), p.radius, 1e-8) << name << " theta " << th;
    }
  }
}

TEST(Wulff, VerticalExtent) {
  const SurfaceTension f(3, {PhiFamily::weighted, 2.0, 4.0}, {});
  EXPECT_NEAR(wulff_top(f), 2.0, 1e-14);
  EXPECT_NEAR(wulff_bottom(f), -2.0, 1e-14);
}

TEST(Wulff, ProfileIsConcave) {
  for (const std::string& name : preset_names()) {
    const WulffProfile w = wulff_profile(preset(name), 512);
    EXPECT_LE(w.max_second_difference(), 1e-12) << name;
  }
}
