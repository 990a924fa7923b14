#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sessile/error.hpp"
#include "sessile/io.hpp"
#include "sessile/reduced.hpp"
#include "sessile/sets.hpp"

using namespace sessile;

namespace {

Profile cylinder(double rho, double T, int n = 8) {
  Profile p;
  for (int i = 0; i <= n; ++i) {
    p.t.push_back(T * i / n);
    p.r.push_back(rho);
  }
  return p;
}

Profile spherical_cap(double c, int n) {
  // sphere of radius 1 centred at height -c, cut by t >= 0
  Profile p;
  const double T = 1.0 - c;
  for (int i = 0; i <= n; ++i) {
    const double t = T * i / n;
    p.t.push_back(t);
    p.r.push_back(i == n ? 0.0 : std::sqrt(std::max(0.0, 1.0 - (t + c) * (t + c))));
  }
  return p;
}

}  // namespace

TEST(Reduced, OmegaRangeMessageNamesInterval) {
  try {
    DropModel(SurfaceTension(), 1.5, 64);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::omega_out_of_range);
    EXPECT_NE(std::string(e.what()).find("(-1"), std::string::npos);
  }
}

TEST(Reduced, ZeroProfileHasZeroEnergy) {
  const DropModel m(SurfaceTension(), -0.5, 256);
  const Profile p{{0, 1, 2}, {0, 0, 0}};
  EXPECT_EQ(reduced_energy(m, p).total, 0.0);
  EXPECT_EQ(reduced_volume(m, p), 0.0);
}

TEST(Reduced, CylinderMatchesClosedForm) {
  const DropModel m(SurfaceTension(), -0.4, 4096);
  const double rho = 0.7, T = 1.3;
  const EnergyBreakdown e = reduced_energy(m, cylinder(rho, T));
  const double K = m.area();
  // |K|(omega rho^2 + Lambda rho T + rho^2 T^2/2 + rho^2) with Lambda = 2
  EXPECT_NEAR(e.total, K * (-0.4 * rho * rho + 2 * rho * T + rho * rho * T * T / 2 + rho * rho), 1e-12);
  const double exact = M_PI * rho * rho * 0.6 + 2 * M_PI * rho * T + M_PI * rho * rho * T * T / 2;
  EXPECT_NEAR(e.total, exact, 1e-5 * exact);
  SlicedSet s = lift_profile(cylinder(rho, T), m.body());
  EXPECT_NEAR(energy(s, m.tension(), -0.4).total, e.total, 1e-8 * e.total);
  EXPECT_NEAR(reduced_volume(m, cylinder(rho, T)), K * rho * rho * T, 1e-12);
}

TEST(Reduced, ConeVolume) {
  const DropModel m(SurfaceTension(), -0.4, 4096);
  EXPECT_NEAR(reduced_volume(m, Profile{{0, 3}, {1, 0}}), M_PI, 1e-5);
  EXPECT_NEAR(volume_between(m, Profile{{0, 3}, {1, 0}}, 0.0, 1.5), m.area() * 1.5 * (1 - 0.5 + 0.25 / 3), 1e-12);
}

TEST(Reduced, GradientMatchesDifferences) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const char* name : {"euclid", "pnorm3-l3"}) {
    const DropModel m(preset(name), 0.2, 512);
    for (int k = 0; k < 10; ++k) {
      Profile p;
      double t = 0;
      for (int i = 0; i < 32; ++i) {
        p.t.push_back(t);
        p.r.push_back(0.2 + u(rng));
        t += 0.02 + 0.1 * u(rng);
      }
      const EnergyGradient g = energy_gradient(m, p);
      for (size_t i = 0; i < p.size(); ++i) {
        const double h = 1e-6;
        Profile a = p, b = p;
        a.r[i] += h;
        b.r[i] -= h;
        const double fd = (reduced_energy(m, a).total - reduced_energy(m, b).total) / (2 * h);
        const double fv = (reduced_volume(m, a) - reduced_volume(m, b)) / (2 * h);
        EXPECT_NEAR(g.dE[i], fd, 1e-6 * (1 + std::fabs(fd))) << name;
        EXPECT_NEAR(g.dV[i], fv, 1e-7 * (1 + std::fabs(fv))) << name;
      }
    }
  }
}

TEST(Reduced, CylinderIsNotCritical) {
  const DropModel m(SurfaceTension(), -0.4, 512);
  const Profile p = cylinder(0.7, 1.3, 32);
  const ElResidual el = el_residual(m, p, lambda_estimate(m, p));
  EXPECT_GT(el.max_abs(p.top()), 0.1);
}

TEST(Reduced, YoungFunctionalEuclid) {
  // -d2 phi(2, -2 s) = s / sqrt(1 + s^2); equals -0.8 at s = -4/3
  const DropModel m(SurfaceTension(), -0.8, 256);
  EXPECT_NEAR(young_functional(m, -4.0 / 3.0), -0.8, 1e-12);
  EXPECT_NEAR(young_functional(m, 0.0), 0.0, 1e-15);
}

TEST(Reduced, SphericalCapSatisfiesYoung) {
  // cap of the unit sphere centred at -0.6: contact slope -0.75, omega -0.6
  const DropModel m(SurfaceTension(), -0.6, 256);
  const Profile p = spherical_cap(0.6, 4000);
  const double s01 = (p.r[1] - p.r[0]) / (p.t[1] - p.t[0]);
  const double s12 = (p.r[2] - p.r[1]) / (p.t[2] - p.t[1]);
  const double grid = std::fabs(young_functional(m, s01) - young_functional(m, s12));
  EXPECT_LT(std::fabs(young_residual(m, p)), 2 * grid);
  EXPECT_LT(std::fabs(young_residual(m, p)), 1e-3);
}

TEST(Reduced, YoungNeedsBase) {
  const DropModel m(SurfaceTension(), -0.6, 256);
  try {
    young_residual(m, Profile{{0, 1}, {0, 0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::empty_base);
  }
}

TEST(Reduced, ShapeChecks) {
  EXPECT_TRUE(check_shape(spherical_cap(0.3, 100)).concave);
  Profile dent = spherical_cap(0.3, 100);
  dent.r[50] -= 0.05;
  EXPECT_FALSE(check_shape(dent).concave);
  const Profile split{{0, 1, 2, 3, 4}, {1, 0, 0.5, 0.2, 0}};
  EXPECT_FALSE(check_shape(split).single_support);
}

TEST(Reduced, GradedFractions) {
  const std::vector<double> xi = graded_fractions(4);
  ASSERT_EQ(xi.size(), 5u);
  EXPECT_DOUBLE_EQ(xi[0], 0.0);
  EXPECT_DOUBLE_EQ(xi[2], 0.75);
  EXPECT_DOUBLE_EQ(xi[4], 1.0);
}

TEST(Reduced, WinterbottomStartHasRequestedVolume) {
  for (double w : {-0.8, -0.2, 0.3, 0.8}) {
    const DropModel m(preset("pnorm3-l2"), w, 512);
    EXPECT_NEAR(reduced_volume(m, winterbottom_profile(m, 2.5, 64)), 2.5, 1e-10);
  }
}

TEST(Reduced, DirectDescentInvariants) {
  const DropModel m(SurfaceTension(), -0.5, 1024);
  DirectOptions o;
  o.grid_size = 96;
  const DirectResult r = minimize_direct(m, 1.0, o);
  EXPECT_TRUE(r.converged);
  for (double v : r.volume_history) EXPECT_NEAR(v, 1.0, 1e-10);
  for (size_t i = 1; i < r.energy_history.size(); ++i)
    EXPECT_LE(r.energy_history[i], r.energy_history[i - 1] + 1e-12 * std::fabs(r.energy_history[i - 1]));
  const ShapeReport s = check_shape(r.profile);
  EXPECT_TRUE(s.concave);
  EXPECT_TRUE(s.single_support);
}

TEST(Reduced, NonGraphRegimeBeatsRandomSets) {
  const SurfaceTension f = preset("euclid");
  const DropModel m(f, 0.4 * f.phi(0, 1), 1024);
  DirectOptions o;
  o.grid_size = 128;
  const DirectResult r = minimize_direct(m, 1.0, o);
  ASSERT_TRUE(r.converged);
  EXPECT_TRUE(check_shape(r.profile).concave);
  EXPECT_GT(r.profile.r[1], r.profile.r[0]);  // contact angle above 90 degrees
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    SlicedSet A = random_sliced_set(f, rng);
    // rescale to unit volume
    const double c = std::cbrt(1.0 / volume(A));
    for (double& t : A.knots) t *= c;
    for (double& a : A.scales) a *= c;
    for (Vec2& b : A.centers) b = c * b;
    ASSERT_NEAR(volume(A), 1.0, 1e-9);
    EXPECT_LT(r.energy.total, reduced_energy(m, symmetrize(A, m.body())).total);
  }
}

TEST(Reduced, DoublingMassKeepsHeightBounded) {
  // heights grow by less than the diameter of the zero-gravity Wulff drop
  const DropModel m(SurfaceTension(), -0.5, 1024);
  DirectOptions o;
  o.grid_size = 96;
  const double T1 = minimize_direct(m, 1.0, o).profile.top();
  const double T2 = minimize_direct(m, 2.0, o).profile.top();
  EXPECT_LT(T2 - T1, 2.0 * std::cbrt(2.0 * 3.0 / (4.0 * M_PI)));
}
