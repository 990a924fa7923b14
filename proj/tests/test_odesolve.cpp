#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "sessile/error.hpp"
#include "sessile/io.hpp"
#include "sessile/odesolve.hpp"

using namespace sessile;

TEST(Ode, ContactSlopeEuclid) {
  // -d2 phi(s, 2) = 2 / sqrt(s^2 + 4)
  const SurfaceTension f;
  EXPECT_NEAR(s_star(f, -0.8), 1.5, 1e-10);
  EXPECT_NEAR(s_star(f, -2.0 / std::sqrt(5.0)), 1.0, 1e-10);
  EXPECT_GT(s_star(f, -1e-3), 1000.0);
  EXPECT_THROW(s_star(f, 0.2), Error);
}

TEST(Ode, UnitBallVolumes) {
  EXPECT_NEAR(unit_ball_volume(1), 2.0, 1e-14);
  EXPECT_NEAR(unit_ball_volume(2), M_PI, 1e-14);
  EXPECT_NEAR(unit_ball_volume(3), 4 * M_PI / 3, 1e-14);
}

TEST(Ode, SmallRadiusSeries) {
  // W ~ v0 r^2 and d1 phi(s, 2) ~ s/2, so s ~ 2 v0 r and v ~ v0 (1 + r^2)
  const SurfaceTension f;
  const double v0 = 0.7;
  StepOptions o;
  o.r_levels = {1e-8, 1e-6, 1e-4, 1e-3};
  const Trajectory tr = integrate_v(f, v0, 1.0, o);
  ASSERT_EQ(tr.level_v.size(), 4u);
  for (size_t i = 0; i < tr.size(); ++i) {
    if (tr.r[i] > 1e-3 || tr.r[i] < 1e-8) continue;
    EXPECT_NEAR(tr.s[i] / (2 * v0 * tr.r[i]), 1.0, 1e-5);
  }
  for (size_t i = 0; i < 4; ++i) EXPECT_NEAR(tr.level_v[i], v0 * (1 + o.r_levels[i] * o.r_levels[i]), 1e-9);
}

TEST(Ode, TrajectoryIsIncreasing) {
  for (const std::string& name : preset_names()) {
    const SurfaceTension f = preset(name);
    const Trajectory tr = integrate_v(f, 1.3, s_star(f, -0.5 * f.phi(0, 1)));
    EXPECT_TRUE(tr.reached_stop) << name;
    for (size_t i = 1; i < tr.size(); ++i) {
      EXPECT_GE(tr.v[i], tr.v[i - 1]) << name;  // v - v0 is below rounding near the axis
      EXPECT_GT(tr.s[i], tr.s[i - 1]) << name;
    }
    EXPECT_GT(tr.v.back(), tr.v.front()) << name;
    EXPECT_LT(tr.max_conservation_error, 1e-9) << name;
  }
}

TEST(Ode, VolumeFunctionalMonotoneInSlope) {
  const SurfaceTension f = preset("pnorm3-l2");
  const Trajectory tr = integrate_v(f, 1.0, 3.0);
  EXPECT_NEAR(V_of(tr, 1e-9), 0.0, 1e-9);
  double prev = 0.0;
  for (double s = 0.1; s <= 3.0; s += 0.1) {
    const double V = V_of(tr, s);
    EXPECT_GE(V, prev);
    prev = V;
  }
  EXPECT_THROW(V_of(tr, 5.0), Error);
}

TEST(Ode, VolumeFunctionalMatchesQuadrature) {
  // V = |S^1| int_0^{r_s} rho (v(r_s) - v(rho)) d rho for N = 3
  const SurfaceTension f;
  const double v0 = 0.9, s = 2.0;
  const Trajectory tr = integrate_v(f, v0, s);
  const double rs = tr.r.back(), vs = tr.v.back();
  const int n = 4000;
  StepOptions o;
  for (int i = 1; i <= n; ++i) o.r_levels.push_back(rs * i / n);
  o.r_levels.back() = rs * (1 - 1e-12);
  const Trajectory fine = integrate_v(f, v0, s, o);
  ASSERT_EQ(fine.level_v.size(), static_cast<size_t>(n));
  auto g = [&](int i) { return i == 0 ? 0.0 : (rs * i / n) * (vs - fine.level_v[i - 1]); };
  double simpson = g(0) + g(n);
  for (int i = 1; i < n; ++i) simpson += (i % 2 ? 4 : 2) * g(i);
  simpson *= (rs / n) / 3 * 2 * M_PI;
  EXPECT_NEAR(V_of(tr, s), simpson, 1e-6 * simpson);
}

TEST(Ode, VolumeDecreasesWithApexValue) {
  for (const char* name : {"euclid", "weighted2-l1reg"}) {
    const SurfaceTension f = preset(name);
    const double ss = std::string(name) == "euclid" ? 1.5 : s_star(f, -0.8 * f.phi(0, 1));
    for (int i = 0; i < 16; ++i) {
      const double v0 = 0.1 * std::pow(100.0, i / 15.0);
      EXPECT_LT(dV_dv0(f, v0, ss, 1e-4 * v0), 0.0) << name << " v0 " << v0;
    }
  }
}

TEST(Ode, DerivativeStableUnderStepHalving) {
  const SurfaceTension f;
  for (double v0 : {0.2, 1.0, 5.0}) {
    const double a = dV_dv0(f, v0, 1.5, 1e-3 * v0), b = dV_dv0(f, v0, 1.5, 5e-4 * v0);
    EXPECT_NEAR(a, b, 0.01 * std::fabs(b));
  }
}

TEST(Ode, ShootingEuclid) {
  const DropModel m(SurfaceTension(), -0.5);
  const ShootingSolution s = shoot(m, 1.0);
  EXPECT_NEAR(s.volume, 1.0, 1e-6);
  EXPECT_LT(std::fabs(s.young_residual), 1e-8);
  EXPECT_GT(s.T_max, 0.0);
  EXPECT_NEAR(s.profile.r.front(), s.R_max, 1e-12);
  EXPECT_EQ(s.profile.r.back(), 0.0);
  EXPECT_NEAR(s.lambda, -s.v_star, 1e-12);
  EXPECT_NEAR(s.lambda_estimate, s.lambda, 1e-4 * std::fabs(s.lambda));
  EXPECT_NEAR(s.bridge_fitted, s.bridge_analytic, 1e-4 * s.bridge_analytic);
  EXPECT_TRUE(check_shape(s.profile).concave);
  // achieved volume falls as v0 grows
  auto h = s.history;
  std::sort(h.begin(), h.end());
  for (size_t i = 1; i < h.size(); ++i)
    if (h[i].first > h[i - 1].first) EXPECT_LT(h[i].second, h[i - 1].second);
}

TEST(Ode, ElResidualConvergesUnderRefinement) {
  const SurfaceTension f = preset("pnorm3-l3");
  const DropModel m(f, -0.5 * f.phi(0, 1));
  const ShootingSolution s = shoot(m, 1.0);
  double prev = INFINITY;
  for (int K : {32, 64, 128, 256}) {
    const Reconstruction r = reconstruct_profile(s.trajectory, m, K);
    const double e = el_residual(m, r.profile, r.lambda).max_abs(r.T_max);
    EXPECT_LT(e, prev / 3.0) << K;
    prev = e;
  }
}

TEST(Ode, ShootingNeedsGraphRegime) {
  const DropModel m(SurfaceTension(), 0.3, 256);
  try {
    shoot(m, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::omega_out_of_graph_range);
  }
}
