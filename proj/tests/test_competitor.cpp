#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sessile/competitor.hpp"
#include "sessile/error.hpp"
#include "sessile/io.hpp"
#include "sessile/odesolve.hpp"

using namespace sessile;

namespace {

const DropModel& euclid() {
  static const DropModel m(SurfaceTension(), -0.5, 4096);
  return m;
}

Profile from(std::vector<double> t, std::vector<double> r) { return Profile{std::move(t), std::move(r)}; }

// Concave bump r = 1.2 (1 - t^2)^0.5 on [0, 1] with knots every 0.05.
Profile dome() {
  Profile p;
  for (int i = 0; i <= 20; ++i) {
    const double t = 0.05 * i;
    p.t.push_back(t);
    p.r.push_back(1.2 * std::sqrt(std::max(0.0, 1 - t * t)));
  }
  return p;
}

}  // namespace

TEST(Competitor, HemisphereCap) {
  const DropModel& m = euclid();
  const Profile c = cap_profile(m, CapSide::plus, 0.0, 2.0, m.area());
  EXPECT_NEAR(c.t.front(), 2.0, 1e-14);
  EXPECT_NEAR(c.top(), 3.0, 1e-9);
  for (size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(c.r[i] * c.r[i] + (c.t[i] - 2.0) * (c.t[i] - 2.0), 1.0, 1e-9);
}

TEST(Competitor, CapAboveSixTenths) {
  // v_K(0.6) = pi (1 - 0.36), so b = 1 and the cap is 0.4 tall
  const DropModel& m = euclid();
  const Profile c = cap_profile(m, CapSide::plus, 0.6, 0.0, 0.64 * m.area());
  EXPECT_NEAR(c.r.front(), 0.8, 1e-9);
  EXPECT_NEAR(c.top(), 0.4, 1e-9);
}

TEST(Competitor, CapVolumeVanishesAtPole) {
  const DropModel& m = euclid();
  double prev = INFINITY;
  for (double s : {0.9, 0.99, 0.999, 0.9999}) {
    const double v = m.area() * (1 - s * s);  // slice measure at s for b = 1
    const Profile c = cap_profile(m, CapSide::plus, s, 0.0, v);
    const double vol = volume_between(m, c, c.t.front(), c.top());
    EXPECT_LT(vol, prev);
    prev = vol;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(Competitor, SigmaOutOfRangeThrows) {
  try {
    cap_profile(euclid(), CapSide::plus, 1.5, 0.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::sigma_out_of_range);
  }
}

TEST(Competitor, NonconvexityWitness) {
  const auto w = find_nonconvexity(from({0, 0.5, 1}, {1, 0.2, 0.6}), 1e-3);
  ASSERT_TRUE(w.has_value());
  EXPECT_LT(w->first, 0.5);
  EXPECT_GT(w->second, 0.5);
  EXPECT_LT(w->second - w->first, 1e-3);

  Profile concave;
  for (int i = 0; i <= 50; ++i) {
    concave.t.push_back(i / 50.0);
    concave.r.push_back(1 - (i / 50.0) * (i / 50.0));
  }
  EXPECT_FALSE(find_nonconvexity(concave, 1e-3).has_value());
  EXPECT_TRUE(find_dents(concave).empty());
}

TEST(Competitor, FlatDentWitnessShrinks) {
  // flat stretch at 0.6 between two higher shoulders
  const Profile p = from({0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2}, {1.0, 0.95, 0.6, 0.6, 0.6, 0.9, 0.0});
  for (double eps : {1e-2, 1e-3, 1e-5}) {
    const auto w = find_nonconvexity(p, eps);
    ASSERT_TRUE(w.has_value());
    EXPECT_LT(w->second - w->first, eps);
    EXPECT_TRUE(below_chord(p, w->first, w->second));
  }
}

TEST(Competitor, PlusSideTauBeforeT2) {
  Profile p = dome();
  p.r[8] -= 0.08;  // dent at t = 0.4
  const CompetitorParams c = solve_params(euclid(), p, 0.37, 0.43, CapSide::plus);
  EXPECT_GT(c.tau, 0.37);
  EXPECT_LT(c.tau, 0.43);
  EXPECT_GT(c.b, 0.0);
}

TEST(Competitor, ConcaveProfileIsRejected) {
  try {
    apply_competitor(euclid(), dome(), 0.2, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::hypothesis_violated);
  }
  EXPECT_FALSE(repair_once(euclid(), dome()).has_value());
}

TEST(Competitor, CaseOneLowerEndBelow) {
  // r rises through the dent, so r(t1) <= r(t2)
  const Profile p = from({0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0},
                         {1.0, 1.1, 1.2, 1.0, 1.35, 1.4, 1.35, 1.2, 1.0, 0.6, 0.0});
  const CompetitorResult r = apply_competitor(euclid(), p, 0.2, 0.4);
  EXPECT_EQ(r.case_index, 1);
  EXPECT_LT(r.energy_after, r.energy_before);
  EXPECT_NEAR(r.volume_after, r.volume_before, 1e-10 * r.volume_before);
  EXPECT_LT(r.surface.cap_energy, r.surface.original_energy);
  EXPECT_EQ(r.profile.r_at(0.1), p.r_at(0.1));
}

TEST(Competitor, CaseTwoLowerEndAbove) {
  Profile p = dome();
  p.r[8] -= 0.08;
  ASSERT_GT(p.r_at(0.37), p.r_at(0.43));
  ASSERT_TRUE(shift_hypothesis(euclid(), p, 0.37, 0.43));
  const CompetitorResult r = apply_competitor(euclid(), p, 0.37, 0.43);
  EXPECT_EQ(r.case_index, 2);
  EXPECT_LT(r.energy_after, r.energy_before);
  EXPECT_NEAR(r.volume_after, r.volume_before, 1e-10 * r.volume_before);
}

TEST(Competitor, ShiftHypothesisRequired) {
  // a wide dent with little volume above it
  Profile p = dome();
  p.r[17] -= 0.1;
  EXPECT_FALSE(shift_hypothesis(euclid(), p, 0.05, 0.95));
  try {
    apply_competitor(euclid(), p, 0.05, 0.95);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::hypothesis_violated);
  }
}

TEST(Competitor, BadIntervalThrows) {
  try {
    apply_competitor(euclid(), dome(), 0.5, 0.4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_input);
  }
}

TEST(Competitor, WulffCapMatchesItself) {
  // E is a scaled Wulff shape: the competitor cap reproduces it
  const DropModel& m = euclid();
  const Profile E = cap_profile(m, CapSide::plus, -0.3, 0.0, m.area() * 0.91, 4096);
  const CompetitorParams c = solve_params(m, E, 0.3, 0.5, CapSide::plus);
  EXPECT_NEAR(c.b, 1.0, 1e-4);
  EXPECT_NEAR(c.tau, 0.5, 1e-4);
  const SurfaceComparison s = compare_surface_energy(m, E, c);
  EXPECT_NEAR(s.cap_energy, s.original_energy, 1e-5 * s.original_energy);
}

TEST(Competitor, SeededDentsDecreaseSurfaceEnergy) {
  const DropModel& m = euclid();
  ShootOptions so;
  so.knots = 128;
  const Profile base = shoot(m, 1.0, so).profile;
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int tested = 0;
  for (int k = 0; k < 50; ++k) {
    Profile E = base;
    const int c = 10 + static_cast<int>(u(rng) * 90), w = 2 + static_cast<int>(u(rng) * 4);
    for (int i = c - w; i <= c + w; ++i) E.r[i] -= (0.05 + 0.1 * u(rng)) * E.r[c] * (1 - std::abs(i - c) / double(w));
    const auto r = repair_once(m, E);
    if (find_dents(E, 1e-10).empty()) continue;
    ++tested;
    ASSERT_TRUE(r.has_value()) << k;
    EXPECT_LT(r->energy_after, r->energy_before);
    EXPECT_LT(r->surface.cap_energy, r->surface.original_energy);
    EXPECT_NEAR(r->volume_after, r->volume_before, 1e-9 * r->volume_before);
  }
  EXPECT_GE(tested, 40);
}
