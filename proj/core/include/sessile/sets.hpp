#pragma once

#include <random>
#include <vector>

#include "sessile/profile.hpp"
#include "sessile/tension.hpp"
#include "sessile/wulff.hpp"

namespace sessile {

// Stacked homothetic slices: the slice at height t is a(t) S + beta(t) with a and
// beta piecewise linear between knots.
struct SlicedSet {
  Polygon base;
  std::vector<double> knots;
  std::vector<double> scales;
  std::vector<Vec2> centers;

  int N() const { return base.d + 1; }
  size_t slabs() const { return knots.empty() ? 0 : knots.size() - 1; }
  void validate() const;
};

struct EnergyBreakdown {
  double Fs = 0.0;
  double Fc = 0.0;
  double Fp = 0.0;
  double total = 0.0;
};

double volume(const SlicedSet& set);

EnergyBreakdown energy(const SlicedSet& set, const SurfaceTension& tension, double omega,
                       int gauss_points = 8);

Profile symmetrize(const SlicedSet& set, const WulffBody& body);

double jensen_gap(const SlicedSet& set, int slab_index, const SurfaceTension& tension);

struct BarycenterPath {
  std::vector<double> t;
  std::vector<Vec2> beta;
  double max_drift = 0.0;
};

BarycenterPath barycenter_path(const SlicedSet& set, const WulffBody& body);

// The set r(t) K_h with fixed center.
SlicedSet lift_profile(const Profile& profile, const WulffBody& body, Vec2 center = {});

struct RandomSetOptions {
  int min_edges = 3;
  int max_edges = 12;
  int min_knots = 4;
  int max_knots = 32;
};

Polygon random_convex_polygon(const SurfaceTension& tension, std::mt19937_64& rng, int min_edges,
                              int max_edges);
SlicedSet random_sliced_set(const SurfaceTension& tension, std::mt19937_64& rng,
                            const RandomSetOptions& opts = {});

}  // namespace sessile
