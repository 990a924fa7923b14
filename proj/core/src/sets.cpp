#include "sessile/sets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sessile/error.hpp"

namespace sessile {

void SlicedSet::validate() const {
  const size_t n = knots.size();
  if (n < 2 || scales.size() != n || centers.size() != n)
    throw Error(Errc::invalid_input, "sliced set needs >= 2 knots with matching scales and centers");
  if (knots.front() != 0.0) throw Error(Errc::invalid_input, "first knot must be 0");
  for (size_t i = 0; i < n; ++i) {
    if (!(scales[i] >= 0.0)) throw Error(Errc::invalid_input, "scales must be >= 0");
    if (i > 0 && !(knots[i] > knots[i - 1])) throw Error(Errc::invalid_input, "knots must strictly increase");
  }
  if (base.d != 1 && base.d != 2) throw Error(Errc::dimension_unsupported, "base dimension must be 1 or 2");
}

namespace {

// per-slab velocity of the support plane of edge e
double edge_velocity(const SlicedSet& s, size_t j, const Edge& e) {
  const double dt = s.knots[j + 1] - s.knots[j];
  const double da = (s.scales[j + 1] - s.scales[j]) / dt;
  const Vec2 db = (1.0 / dt) * (s.centers[j + 1] - s.centers[j]);
  return dot(db, e.normal) + da * e.support;
}

double power_integral(double a0, double a1, double dt, int k, const GaussRule& g) {
  double acc = 0.0;
  for (size_t q = 0; q < g.x.size(); ++q) acc += g.w[q] * std::pow(a0 + (a1 - a0) * g.x[q], k);
  return acc * dt;
}

}  // namespace

double volume(const SlicedSet& set) {
  set.validate();
  const int k = set.N() - 1;
  double v = 0.0;
  for (size_t j = 0; j < set.slabs(); ++j)
    v += slab_power_integral(set.scales[j], set.scales[j + 1], set.knots[j + 1] - set.knots[j], k);
  return v * set.base.area;
}

EnergyBreakdown energy(const SlicedSet& set, const SurfaceTension& tension, double omega, int gauss_points) {
  set.validate();
  if (!tension.omega_in_range(omega)) throw Error(Errc::omega_out_of_range, "omega outside (-phi(0,1), phi(0,-1))");
  if (set.N() != tension.N()) throw Error(Errc::invalid_input, "set and tension dimensions differ");
  const GaussRule g = gauss_points == 8 ? gauss8() : gauss_legendre(gauss_points);
  const int N = set.N();
  const double S = set.base.area;
  EnergyBreakdown e;
  for (size_t j = 0; j < set.slabs(); ++j) {
    const double t0 = set.knots[j], dt = set.knots[j + 1] - t0;
    const double a0 = set.scales[j], a1 = set.scales[j + 1];
    const double qa = power_integral(a0, a1, dt, N - 2, g);
    for (const Edge& ed : set.base.edges)
      e.Fs += ed.length * qa * tension.phi(ed.h_value, -edge_velocity(set, j, ed));
    double fp = 0.0;
    for (size_t q = 0; q < g.x.size(); ++q) {
      const double a = a0 + (a1 - a0) * g.x[q];
      fp += g.w[q] * (t0 + dt * g.x[q]) * std::pow(a, N - 1);
    }
    e.Fp += fp * dt * S;
  }
  const double aM = set.scales.back();
  if (aM > 0.0) e.Fs += tension.phi(0.0, 1.0) * std::pow(aM, N - 1) * S;
  e.Fc = omega * std::pow(set.scales.front(), N - 1) * S;
  e.total = e.Fs + e.Fc + e.Fp;
  return e;
}

Profile symmetrize(const SlicedSet& set, const WulffBody& body) {
  set.validate();
  if (set.base.d != body.d()) throw Error(Errc::invalid_input, "set and body dimensions differ");
  const double c = std::pow(set.base.area / body.area(), 1.0 / set.base.d);
  Profile p;
  p.t = set.knots;
  p.r.reserve(set.scales.size());
  for (double a : set.scales) p.r.push_back(a * c);
  return p;
}

double jensen_gap(const SlicedSet& set, int slab_index, const SurfaceTension& tension) {
  set.validate();
  if (slab_index < 0 || static_cast<size_t>(slab_index) >= set.slabs())
    throw Error(Errc::index_out_of_range, "slab index out of range");
  const size_t j = static_cast<size_t>(slab_index);
  const int N = set.N();
  const double dt = set.knots[j + 1] - set.knots[j];
  const double qa = slab_power_integral(set.scales[j], set.scales[j + 1], dt, N - 2);
  double sum_phi = 0.0, sum_h = 0.0, sum_w = 0.0;
  for (const Edge& ed : set.base.edges) {
    const double w = edge_velocity(set, j, ed);
    sum_phi += ed.length * tension.phi(ed.h_value, -w);
    sum_h += ed.length * ed.h_value;
    sum_w += ed.length * w;
  }
  return qa * (sum_phi - tension.phi(sum_h, -sum_w));
}

BarycenterPath barycenter_path(const SlicedSet& set, const WulffBody& body) {
  set.validate();
  const double c = std::pow(set.base.area / body.area(), 1.0 / set.base.d);
  const Vec2 cs = set.base.centroid(), ck = body.geometry.centroid();
  size_t last = set.knots.size();
  while (last > 0 && set.scales[last - 1] == 0.0) --last;
  if (last == 0) throw Error(Errc::empty_slice, "every slice is empty");
  BarycenterPath path;
  for (size_t i = 0; i < last; ++i) {
    const double a = set.scales[i];
    if (a == 0.0) throw Error(Errc::empty_slice, "empty slice inside the support");
    path.t.push_back(set.knots[i]);
    path.beta.push_back(a * cs + set.centers[i] - (a * c) * ck);
  }
  for (const Vec2& b : path.beta) {
    const Vec2 d = b - path.beta.front();
    path.max_drift = std::max(path.max_drift, std::hypot(d.x, d.y));
  }
  return path;
}

SlicedSet lift_profile(const Profile& profile, const WulffBody& body, Vec2 center) {
  SlicedSet s;
  s.base = body.geometry;
  s.knots = profile.t;
  s.scales = profile.r;
  s.centers.assign(profile.t.size(), center);
  return s;
}

Polygon random_convex_polygon(const SurfaceTension& tension, std::mt19937_64& rng, int min_edges, int max_edges) {
  std::uniform_int_distribution<int> nedges(min_edges, max_edges);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi), sup(0.3, 1.5);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const int k = nedges(rng);
    std::vector<double> th(k);
    for (double& x : th) x = ang(rng);
    std::sort(th.begin(), th.end());
    double gap = th.front() + 2.0 * std::numbers::pi - th.back();
    for (int i = 1; i < k; ++i) gap = std::max(gap, th[i] - th[i - 1]);
    if (gap >= 0.95 * std::numbers::pi) continue;
    std::vector<Vec2> normals;
    std::vector<double> offsets;
    for (double a : th) {
      normals.push_back({std::cos(a), std::sin(a)});
      offsets.push_back(sup(rng));
    }
    try {
      Polygon p = intersect_halfplanes(tension, normals, offsets);
      if (static_cast<int>(p.edges.size()) >= std::min(3, min_edges)) return p;
    } catch (const Error&) {
    }
  }
  throw Error(Errc::invalid_input, "random polygon rejection sampling failed");
}

SlicedSet random_sliced_set(const SurfaceTension& tension, std::mt19937_64& rng, const RandomSetOptions& opts) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SlicedSet s;
  const Vec2 shift{u01(rng) - 0.5, tension.slice_dim() == 2 ? u01(rng) - 0.5 : 0.0};
  if (tension.slice_dim() == 1) {
    s.base = make_interval(tension, -0.2 - 1.3 * u01(rng), 0.2 + 1.3 * u01(rng));
    s.base = dilate_translate(tension, s.base, 1.0, shift);
  } else {
    s.base = dilate_translate(tension, random_convex_polygon(tension, rng, opts.min_edges, opts.max_edges), 1.0,
                              shift);
  }
  std::uniform_int_distribution<int> nk(opts.min_knots, opts.max_knots);
  const int n = nk(rng);
  double t = 0.0, a = 0.2 + 1.3 * u01(rng);
  Vec2 b{u01(rng) - 0.5, tension.slice_dim() == 2 ? u01(rng) - 0.5 : 0.0};
  for (int i = 0; i < n; ++i) {
    s.knots.push_back(t);
    s.scales.push_back(a);
    s.centers.push_back(b);
    t += 0.05 + 0.45 * u01(rng);
    a = std::max(0.0, a + 0.3 * gauss(rng));
    b.x += 0.2 * gauss(rng);
    if (tension.slice_dim() == 2) b.y += 0.2 * gauss(rng);
  }
  return s;
}

}  // namespace sessile
