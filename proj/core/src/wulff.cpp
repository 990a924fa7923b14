#include "sessile/wulff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sessile/error.hpp"

namespace sessile {

double Polygon::aniso_perimeter() const {
  double p = 0.0;
  for (const Edge& e : edges) p += e.length * e.h_value;
  return p;
}

Vec2 Polygon::centroid() const {
  if (d == 1) return {0.5 * (vertices[0].x + vertices[1].x), 0.0};
  double a = 0.0, cx = 0.0, cy = 0.0;
  const size_t n = vertices.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2 p = vertices[i], q = vertices[(i + 1) % n];
    const double c = cross(p, q);
    a += c;
    cx += (p.x + q.x) * c;
    cy += (p.y + q.y) * c;
  }
  return {cx / (3.0 * a), cy / (3.0 * a)};
}

namespace {

double shoelace(const std::vector<Vec2>& v) {
  double a = 0.0;
  for (size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * a;
}

std::vector<size_t> convex_hull(const std::vector<Vec2>& pts) {
  std::vector<size_t> idx(pts.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    return pts[a].x < pts[b].x || (pts[a].x == pts[b].x && pts[a].y < pts[b].y);
  });
  std::vector<size_t> h(2 * idx.size());
  size_t k = 0;
  auto turn = [&](size_t o, size_t a, size_t b) { return cross(pts[a] - pts[o], pts[b] - pts[o]); };
  for (size_t i : idx) {
    while (k >= 2 && turn(h[k - 2], h[k - 1], i) <= 0.0) --k;
    h[k++] = i;
  }
  for (size_t j = idx.size() - 1, t = k + 1; j-- > 0;) {
    const size_t i = idx[j];
    while (k >= t && turn(h[k - 2], h[k - 1], i) <= 0.0) --k;
    h[k++] = i;
  }
  h.resize(k > 0 ? k - 1 : 0);
  return h;
}

}  // namespace

Polygon intersect_halfplanes(const SurfaceTension& tension, const std::vector<Vec2>& normals,
                             const std::vector<double>& offsets) {
  if (normals.size() != offsets.size() || normals.size() < 3)
    throw Error(Errc::invalid_input, "half-plane intersection needs >= 3 constraints");
  std::vector<Vec2> dual(normals.size());
  for (size_t j = 0; j < normals.size(); ++j) {
    if (!(offsets[j] > 0.0)) throw Error(Errc::invalid_input, "half-plane offsets must be positive");
    dual[j] = (1.0 / offsets[j]) * normals[j];
  }
  const std::vector<size_t> hull = convex_hull(dual);
  const size_t n = hull.size();
  if (n < 3) throw Error(Errc::invalid_input, "unbounded half-plane intersection");
  for (size_t i = 0; i < n; ++i) {
    if (cross(dual[hull[i]], dual[hull[(i + 1) % n]]) <= 0.0)
      throw Error(Errc::invalid_input, "unbounded half-plane intersection");
  }

  // w[k] is where the lines of hull[k-1] and hull[k] meet; edge k runs w[k] -> w[k+1].
  std::vector<Vec2> w(n);
  for (size_t k = 0; k < n; ++k) {
    const Vec2 p = dual[hull[(k + n - 1) % n]], q = dual[hull[k]];
    const double c = cross(p, q);
    w[k] = {(q.y - p.y) / c, -(q.x - p.x) / c};
  }
  std::vector<size_t> keep;
  for (size_t k = 0; k < n; ++k) {
    const Vec2 e = w[(k + 1) % n] - w[k];
    if (std::hypot(e.x, e.y) >= 1e-12) keep.push_back(k);
  }

  Polygon poly;
  poly.d = 2;
  for (size_t k : keep) poly.vertices.push_back(w[k]);
  const size_t m = poly.vertices.size();
  if (m < 3) throw Error(Errc::invalid_input, "degenerate half-plane intersection");
  for (size_t i = 0; i < m; ++i) {
    const Vec2 nrm = normals[hull[keep[i]]];
    const double len = std::hypot(nrm.x, nrm.y);
    Edge e;
    e.normal = (1.0 / len) * nrm;
    const Vec2 seg = poly.vertices[(i + 1) % m] - poly.vertices[i];
    e.length = std::hypot(seg.x, seg.y);
    e.h_value = tension.h(e.normal);
    double s = -std::numeric_limits<double>::infinity();
    for (const Vec2& v : poly.vertices) s = std::max(s, dot(v, e.normal));
    e.support = s;
    poly.edges.push_back(e);
  }
  poly.area = shoelace(poly.vertices);
  return poly;
}

Polygon make_polygon(const SurfaceTension& tension, std::vector<Vec2> v) {
  if (v.size() < 3) throw Error(Errc::invalid_input, "polygon needs >= 3 vertices");
  Polygon p;
  p.d = 2;
  p.area = shoelace(v);
  if (!(p.area > 0.0)) throw Error(Errc::invalid_input, "polygon must be counter-clockwise with positive area");
  p.vertices = std::move(v);
  const size_t n = p.vertices.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2 a = p.vertices[i], b = p.vertices[(i + 1) % n];
    const Vec2 s = b - a;
    Edge e;
    e.length = std::hypot(s.x, s.y);
    if (e.length == 0.0) throw Error(Errc::invalid_input, "polygon has a repeated vertex");
    e.normal = {s.y / e.length, -s.x / e.length};
    e.h_value = tension.h(e.normal);
    e.support = dot(a, e.normal);
    p.edges.push_back(e);
  }
  return p;
}

Polygon make_interval(const SurfaceTension& tension, double lo, double hi) {
  if (!(hi > lo)) throw Error(Errc::invalid_input, "interval needs hi > lo");
  Polygon p;
  p.d = 1;
  p.vertices = {{lo, 0.0}, {hi, 0.0}};
  p.area = hi - lo;
  p.edges.push_back({1.0, {1.0, 0.0}, tension.h(Vec2{1.0, 0.0}), hi});
  p.edges.push_back({1.0, {-1.0, 0.0}, tension.h(Vec2{-1.0, 0.0}), -lo});
  return p;
}

Polygon dilate_translate(const SurfaceTension&, const Polygon& p, double scale, Vec2 shift) {
  Polygon q = p;
  for (Vec2& v : q.vertices) v = scale * v + shift;
  for (Edge& e : q.edges) {
    if (p.d == 2) e.length *= scale;
    e.support = scale * e.support + dot(shift, e.normal);
  }
  q.area = p.d == 2 ? p.area * scale * scale : p.area * scale;
  return q;
}

bool is_convex(const Polygon& p, double tol) {
  if (p.d == 1) return p.area > 0.0;
  const size_t n = p.vertices.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2 a = p.vertices[i], b = p.vertices[(i + 1) % n], c = p.vertices[(i + 2) % n];
    if (cross(b - a, c - b) < -tol) return false;
  }
  return true;
}

WulffBody build_wulff_body(const SurfaceTension& tension, int M_normals) {
  WulffBody body;
  const int d = tension.slice_dim();
  if (d == 1) {
    body.geometry = make_interval(tension, -tension.h(Vec2{-1.0, 0.0}), tension.h(Vec2{1.0, 0.0}));
  } else if (d == 2) {
    if (M_normals < 8) throw Error(Errc::invalid_input, "M_normals must be >= 8");
    std::vector<Vec2> normals(M_normals);
    std::vector<double> offsets(M_normals);
    for (int j = 0; j < M_normals; ++j) {
      const double th = 2.0 * std::numbers::pi * j / M_normals;
      normals[j] = {std::cos(th), std::sin(th)};
      offsets[j] = tension.h(normals[j]);
    }
    body.geometry = intersect_halfplanes(tension, normals, offsets);
  } else {
    throw Error(Errc::dimension_unsupported, "slice dimension must be 1 or 2");
  }
  body.aniso_perimeter = body.geometry.aniso_perimeter();
  body.lambda = body.aniso_perimeter / body.geometry.area;
  return body;
}

double wulff_bottom(const SurfaceTension& tension) { return -tension.phi(0.0, -1.0); }
double wulff_top(const SurfaceTension& tension) { return tension.phi(0.0, 1.0); }

double wulff_alpha(const SurfaceTension& tension, double t) {
  const double lo_ext = wulff_bottom(tension), hi_ext = wulff_top(tension);
  if (!(t > lo_ext && t < hi_ext)) return 0.0;
  auto g = [&](double y) { return tension.phi(1.0, y) - t * y; };

  constexpr int kGrid = 256;
  const double y0 = 2.0 * lo_ext, y1 = 2.0 * hi_ext;
  int best = 0;
  double gbest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    const double y = y0 + (y1 - y0) * i / (kGrid - 1);
    const double v = g(y);
    if (v < gbest) {
      gbest = v;
      best = i;
    }
  }
  const double dy = (y1 - y0) / (kGrid - 1);
  double a = y0 + dy * (best - 1), c = y0 + dy * (best + 1);
  // the minimizer escapes the grid near the poles; widen until bracketed
  if (best == kGrid - 1) {
    double b = y1, step = y1 - y0;
    for (int k = 0; k < 2000 && g(b + step) < g(b); ++k) {
      a = b;
      b += step;
      step *= 2.0;
    }
    c = b + step;
  } else if (best == 0) {
    double b = y0, step = y1 - y0;
    for (int k = 0; k < 2000 && g(b - step) < g(b); ++k) {
      c = b;
      b -= step;
      step *= 2.0;
    }
    a = b - step;
  }
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = c - gr * (c - a), x2 = a + gr * (c - a);
  double f1 = g(x1), f2 = g(x2);
  for (int i = 0; i < 300 && (c - a) > 1e-10 * std::max(1.0, std::fabs(x1)); ++i) {
    if (f1 < f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - gr * (c - a);
      f1 = g(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (c - a);
      f2 = g(x2);
    }
  }
  return std::max(0.0, std::min({f1, f2, gbest}));
}

WulffPoint wulff_boundary(const SurfaceTension& tension, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  const PhiPartials p = tension.phi_partials(std::max(c, 0.0), s);
  return {std::max(p.d1, 0.0), p.d2};
}

double wulff_theta_at_height(const SurfaceTension& tension, double t) {
  const double bot = wulff_bottom(tension), top = wulff_top(tension);
  if (!(t > bot && t < top)) throw Error(Errc::sigma_out_of_range, "height outside the vertical extent of K");
  double lo = -0.5 * std::numbers::pi, hi = 0.5 * std::numbers::pi;
  for (int i = 0; i < 200 && hi - lo > 4e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    (wulff_boundary(tension, mid).height < t ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double WulffProfile::max_second_difference() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (size_t i = 1; i + 1 < alpha.size(); ++i) {
    if (alpha[i - 1] > 0.0 && alpha[i] > 0.0 && alpha[i + 1] > 0.0)
      worst = std::max(worst, alpha[i + 1] - 2.0 * alpha[i] + alpha[i - 1]);
  }
  return worst;
}

WulffProfile wulff_profile(const SurfaceTension& tension, int n) {
  WulffProfile w;
  const double bot = wulff_bottom(tension), top = wulff_top(tension);
  for (int i = 0; i < n; ++i) {
    const double t = bot + (top - bot) * i / (n - 1);
    w.t.push_back(t);
    w.alpha.push_back(wulff_alpha(tension, t));
  }
  return w;
}

}  // namespace sessile
