#pragma once

#include <vector>

#include "sessile/tension.hpp"

namespace sessile {

// Edge of a convex slice: for d = 1 the two endpoints (length 1, normal +-e1).
struct Edge {
  double length = 0.0;
  Vec2 normal;
  double h_value = 0.0;  // h(normal)
  double support = 0.0;  // sup over the polygon of y . normal
};

struct Polygon {
  int d = 2;
  std::vector<Vec2> vertices;  // counter-clockwise; two points on the x axis for d = 1
  std::vector<Edge> edges;     // edge i joins vertices[i] and vertices[i+1]
  double area = 0.0;

  double aniso_perimeter() const;
  Vec2 centroid() const;
};

// Half-plane intersection {x . n_j <= c_j}; all c_j > 0 and normals must surround
// the origin. Returns the polygon with h-values from `tension`.
Polygon intersect_halfplanes(const SurfaceTension& tension, const std::vector<Vec2>& normals,
                             const std::vector<double>& offsets);

// Polygon from counter-clockwise vertices (d = 2) or an interval (d = 1).
Polygon make_polygon(const SurfaceTension& tension, std::vector<Vec2> ccw_vertices);
Polygon make_interval(const SurfaceTension& tension, double lo, double hi);

Polygon dilate_translate(const SurfaceTension& tension, const Polygon& p, double scale, Vec2 shift);

bool is_convex(const Polygon& p, double tol = 1e-12);

struct WulffBody {
  Polygon geometry;
  double aniso_perimeter = 0.0;
  double lambda = 0.0;

  int d() const { return geometry.d; }
  double area() const { return geometry.area; }
};

inline constexpr int kDefaultNormals = 4096;

WulffBody build_wulff_body(const SurfaceTension& tension, int M_normals = kDefaultNormals);

// alpha(t) = inf_y max{phi(1,y) - t y, 0}; zero outside the vertical extent of K.
double wulff_alpha(const SurfaceTension& tension, double t);

// Vertical extent of K: (-phi(0,-1), phi(0,1)).
double wulff_bottom(const SurfaceTension& tension);
double wulff_top(const SurfaceTension& tension);

// Boundary of K in the (radius, height) half-plane with outer normal
// (cos theta, sin theta), theta in [-pi/2, pi/2]: the point grad phi(cos, sin).
struct WulffPoint {
  double radius = 0.0;
  double height = 0.0;
};
WulffPoint wulff_boundary(const SurfaceTension& tension, double theta);
// Inverse of theta -> wulff_boundary(theta).height on the open vertical extent.
double wulff_theta_at_height(const SurfaceTension& tension, double t);

struct WulffProfile {
  std::vector<double> t;
  std::vector<double> alpha;

  // Largest second difference over interior points with alpha > 0.
  double max_second_difference() const;
};

WulffProfile wulff_profile(const SurfaceTension& tension, int n = 512);

}  // namespace sessile
