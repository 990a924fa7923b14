#pragma once

#include <span>
#include <string>
#include <utility>

namespace sessile {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

enum class PhiFamily { euclid, pnorm, weighted, manhattan };
enum class HFamily { euclid, lp, l1reg };
enum class DerivativeMode { closed_form, central_difference };

// phi(a,b): euclid sqrt(a^2+b^2); pnorm (|a|^p+|b|^p)^(1/p);
// weighted sqrt(a^2+c b^2); manhattan a+|b| (not admissible).
struct PhiSpec {
  PhiFamily family = PhiFamily::euclid;
  double p = 2.0;
  double c = 1.0;
};

// h(x'): euclid |x'|_2; lp |x'|_p (p >= 1); l1reg |x'|_1 + eps |x'|_2.
struct HSpec {
  HFamily family = HFamily::euclid;
  double p = 2.0;
  double eps = 0.0;
};

struct PhiPartials {
  double d1 = 0.0;
  double d2 = 0.0;
  double d11 = 0.0;
};

struct AdmissibilityReport {
  double d1phi_pole_up = 0.0;    // d1 phi(0,+1)
  double d1phi_pole_down = 0.0;  // d1 phi(0,-1)
  bool smooth_near_poles = false;
  double strict_convexity_samples = 0.0;
  double omega_lo = 0.0;  // -phi(0,1)
  double omega_hi = 0.0;  // phi(0,-1)
  bool admissible = false;
};

inline constexpr double kFdStep = 1e-5;
inline constexpr int kDualDirections = 4096;

class SurfaceTension {
 public:
  // Isotropic tension in R^3.
  SurfaceTension() : SurfaceTension(3, PhiSpec{}, HSpec{}) {}
  SurfaceTension(int N, PhiSpec phi, HSpec h,
                 DerivativeMode mode = DerivativeMode::closed_form);

  int N() const { return N_; }
  int slice_dim() const { return N_ - 1; }
  const PhiSpec& phi_spec() const { return phi_; }
  const HSpec& h_spec() const { return h_; }
  DerivativeMode derivative_mode() const { return mode_; }

  double phi(double s, double t) const;
  // Throws degenerate_point at (0,0).
  PhiPartials phi_partials(double s, double t) const;
  // Smallest s >= 0 with d1 phi(s, b) = y, for b > 0 and 0 <= y < d1 phi(inf, b).
  // Throws stalled_inversion when y is not attained.
  double invert_d1phi(double b, double y) const;

  double h(std::span<const double> x) const;
  double h(Vec2 x) const;  // x.y ignored when slice_dim() == 1
  double eval_f(std::span<const double> x) const;

  double h_star(Vec2 x) const;
  Vec2 h_star_grad(Vec2 x) const;  // throws zero_direction at 0
  bool h_star_closed_form() const;

  AdmissibilityReport check_admissible(double tol = 1e-8) const;
  std::pair<double, double> omega_range() const;
  bool omega_in_range(double omega) const;

  std::string describe() const;

 private:
  PhiPartials closed_partials(double s, double t) const;
  PhiPartials fd_partials(double s, double t) const;
  double sampled_dual(Vec2 x, Vec2* argmax) const;

  int N_;
  PhiSpec phi_;
  HSpec h_;
  DerivativeMode mode_;
};

}  // namespace sessile
