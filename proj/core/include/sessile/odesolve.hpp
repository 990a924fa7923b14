#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sessile/profile.hpp"
#include "sessile/reduced.hpp"
#include "sessile/tension.hpp"

namespace sessile {

// Unique s > 0 with -d2 phi(s, N-1) = omega; needs omega in (-phi(0,1), 0).
double s_star(const SurfaceTension& tension, double omega);

// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

struct StepOptions {
  double tol = 1e-12;
  int max_steps = 2'000'000;
  std::optional<double> r_max;       // stop at this radius if s_stop is not reached first
  std::vector<double> r_levels;      // ascending radii the integrator must land on
};

// Solution of d/dr[r^{N-2} d1 phi(v', N-1)] = (N-1) r^{N-2} v, v'(0) = 0, kept in
// integral form: W = r^{N-2} d1 phi(s, N-1) with s = v'.
struct Trajectory {
  SurfaceTension tension;
  double v0 = 0.0;
  double s_stop = 0.0;
  bool reached_stop = false;
  std::vector<double> r, v, W, s;
  std::vector<double> level_v;       // v at StepOptions::r_levels that were reached
  double max_conservation_error = 0.0;

  size_t size() const { return r.size(); }
};

Trajectory integrate_v(const SurfaceTension& tension, double v0, double s_stop, const StepOptions& opts = {});

// omega_{N-1} (r^{N-1} v - r^{N-2} d1 phi(s, N-1)) at the point where v' = s.
double V_of(const Trajectory& traj, double s);

double dV_dv0(const SurfaceTension& tension, double v0, double s_star, double h_fd, const StepOptions& opts = {});

// Delta = r v - (N-2)/(N-1) d1 phi(s, N-1) along the trajectory (r > 0).
double min_delta(const Trajectory& traj);

struct Reconstruction {
  Profile profile;
  double lambda = 0.0;
  double R_max = 0.0;
  double T_max = 0.0;
};

// Physical profile from a trajectory ending at the contact slope: with rho the
// trajectory radius, r = Lambda rho and t = v(rho_end) - v(rho). Knots sit at
// the radii rho_end (1 - i/K); the trajectory is re-integrated to land on them.
Reconstruction reconstruct_profile(const Trajectory& traj, const DropModel& model, int knots = 512);

struct ShootOptions {
  int knots = 512;
  double volume_rtol = 1e-10;
  int max_bisect = 200;
  int scan_lo = -20;
  int scan_hi = 20;
  StepOptions step;
};

struct ShootingSolution {
  double v0 = 0.0;
  double s_star = 0.0;
  double r_star = 0.0;               // trajectory radius at the contact slope
  double v_star = 0.0;
  double R_max = 0.0;
  double T_max = 0.0;
  double lambda = 0.0;
  Trajectory trajectory;
  Profile profile;
  double volume = 0.0;
  double young_residual = 0.0;       // from the exact end slope
  double young_residual_grid = 0.0;  // one-sided slope of the reconstructed profile
  double max_el_residual = 0.0;      // interior 90%, lambda = -v_star
  double lambda_estimate = 0.0;
  double min_delta = 0.0;
  double V = 0.0;                    // V_{v0}(s_star)
  double bridge_fitted = 0.0;        // volume / V
  double bridge_analytic = 0.0;      // |K_h| Lambda^{N-1} / omega_{N-1}
  double bridge_perimeter = 0.0;         // P(K_h) Lambda^{2N-1} / |S^{N-2}|
  int bisection_steps = 0;
  std::vector<std::pair<double, double>> history;  // (v0, volume), in evaluation order
};

ShootingSolution shoot(const DropModel& model, double m, const ShootOptions& opts = {});

}  // namespace sessile
