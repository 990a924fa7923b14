#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sessile/profile.hpp"
#include "sessile/sets.hpp"
#include "sessile/tension.hpp"
#include "sessile/wulff.hpp"

namespace sessile {

// Tension, its slice Wulff body and the contact coefficient.
class DropModel {
 public:
  DropModel(SurfaceTension tension, double omega, int M_normals = kDefaultNormals);
  DropModel(SurfaceTension tension, WulffBody body, double omega);

  const SurfaceTension& tension() const { return tension_; }
  const WulffBody& body() const { return body_; }
  double omega() const { return omega_; }
  int N() const { return tension_.N(); }
  double area() const { return body_.area(); }      // |K_h|
  double Lambda() const { return body_.lambda; }     // P_h(K_h) / |K_h|
  DropModel with_omega(double omega) const { return DropModel(tension_, body_, omega); }

 private:
  SurfaceTension tension_;
  WulffBody body_;
  double omega_;
};

EnergyBreakdown reduced_energy(const DropModel& model, const Profile& p);
double reduced_volume(const DropModel& model, const Profile& p);

// Lateral energy and volume restricted to heights in [a, b].
double lateral_energy_between(const DropModel& model, const Profile& p, double a, double b);
double volume_between(const DropModel& model, const Profile& p, double a, double b);

struct EnergyGradient {
  std::vector<double> dE;  // d total / d r_i
  std::vector<double> dV;  // d volume / d r_i
};
EnergyGradient energy_gradient(const DropModel& model, const Profile& p);

struct ElResidual {
  std::vector<size_t> index;  // interior knots that were evaluated
  std::vector<double> t;
  std::vector<double> value;
  std::vector<size_t> skipped;  // interior knots with r = 0

  // Max |residual| over knots with t in [lo * T, hi * T].
  double max_abs(double T, double lo = 0.05, double hi = 0.95) const;
};

// Conservative discretization: minus the gradient of (energy + lambda volume)
// divided by |K_h| and the hat-function mass of each knot.
ElResidual el_residual(const DropModel& model, const Profile& p, double lambda);
// Least-squares multiplier over interior knots with t in [lo T, hi T].
double lambda_estimate(const DropModel& model, const Profile& p, double lo = 0.05, double hi = 0.95);

// -d2 phi(Lambda, -(N-1) r'(0)) - omega with the one-sided slope at 0.
double young_residual(const DropModel& model, const Profile& p);
double young_functional(const DropModel& model, double slope);

struct ShapeReport {
  bool concave = false;
  bool single_support = false;
  double max_slope_increase = 0.0;
};
ShapeReport check_shape(const Profile& p, double tol = 1e-7);

struct DirectOptions {
  int grid_size = 256;       // number of slabs
  int max_iter = 20000;
  int repair_every = 50;     // K_desc
  double tol_g = 1e-7;        // scaled max |projected gradient|
  double tol_e = 1e-10;       // relative energy drop over one sweep
  int lbfgs_memory = 12;
  bool repair = true;
  std::uint64_t seed = 0;    // unused by the deterministic scheme; echoed in reports
  std::optional<Profile> initial;
};

struct DirectResult {
  Profile profile;
  EnergyBreakdown energy;
  double volume = 0.0;
  int iterations = 0;
  int repairs = 0;
  int regrids = 0;
  bool converged = false;
  double grad_norm = 0.0;
  std::vector<double> energy_history;
  std::vector<double> volume_history;
};

// Initial guess: K intersected with {x_N > -omega}, scaled to volume m, on the
// apex-graded grid.
Profile winterbottom_profile(const DropModel& model, double m, int grid_size);

DirectResult minimize_direct(const DropModel& model, double m, const DirectOptions& opts = {});

// Apex-graded knot fractions xi_i = 1 - (1 - i/M)^2.
std::vector<double> graded_fractions(int M);

}  // namespace sessile
