#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sessile/profile.hpp"
#include "sessile/reduced.hpp"

namespace sessile {

enum class CapSide { plus, minus };

inline constexpr int kCapSamples = 512;

// K_+ keeps the part of K above sigma, K_- the part below. The cap is dilated by b
// and translated so that height sigma lands on t_anchor, where its slice has
// measure v_anchor. Returned knots run upward and need not start at 0.
Profile cap_profile(const DropModel& model, CapSide side, double sigma, double t_anchor, double v_anchor,
                    int samples = kCapSamples);

struct CompetitorParams {
  CapSide side = CapSide::plus;
  double sigma = 0.0;
  double tau = 0.0;
  double b = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double sigma0 = 0.0;      // where the full cap volume equals the middle volume
  double volume_mid = 0.0;  // |E cut to (t1, t2)|
};

// Cap segment between t1 and tau (side +) or tau and t2 (side -).
Profile cap_segment(const DropModel& model, const Profile& E, const CompetitorParams& params);

CompetitorParams solve_params(const DropModel& model, const Profile& E, double t1, double t2, CapSide side);

struct SurfaceComparison {
  double cap_energy = 0.0;
  double original_energy = 0.0;
};
SurfaceComparison compare_surface_energy(const DropModel& model, const Profile& E, const CompetitorParams& params);

struct CompetitorResult {
  Profile profile;
  CompetitorParams params;
  int case_index = 1;
  double energy_before = 0.0;
  double energy_after = 0.0;
  double volume_before = 0.0;
  double volume_after = 0.0;
  SurfaceComparison surface;
};

// r strictly below the chord at every knot in (t1, t2), with at least one such knot.
bool below_chord(const Profile& E, double t1, double t2);
// t2 - t1 < |E above t2| / max slice measure.
bool shift_hypothesis(const DropModel& model, const Profile& E, double t1, double t2);

// Throws hypothesis_violated unless the pair is a strict dent (and the shift
// hypothesis holds when r(t1) > r(t2)).
CompetitorResult apply_competitor(const DropModel& model, const Profile& E, double t1, double t2);

struct Dent {
  double t1 = 0.0;
  double t2 = 0.0;
  double depth = 0.0;  // largest chord deficit
};
// Knots strictly below the upper concave hull, grouped by hull edge, deepest first.
std::vector<Dent> find_dents(const Profile& E, double tol = 1e-12);

std::optional<std::pair<double, double>> find_nonconvexity(const Profile& E, double epsilon);

// One energy-decreasing replacement, or nothing if no dent could be repaired.
std::optional<CompetitorResult> repair_once(const DropModel& model, const Profile& E);

}  // namespace sessile
