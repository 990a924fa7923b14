#include "sessile/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <random>

#include "sessile/competitor.hpp"
#include "sessile/error.hpp"
#include "sessile/io.hpp"
#include "sessile/odesolve.hpp"
#include "sessile/reduced.hpp"
#include "sessile/sets.hpp"
#include "sessile/wulff.hpp"

namespace sessile {

namespace {

constexpr size_t kMaxFailures = 8;

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

void fail(SuiteResult& r, const std::string& what) {
  r.passed = false;
  if (r.failures.size() < kMaxFailures) r.failures.push_back(what);
}

int trials_or(const SuiteOptions& o, int fallback) { return o.trials > 0 ? o.trials : fallback; }

double neg_omega(const SurfaceTension& f, double frac) { return -frac * f.phi(0.0, 1.0); }
double pos_omega(const SurfaceTension& f, double frac) { return frac * f.phi(0.0, -1.0); }

// Energy, symmetrization and lower bound share the same random sets.
const std::vector<std::string> kSetTensions = {"euclid", "pnorm3-l3", "weighted2-l1reg"};
const std::vector<double> kOmegaFractions = {-0.8, -0.3, 0.3, 0.8};

double omega_for(const SurfaceTension& f, double frac) {
  return frac < 0 ? neg_omega(f, -frac) : pos_omega(f, frac);
}

SuiteResult symmetrization(const SuiteOptions& o) {
  SuiteResult r{"symmetrization", true, "", {}, {}, 0.0};
  const int n = trials_or(o, 1000);
  long cases = 0;
  double worst = -INFINITY;
  for (const std::string& name : kSetTensions) {
    const SurfaceTension f = preset(name);
    const DropModel base(f, 0.0);
    std::mt19937_64 rng(o.seed);
    for (int k = 0; k < n; ++k) {
      const SlicedSet A = random_sliced_set(f, rng);
      const Profile star = symmetrize(A, base.body());
      for (double frac : kOmegaFractions) {
        const double w = omega_for(f, frac);
        const double FA = energy(A, f, w).total;
        const double Fs = reduced_energy(base.with_omega(w), star).total;
        const double excess = (Fs - FA) / (1.0 + std::fabs(FA));
        worst = std::max(worst, excess);
        ++cases;
        if (excess > 1e-9) fail(r, fmt("%s trial %d omega %.3g: F(A*) - F(A) = %.3e", name.c_str(), k, w, Fs - FA));
      }
    }
  }
  r.metrics = {{"cases", double(cases)}, {"max_relative_excess", worst}};
  r.summary = fmt("%ld cases, max (F(A*)-F(A))/(1+|F(A)|) = %.3e", cases, worst);
  return r;
}

SuiteResult lower_bound(const SuiteOptions& o) {
  SuiteResult r{"lower_bound", true, "", {}, {}, 0.0};
  const int n = trials_or(o, 1000);
  long cases = 0;
  double lowest = INFINITY;
  for (const std::string& name : kSetTensions) {
    const SurfaceTension f = preset(name);
    const DropModel base(f, 0.0);
    const auto [lo, hi] = f.omega_range();
    const std::vector<double> omegas = {lo * (1 - 1e-9), omega_for(f, -0.3), omega_for(f, 0.3), hi * (1 - 1e-9)};
    std::mt19937_64 rng(o.seed + 1);
    for (int k = 0; k < n; ++k) {
      const SlicedSet A = random_sliced_set(f, rng);
      const Profile star = symmetrize(A, base.body());
      for (double w : omegas) {
        const double FA = energy(A, f, w).total;
        const double Fs = reduced_energy(base.with_omega(w), star).total;
        lowest = std::min({lowest, FA, Fs});
        cases += 2;
        if (std::min(FA, Fs) < -1e-9) fail(r, fmt("%s trial %d omega %.6g: F = %.3e", name.c_str(), k, w, std::min(FA, Fs)));
      }
    }
  }
  r.metrics = {{"cases", double(cases)}, {"min_energy", lowest}};
  r.summary = fmt("%ld energies, min %.6g", cases, lowest);
  return r;
}

SuiteResult jensen(const SuiteOptions& o) {
  SuiteResult r{"jensen", true, "", {}, {}, 0.0};
  const int n = trials_or(o, 200);
  std::mt19937_64 rng(o.seed + 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::map<std::string, WulffBody> bodies;
  double worst_pos = 0.0, weakest_neg = INFINITY;
  int pos = 0, neg = 0;
  for (int k = 0; k < n; ++k) {
    const std::string& name = kSetTensions[k % kSetTensions.size()];
    const SurfaceTension f = preset(name);
    if (!bodies.count(name)) bodies.emplace(name, build_wulff_body(f, 256));
    const WulffBody& K = bodies.at(name);
    const double c = 0.3 + u(rng);
    const Vec2 x0{u(rng) - 0.5, u(rng) - 0.5};
    const double a0 = 0.5 + u(rng);
    double slope = 0.2 + u(rng);
    if (u(rng) < 0.5) slope = -slope;
    const double dt = 0.1 + u(rng);
    const double a1 = std::max(0.05, a0 + slope * dt);
    SlicedSet s;
    s.knots = {0.0, dt};
    s.scales = {a0, a1};
    const bool positive = k % 2 == 0;
    const int kind = (k / 2) % 2;  // negatives: 0 non-homothetic base, 1 drifting center
    if (positive || kind == 1) {
      s.base = dilate_translate(f, K.geometry, c, x0);
      // beta = a x0 + center stays fixed when center = beta0 - a x0.
      const Vec2 beta0{u(rng) - 0.5, u(rng) - 0.5};
      s.centers = {beta0 - a0 * x0, beta0 - a1 * x0};
      if (!positive) {
        const double ang = 2 * M_PI * u(rng), mag = (0.1 + u(rng)) * dt;
        s.centers[1] = s.centers[1] + Vec2{mag * std::cos(ang), mag * std::sin(ang)};
      }
    } else {
      s.base = random_convex_polygon(f, rng, 3, 12);
      s.centers = {Vec2{}, Vec2{}};
    }
    const double gap = jensen_gap(s, 0, f);
    if (positive) {
      ++pos;
      worst_pos = std::max(worst_pos, std::fabs(gap));
      if (std::fabs(gap) > 1e-10) fail(r, fmt("positive case %d (%s): gap %.3e", k, name.c_str(), gap));
    } else {
      ++neg;
      weakest_neg = std::min(weakest_neg, gap);
      if (!(gap > 1e-10)) fail(r, fmt("negative case %d (%s, kind %d): gap %.3e", k, name.c_str(), kind, gap));
    }
  }
  r.metrics = {{"positive_cases", double(pos)},
               {"negative_cases", double(neg)},
               {"max_positive_gap", worst_pos},
               {"min_negative_gap", weakest_neg}};
  r.summary = fmt("%d homothetic slabs max |gap| %.2e; %d others min gap %.2e", pos, worst_pos, neg, weakest_neg);
  return r;
}

SuiteResult wulff(const SuiteOptions&) {
  SuiteResult r{"wulff", true, "", {}, {}, 0.0};
  struct Case {
    const char* label;
    HSpec h;
    double exact_area;
  };
  const std::vector<Case> cases = {{"l2", {HFamily::euclid}, M_PI},
                                   {"l1reg", {HFamily::l1reg, 1.0, 0.25}, 4.0 + 8.0 * 0.25 + M_PI * 0.0625},
                                   {"l3", {HFamily::lp, 3.0}, NAN}};
  double worst1024 = 0.0, worst4096 = 0.0;
  for (const Case& c : cases) {
    const SurfaceTension f(3, PhiSpec{}, c.h);
    for (int M : {1024, 4096}) {
      const WulffBody K = build_wulff_body(f, M);
      const double err = std::fabs(K.lambda - 2.0) / 2.0;
      const double tol = M == 1024 ? 2e-3 : 5e-4;
      (M == 1024 ? worst1024 : worst4096) = std::max(M == 1024 ? worst1024 : worst4096, err);
      r.metrics.push_back({fmt("%s_M%d_area", c.label, M), K.area()});
      if (err > tol) fail(r, fmt("%s M=%d: Lambda = %.12g", c.label, M, K.lambda));
      if (std::isfinite(c.exact_area) && std::fabs(K.area() - c.exact_area) > tol * c.exact_area)
        fail(r, fmt("%s M=%d: area %.12g vs %.12g", c.label, M, K.area(), c.exact_area));
    }
  }
  r.metrics.push_back({"max_rel_error_M1024", worst1024});
  r.metrics.push_back({"max_rel_error_M4096", worst4096});
  r.summary = fmt("|Lambda-(N-1)|/(N-1): %.2e at 1024 normals, %.2e at 4096", worst1024, worst4096);
  return r;
}

SuiteResult el_order(const SuiteOptions&) {
  SuiteResult r{"el_order", true, "", {}, {}, 0.0};
  double worst = INFINITY;
  for (const char* name : {"euclid", "pnorm3-l3", "pnorm3-l2"}) {
    const SurfaceTension f = preset(name);
    const DropModel model(f, neg_omega(f, 0.5));
    const ShootingSolution sol = shoot(model, 1.0);
    std::vector<double> res;
    for (int K : {64, 128, 256}) {
      const Reconstruction rec = reconstruct_profile(sol.trajectory, model, K);
      res.push_back(el_residual(model, rec.profile, rec.lambda).max_abs(rec.T_max));
      r.metrics.push_back({fmt("%s_K%d", name, K), res.back()});
    }
    for (size_t i = 0; i + 1 < res.size(); ++i) {
      const double order = std::log2(res[i] / res[i + 1]);
      worst = std::min(worst, order);
      if (!(order >= 1.8)) fail(r, fmt("%s: order %.3f between grids %zu and %zu", name, order, i, i + 1));
    }
  }
  r.metrics.push_back({"min_order", worst});
  r.summary = fmt("min observed order %.3f on 64/128/256 knots", worst);
  return r;
}

SuiteResult young(const SuiteOptions&) {
  SuiteResult r{"young", true, "", {}, {}, 0.0};
  double worst_shoot = 0.0, worst_ratio = 0.0;
  for (const std::string& name : preset_names()) {
    const SurfaceTension f = preset(name);
    const DropModel model(f, neg_omega(f, 0.5));
    const ShootingSolution sol = shoot(model, 1.0);
    worst_shoot = std::max(worst_shoot, std::fabs(sol.young_residual));
    if (!(std::fabs(sol.young_residual) <= 1e-8)) fail(r, fmt("%s shoot: residual %.3e", name.c_str(), sol.young_residual));
  }
  for (const char* name : {"euclid", "pnorm3-l2"}) {
    const SurfaceTension f = preset(name);
    const DropModel model(f, neg_omega(f, 0.5));
    const Profile p = minimize_direct(model, 1.0).profile;
    const double s01 = (p.r[1] - p.r[0]) / (p.t[1] - p.t[0]);
    const double s12 = (p.r[2] - p.r[1]) / (p.t[2] - p.t[1]);
    const double grid = std::fabs(young_functional(model, s01) - young_functional(model, s12));
    const double y = std::fabs(young_residual(model, p));
    const double ratio = y / grid;
    worst_ratio = std::max(worst_ratio, ratio);
    r.metrics.push_back({fmt("%s_direct_residual", name), y});
    r.metrics.push_back({fmt("%s_direct_grid_error", name), grid});
    if (!(ratio <= 2.0)) fail(r, fmt("%s direct: |residual| %.3e vs grid slope error %.3e", name, y, grid));
  }
  r.metrics.push_back({"max_shoot_residual", worst_shoot});
  r.metrics.push_back({"max_direct_ratio", worst_ratio});
  r.summary = fmt("shoot max |Y| %.2e; direct |Y|/grid error max %.3f", worst_shoot, worst_ratio);
  return r;
}

SuiteResult cross_solver(const SuiteOptions&) {
  SuiteResult r{"cross_solver", true, "", {}, {}, 0.0};
  double worst_l = 0.0, worst_e = 0.0, slowest = 0.0;
  for (const char* name : {"euclid", "pnorm3-l2"}) {
    const SurfaceTension f = preset(name);
    const DropModel model(f, neg_omega(f, 0.5));
    const auto t0 = std::chrono::steady_clock::now();
    const ShootingSolution s = shoot(model, 1.0);
    const auto t1 = std::chrono::steady_clock::now();
    const DirectResult d = minimize_direct(model, 1.0);
    const auto t2 = std::chrono::steady_clock::now();
    const double ts = std::chrono::duration<double>(t1 - t0).count();
    const double td = std::chrono::duration<double>(t2 - t1).count();
    slowest = std::max({slowest, ts, td});
    const double Es = reduced_energy(model, s.profile).total;
    const double l = linf_distance(s.profile, d.profile) / s.R_max;
    const double e = std::fabs(d.energy.total - Es) / std::fabs(Es);
    worst_l = std::max(worst_l, l);
    worst_e = std::max(worst_e, e);
    r.metrics.push_back({fmt("%s_linf", name), l});
    r.metrics.push_back({fmt("%s_energy", name), e});
    if (!d.converged) fail(r, fmt("%s: direct minimizer did not converge", name));
    if (!(l <= 0.01)) fail(r, fmt("%s: L-inf difference %.3e of R_max", name, l));
    if (!(e <= 0.003)) fail(r, fmt("%s: energy difference %.3e", name, e));
    if (ts > 30.0 || td > 30.0) fail(r, fmt("%s: run took %.1f s / %.1f s", name, ts, td));
  }
  r.metrics.push_back({"max_linf", worst_l});
  r.metrics.push_back({"max_energy", worst_e});
  r.summary = fmt("L-inf/R_max max %.3e, energy max %.3e, slowest run %.2f s", worst_l, worst_e, slowest);
  return r;
}

SuiteResult monotonicity(const SuiteOptions&) {
  SuiteResult r{"monotonicity", true, "", {}, {}, 0.0};
  int negatives = 0, total = 0;
  double largest = -INFINITY;
  for (const std::string& name : preset_names()) {
    const SurfaceTension f = preset(name);
    const double ss = s_star(f, neg_omega(f, 0.5));
    for (int i = 0; i < 16; ++i) {
      const double v0 = 0.1 * std::pow(100.0, i / 15.0);
      const double d = dV_dv0(f, v0, ss, 1e-4 * v0);
      ++total;
      largest = std::max(largest, d);
      if (d < 0) ++negatives;
      else fail(r, fmt("%s v0 = %.4g: dV/dv0 = %.3e", name.c_str(), v0, d));
    }
  }
  r.metrics = {{"negative", double(negatives)}, {"total", double(total)}, {"max_derivative", largest}};
  r.summary = fmt("%d/%d negative (16 per tension), largest %.3e", negatives, total, largest);
  return r;
}

// Hat-shaped dent centred on a knot whose radius is at least 5% of the maximum.
// Closer to the apex almost no volume sits above the dent, and the downward
// shift then only admits witnesses too narrow to change the energy measurably.
Profile dented(const Profile& p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = static_cast<int>(p.size());
  int last = n - 1;
  while (last > 0 && p.r[last] < 0.05 * p.max_r()) --last;
  const int w = 2 + static_cast<int>(u(rng) * 5);
  const int c = w + static_cast<int>(u(rng) * (last - 2 * w));
  const double depth = (0.03 + 0.2 * u(rng)) * p.r[c];
  Profile q = p;
  for (int i = c - w; i <= c + w; ++i) q.r[i] = std::max(0.0, q.r[i] - depth * (1.0 - std::abs(i - c) / double(w)));
  return q;
}

SuiteResult convexity(const SuiteOptions& o) {
  SuiteResult r{"convexity", true, "", {}, {}, 0.0};
  int outputs = 0;
  auto check_output = [&](const std::string& label, const Profile& p) {
    ++outputs;
    const ShapeReport s = check_shape(p);
    if (!s.concave || !s.single_support)
      fail(r, fmt("%s: concave %d single support %d slope increase %.3e", label.c_str(), s.concave, s.single_support,
                  s.max_slope_increase));
  };
  struct Base {
    DropModel model;
    Profile p;
  };
  std::vector<Base> bases;
  for (const std::string& name : preset_names()) {
    const SurfaceTension f = preset(name);
    const DropModel m(f, neg_omega(f, 0.5));
    ShootOptions so;
    so.knots = 128;
    const ShootingSolution s = shoot(m, 1.0, so);
    check_output(name + " shoot", s.profile);
    DirectOptions d;
    d.grid_size = 128;
    const DirectResult g = minimize_direct(m, 1.0, d);
    check_output(name + " direct", g.profile);
    const DropModel mp = m.with_omega(pos_omega(f, 0.4));
    const DirectResult h = minimize_direct(mp, 1.0, d);
    check_output(name + " direct omega>0", h.profile);
    if (name == "euclid") bases.push_back({m, s.profile});
    if (name == "pnorm3-l2") bases.push_back({mp, h.profile});
  }

  const int n = trials_or(o, 100);
  std::mt19937_64 rng(o.seed + 9);
  int repaired = 0, redraws = 0, case1 = 0, case2 = 0;
  double min_margin = INFINITY, max_dv = 0.0;
  for (int k = 0; k < n; ++k) {
    const Base& b = bases[k % bases.size()];
    Profile E = dented(b.p, rng);
    while (find_dents(E).empty()) {
      ++redraws;
      E = dented(b.p, rng);
    }
    const auto res = repair_once(b.model, E);
    if (!res) {
      fail(r, fmt("dent %d: no energy-decreasing competitor found", k));
      continue;
    }
    const double margin = res->energy_before - res->energy_after;
    const double dv = std::fabs(res->volume_after - res->volume_before) / res->volume_before;
    min_margin = std::min(min_margin, margin);
    max_dv = std::max(max_dv, dv);
    if (!(margin > 1e-12 * std::max(1.0, std::fabs(res->energy_before))))
      fail(r, fmt("dent %d: energy change %.3e", k, -margin));
    else if (dv > 1e-9)
      fail(r, fmt("dent %d: volume drift %.3e", k, dv));
    else
      ++repaired;
    (res->case_index == 1 ? case1 : case2)++;
  }
  r.metrics = {{"solver_outputs", double(outputs)}, {"dents", double(n)},           {"repaired", double(repaired)},
               {"case1", double(case1)},            {"case2", double(case2)},       {"min_energy_drop", min_margin},
               {"max_volume_drift", max_dv},        {"redraws", double(redraws)}};
  r.summary = fmt("%d solver outputs concave; %d/%d dents repaired (case 1: %d, case 2: %d), min drop %.2e", outputs,
                  repaired, n, case1, case2, min_margin);
  return r;
}

SuiteResult barycenter(const SuiteOptions& o) {
  SuiteResult r{"barycenter", true, "", {}, {}, 0.0};
  const SurfaceTension f = preset("euclid");
  const DropModel model(f, neg_omega(f, 0.5), 512);
  DirectOptions d;
  d.grid_size = 128;
  const DirectResult g = minimize_direct(model, 1.0, d);
  const SlicedSet E = lift_profile(g.profile, model.body());
  const double drift = barycenter_path(E, model.body()).max_drift;
  const double F0 = energy(E, f, model.omega()).total;
  const double Fr = g.energy.total;
  if (drift != 0.0) fail(r, fmt("unperturbed drift %.3e", drift));
  if (std::fabs(F0 - Fr) > 1e-9 * std::fabs(Fr)) fail(r, fmt("lifted energy %.12g vs reduced %.12g", F0, Fr));

  const int n = trials_or(o, 20);
  std::mt19937_64 rng(o.seed + 10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double T = g.profile.top(), R = g.profile.max_r();
  double min_increase = INFINITY;
  int increased = 0;
  for (int k = 0; k < n; ++k) {
    SlicedSet P = E;
    const double amp = (0.01 + 0.1 * u(rng)) * R, freq = 0.5 + 2.5 * u(rng), phase = 2 * M_PI * u(rng);
    const double ang = 2 * M_PI * u(rng);
    const Vec2 dir{std::cos(ang), std::sin(ang)};
    for (size_t i = 0; i < P.knots.size(); ++i)
      P.centers[i] = (amp * std::sin(M_PI * freq * P.knots[i] / T + phase)) * dir;
    const double inc = energy(P, f, model.omega()).total - F0;
    min_increase = std::min(min_increase, inc);
    if (inc > 0) ++increased;
    else fail(r, fmt("perturbation %d: energy change %.3e", k, inc));
  }
  r.metrics = {{"drift", drift}, {"energy", F0}, {"increased", double(increased)}, {"min_increase", min_increase}};
  r.summary = fmt("drift %.1g; %d/%d perturbations raise energy, min increase %.3e", drift, increased, n, min_increase);
  return r;
}

SuiteResult gradient(const SuiteOptions& o) {
  SuiteResult r{"gradient", true, "", {}, {}, 0.0};
  const int n = trials_or(o, 50);
  std::mt19937_64 rng(o.seed + 11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<std::string> names = preset_names();
  std::map<std::string, DropModel> models;
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const std::string& name = names[k % names.size()];
    const SurfaceTension f = preset(name);
    if (!models.count(name)) models.emplace(name, DropModel(f, 0.0, 512));
    const auto [lo, hi] = f.omega_range();
    const DropModel model = models.at(name).with_omega(lo + (hi - lo) * (0.05 + 0.9 * u(rng)));
    Profile p;
    double t = 0.0;
    for (int i = 0; i < 32; ++i) {
      p.t.push_back(t);
      p.r.push_back(0.2 + 1.3 * u(rng));
      t += 0.02 + 0.1 * u(rng);
    }
    const EnergyGradient g = energy_gradient(model, p);
    double gmax = 0.0, emax = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
      const double h = 1e-6 * p.r[i];
      Profile a = p, b = p;
      a.r[i] += h;
      b.r[i] -= h;
      const double fd = (reduced_energy(model, a).total - reduced_energy(model, b).total) / (2 * h);
      gmax = std::max(gmax, std::fabs(g.dE[i]));
      emax = std::max(emax, std::fabs(fd - g.dE[i]));
    }
    const double rel = emax / gmax;
    worst = std::max(worst, rel);
    if (!(rel < 1e-5)) fail(r, fmt("profile %d (%s): relative error %.3e", k, name.c_str(), rel));
  }
  r.metrics = {{"profiles", double(n)}, {"max_relative_error", worst}};
  r.summary = fmt("%d profiles, max relative error %.3e", n, worst);
  return r;
}

SuiteResult bridge(const SuiteOptions&) {
  SuiteResult r{"bridge", true, "", {}, {}, 0.0};
  double worst = 0.0;
  for (const std::string& name : preset_names()) {
    const SurfaceTension f = preset(name);
    const DropModel model(f, neg_omega(f, 0.5));
    const double ss = s_star(f, model.omega());
    std::vector<double> c;
    for (int i = 0; i < 8; ++i) {
      const double v0 = 0.25 * std::pow(16.0, i / 7.0);
      const Trajectory tr = integrate_v(f, v0, ss);
      const Reconstruction rec = reconstruct_profile(tr, model);
      c.push_back(reduced_volume(model, rec.profile) / V_of(tr, ss));
    }
    const auto [mn, mx] = std::minmax_element(c.begin(), c.end());
    double mean = 0.0;
    for (double x : c) mean += x / c.size();
    const double spread = (*mx - *mn) / mean;
    const double analytic = model.area() * std::pow(model.Lambda(), f.N() - 1) / unit_ball_volume(f.N() - 1);
    worst = std::max(worst, spread);
    r.metrics.push_back({name + "_fitted", mean});
    r.metrics.push_back({name + "_analytic", analytic});
    r.metrics.push_back({name + "_spread", spread});
    if (!(spread <= 1e-3)) fail(r, fmt("%s: constant varies by %.3e across v0", name.c_str(), spread));
  }
  r.metrics.push_back({"max_spread", worst});
  r.summary = fmt("fitted |E|/V constant varies by at most %.3e across v0", worst);
  return r;
}

const std::vector<std::pair<std::string, std::function<SuiteResult(const SuiteOptions&)>>>& registry() {
  static const std::vector<std::pair<std::string, std::function<SuiteResult(const SuiteOptions&)>>> r = {
      {"symmetrization", symmetrization}, {"jensen", jensen},       {"lower_bound", lower_bound},
      {"wulff", wulff},                   {"el_order", el_order},   {"young", young},
      {"cross_solver", cross_solver},     {"monotonicity", monotonicity}, {"convexity", convexity},
      {"barycenter", barycenter},         {"gradient", gradient},   {"bridge", bridge}};
  return r;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) out.push_back(name);
  return out;
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& opts) {
  for (const auto& [n, fn] : registry()) {
    if (n != name) continue;
    const auto t0 = std::chrono::steady_clock::now();
    SuiteResult res;
    try {
      res = fn(opts);
    } catch (const Error& e) {
      res.name = name;
      res.passed = false;
      res.summary = std::string("error: ") + e.what();
      res.failures.push_back(e.what());
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
  }
  throw Error(Errc::invalid_input, "unknown suite \"" + name + "\"");
}

double linf_distance(const Profile& a, const Profile& b) {
  double worst = 0.0;
  for (double t : a.t) worst = std::max(worst, std::fabs(a.r_at(t) - b.r_at(t)));
  for (double t : b.t) worst = std::max(worst, std::fabs(a.r_at(t) - b.r_at(t)));
  return worst;
}

}  // namespace sessile
