#include "sessile/odesolve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "sessile/error.hpp"

namespace sessile {

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double s_star(const SurfaceTension& tension, double omega) {
  const double lo_w = -tension.phi(0.0, 1.0);
  if (!(omega > lo_w && omega < 0.0))
    throw Error(Errc::omega_out_of_graph_range,
                "shooting needs omega in (" + std::to_string(lo_w) + ", 0)");
  const double b = tension.N() - 1;
  // -d2 phi(s, b) rises from -phi(0,1) towards 0 as s grows
  auto g = [&](double s) { return -tension.phi_partials(s, b).d2 - omega; };
  double lo = 0.0, hi = 1.0;
  int k = 0;
  while (g(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++k > 1100) throw Error(Errc::no_bracket, "s_star bracket did not close");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

using State = std::array<double, 2>;  // (v, W)

class Rhs {
 public:
  explicit Rhs(const SurfaceTension& f) : f_(f), N_(f.N()), b_(f.N() - 1) {}

  double slope(double r, double W) const {
    const double y = N_ == 2 ? W : W / std::pow(r, N_ - 2);
    return y >= 0.0 ? f_.invert_d1phi(b_, y) : -f_.invert_d1phi(b_, -y);
  }

  State operator()(double r, const State& y) const {
    return {slope(r, y[1]), (N_ - 1) * std::pow(r, N_ - 2) * y[0]};
  }

 private:
  const SurfaceTension& f_;
  int N_;
  double b_;
};

State rk4(const Rhs& f, double r, const State& y, double h) {
  auto add = [](const State& a, const State& k, double c) { return State{a[0] + c * k[0], a[1] + c * k[1]}; };
  const State k1 = f(r, y);
  const State k2 = f(r + 0.5 * h, add(y, k1, 0.5 * h));
  const State k3 = f(r + 0.5 * h, add(y, k2, 0.5 * h));
  const State k4 = f(r + h, add(y, k3, h));
  return {y[0] + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
          y[1] + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
}

// Step doubling with Richardson correction; returns the error estimate.
State doubled_step(const Rhs& f, double r, const State& y, double h, double& err) {
  const State big = rk4(f, r, y, h);
  const State half = rk4(f, r, y, 0.5 * h);
  const State two = rk4(f, r + 0.5 * h, half, 0.5 * h);
  err = 0.0;
  State out;
  for (int i = 0; i < 2; ++i) {
    const double d = (two[i] - big[i]) / 15.0;
    out[i] = two[i] + d;
    err = std::max(err, std::fabs(d) / (1.0 + std::fabs(two[i])));
  }
  return out;
}

// Small-r start: W ~ v0 r^{N-1}, v from the quadrature of the slope.
State startup(const Rhs& f, const SurfaceTension& t, double v0, double eps) {
  const int N = t.N();
  const GaussRule& g = gauss8();
  double dv = 0.0;
  for (size_t q = 0; q < g.x.size(); ++q) {
    const double rho = eps * g.x[q];
    dv += g.w[q] * f.slope(rho, v0 * std::pow(rho, N - 1));
  }
  return {v0 + eps * dv, v0 * std::pow(eps, N - 1)};
}

}  // namespace

Trajectory integrate_v(const SurfaceTension& tension, double v0, double s_stop, const StepOptions& opts) {
  if (!std::isfinite(v0) || v0 == 0.0) throw Error(Errc::invalid_input, "v0 must be finite and nonzero");
  const bool have_stop = std::isfinite(s_stop) && s_stop != 0.0;
  if (!have_stop && !opts.r_max) throw Error(Errc::invalid_input, "need a stopping slope or r_max");
  Trajectory tr;
  tr.tension = tension;
  tr.v0 = v0;
  tr.s_stop = s_stop;
  const Rhs f(tension);
  const int N = tension.N();
  const double b = N - 1;
  const double eps0 = 1e-6 * std::min(1.0, 1.0 / std::fabs(v0));

  auto record = [&](double r, const State& y) {
    const double s = f.slope(r, y[1]);
    tr.r.push_back(r);
    tr.v.push_back(y[0]);
    tr.W.push_back(y[1]);
    tr.s.push_back(s);
    const double lhs = std::pow(r, N - 2) * tension.phi_partials(s, b).d1;
    tr.max_conservation_error =
        std::max(tr.max_conservation_error, std::fabs(lhs - y[1]) / (1.0 + std::fabs(y[1])));
  };
  auto stop_hit = [&](double s) { return have_stop && std::fabs(s) >= std::fabs(s_stop); };

  tr.r.push_back(0.0);
  tr.v.push_back(v0);
  tr.W.push_back(0.0);
  tr.s.push_back(0.0);
  double r = eps0;
  State y = startup(f, tension, v0, eps0);
  record(r, y);

  size_t next_level = 0;
  while (next_level < opts.r_levels.size() && opts.r_levels[next_level] <= r) {
    tr.level_v.push_back(opts.r_levels[next_level] <= 0.0 ? v0 : y[0]);
    ++next_level;
  }

  double h = eps0;
  for (int step = 0; step < opts.max_steps; ++step) {
    double target = std::numeric_limits<double>::infinity();
    if (opts.r_max) target = *opts.r_max;
    if (next_level < opts.r_levels.size()) target = std::min(target, opts.r_levels[next_level]);
    const bool clipped = r + h >= target;
    const double hs = clipped ? target - r : h;
    if (opts.r_max && r >= *opts.r_max) break;

    double err = 0.0;
    State yn;
    try {
      yn = doubled_step(f, r, y, hs, err);
      if (!std::isfinite(yn[0]) || !std::isfinite(yn[1])) throw Error(Errc::stalled_inversion, "non-finite step");
      (void)f.slope(r + hs, yn[1]);
    } catch (const Error& e) {
      if (e.code() != Errc::stalled_inversion) throw;
      h = 0.5 * hs;
      if (h < 1e-15 * std::max(r, 1e-300))
        throw Error(Errc::stalled_inversion, "slope inversion stalled at r = " + std::to_string(r) +
                                                 ", W = " + std::to_string(y[1]));
      continue;
    }
    if (err > opts.tol) {
      h = hs * std::max(0.1, 0.9 * std::pow(opts.tol / err, 0.2));
      continue;
    }
    const double s_new = f.slope(r + hs, yn[1]);
    if (stop_hit(s_new)) {
      // land on s_stop by bisecting the step
      double lo = 0.0, hi = hs;
      State ylo = y, yhi = yn;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        double e2 = 0.0;
        const State ym = doubled_step(f, r, y, mid, e2);
        const double sm = f.slope(r + mid, ym[1]);
        if (stop_hit(sm)) {
          hi = mid;
          yhi = ym;
        } else {
          lo = mid;
          ylo = ym;
        }
        if (std::fabs(std::fabs(sm) - std::fabs(s_stop)) < 1e-12 * (1.0 + std::fabs(s_stop)) || hi - lo < 1e-16 * (r + hs)) {
          record(r + mid, ym);
          tr.reached_stop = true;
          return tr;
        }
      }
      (void)ylo;
      record(r + hi, yhi);
      tr.reached_stop = true;
      return tr;
    }
    r = clipped ? target : r + hs;
    y = yn;
    record(r, y);
    if (clipped && next_level < opts.r_levels.size() && target == opts.r_levels[next_level]) {
      tr.level_v.push_back(y[0]);
      ++next_level;
    }
    if (!clipped) h = hs * std::min(2.0, 0.9 * std::pow(opts.tol / std::max(err, 1e-300), 0.2));
    if (opts.r_max && r >= *opts.r_max) break;
  }
  if (opts.r_max && r >= *opts.r_max) return tr;
  throw Error(Errc::non_convergence, "integrate_v exceeded max_steps");
}

double V_of(const Trajectory& traj, double s) {
  const int N = traj.tension.N();
  const double b = N - 1;
  if (traj.size() < 2 || s < 0.0 || s > traj.s.back() + 1e-12 * (1.0 + traj.s.back()))
    throw Error(Errc::out_of_range, "slope outside the trajectory");
  if (s == 0.0) return 0.0;
  const auto it = std::lower_bound(traj.s.begin(), traj.s.end(), s);
  size_t j = static_cast<size_t>(it - traj.s.begin());
  double r, v;
  if (j < traj.size() && traj.s[j] == s) {
    r = traj.r[j];
    v = traj.v[j];
  } else if (j >= traj.size()) {
    r = traj.r.back();
    v = traj.v.back();
    s = traj.s.back();
  } else {
    // re-integrate from the previous accepted point to hit s exactly
    const size_t i = j - 1;
    StepOptions o;
    const Rhs f(traj.tension);
    const State y0{traj.v[i], traj.W[i]};
    double lo = 0.0, hi = traj.r[j] - traj.r[i];
    State ym = y0;
    double mid = 0.0;
    for (int k = 0; k < 200 && hi - lo > 1e-16 * traj.r[j]; ++k) {
      mid = 0.5 * (lo + hi);
      double e = 0.0;
      ym = i == 0 ? startup(f, traj.tension, traj.v0, mid) : doubled_step(f, traj.r[i], y0, mid, e);
      const double sm = f.slope(traj.r[i] + mid, ym[1]);
      (sm < s ? lo : hi) = mid;
    }
    r = traj.r[i] + mid;
    v = ym[0];
  }
  const double d1 = traj.tension.phi_partials(s, b).d1;
  return unit_ball_volume(N - 1) * (std::pow(r, N - 1) * v - std::pow(r, N - 2) * d1);
}

double dV_dv0(const SurfaceTension& tension, double v0, double s, double h_fd, const StepOptions& opts) {
  if (!(v0 > h_fd && h_fd > 0.0)) throw Error(Errc::invalid_input, "need v0 > h_fd > 0");
  const double vp = V_of(integrate_v(tension, v0 + h_fd, s, opts), s);
  const double vm = V_of(integrate_v(tension, v0 - h_fd, s, opts), s);
  return (vp - vm) / (2.0 * h_fd);
}

double min_delta(const Trajectory& traj) {
  const int N = traj.tension.N();
  double m = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < traj.size(); ++i) {
    if (!(traj.r[i] > 0.0)) continue;
    const double d1 = traj.tension.phi_partials(traj.s[i], N - 1).d1;
    m = std::min(m, traj.r[i] * traj.v[i] - (N - 2.0) / (N - 1.0) * d1);
  }
  return m;
}

Reconstruction reconstruct_profile(const Trajectory& traj, const DropModel& model, int knots) {
  if (!traj.reached_stop) throw Error(Errc::invalid_input, "trajectory did not reach its stopping slope");
  if (knots < 2) throw Error(Errc::invalid_input, "need >= 2 knots");
  const double rs = traj.r.back(), vs = traj.v.back();
  const double L = model.Lambda();
  StepOptions o;
  o.r_max = rs;
  for (int i = knots; i >= 0; --i) o.r_levels.push_back(rs * (1.0 - static_cast<double>(i) / knots));
  o.r_levels.back() = rs;
  const Trajectory fine = integrate_v(traj.tension, traj.v0, std::numeric_limits<double>::infinity(), o);
  if (fine.level_v.size() != o.r_levels.size())
    throw Error(Errc::non_convergence, "reconstruction missed radius levels");

  Reconstruction rec;
  rec.lambda = -vs;
  rec.R_max = L * rs;
  rec.T_max = vs - traj.v0;
  Profile& p = rec.profile;
  for (int i = 0; i <= knots; ++i) {
    const size_t k = static_cast<size_t>(knots - i);  // level index, radius decreasing with i
    p.t.push_back(i == 0 ? 0.0 : vs - fine.level_v[k]);
    p.r.push_back(i == knots ? 0.0 : L * o.r_levels[k]);
  }
  p.t.back() = rec.T_max;
  p.r.front() = rec.R_max;
  return rec;
}

ShootingSolution shoot(const DropModel& model, double m, const ShootOptions& opts) {
  if (!(m > 0.0)) throw Error(Errc::invalid_input, "mass must be positive");
  const SurfaceTension& f = model.tension();
  const double ss = s_star(f, model.omega());
  ShootingSolution sol;
  sol.s_star = ss;

  struct Eval {
    Trajectory traj;
    Reconstruction rec;
    double volume;
  };
  auto evaluate = [&](double v0) {
    Trajectory tr = integrate_v(f, v0, ss, opts.step);
    Reconstruction rec = reconstruct_profile(tr, model, opts.knots);
    const double vol = reduced_volume(model, rec.profile);
    sol.history.emplace_back(v0, vol);
    return Eval{std::move(tr), std::move(rec), vol};
  };

  // volume decreases in v0: find 2^k with vol(2^k) >= m > vol(2^{k+1})
  double lo = 0.0, hi = 0.0;
  std::optional<Eval> best;
  double prev_v = 0.0, prev_vol = 0.0;
  bool bracketed = false;
  for (int k = opts.scan_lo; k <= opts.scan_hi; ++k) {
    const double v0 = std::ldexp(1.0, k);
    Eval e = evaluate(v0);
    if (k > opts.scan_lo && prev_vol >= m && e.volume < m) {
      lo = prev_v;
      hi = v0;
      bracketed = true;
      best = std::move(e);
      break;
    }
    prev_v = v0;
    prev_vol = e.volume;
  }
  if (!bracketed) throw Error(Errc::no_bracket, "v0 scan over 2^[-20, 20] did not bracket the mass");

  for (int it = 0; it < opts.max_bisect; ++it) {
    const double mid = std::sqrt(lo * hi);
    Eval e = evaluate(mid);
    ++sol.bisection_steps;
    (e.volume >= m ? lo : hi) = mid;
    const bool done = std::fabs(e.volume - m) <= opts.volume_rtol * m || hi / lo - 1.0 < 1e-15;
    best = std::move(e);
    if (done) break;
  }

  Eval& e = *best;
  sol.v0 = e.traj.v0;
  sol.r_star = e.traj.r.back();
  sol.v_star = e.traj.v.back();
  sol.R_max = e.rec.R_max;
  sol.T_max = e.rec.T_max;
  sol.lambda = e.rec.lambda;
  sol.profile = e.rec.profile;
  sol.volume = e.volume;
  const int N = model.N();
  const double end_slope = e.traj.s.back();
  sol.young_residual = -f.phi_partials(model.Lambda(), (N - 1) * model.Lambda() / end_slope).d2 - model.omega();
  sol.young_residual_grid = young_residual(model, sol.profile);
  sol.max_el_residual = el_residual(model, sol.profile, sol.lambda).max_abs(sol.T_max);
  sol.lambda_estimate = lambda_estimate(model, sol.profile);
  sol.min_delta = min_delta(e.traj);
  sol.V = V_of(e.traj, end_slope);
  sol.bridge_fitted = sol.volume / sol.V;
  sol.bridge_analytic = model.area() * std::pow(model.Lambda(), N - 1) / unit_ball_volume(N - 1);
  sol.bridge_perimeter = model.body().aniso_perimeter * std::pow(model.Lambda(), 2 * N - 1) /
                     ((N - 1) * unit_ball_volume(N - 1));
  sol.trajectory = std::move(e.traj);
  return sol;
}

}  // namespace sessile
