#include "sessile/reduced.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "sessile/competitor.hpp"
#include "sessile/error.hpp"

namespace sessile {

DropModel::DropModel(SurfaceTension tension, double omega, int M_normals)
    : DropModel(tension, build_wulff_body(tension, M_normals), omega) {}

DropModel::DropModel(SurfaceTension tension, WulffBody body, double omega)
    : tension_(std::move(tension)), body_(std::move(body)), omega_(omega) {
  if (!tension_.omega_in_range(omega_)) {
    const auto [lo, hi] = tension_.omega_range();
    throw Error(Errc::omega_out_of_range, "omega must lie in (" + std::to_string(lo) + ", " + std::to_string(hi) + ")");
  }
  if (body_.d() != tension_.slice_dim()) throw Error(Errc::invalid_input, "body and tension dimensions differ");
}

namespace {

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

struct Slab {
  double Q0 = 0.0, dQ0a = 0.0, dQ0b = 0.0;  // int r^{N-2}
  double G = 0.0, dGa = 0.0, dGb = 0.0;     // int t r^{N-1}
  double V = 0.0, dVa = 0.0, dVb = 0.0;     // int r^{N-1}
};

Slab slab_terms(int N, double ta, double tb, double ra, double rb, bool grad) {
  const GaussRule& g = gauss8();
  const double dt = tb - ta;
  Slab s;
  for (size_t q = 0; q < g.x.size(); ++q) {
    const double x = g.x[q], w = g.w[q];
    const double t = ta + dt * x, r = ra + (rb - ra) * x;
    const double rN2 = ipow(r, N - 2), rN1 = rN2 * r;
    s.Q0 += w * rN2;
    s.G += w * t * rN1;
    s.V += w * rN1;
    if (grad) {
      const double rN3 = N >= 3 ? (N - 2) * ipow(r, N - 3) : 0.0;
      s.dQ0a += w * rN3 * (1.0 - x);
      s.dQ0b += w * rN3 * x;
      s.dGa += w * t * (N - 1) * rN2 * (1.0 - x);
      s.dGb += w * t * (N - 1) * rN2 * x;
      s.dVa += w * (N - 1) * rN2 * (1.0 - x);
      s.dVb += w * (N - 1) * rN2 * x;
    }
  }
  for (double* v : {&s.Q0, &s.dQ0a, &s.dQ0b, &s.G, &s.dGa, &s.dGb, &s.V, &s.dVa, &s.dVb}) *v *= dt;
  return s;
}

void check_omega(const DropModel& model) {
  if (!model.tension().omega_in_range(model.omega()))
    throw Error(Errc::omega_out_of_range, "omega outside (-phi(0,1), phi(0,-1))");
}

}  // namespace

EnergyBreakdown reduced_energy(const DropModel& model, const Profile& p) {
  check_omega(model);
  p.validate();
  const int N = model.N();
  const double L = model.Lambda(), K = model.area();
  const SurfaceTension& f = model.tension();
  EnergyBreakdown e;
  for (size_t j = 0; j + 1 < p.size(); ++j) {
    const double dt = p.t[j + 1] - p.t[j];
    const double b = -(N - 1) * (p.r[j + 1] - p.r[j]) / dt;
    const Slab s = slab_terms(N, p.t[j], p.t[j + 1], p.r[j], p.r[j + 1], false);
    e.Fs += s.Q0 * f.phi(L, b);
    e.Fp += s.G;
  }
  e.Fs *= K;
  e.Fp *= K;
  if (p.r.back() > 0.0) e.Fs += f.phi(0.0, 1.0) * K * ipow(p.r.back(), N - 1);
  e.Fc = model.omega() * K * ipow(p.r.front(), N - 1);
  e.total = e.Fs + e.Fc + e.Fp;
  return e;
}

double reduced_volume(const DropModel& model, const Profile& p) {
  p.validate();
  double v = 0.0;
  for (size_t j = 0; j + 1 < p.size(); ++j)
    v += slab_power_integral(p.r[j], p.r[j + 1], p.t[j + 1] - p.t[j], model.N() - 1);
  return v * model.area();
}

namespace {

template <class F>
double clipped_sum(const Profile& p, double a, double b, F&& per_slab) {
  double acc = 0.0;
  for (size_t j = 0; j + 1 < p.size(); ++j) {
    const double lo = std::max(a, p.t[j]), hi = std::min(b, p.t[j + 1]);
    if (!(hi > lo)) continue;
    const double slope = (p.r[j + 1] - p.r[j]) / (p.t[j + 1] - p.t[j]);
    const double r0 = p.r[j] + slope * (lo - p.t[j]), r1 = p.r[j] + slope * (hi - p.t[j]);
    acc += per_slab(r0, r1, hi - lo, slope);
  }
  return acc;
}

}  // namespace

double lateral_energy_between(const DropModel& model, const Profile& p, double a, double b) {
  const int N = model.N();
  const double L = model.Lambda();
  return model.area() * clipped_sum(p, a, b, [&](double r0, double r1, double dt, double slope) {
           return slab_power_integral(r0, r1, dt, N - 2) * model.tension().phi(L, -(N - 1) * slope);
         });
}

double volume_between(const DropModel& model, const Profile& p, double a, double b) {
  const int N = model.N();
  return model.area() * clipped_sum(p, a, b, [&](double r0, double r1, double dt, double) {
           return slab_power_integral(r0, r1, dt, N - 1);
         });
}

EnergyGradient energy_gradient(const DropModel& model, const Profile& p) {
  p.validate();
  const int N = model.N();
  const double L = model.Lambda(), K = model.area();
  const SurfaceTension& f = model.tension();
  const size_t n = p.size();
  EnergyGradient g;
  g.dE.assign(n, 0.0);
  g.dV.assign(n, 0.0);
  for (size_t j = 0; j + 1 < n; ++j) {
    const double dt = p.t[j + 1] - p.t[j];
    const double b = -(N - 1) * (p.r[j + 1] - p.r[j]) / dt;
    const Slab s = slab_terms(N, p.t[j], p.t[j + 1], p.r[j], p.r[j + 1], true);
    const double ph = f.phi(L, b);
    const double d2 = f.phi_partials(L, b).d2;
    const double flux = s.Q0 * d2 * (N - 1) / dt;
    g.dE[j] += s.dQ0a * ph + flux + s.dGa;
    g.dE[j + 1] += s.dQ0b * ph - flux + s.dGb;
    g.dV[j] += s.dVa;
    g.dV[j + 1] += s.dVb;
  }
  g.dE[0] += model.omega() * (N - 1) * ipow(p.r.front(), N - 2);
  if (p.r.back() > 0.0) g.dE[n - 1] += f.phi(0.0, 1.0) * (N - 1) * ipow(p.r.back(), N - 2);
  for (size_t i = 0; i < n; ++i) {
    g.dE[i] *= K;
    g.dV[i] *= K;
  }
  return g;
}

double ElResidual::max_abs(double T, double lo, double hi) const {
  double m = 0.0;
  for (size_t k = 0; k < t.size(); ++k)
    if (t[k] >= lo * T && t[k] <= hi * T) m = std::max(m, std::fabs(value[k]));
  return m;
}

ElResidual el_residual(const DropModel& model, const Profile& p, double lambda) {
  const EnergyGradient g = energy_gradient(model, p);
  ElResidual out;
  for (size_t i = 1; i + 1 < p.size(); ++i) {
    if (p.r[i] <= 0.0) {
      out.skipped.push_back(i);
      continue;
    }
    const double w = 0.5 * (p.t[i + 1] - p.t[i - 1]) * model.area();
    out.index.push_back(i);
    out.t.push_back(p.t[i]);
    out.value.push_back(-(g.dE[i] + lambda * g.dV[i]) / w);
  }
  return out;
}

double lambda_estimate(const DropModel& model, const Profile& p, double lo, double hi) {
  const EnergyGradient g = energy_gradient(model, p);
  const double T = p.top();
  double num = 0.0, den = 0.0;
  for (size_t i = 1; i + 1 < p.size(); ++i) {
    if (p.r[i] <= 0.0 || p.t[i] < lo * T || p.t[i] > hi * T) continue;
    const double w = 0.5 * (p.t[i + 1] - p.t[i - 1]) * model.area();
    const double r0 = -g.dE[i] / w, gv = g.dV[i] / w;
    num += r0 * gv;
    den += gv * gv;
  }
  return den > 0.0 ? num / den : 0.0;
}

double young_functional(const DropModel& model, double slope) {
  return -model.tension().phi_partials(model.Lambda(), -(model.N() - 1) * slope).d2;
}

double young_residual(const DropModel& model, const Profile& p) {
  p.validate();
  if (p.r.front() <= 0.0) throw Error(Errc::empty_base, "profile has no contact disc");
  const double slope = (p.r[1] - p.r[0]) / (p.t[1] - p.t[0]);
  return young_functional(model, slope) - model.omega();
}

ShapeReport check_shape(const Profile& p, double tol) {
  ShapeReport rep;
  size_t last = p.size();
  while (last > 0 && p.r[last - 1] <= 0.0) --last;
  rep.single_support = last > 0;
  for (size_t i = 0; i < last; ++i) rep.single_support = rep.single_support && p.r[i] > 0.0;
  // support runs through the first zero knot after the positive block
  const size_t end = std::min(last + 1, p.size());
  const double scale = std::max(1.0, p.max_r() / std::max(p.t[end - 1], 1e-300));
  double worst = -std::numeric_limits<double>::infinity();
  for (size_t j = 1; j + 1 < end; ++j) {
    const double s0 = (p.r[j] - p.r[j - 1]) / (p.t[j] - p.t[j - 1]);
    const double s1 = (p.r[j + 1] - p.r[j]) / (p.t[j + 1] - p.t[j]);
    worst = std::max(worst, s1 - s0);
  }
  rep.max_slope_increase = worst;
  rep.concave = worst <= tol * scale;
  return rep;
}

std::vector<double> graded_fractions(int M) {
  std::vector<double> xi(M + 1);
  for (int i = 0; i <= M; ++i) {
    const double e = 1.0 - static_cast<double>(i) / M;
    xi[i] = 1.0 - e * e;
  }
  xi[M] = 1.0;
  return xi;
}

Profile winterbottom_profile(const DropModel& model, double m, int M) {
  const SurfaceTension& f = model.tension();
  const double base = -model.omega();
  const double T1 = wulff_top(f) - base;
  const std::vector<double> xi = graded_fractions(M);
  Profile p;
  for (int i = 0; i <= M; ++i) {
    p.t.push_back(T1 * xi[i]);
    p.r.push_back(i == M ? 0.0 : wulff_alpha(f, base + T1 * xi[i]));
  }
  const double c = std::pow(m / reduced_volume(model, p), 1.0 / model.N());
  for (size_t i = 0; i < p.size(); ++i) {
    p.t[i] *= c;
    p.r[i] *= c;
  }
  return p;
}

namespace {

// Reduced energy on the graded grid with the volume fixed by radial rescaling.
class GridProblem {
 public:
  GridProblem(const DropModel& model, double m, int M) : model_(model), m_(m), M_(M), xi_(graded_fractions(M)) {}

  int size() const { return M_ + 1; }  // r_0..r_{M-1}, T

  Profile profile(const std::vector<double>& x) const {
    Profile p;
    p.t.resize(M_ + 1);
    p.r.resize(M_ + 1);
    for (int i = 0; i <= M_; ++i) {
      p.t[i] = x[M_] * xi_[i];
      p.r[i] = i < M_ ? x[i] : 0.0;
    }
    return p;
  }

  // Rescales the radii so the volume equals m; false if infeasible.
  bool project(std::vector<double>& x) const {
    if (!(x[M_] > 0.0) || !std::isfinite(x[M_])) return false;
    const double V = reduced_volume(model_, profile(x));
    if (!(V > 0.0) || !std::isfinite(V)) return false;
    const double c = std::pow(m_ / V, 1.0 / (model_.N() - 1));
    for (int i = 0; i < M_; ++i) x[i] *= c;
    return true;
  }

  // Energy of the projected point and the gradient of x -> E(P(x)), taken at a
  // feasible x.
  double value(const std::vector<double>& x) const { return reduced_energy(model_, profile(x)).total; }

  void gradient(const std::vector<double>& x, std::vector<double>& g, std::vector<double>& hdiag,
                std::vector<double>& hoff, double& hT) const {
    const int N = model_.N();
    const double K = model_.area(), L = model_.Lambda(), T = x[M_];
    const Profile p = profile(x);
    const EnergyGradient eg = energy_gradient(model_, p);
    const SurfaceTension& f = model_.tension();
    double dET = 0.0, G = 0.0, hTT = 0.0;
    hdiag.assign(M_, 0.0);
    hoff.assign(M_ > 0 ? M_ - 1 : 0, 0.0);
    for (int j = 0; j < M_; ++j) {
      const double dt = p.t[j + 1] - p.t[j];
      const double b = -(N - 1) * (p.r[j + 1] - p.r[j]) / dt;
      const Slab s = slab_terms(N, p.t[j], p.t[j + 1], p.r[j], p.r[j + 1], false);
      const PhiPartials d = f.phi_partials(L, b);
      dET += s.Q0 / T * (f.phi(L, b) - b * d.d2);
      G += s.G;
      const double db = 1e-6 * std::max(1.0, std::fabs(b));
      const double d22 = (f.phi_partials(L, b + db).d2 - f.phi_partials(L, b - db).d2) / (2.0 * db);
      const double k = K * s.Q0 * std::max(d22, 0.0) * (N - 1) * (N - 1) / (dt * dt);
      if (j < M_) hdiag[j] += k;
      if (j + 1 < M_) {
        hdiag[j + 1] += k;
        hoff[j] -= k;
      }
      hTT += K * s.Q0 * std::max(d22, 0.0) * b * b / (T * T);
    }
    dET = K * (dET + 2.0 * G / T);
    hTT += K * 2.0 * G / (T * T);

    double gr = 0.0;
    for (int i = 0; i < M_; ++i) gr += eg.dE[i] * x[i];
    const double V = m_;
    g.assign(M_ + 1, 0.0);
    for (int i = 0; i < M_; ++i) g[i] = eg.dE[i] - gr / ((N - 1) * V) * eg.dV[i];
    g[M_] = dET - gr / ((N - 1) * T);

    // mass regularization keeps the preconditioner definite
    const double rbar = std::max(1e-12, *std::max_element(x.begin(), x.begin() + M_));
    for (int i = 0; i < M_; ++i) {
      const double w = 0.5 * (p.t[i + 1] - p.t[i > 0 ? i - 1 : 0]);
      hdiag[i] += K * (N - 1) * ipow(std::max(x[i], 1e-3 * rbar), N - 2) * w * (1.0 + T) + 1e-300;
    }
    hT = hTT + 1e-12 * std::fabs(dET) + 1e-300;
  }

  // Largest free gradient component, scaled by the variable size and the energy.
  double grad_measure(const std::vector<double>& x, const std::vector<double>& g, double F) const {
    double rmax = 0.0, m = 0.0;
    for (int i = 0; i < M_; ++i) rmax = std::max(rmax, x[i]);
    for (int i = 0; i < M_; ++i) {
      if (x[i] <= 0.0 && g[i] > 0.0) continue;
      m = std::max(m, std::fabs(g[i]) * rmax);
    }
    m = std::max(m, std::fabs(g[M_]) * x[M_]);
    return m / std::max(std::fabs(F), 1e-300);
  }

  // First index below M with r = 0 (M if none).
  int first_zero(const std::vector<double>& x) const {
    for (int i = 1; i < M_; ++i)
      if (x[i] <= 0.0) return i;
    return M_;
  }

  // Same profile with the top knot moved to knot z.
  std::vector<double> regrid(const std::vector<double>& x, int z) const {
    Profile p = profile(x);
    p.t.resize(z + 1);
    p.r.resize(z + 1);
    return from_profile(p);
  }

  std::vector<double> from_profile(const Profile& p) const {
    std::vector<double> x(M_ + 1);
    x[M_] = p.top();
    for (int i = 0; i < M_; ++i) x[i] = p.r_at(x[M_] * xi_[i]);
    return x;
  }

 private:
  const DropModel& model_;
  double m_;
  int M_;
  std::vector<double> xi_;
};

// Solves the tridiagonal system (diag, off) z = rhs in place.
void tridiag_solve(const std::vector<double>& diag, const std::vector<double>& off, std::vector<double>& z) {
  const size_t n = diag.size();
  std::vector<double> c(n), d(n);
  double den = diag[0];
  c[0] = n > 1 ? off[0] / den : 0.0;
  d[0] = z[0] / den;
  for (size_t i = 1; i < n; ++i) {
    den = diag[i] - off[i - 1] * c[i - 1];
    c[i] = i + 1 < n ? off[i] / den : 0.0;
    d[i] = (z[i] - off[i - 1] * d[i - 1]) / den;
  }
  z[n - 1] = d[n - 1];
  for (size_t i = n - 1; i-- > 0;) z[i] = d[i] - c[i] * z[i + 1];
}

}  // namespace

DirectResult minimize_direct(const DropModel& model, double m, const DirectOptions& opts) {
  check_omega(model);
  if (!(m > 0.0)) throw Error(Errc::invalid_input, "mass must be positive");
  const int M = opts.grid_size;
  if (M < 4) throw Error(Errc::invalid_input, "grid_size must be >= 4");
  GridProblem prob(model, m, M);
  const int n = prob.size();

  std::vector<double> x = prob.from_profile(opts.initial ? *opts.initial : winterbottom_profile(model, m, M));
  if (!prob.project(x)) throw Error(Errc::invalid_input, "initial profile has no volume");
  double F = prob.value(x);
  std::vector<double> g, hd, ho;
  double hT = 1.0;
  prob.gradient(x, g, hd, ho, hT);

  auto precondition = [&](std::vector<double> v) {
    std::vector<double> head(v.begin(), v.begin() + M);
    tridiag_solve(hd, ho, head);
    std::copy(head.begin(), head.end(), v.begin());
    v[M] /= hT;
    return v;
  };

  DirectResult res;
  std::deque<std::pair<std::vector<double>, std::vector<double>>> mem;
  std::vector<double> sweep_start{F};
  std::vector<char> prev_active;
  for (int it = 0; it < opts.max_iter; ++it) {
    res.iterations = it + 1;
    // bound-active radii stay fixed for this iteration
    std::vector<char> active(M, 0);
    for (int i = 0; i < M; ++i) active[i] = x[i] <= 0.0 && g[i] > 0.0;
    if (active != prev_active) mem.clear();
    prev_active = active;
    std::vector<double> gf = g;
    for (int i = 0; i < M; ++i)
      if (active[i]) gf[i] = 0.0;
    for (int i = 0; i < M; ++i) {
      if (!active[i]) continue;
      hd[i] = 1.0;
      if (i > 0) ho[i - 1] = 0.0;
      if (i + 1 < M) ho[i] = 0.0;
    }

    // two-loop recursion with the tridiagonal preconditioner as initial inverse Hessian
    std::vector<double> q = gf;
    std::vector<double> alpha(mem.size());
    for (size_t k = mem.size(); k-- > 0;) {
      const auto& [s, y] = mem[k];
      const double rho = 1.0 / std::inner_product(y.begin(), y.end(), s.begin(), 0.0);
      alpha[k] = rho * std::inner_product(s.begin(), s.end(), q.begin(), 0.0);
      for (int i = 0; i < n; ++i) q[i] -= alpha[k] * y[i];
    }
    q = precondition(q);
    for (size_t k = 0; k < mem.size(); ++k) {
      const auto& [s, y] = mem[k];
      const double rho = 1.0 / std::inner_product(y.begin(), y.end(), s.begin(), 0.0);
      const double beta = rho * std::inner_product(y.begin(), y.end(), q.begin(), 0.0);
      for (int i = 0; i < n; ++i) q[i] += (alpha[k] - beta) * s[i];
    }
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = i < M && active[i] ? 0.0 : -q[i];
    double slope = std::inner_product(g.begin(), g.end(), d.begin(), 0.0);
    if (!(slope < 0.0)) {
      mem.clear();
      d = precondition(gf);
      for (double& v : d) v = -v;
      slope = std::inner_product(g.begin(), g.end(), d.begin(), 0.0);
      if (!(slope < 0.0)) {
        for (int i = 0; i < n; ++i) d[i] = -gf[i];
        slope = -std::inner_product(gf.begin(), gf.end(), gf.begin(), 0.0);
      }
    }

    // backtracking from a unit step, Armijo constant 1e-4
    bool accepted = false;
    std::vector<double> xn(n);
    double Fn = F;
    for (double a = 1.0; a > 1e-20; a *= 0.5) {
      for (int i = 0; i < n; ++i) xn[i] = x[i] + a * d[i];
      for (int i = 0; i < M; ++i) xn[i] = std::max(xn[i], 0.0);
      if (!prob.project(xn)) continue;
      Fn = prob.value(xn);
      if (std::isfinite(Fn) && Fn <= F + 1e-4 * a * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!mem.empty()) {
        mem.clear();
        continue;
      }
      break;
    }

    std::vector<double> gn;
    prob.gradient(xn, gn, hd, ho, hT);
    std::vector<double> s(n), y(n);
    for (int i = 0; i < n; ++i) {
      s[i] = xn[i] - x[i];
      y[i] = gn[i] - g[i];
    }
    const double sy = std::inner_product(s.begin(), s.end(), y.begin(), 0.0);
    const double ss = std::inner_product(s.begin(), s.end(), s.begin(), 0.0);
    const double yy = std::inner_product(y.begin(), y.end(), y.begin(), 0.0);
    if (sy > 1e-12 * std::sqrt(ss * yy)) {
      mem.emplace_back(std::move(s), std::move(y));
      if (static_cast<int>(mem.size()) > opts.lbfgs_memory) mem.pop_front();
    }
    x = std::move(xn);
    g = std::move(gn);
    F = Fn;
    res.energy_history.push_back(F);
    res.volume_history.push_back(reduced_volume(model, prob.profile(x)));

    // radii clamped to zero below the top knot waste grid; move the top knot down
    if (int z = prob.first_zero(x); z < M) {
      std::vector<double> xr = prob.regrid(x, z);
      if (prob.project(xr)) {
        const double Fr = prob.value(xr);
        if (Fr <= F) {
          x = std::move(xr);
          F = Fr;
          prob.gradient(x, g, hd, ho, hT);
          mem.clear();
          ++res.regrids;
          res.energy_history.push_back(F);
          res.volume_history.push_back(reduced_volume(model, prob.profile(x)));
        }
      }
    }

    if (opts.repair && opts.repair_every > 0 && (it + 1) % opts.repair_every == 0) {
      const Profile cur = prob.profile(x);
      if (auto rep = repair_once(model, cur)) {
        std::vector<double> xr = prob.from_profile(rep->profile);
        if (prob.project(xr)) {
          const double Fr = prob.value(xr);
          if (Fr < F) {
            x = std::move(xr);
            F = Fr;
            prob.gradient(x, g, hd, ho, hT);
            mem.clear();
            ++res.repairs;
            res.energy_history.push_back(F);
            res.volume_history.push_back(reduced_volume(model, prob.profile(x)));
          }
        }
      }
    }

    // converged when a whole sweep barely moved the energy and the gradient is small
    res.grad_norm = prob.grad_measure(x, g, F);
    sweep_start.push_back(F);
    const int window = std::max(opts.repair_every, 1);
    if (static_cast<int>(sweep_start.size()) > window) {
      const double drop = sweep_start[sweep_start.size() - 1 - window] - F;
      if (drop < opts.tol_e * std::max(1.0, std::fabs(F)) && res.grad_norm < opts.tol_g) {
        res.converged = true;
        break;
      }
    }
  }
  res.grad_norm = prob.grad_measure(x, g, F);
  if (!res.converged && res.grad_norm < opts.tol_g) res.converged = true;
  res.profile = prob.profile(x);
  // knots past the first zero describe the same set
  size_t keep = res.profile.size();
  while (keep > 2 && res.profile.r[keep - 1] == 0.0 && res.profile.r[keep - 2] == 0.0) --keep;
  res.profile.t.resize(keep);
  res.profile.r.resize(keep);
  res.energy = reduced_energy(model, res.profile);
  res.volume = reduced_volume(model, res.profile);
  return res;
}

}  // namespace sessile
