#include "sessile/tension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "sessile/error.hpp"

namespace sessile {

namespace {

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

double pnorm2(double a, double b, double p) {
  a = std::fabs(a);
  b = std::fabs(b);
  const double m = std::max(a, b);
  if (m == 0.0) return 0.0;
  return m * std::pow(std::pow(a / m, p) + std::pow(b / m, p), 1.0 / p);
}

double golden_max(double lo, double hi, int iters, auto&& f, double* arg) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    }
  }
  *arg = f1 > f2 ? x1 : x2;
  return std::max(f1, f2);
}

}  // namespace

SurfaceTension::SurfaceTension(int N, PhiSpec phi, HSpec h, DerivativeMode mode)
    : N_(N), phi_(phi), h_(h), mode_(mode) {
  if (N < 2) throw Error(Errc::invalid_input, "N must be >= 2");
  if (phi_.family == PhiFamily::pnorm && !(phi_.p > 1.0))
    throw Error(Errc::invalid_input, "pnorm phi needs p > 1");
  if (phi_.family == PhiFamily::weighted && !(phi_.c > 0.0))
    throw Error(Errc::invalid_input, "weighted phi needs c > 0");
  if (phi_.family == PhiFamily::euclid) phi_.p = 2.0;
  if (h_.family == HFamily::lp && !(h_.p >= 1.0))
    throw Error(Errc::invalid_input, "lp h needs p >= 1");
  if (h_.family == HFamily::l1reg && !(h_.eps >= 0.0))
    throw Error(Errc::invalid_input, "l1reg h needs eps >= 0");
  if (h_.family == HFamily::euclid) h_.p = 2.0;
}

double SurfaceTension::phi(double s, double t) const {
  switch (phi_.family) {
    case PhiFamily::euclid: return std::hypot(s, t);
    case PhiFamily::pnorm: return pnorm2(s, t, phi_.p);
    case PhiFamily::weighted: return std::sqrt(s * s + phi_.c * t * t);
    case PhiFamily::manhattan: return s + std::fabs(t);
  }
  return 0.0;
}

PhiPartials SurfaceTension::closed_partials(double s, double t) const {
  PhiPartials d;
  switch (phi_.family) {
    case PhiFamily::euclid: {
      const double r = std::hypot(s, t);
      d.d1 = s / r;
      d.d2 = t / r;
      d.d11 = t * t / (r * r * r);
      break;
    }
    case PhiFamily::weighted: {
      const double r = std::sqrt(s * s + phi_.c * t * t);
      d.d1 = s / r;
      d.d2 = phi_.c * t / r;
      d.d11 = phi_.c * t * t / (r * r * r);
      break;
    }
    case PhiFamily::pnorm: {
      const double p = phi_.p;
      const double r = pnorm2(s, t, p);
      const double as = std::fabs(s) / r, at = std::fabs(t) / r;
      d.d1 = sgn(s) * std::pow(as, p - 1.0);
      d.d2 = sgn(t) * std::pow(at, p - 1.0);
      d.d11 = (p - 1.0) / r * std::pow(as, p - 2.0) * std::pow(at, p);
      break;
    }
    case PhiFamily::manhattan:
      d.d1 = 1.0;
      d.d2 = sgn(t);
      d.d11 = 0.0;
      break;
  }
  return d;
}

PhiPartials SurfaceTension::fd_partials(double s, double t) const {
  const double h = kFdStep;
  const double f0 = phi(s, t);
  const double fp = phi(s + h, t), fm = phi(s - h, t);
  PhiPartials d;
  d.d1 = (fp - fm) / (2.0 * h);
  d.d2 = (phi(s, t + h) - phi(s, t - h)) / (2.0 * h);
  d.d11 = (fp - 2.0 * f0 + fm) / (h * h);
  return d;
}

PhiPartials SurfaceTension::phi_partials(double s, double t) const {
  if (s == 0.0 && t == 0.0) throw Error(Errc::degenerate_point, "phi partials at (0,0)");
  return mode_ == DerivativeMode::closed_form ? closed_partials(s, t) : fd_partials(s, t);
}

double SurfaceTension::invert_d1phi(double b, double y) const {
  if (!(b > 0.0)) throw Error(Errc::invalid_input, "invert_d1phi needs b > 0");
  if (y <= 0.0) return 0.0;
  auto stalled = [&] {
    std::ostringstream os;
    os << "d1 phi(s," << b << ") = " << y << " has no solution";
    return Error(Errc::stalled_inversion, os.str());
  };
  if (mode_ == DerivativeMode::closed_form) {
    switch (phi_.family) {
      case PhiFamily::euclid:
        if (y >= 1.0) throw stalled();
        return b * y / std::sqrt((1.0 - y) * (1.0 + y));
      case PhiFamily::weighted:
        if (y >= 1.0) throw stalled();
        return std::sqrt(phi_.c) * b * y / std::sqrt((1.0 - y) * (1.0 + y));
      case PhiFamily::pnorm: {
        if (y >= 1.0) throw stalled();
        const double p = phi_.p;
        const double z = std::pow(y, 1.0 / (p - 1.0));
        const double zp = std::pow(z, p);
        if (zp >= 1.0) throw stalled();
        return b * z / std::pow(1.0 - zp, 1.0 / p);
      }
      case PhiFamily::manhattan:
        break;
    }
  }
  // monotone bisection on s
  auto g = [&](double s) { return phi_partials(s, b).d1; };
  double lo = 0.0, hi = b;
  int k = 0;
  while (g(hi) < y) {
    lo = hi;
    hi *= 2.0;
    if (++k > 200) throw stalled();
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double SurfaceTension::h(std::span<const double> x) const {
  double l1 = 0.0, l2 = 0.0, m = 0.0;
  for (double v : x) {
    l1 += std::fabs(v);
    l2 += v * v;
    m = std::max(m, std::fabs(v));
  }
  l2 = std::sqrt(l2);
  switch (h_.family) {
    case HFamily::euclid: return l2;
    case HFamily::l1reg: return l1 + h_.eps * l2;
    case HFamily::lp: {
      if (h_.p == 1.0) return l1;
      if (m == 0.0) return 0.0;
      double acc = 0.0;
      for (double v : x) acc += std::pow(std::fabs(v) / m, h_.p);
      return m * std::pow(acc, 1.0 / h_.p);
    }
  }
  return 0.0;
}

double SurfaceTension::h(Vec2 x) const {
  const double v[2] = {x.x, x.y};
  return h(std::span<const double>(v, slice_dim() == 1 ? 1 : 2));
}

double SurfaceTension::eval_f(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != N_)
    throw Error(Errc::invalid_input, "eval_f: vector length differs from N");
  return phi(h(x.first(N_ - 1)), x[N_ - 1]);
}

bool SurfaceTension::h_star_closed_form() const {
  return slice_dim() == 1 || h_.family != HFamily::l1reg;
}

double SurfaceTension::sampled_dual(Vec2 x, Vec2* argmax) const {
  const int M = kDualDirections;
  auto ratio = [&](double th) {
    const Vec2 y{std::cos(th), std::sin(th)};
    return dot(x, y) / h(y);
  };
  double best = -std::numeric_limits<double>::infinity(), best_th = 0.0;
  for (int k = 0; k < M; ++k) {
    const double th = 2.0 * std::numbers::pi * k / M;
    const double r = ratio(th);
    if (r > best) {
      best = r;
      best_th = th;
    }
  }
  const double w = 2.0 * std::numbers::pi / M;
  double th = best_th;
  const double refined = golden_max(best_th - w, best_th + w, 80, ratio, &th);
  if (refined > best) {
    best = refined;
    best_th = th;
  }
  if (argmax) {
    const Vec2 y{std::cos(best_th), std::sin(best_th)};
    *argmax = (1.0 / h(y)) * y;
  }
  return best;
}

double SurfaceTension::h_star(Vec2 x) const {
  if (slice_dim() == 1) {
    const double a = h(Vec2{1.0, 0.0}), b = h(Vec2{-1.0, 0.0});
    return std::max(x.x / a, -x.x / b);
  }
  if (slice_dim() != 2) throw Error(Errc::dimension_unsupported, "h_star for slice dim > 2");
  switch (h_.family) {
    case HFamily::euclid: return std::hypot(x.x, x.y);
    case HFamily::lp: {
      if (h_.p == 1.0) return std::max(std::fabs(x.x), std::fabs(x.y));
      const double q = h_.p / (h_.p - 1.0);
      return pnorm2(x.x, x.y, q);
    }
    case HFamily::l1reg: return std::max(0.0, sampled_dual(x, nullptr));
  }
  return 0.0;
}

Vec2 SurfaceTension::h_star_grad(Vec2 x) const {
  if (x.x == 0.0 && x.y == 0.0) throw Error(Errc::zero_direction, "h_star gradient at 0");
  if (slice_dim() == 1) {
    if (x.x > 0.0) return {1.0 / h(Vec2{1.0, 0.0}), 0.0};
    return {-1.0 / h(Vec2{-1.0, 0.0}), 0.0};
  }
  if (slice_dim() != 2) throw Error(Errc::dimension_unsupported, "h_star for slice dim > 2");
  switch (h_.family) {
    case HFamily::euclid: {
      const double n = std::hypot(x.x, x.y);
      return {x.x / n, x.y / n};
    }
    case HFamily::lp: {
      if (h_.p == 1.0) {
        if (std::fabs(x.x) >= std::fabs(x.y)) return {sgn(x.x), 0.0};
        return {0.0, sgn(x.y)};
      }
      const double q = h_.p / (h_.p - 1.0);
      const double n = pnorm2(x.x, x.y, q);
      return {sgn(x.x) * std::pow(std::fabs(x.x) / n, q - 1.0),
              sgn(x.y) * std::pow(std::fabs(x.y) / n, q - 1.0)};
    }
    case HFamily::l1reg: {
      Vec2 y;
      sampled_dual(x, &y);
      return y;
    }
  }
  return {};
}

std::pair<double, double> SurfaceTension::omega_range() const {
  return {-phi(0.0, 1.0), phi(0.0, -1.0)};
}

bool SurfaceTension::omega_in_range(double omega) const {
  const auto [lo, hi] = omega_range();
  return std::isfinite(omega) && omega > lo && omega < hi;
}

AdmissibilityReport SurfaceTension::check_admissible(double tol) const {
  AdmissibilityReport rep;
  rep.d1phi_pole_up = phi_partials(0.0, 1.0).d1;
  rep.d1phi_pole_down = phi_partials(0.0, -1.0).d1;

  bool smooth = true;
  for (double pole : {1.0, -1.0}) {
    const PhiPartials p0 = phi_partials(0.0, pole);
    std::vector<double> diffs;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      const PhiPartials pe = phi_partials(eps, pole);
      diffs.push_back(std::max(std::fabs(pe.d1 - p0.d1), std::fabs(pe.d2 - p0.d2)));
    }
    for (double d : diffs) smooth = smooth && std::isfinite(d);
    smooth = smooth && diffs.back() <= diffs.front() && diffs.back() < 0.5;
  }
  rep.smooth_near_poles = smooth;

  double strict = std::numeric_limits<double>::infinity();
  for (double b : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) {
    for (int i = 0; i < 16; ++i) {
      const double s = std::pow(10.0, -2.0 + 4.0 * i / 15.0);
      const double k = 1e-2 * s;
      const double dd = (phi(s + k, b) - 2.0 * phi(s, b) + phi(s - k, b)) / (k * k);
      strict = std::min(strict, dd * std::hypot(s, b));
    }
  }
  rep.strict_convexity_samples = strict;
  std::tie(rep.omega_lo, rep.omega_hi) = omega_range();
  rep.admissible = std::fabs(rep.d1phi_pole_up) <= tol && std::fabs(rep.d1phi_pole_down) <= tol &&
                   rep.smooth_near_poles && strict > tol;
  return rep;
}

std::string SurfaceTension::describe() const {
  std::ostringstream os;
  os << "N=" << N_ << " phi=";
  switch (phi_.family) {
    case PhiFamily::euclid: os << "euclid"; break;
    case PhiFamily::pnorm: os << "pnorm(p=" << phi_.p << ")"; break;
    case PhiFamily::weighted: os << "weighted(c=" << phi_.c << ")"; break;
    case PhiFamily::manhattan: os << "manhattan"; break;
  }
  os << " h=";
  switch (h_.family) {
    case HFamily::euclid: os << "euclid"; break;
    case HFamily::lp: os << "lp(p=" << h_.p << ")"; break;
    case HFamily::l1reg: os << "l1reg(eps=" << h_.eps << ")"; break;
  }
  return os.str();
}

}  // namespace sessile
