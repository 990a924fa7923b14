#include "sessile/competitor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "sessile/error.hpp"

namespace sessile {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

double slice_radius(const DropModel& model, double v) {
  return std::pow(std::max(v, 0.0) / model.area(), 1.0 / (model.N() - 1));
}

// Cap through the anchor with anchor radius r_anchor.
Profile make_cap(const SurfaceTension& f, CapSide side, double sigma, double t_anchor, double r_anchor, int n,
                 double* b_out = nullptr) {
  const double th = wulff_theta_at_height(f, sigma);
  const WulffPoint p0 = wulff_boundary(f, th);
  if (!(p0.radius > 0.0)) throw Error(Errc::sigma_out_of_range, "cap base has zero radius");
  const double b = r_anchor / p0.radius;
  if (b_out) *b_out = b;
  Profile c;
  c.t.resize(n + 1);
  c.r.resize(n + 1);
  const double lo = side == CapSide::plus ? th : -kHalfPi;
  const double hi = side == CapSide::plus ? kHalfPi : th;
  for (int k = 0; k <= n; ++k) {
    const WulffPoint q = wulff_boundary(f, lo + (hi - lo) * k / n);
    c.t[k] = t_anchor + b * (q.height - sigma);
    c.r[k] = b * q.radius;
  }
  if (side == CapSide::plus) {
    c.t.front() = t_anchor;
    c.r.front() = r_anchor;
    c.r.back() = 0.0;
  } else {
    c.t.back() = t_anchor;
    c.r.back() = r_anchor;
    c.r.front() = 0.0;
  }
  return c;
}

double cap_volume(const DropModel& model, const Profile& c) {
  double v = 0.0;
  for (size_t j = 0; j + 1 < c.size(); ++j)
    v += slab_power_integral(c.r[j], c.r[j + 1], c.t[j + 1] - c.t[j], model.N() - 1);
  return v * model.area();
}

struct Cut {
  double tau = 0.0;
  double r = 0.0;
  size_t slab = 0;
};

// Walks the cap away from its anchor until the swept volume equals target. The
// plus cap is walked upward from its first knot, the minus cap downward from
// its last one. Returns the far tip if the cap is too small.
Cut volume_cut(const DropModel& model, const Profile& c, CapSide side, double target) {
  const int k = model.N() - 1;
  const double want = target / model.area();
  double acc = 0.0;
  const size_t ns = c.size() - 1;
  for (size_t s = 0; s < ns; ++s) {
    const size_t j = side == CapSide::plus ? s : ns - 1 - s;
    // near end (anchor side) and far end of this slab
    const double rn = side == CapSide::plus ? c.r[j] : c.r[j + 1];
    const double rf = side == CapSide::plus ? c.r[j + 1] : c.r[j];
    const double tn = side == CapSide::plus ? c.t[j] : c.t[j + 1];
    const double dt = c.t[j + 1] - c.t[j];
    const double full = slab_power_integral(rn, rf, dt, k);
    if (acc + full < want) {
      acc += full;
      continue;
    }
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
      const double x = 0.5 * (lo + hi);
      const double part = slab_power_integral(rn, rn + (rf - rn) * x, dt * x, k);
      (acc + part < want ? lo : hi) = 0.5 * (lo + hi);
    }
    const double x = 0.5 * (lo + hi);
    const double sgn = side == CapSide::plus ? 1.0 : -1.0;
    return {tn + sgn * dt * x, rn + (rf - rn) * x, j};
  }
  return side == CapSide::plus ? Cut{c.t.back(), 0.0, ns - 1} : Cut{c.t.front(), 0.0, 0};
}

// Sorted sample of an open interval (a, b), denser near both ends.
std::vector<double> scan_points(double a, double b) {
  std::vector<double> xs;
  for (int i = 1; i < 64; ++i) xs.push_back(a + (b - a) * i / 64.0);
  for (int k = 7; k <= 44; ++k) {
    const double e = std::ldexp(1.0, -k) * (b - a);
    xs.push_back(a + e);
    xs.push_back(b - e);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  xs.erase(std::remove_if(xs.begin(), xs.end(), [&](double x) { return !(x > a && x < b); }), xs.end());
  return xs;
}

// Root of g on a scanned bracket; `from_hi` picks the crossing closest to the
// upper end of the scan.
double bracket_and_bisect(const std::function<double(double)>& g, std::vector<double> xs, bool from_hi,
                          const char* what) {
  std::vector<double> gs(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) gs[i] = g(xs[i]);
  long pick = -1;
  for (size_t i = 0; i + 1 < xs.size(); ++i) {
    if (!std::isfinite(gs[i]) || !std::isfinite(gs[i + 1])) continue;
    if ((gs[i] <= 0.0) != (gs[i + 1] <= 0.0)) {
      pick = static_cast<long>(i);
      if (!from_hi) break;
    }
  }
  if (pick < 0) {
    std::string msg = std::string("no sign change for ") + what + "; scan:";
    for (size_t i = 0; i < xs.size(); i += 8) msg += " (" + std::to_string(xs[i]) + ", " + std::to_string(gs[i]) + ")";
    throw Error(Errc::no_bracket, msg);
  }
  double lo = xs[pick], hi = xs[pick + 1];
  const bool lo_neg = gs[pick] <= 0.0;
  for (int it = 0; it < 64 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    ((g(mid) <= 0.0) == lo_neg ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void push_knot(Profile& p, double t, double r) {
  if (!p.t.empty()) {
    const double scale = std::max(1.0, std::fabs(t));
    if (t <= p.t.back() + 1e-13 * scale) return;
  }
  p.t.push_back(t);
  p.r.push_back(std::max(r, 0.0));
}

}  // namespace

Profile cap_profile(const DropModel& model, CapSide side, double sigma, double t_anchor, double v_anchor,
                    int samples) {
  const SurfaceTension& f = model.tension();
  if (!(sigma > wulff_bottom(f) && sigma < wulff_top(f)))
    throw Error(Errc::sigma_out_of_range, "sigma outside the vertical extent of K");
  if (samples < 2) throw Error(Errc::invalid_input, "cap needs >= 2 samples");
  return make_cap(f, side, sigma, t_anchor, slice_radius(model, v_anchor), samples);
}

CompetitorParams solve_params(const DropModel& model, const Profile& E, double t1, double t2, CapSide side) {
  E.validate();
  if (!(t1 > 0.0 && t2 > t1 && t2 <= E.top())) throw Error(Errc::invalid_input, "need 0 < t1 < t2 <= T");
  const SurfaceTension& f = model.tension();
  const double bot = wulff_bottom(f), top = wulff_top(f);
  const double r1 = E.r_at(t1), r2 = E.r_at(t2);
  const bool plus = side == CapSide::plus;
  const double r_anchor = plus ? r1 : r2, r_target = plus ? r2 : r1;
  const double t_anchor = plus ? t1 : t2;
  if (!(r_anchor > 0.0)) throw Error(Errc::degenerate_radius, "anchor slice is empty");

  CompetitorParams out;
  out.side = side;
  out.t1 = t1;
  out.t2 = t2;
  out.volume_mid = volume_between(model, E, t1, t2);
  const double Vmid = out.volume_mid;

  auto cap_at = [&](double s) { return make_cap(f, side, s, t_anchor, r_anchor, kCapSamples); };
  auto f1 = [&](double s) { return cap_volume(model, cap_at(s)) - Vmid; };
  // f1 runs from +inf to 0 across (bot, top) for the plus side and the other way for minus
  out.sigma0 = bracket_and_bisect(f1, scan_points(bot, top), plus, "cap volume");

  auto f2 = [&](double s) {
    const Profile c = cap_at(s);
    return volume_cut(model, c, side, Vmid).r - r_target;
  };
  if (r_target <= 0.0) {
    out.sigma = out.sigma0;
  } else if (plus) {
    std::vector<double> xs = scan_points(bot, out.sigma0);
    xs.push_back(out.sigma0);
    out.sigma = bracket_and_bisect(f2, xs, true, "far slice");
  } else {
    std::vector<double> xs = scan_points(out.sigma0, top);
    xs.insert(xs.begin(), out.sigma0);
    out.sigma = bracket_and_bisect(f2, xs, false, "far slice");
  }
  const Profile c = make_cap(f, side, out.sigma, t_anchor, r_anchor, kCapSamples, &out.b);
  out.tau = volume_cut(model, c, side, Vmid).tau;
  return out;
}

Profile cap_segment(const DropModel& model, const Profile& E, const CompetitorParams& params) {
  const bool plus = params.side == CapSide::plus;
  const double r_anchor = E.r_at(plus ? params.t1 : params.t2);
  const Profile c =
      make_cap(model.tension(), params.side, params.sigma, plus ? params.t1 : params.t2, r_anchor, kCapSamples);
  const Cut cut = volume_cut(model, c, params.side, params.volume_mid);
  Profile seg;
  if (plus) {
    for (size_t j = 0; j <= cut.slab; ++j) push_knot(seg, c.t[j], c.r[j]);
    push_knot(seg, cut.tau, cut.r);
  } else {
    push_knot(seg, cut.tau, cut.r);
    for (size_t j = cut.slab + 1; j < c.size(); ++j) push_knot(seg, c.t[j], c.r[j]);
  }
  return seg;
}

SurfaceComparison compare_surface_energy(const DropModel& model, const Profile& E, const CompetitorParams& params) {
  const Profile seg = cap_segment(model, E, params);
  SurfaceComparison s;
  s.cap_energy = lateral_energy_between(model, seg, seg.t.front(), seg.t.back());
  s.original_energy = lateral_energy_between(model, E, params.t1, params.t2);
  return s;
}

bool below_chord(const Profile& E, double t1, double t2) {
  const double r1 = E.r_at(t1), r2 = E.r_at(t2);
  bool any = false;
  for (size_t i = 0; i < E.size(); ++i) {
    if (!(E.t[i] > t1 && E.t[i] < t2)) continue;
    any = true;
    const double chord = r1 + (r2 - r1) * (E.t[i] - t1) / (t2 - t1);
    if (!(E.r[i] < chord)) return false;
  }
  return any;
}

bool shift_hypothesis(const DropModel& model, const Profile& E, double t1, double t2) {
  const double above = volume_between(model, E, t2, E.top());
  const double vmax = model.area() * std::pow(E.max_r(), model.N() - 1);
  return vmax > 0.0 && t2 - t1 < above / vmax;
}

CompetitorResult apply_competitor(const DropModel& model, const Profile& E, double t1, double t2) {
  E.validate();
  if (!(t1 > 0.0 && t2 > t1 && t2 <= E.top())) throw Error(Errc::invalid_input, "need 0 < t1 < t2 <= T");
  if (!below_chord(E, t1, t2)) throw Error(Errc::hypothesis_violated, "profile is not strictly below its chord");
  const double r1 = E.r_at(t1), r2 = E.r_at(t2);
  const bool case1 = r1 <= r2;
  if (!case1 && !shift_hypothesis(model, E, t1, t2))
    throw Error(Errc::hypothesis_violated, "interval too long for the downward shift");

  CompetitorResult res;
  res.case_index = case1 ? 1 : 2;
  res.params = solve_params(model, E, t1, t2, case1 ? CapSide::plus : CapSide::minus);
  const Profile seg = cap_segment(model, E, res.params);
  res.surface.cap_energy = lateral_energy_between(model, seg, seg.t.front(), seg.t.back());
  res.surface.original_energy = lateral_energy_between(model, E, t1, t2);

  // the cap sits on [t1, t1 + len]; everything above t2 drops by t2 - (t1 + len)
  const double len = seg.t.back() - seg.t.front();
  const double drop = t2 - (t1 + len);
  const double lift = t1 - seg.t.front();
  Profile out;
  for (size_t i = 0; i < E.size() && E.t[i] < t1; ++i) push_knot(out, E.t[i], E.r[i]);
  for (size_t i = 0; i < seg.size(); ++i) push_knot(out, seg.t[i] + lift, seg.r[i]);
  push_knot(out, t2 - drop, r2);
  for (size_t i = 0; i < E.size(); ++i)
    if (E.t[i] > t2) push_knot(out, E.t[i] - drop, E.r[i]);
  out.t.front() = 0.0;
  res.profile = std::move(out);

  res.energy_before = reduced_energy(model, E).total;
  res.energy_after = reduced_energy(model, res.profile).total;
  res.volume_before = reduced_volume(model, E);
  res.volume_after = reduced_volume(model, res.profile);
  return res;
}

std::vector<Dent> find_dents(const Profile& E, double tol) {
  E.validate();
  // support: through the first zero knot after the leading positive block
  size_t end = E.size();
  while (end > 1 && E.r[end - 1] <= 0.0 && E.r[end - 2] <= 0.0) --end;
  std::vector<size_t> hull;
  for (size_t i = 0; i < end; ++i) {
    while (hull.size() >= 2) {
      const size_t a = hull[hull.size() - 2], b = hull.back();
      const double c = (E.t[b] - E.t[a]) * (E.r[i] - E.r[a]) - (E.r[b] - E.r[a]) * (E.t[i] - E.t[a]);
      if (c >= 0.0) hull.pop_back();
      else break;
    }
    hull.push_back(i);
  }
  const double scale = std::max(1e-300, E.max_r());
  std::vector<Dent> dents;
  for (size_t h = 0; h + 1 < hull.size(); ++h) {
    const size_t a = hull[h], b = hull[h + 1];
    double depth = 0.0;
    for (size_t i = a + 1; i < b; ++i) {
      const double chord = E.r[a] + (E.r[b] - E.r[a]) * (E.t[i] - E.t[a]) / (E.t[b] - E.t[a]);
      depth = std::max(depth, chord - E.r[i]);
    }
    if (depth > tol * scale) dents.push_back({E.t[a], E.t[b], depth});
  }
  std::sort(dents.begin(), dents.end(), [](const Dent& x, const Dent& y) { return x.depth > y.depth; });
  return dents;
}

namespace {

struct Witness {
  double t1, t2;
};

// Level-set intervals of the chord deficit on (a, b) around its maximum, for a
// shrinking sequence of delta.
std::vector<Witness> sweep(const Profile& E, double a, double b) {
  const double ra = E.r_at(a), rb = E.r_at(b);
  std::vector<double> ts{a}, fs{0.0};
  for (size_t i = 0; i < E.size(); ++i) {
    if (!(E.t[i] > a && E.t[i] < b)) continue;
    ts.push_back(E.t[i]);
    fs.push_back(ra + (rb - ra) * (E.t[i] - a) / (b - a) - E.r[i]);
  }
  ts.push_back(b);
  fs.push_back(0.0);
  const size_t k = static_cast<size_t>(std::max_element(fs.begin(), fs.end()) - fs.begin());
  const double fstar = fs[k];
  std::vector<Witness> out;
  if (!(fstar > 0.0)) return out;
  std::vector<double> deltas{0.9, 0.75};
  for (double d = 0.5; d > 1e-16; d *= 0.5) deltas.push_back(d);
  for (double delta : deltas) {
    const double level = (1.0 - delta) * fstar;
    size_t i = k;
    while (i > 0 && fs[i - 1] > level) --i;
    size_t j = k;
    while (j + 1 < fs.size() && fs[j + 1] > level) ++j;
    // crossings inside the slabs just outside [i, j]
    const double x1 = ts[i - 1] + (ts[i] - ts[i - 1]) * (level - fs[i - 1]) / (fs[i] - fs[i - 1]);
    const double x2 = ts[j] + (ts[j + 1] - ts[j]) * (fs[j] - level) / (fs[j] - fs[j + 1]);
    out.push_back({x1, x2});
  }
  return out;
}

// Sweeps (a, b); on a flat stretch parallel to the chord the right end is
// pulled in and the sweep repeated. Witnesses come out widest first.
std::vector<Witness> witnesses(const Profile& E, double a, double b, double epsilon) {
  std::vector<Witness> all;
  for (int attempt = 0; attempt < 16; ++attempt) {
    for (const Witness& w : sweep(E, a, b)) {
      all.push_back(w);
      if (w.t2 - w.t1 < epsilon) return all;
    }
    auto it = std::lower_bound(E.t.begin(), E.t.end(), b);
    const double prev = it == E.t.begin() ? a : *(it - 1);
    b -= 0.25 * (b - std::max(prev, a));
  }
  return all;
}

}  // namespace

std::optional<std::pair<double, double>> find_nonconvexity(const Profile& E, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(Errc::invalid_input, "epsilon must be positive");
  std::optional<Witness> best;
  for (const Dent& d : find_dents(E)) {
    for (const Witness& w : witnesses(E, d.t1, d.t2, epsilon))
      if (!best || w.t2 - w.t1 < best->t2 - best->t1) best = w;
    if (best && best->t2 - best->t1 < epsilon) break;
  }
  if (best) return std::make_pair(best->t1, best->t2);
  return std::nullopt;
}

std::optional<CompetitorResult> repair_once(const DropModel& model, const Profile& E) {
  auto attempt = [&](double t1, double t2) -> std::optional<CompetitorResult> {
    if (!(t1 > 0.0) || !below_chord(E, t1, t2)) return std::nullopt;
    if (E.r_at(t1) > E.r_at(t2) && !shift_hypothesis(model, E, t1, t2)) return std::nullopt;
    try {
      CompetitorResult r = apply_competitor(model, E, t1, t2);
      if (r.energy_after < r.energy_before) return r;
    } catch (const Error&) {
    }
    return std::nullopt;
  };
  for (const Dent& d : find_dents(E, 1e-10)) {
    if (auto r = attempt(d.t1, d.t2)) return r;
    // widest level-set witness that meets the hypotheses
    for (const Witness& w : witnesses(E, d.t1, d.t2, 1e-9 * (d.t2 - d.t1)))
      if (auto r = attempt(w.t1, w.t2)) return r;
  }
  return std::nullopt;
}

}  // namespace sessile
