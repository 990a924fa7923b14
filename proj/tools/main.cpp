#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sessile/competitor.hpp"
#include "sessile/error.hpp"
#include "sessile/io.hpp"
#include "sessile/odesolve.hpp"
#include "sessile/reduced.hpp"
#include "sessile/sets.hpp"
#include "sessile/suites.hpp"
#include "sessile/wulff.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace sessile;

constexpr int kExitCheckFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNonConvergence = 3;

// Thrown when a solver finishes without meeting its stopping rule; outputs are
// still written.
struct NonConvergence {
  std::string what;
};

// Non-finite numbers are left out so the report stays valid JSON.
void put(json& j, const char* key, double x) {
  if (std::isfinite(x)) j[key] = x;
}

json energy_json(const EnergyBreakdown& e) {
  json j;
  put(j, "Fs", e.Fs);
  put(j, "Fc", e.Fc);
  put(j, "Fp", e.Fp);
  put(j, "total", e.total);
  return j;
}

std::string path_in(const std::string& dir, const std::string& given, const char* fallback) {
  if (!given.empty()) return given;
  if (dir.empty()) return "";
  return (std::filesystem::path(dir) / fallback).string();
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") std::fputs(content.c_str(), stdout);
  else write_file_atomic(path, content);
}

struct Common {
  std::string tension = "euclid";
  double omega = -0.5;
  double mass = 1.0;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool timing = false;
};

void add_common(CLI::App* app, Common& c, bool with_mass = true) {
  app->add_option("--tension", c.tension, "preset name, inline JSON object, or JSON file")->capture_default_str();
  app->add_option("--omega", c.omega, "contact coefficient")->capture_default_str();
  if (with_mass) app->add_option("--mass", c.mass, "drop volume")->capture_default_str();
  app->add_option("--seed", c.seed, "seed for all randomness")->capture_default_str();
  app->add_option("--out-dir", c.out_dir, "directory for default output files");
  app->add_flag("--timing", c.timing, "include wall-clock times in reports");
}

json inputs_json(const Common& c, const SurfaceTension& f) {
  json j;
  j["tension"] = json::parse(tension_to_json(f));
  put(j, "omega", c.omega);
  put(j, "mass", c.mass);
  j["seed"] = c.seed;
  return j;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- wulff ----

struct WulffArgs {
  Common c;
  int normals = kDefaultNormals;
  std::string out, plot;
};

std::string body_svg(const Polygon& p) {
  double R = 0.0;
  for (const Vec2& v : p.vertices) R = std::max({R, std::fabs(v.x), std::fabs(v.y)});
  const double pad = 0.05 * R, w = 2 * (R + pad);
  std::string pts;
  for (const Vec2& v : p.vertices) pts += format_double(v.x) + "," + format_double(v.y) + " ";
  if (!pts.empty()) pts.pop_back();
  const std::string x0 = format_double(-R - pad), ws = format_double(w);
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"" + x0 + " " + x0 + " " +
         ws + " " + ws + "\">\n<g transform=\"scale(1,-1)\">\n<polygon fill=\"none\" stroke=\"#1f4e8c\" stroke-width=\"" +
         format_double(0.004 * w) + "\" points=\"" + pts + "\"/>\n</g>\n</svg>\n";
}

// Solvers need phi smooth and strictly convex near the poles.
SurfaceTension admissible_tension(const std::string& arg) {
  SurfaceTension f = tension_from_arg(arg);
  if (!f.check_admissible().admissible) throw Error(Errc::invalid_input, "tension is not admissible: " + f.describe());
  return f;
}

int cmd_wulff(const WulffArgs& a) {
  const SurfaceTension f = tension_from_arg(a.c.tension);
  const WulffBody K = build_wulff_body(f, a.normals);
  json j;
  j["inputs"] = {{"tension", json::parse(tension_to_json(f))}, {"normals", a.normals}};
  json verts = json::array();
  for (const Vec2& v : K.geometry.vertices) {
    if (K.d() == 1) verts.push_back({v.x});
    else verts.push_back({v.x, v.y});
  }
  json edges = json::array();
  for (const Edge& e : K.geometry.edges)
    edges.push_back({{"normal", {e.normal.x, e.normal.y}}, {"length", e.length}, {"h", e.h_value}, {"support", e.support}});
  j["vertices"] = verts;
  j["edges"] = edges;
  put(j, "area", K.area());
  put(j, "perimeter", K.aniso_perimeter);
  put(j, "lambda", K.lambda);
  put(j, "top", wulff_top(f));
  put(j, "bottom", wulff_bottom(f));
  emit(path_in(a.c.out_dir, a.out, "wulff.json"), j.dump(2) + "\n");
  const std::string plot = path_in(a.c.out_dir, a.plot, "");
  if (!plot.empty() && K.d() == 2) write_file_atomic(plot, body_svg(K.geometry));
  return 0;
}

// ---- symmetrize ----

struct SymArgs {
  Common c;
  std::string set, out, report;
};

int cmd_symmetrize(const SymArgs& a) {
  const SurfaceTension f = tension_from_arg(a.c.tension);
  const SlicedSet A = sliced_set_from_json(read_file(a.set), f);
  const DropModel model(f, a.c.omega);
  const Profile star = symmetrize(A, model.body());
  const EnergyBreakdown before = energy(A, f, a.c.omega), after = reduced_energy(model, star);
  json j;
  j["inputs"] = inputs_json(a.c, f);
  j["inputs"].erase("mass");
  j["set"] = {{"energy", energy_json(before)}};
  put(j["set"], "volume", volume(A));
  j["symmetrized"] = {{"energy", energy_json(after)}};
  put(j["symmetrized"], "volume", reduced_volume(model, star));
  put(j, "energy_change", after.total - before.total);
  emit(path_in(a.c.out_dir, a.out, "symmetrized.csv"), profile_to_csv(star));
  const std::string rep = path_in(a.c.out_dir, a.report, "symmetrize.json");
  if (!rep.empty()) write_file_atomic(rep, j.dump(2) + "\n");
  else std::fprintf(stderr, "%s\n", j.dump(2).c_str());
  return 0;
}

// ---- repair ----

struct RepairArgs {
  Common c;
  std::string profile, out, report;
  int max_steps = 100;
};

int cmd_repair(const RepairArgs& a) {
  const SurfaceTension f = admissible_tension(a.c.tension);
  const DropModel model(f, a.c.omega);
  Profile E = profile_from_csv(read_file(a.profile));
  json log = json::array();
  for (int step = 0; step < a.max_steps; ++step) {
    const auto r = repair_once(model, E);
    if (!r) break;
    json e;
    put(e, "t1", r->params.t1);
    put(e, "t2", r->params.t2);
    put(e, "sigma", r->params.sigma);
    put(e, "tau", r->params.tau);
    put(e, "b", r->params.b);
    e["case"] = r->case_index;
    put(e, "dF", r->energy_after - r->energy_before);
    put(e, "volume_change", r->volume_after - r->volume_before);
    log.push_back(e);
    E = r->profile;
  }
  json j;
  j["inputs"] = inputs_json(a.c, f);
  j["inputs"].erase("mass");
  j["repairs"] = log;
  j["remaining_dents"] = find_dents(E).size();
  j["energy"] = energy_json(reduced_energy(model, E));
  emit(path_in(a.c.out_dir, a.out, "repaired.csv"), profile_to_csv(E));
  const std::string rep = path_in(a.c.out_dir, a.report, "repair.json");
  if (!rep.empty()) write_file_atomic(rep, j.dump(2) + "\n");
  else std::fprintf(stderr, "%s\n", j.dump(2).c_str());
  return 0;
}

// ---- solve ----

struct SolveArgs {
  Common c;
  std::string method = "shoot";
  std::string out, plot, report;
  int grid = 256;
  int knots = 512;
};

json profile_summary(const DropModel& model, const Profile& p, double lambda) {
  json j;
  j["energy"] = energy_json(reduced_energy(model, p));
  put(j, "volume", reduced_volume(model, p));
  put(j, "young_residual", young_residual(model, p));
  const ElResidual el = el_residual(model, p, lambda);
  put(j, "max_el_residual", el.max_abs(p.top()));
  put(j, "lambda_est", lambda_estimate(model, p));
  put(j, "R_max", p.max_r());
  put(j, "T_max", p.top());
  const ShapeReport s = check_shape(p);
  j["concave"] = s.concave;
  j["single_support"] = s.single_support;
  return j;
}

int cmd_solve(const SolveArgs& a) {
  const SurfaceTension f = admissible_tension(a.c.tension);
  if (!(a.c.mass > 0.0) || !std::isfinite(a.c.mass)) throw Error(Errc::invalid_input, "mass must be positive");
  const DropModel model(f, a.c.omega);
  const bool run_shoot = a.method == "shoot" || a.method == "both";
  const bool run_direct = a.method == "direct" || a.method == "both";

  json rep;
  rep["inputs"] = inputs_json(a.c, f);
  rep["inputs"]["method"] = a.method;
  rep["inputs"]["grid"] = a.grid;
  rep["inputs"]["knots"] = a.knots;

  std::optional<ShootingSolution> sh;
  std::optional<DirectResult> dr;
  std::vector<std::string> problems;
  if (run_shoot) {
    ShootOptions so;
    so.knots = a.knots;
    const auto t0 = std::chrono::steady_clock::now();
    sh = shoot(model, a.c.mass, so);
    json j = profile_summary(model, sh->profile, sh->lambda);
    put(j, "young_residual", sh->young_residual);
    put(j, "young_residual_grid", sh->young_residual_grid);
    put(j, "v0", sh->v0);
    put(j, "s_star", sh->s_star);
    put(j, "lambda", sh->lambda);
    put(j, "min_delta", sh->min_delta);
    put(j, "V", sh->V);
    j["bisection_steps"] = sh->bisection_steps;
    json b;
    put(b, "fitted", sh->bridge_fitted);
    put(b, "analytic", sh->bridge_analytic);
    put(b, "perimeter_form", sh->bridge_perimeter);
    j["volume_bridge"] = b;
    if (a.c.timing) put(j, "wall_seconds", seconds_since(t0));
    if (std::fabs(sh->volume - a.c.mass) > 1e-8 * a.c.mass) problems.push_back("shooting volume mismatch");
    rep["shoot"] = j;
  }
  if (run_direct) {
    DirectOptions d;
    d.grid_size = a.grid;
    d.seed = a.c.seed;
    const auto t0 = std::chrono::steady_clock::now();
    dr = minimize_direct(model, a.c.mass, d);
    const double lam = lambda_estimate(model, dr->profile);
    json j = profile_summary(model, dr->profile, lam);
    j["iterations"] = dr->iterations;
    j["repairs"] = dr->repairs;
    j["regrids"] = dr->regrids;
    j["converged"] = dr->converged;
    put(j, "grad_norm", dr->grad_norm);
    if (a.c.timing) put(j, "wall_seconds", seconds_since(t0));
    if (!dr->converged) problems.push_back("direct minimizer did not converge");
    rep["direct"] = j;
  }
  if (sh && dr) {
    json x;
    const double l = linf_distance(sh->profile, dr->profile);
    put(x, "linf", l);
    put(x, "linf_relative", l / sh->R_max);
    const double Es = reduced_energy(model, sh->profile).total;
    put(x, "energy_relative", std::fabs(dr->energy.total - Es) / std::fabs(Es));
    rep["cross_difference"] = x;
  }

  const Profile& out = sh ? sh->profile : dr->profile;
  emit(path_in(a.c.out_dir, a.out, "profile.csv"), profile_to_csv(out));
  const std::string plot = path_in(a.c.out_dir, a.plot, "profile.svg");
  if (!plot.empty()) write_file_atomic(plot, profile_svg(out));
  const std::string rp = path_in(a.c.out_dir, a.report, "report.json");
  if (!rp.empty()) write_file_atomic(rp, rep.dump(2) + "\n");
  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
    throw NonConvergence{msg};
  }
  return 0;
}

// ---- check ----

struct CheckArgs {
  Common c;
  std::vector<std::string> suites;
  int trials = 0;
  std::string report;
};

int cmd_check(const CheckArgs& a) {
  std::vector<std::string> names = a.suites.empty() ? suite_names() : a.suites;
  json j;
  j["seed"] = a.c.seed;
  json arr = json::array();
  std::vector<std::string> failed;
  for (const std::string& n : names) {
    const SuiteResult r = run_suite(n, {a.c.seed, a.trials});
    json s;
    s["name"] = r.name;
    s["passed"] = r.passed;
    s["summary"] = r.summary;
    json m;
    for (const Metric& x : r.metrics) put(m, x.name.c_str(), x.value);
    s["metrics"] = m;
    s["failures"] = r.failures;
    if (a.c.timing) put(s, "wall_seconds", r.seconds);
    arr.push_back(s);
    std::fprintf(stderr, "%s %-15s %s\n", r.passed ? "pass" : "FAIL", r.name.c_str(), r.summary.c_str());
    if (!r.passed) failed.push_back(r.name);
  }
  j["suites"] = arr;
  j["passed"] = failed.empty();
  j["failed"] = failed;
  emit(path_in(a.c.out_dir, a.report, "check.json"), j.dump(2) + "\n");
  if (!failed.empty()) {
    std::string list;
    for (const auto& n : failed) list += (list.empty() ? "" : ", ") + n;
    std::fprintf(stderr, "failed properties: %s\n", list.c_str());
    return kExitCheckFailed;
  }
  return 0;
}

// ---- sweep ----

struct SweepArgs {
  Common c;
  double v0_min = 0.1, v0_max = 10.0;
  int points = 16;
  std::string report;
};

int cmd_sweep(const SweepArgs& a) {
  const SurfaceTension f = admissible_tension(a.c.tension);
  const DropModel model(f, a.c.omega);
  if (!(a.v0_min > 0.0 && a.v0_max > a.v0_min && a.points >= 2))
    throw Error(Errc::invalid_input, "need 0 < v0-min < v0-max and at least 2 points");
  const double ss = s_star(f, a.c.omega);
  json pts = json::array();
  int negative = 0;
  for (int i = 0; i < a.points; ++i) {
    const double v0 = a.v0_min * std::pow(a.v0_max / a.v0_min, double(i) / (a.points - 1));
    const Trajectory tr = integrate_v(f, v0, ss);
    const double V = V_of(tr, ss);
    const double d = dV_dv0(f, v0, ss, 1e-4 * v0);
    const Reconstruction rec = reconstruct_profile(tr, model);
    const double vol = reduced_volume(model, rec.profile);
    if (d < 0) ++negative;
    json p;
    put(p, "v0", v0);
    put(p, "V", V);
    put(p, "dV_dv0", d);
    put(p, "volume", vol);
    put(p, "bridge", vol / V);
    put(p, "R_max", rec.R_max);
    put(p, "T_max", rec.T_max);
    pts.push_back(p);
  }
  json j;
  j["inputs"] = inputs_json(a.c, f);
  j["inputs"].erase("mass");
  put(j, "s_star", ss);
  j["points"] = pts;
  j["negative_derivatives"] = negative;
  emit(path_in(a.c.out_dir, a.report, "sweep.json"), j.dump(2) + "\n");
  return 0;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::no_bracket:
    case Errc::non_convergence:
    case Errc::stalled_inversion:
      return kExitNonConvergence;
    default:
      return kExitValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibrium shapes of anisotropic sessile drops"};
  app.require_subcommand(1);

  WulffArgs wa;
  auto* wulff = app.add_subcommand("wulff", "slice Wulff body as JSON");
  add_common(wulff, wa.c, false);
  wulff->add_option("--normals", wa.normals, "number of sampled normals")->check(CLI::Range(8, 1 << 20));
  wulff->add_option("--out", wa.out, "JSON output (default stdout)");
  wulff->add_option("--plot", wa.plot, "SVG outline");

  SymArgs sa;
  auto* sym = app.add_subcommand("symmetrize", "symmetrize a sliced set");
  add_common(sym, sa.c, false);
  sym->add_option("--set", sa.set, "sliced set JSON")->required();
  sym->add_option("--out", sa.out, "profile CSV (default stdout)");
  sym->add_option("--report", sa.report, "energy breakdown JSON");

  RepairArgs ra;
  auto* rep = app.add_subcommand("repair", "replace dents by truncated Wulff caps");
  add_common(rep, ra.c, false);
  rep->add_option("--profile", ra.profile, "profile CSV")->required();
  rep->add_option("--out", ra.out, "repaired profile CSV (default stdout)");
  rep->add_option("--report", ra.report, "JSON log of replacements");
  rep->add_option("--max-steps", ra.max_steps, "maximum number of replacements")->capture_default_str();

  SolveArgs so;
  auto* solve = app.add_subcommand("solve", "equilibrium profile for given volume");
  solve->alias("minimize");
  add_common(solve, so.c);
  solve->add_option("--method", so.method, "shoot, direct or both")
      ->check(CLI::IsMember({"shoot", "direct", "both"}))
      ->capture_default_str();
  solve->add_option("--out", so.out, "profile CSV (default stdout)");
  solve->add_option("--plot", so.plot, "SVG plot");
  solve->add_option("--report", so.report, "JSON report");
  solve->add_option("--grid", so.grid, "direct solver slabs")->check(CLI::Range(8, 1 << 16))->capture_default_str();
  solve->add_option("--knots", so.knots, "shooting profile knots")->check(CLI::Range(8, 1 << 20))->capture_default_str();

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "run property suites");
  add_common(check, ca.c, false);
  check->add_option("--suite", ca.suites, "suite name (repeatable)")->check(CLI::IsMember(suite_names()));
  check->add_option("--trials", ca.trials, "trial count override")->check(CLI::NonNegativeNumber);
  check->add_option("--report", ca.report, "summary JSON (default stdout)");

  SweepArgs wa2;
  auto* sweep = app.add_subcommand("sweep", "volume functional over the apex value");
  add_common(sweep, wa2.c, false);
  sweep->add_option("--v0-min", wa2.v0_min, "smallest apex value")->capture_default_str();
  sweep->add_option("--v0-max", wa2.v0_max, "largest apex value")->capture_default_str();
  sweep->add_option("--points", wa2.points, "log-spaced sample count")->capture_default_str();
  sweep->add_option("--report", wa2.report, "JSON output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  try {
    if (*wulff) return cmd_wulff(wa);
    if (*sym) return cmd_symmetrize(sa);
    if (*rep) return cmd_repair(ra);
    if (*solve) return cmd_solve(so);
    if (*check) return cmd_check(ca);
    if (*sweep) return cmd_sweep(wa2);
  } catch (const NonConvergence& e) {
    std::fprintf(stderr, "error: %s\n", e.what.c_str());
    return kExitNonConvergence;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return 0;
}
