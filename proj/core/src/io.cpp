#include "sessile/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sessile/error.hpp"

namespace sessile {

using nlohmann::json;

namespace {

double get_number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw Error(Errc::invalid_input, std::string("\"") + key + "\" must be a number");
  return j.at(key).get<double>();
}

std::string get_string(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string())
    throw Error(Errc::invalid_input, std::string("missing string field \"") + key + "\"");
  return j.at(key).get<std::string>();
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::invalid_input, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

SurfaceTension tension_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.is_object()) throw Error(Errc::invalid_input, "tension must be a JSON object");
  const int N = static_cast<int>(get_number(j, "N", 3));
  if (!j.contains("phi") || !j.at("phi").is_object()) throw Error(Errc::invalid_input, "missing \"phi\" object");
  const json& jp = j.at("phi");
  PhiSpec phi;
  const std::string pf = get_string(jp, "family");
  if (pf == "euclid") phi.family = PhiFamily::euclid;
  else if (pf == "pnorm") phi.family = PhiFamily::pnorm;
  else if (pf == "weighted") phi.family = PhiFamily::weighted;
  else if (pf == "manhattan") phi.family = PhiFamily::manhattan;
  else throw Error(Errc::invalid_input, "unknown phi family \"" + pf + "\"");
  phi.p = get_number(jp, "p", 2.0);
  phi.c = get_number(jp, "c", 1.0);

  HSpec h;
  if (j.contains("h")) {
    const json& jh = j.at("h");
    if (!jh.is_object()) throw Error(Errc::invalid_input, "\"h\" must be an object");
    const std::string hf = get_string(jh, "family");
    if (hf == "euclid") h.family = HFamily::euclid;
    else if (hf == "lp") h.family = HFamily::lp;
    else if (hf == "l1reg") h.family = HFamily::l1reg;
    else throw Error(Errc::invalid_input, "unknown h family \"" + hf + "\"");
    h.p = get_number(jh, "p", 2.0);
    h.eps = get_number(jh, "eps", 0.0);
  }
  DerivativeMode mode = DerivativeMode::closed_form;
  if (j.contains("derivative_mode")) {
    const std::string m = get_string(j, "derivative_mode");
    if (m == "central_difference") mode = DerivativeMode::central_difference;
    else if (m != "closed_form") throw Error(Errc::invalid_input, "unknown derivative_mode \"" + m + "\"");
  }
  return SurfaceTension(N, phi, h, mode);
}

std::string tension_to_json(const SurfaceTension& t) {
  json j = json::object();
  j["N"] = t.N();
  json jp = json::object();
  switch (t.phi_spec().family) {
    case PhiFamily::euclid: jp["family"] = "euclid"; break;
    case PhiFamily::pnorm: jp["family"] = "pnorm"; jp["p"] = t.phi_spec().p; break;
    case PhiFamily::weighted: jp["family"] = "weighted"; jp["c"] = t.phi_spec().c; break;
    case PhiFamily::manhattan: jp["family"] = "manhattan"; break;
  }
  json jh = json::object();
  switch (t.h_spec().family) {
    case HFamily::euclid: jh["family"] = "euclid"; break;
    case HFamily::lp: jh["family"] = "lp"; jh["p"] = t.h_spec().p; break;
    case HFamily::l1reg: jh["family"] = "l1reg"; jh["eps"] = t.h_spec().eps; break;
  }
  j["phi"] = jp;
  j["h"] = jh;
  j["derivative_mode"] = t.derivative_mode() == DerivativeMode::closed_form ? "closed_form" : "central_difference";
  return j.dump();
}

std::vector<std::string> preset_names() {
  return {"euclid", "pnorm3-l3", "pnorm3-l2", "weighted2-l1reg", "pnorm1.5-l2"};
}

SurfaceTension preset(const std::string& name) {
  if (name == "euclid") return SurfaceTension(3, {PhiFamily::euclid}, {HFamily::euclid});
  if (name == "pnorm3-l3") return SurfaceTension(3, {PhiFamily::pnorm, 3.0}, {HFamily::lp, 3.0});
  if (name == "pnorm3-l2") return SurfaceTension(3, {PhiFamily::pnorm, 3.0}, {HFamily::euclid});
  if (name == "weighted2-l1reg")
    return SurfaceTension(3, {PhiFamily::weighted, 2.0, 2.0}, {HFamily::l1reg, 1.0, 0.25});
  if (name == "pnorm1.5-l2") return SurfaceTension(3, {PhiFamily::pnorm, 1.5}, {HFamily::euclid});
  throw Error(Errc::invalid_input, "unknown tension preset \"" + name + "\"");
}

SurfaceTension tension_from_arg(const std::string& arg) {
  for (const std::string& n : preset_names())
    if (arg == n) return preset(n);
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{') return tension_from_json(arg);
  if (std::filesystem::exists(arg)) return tension_from_json(read_file(arg));
  throw Error(Errc::invalid_input, "tension \"" + arg + "\" is neither a preset, JSON, nor a readable file");
}

SlicedSet sliced_set_from_json(const std::string& text, const SurfaceTension& tension) {
  const json j = parse(text);
  SlicedSet s;
  try {
    s.knots = j.at("knots").get<std::vector<double>>();
    s.scales = j.at("scales").get<std::vector<double>>();
    const auto& base = j.at("base");
    if (tension.slice_dim() == 1) {
      const auto lohi = base.get<std::vector<double>>();
      if (lohi.size() != 2) throw Error(Errc::invalid_input, "interval base needs [lo, hi]");
      s.base = make_interval(tension, lohi[0], lohi[1]);
    } else {
      std::vector<Vec2> verts;
      for (const auto& v : base) verts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
      s.base = make_polygon(tension, verts);
    }
    if (j.contains("centers")) {
      for (const auto& c : j.at("centers"))
        s.centers.push_back({c.at(0).get<double>(), c.size() > 1 ? c.at(1).get<double>() : 0.0});
    } else {
      s.centers.assign(s.knots.size(), Vec2{});
    }
  } catch (const json::exception& e) {
    throw Error(Errc::invalid_input, std::string("bad sliced set: ") + e.what());
  }
  s.validate();
  return s;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string profile_to_csv(const Profile& p) {
  std::string out = "t,r\n";
  for (size_t i = 0; i < p.size(); ++i) out += format_double(p.t[i]) + "," + format_double(p.r[i]) + "\n";
  return out;
}

Profile profile_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Profile p;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line.find_first_of("0123456789") == std::string::npos) continue;  // header
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(Errc::invalid_input, "line " + std::to_string(lineno) + ": expected t,r");
    try {
      size_t used = 0;
      const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
      p.t.push_back(std::stod(a, &used));
      p.r.push_back(std::stod(b, &used));
    } catch (const std::exception&) {
      throw Error(Errc::invalid_input, "line " + std::to_string(lineno) + ": not a number");
    }
  }
  p.validate();
  return p;
}

std::string profile_svg(const Profile& p) {
  const double R = std::max(p.max_r(), 1e-12), T = std::max(p.top(), 1e-12);
  const double pad = 0.05 * std::max(2.0 * R, T);
  const double x0 = -R - pad, w = 2.0 * R + 2.0 * pad, h = T + 2.0 * pad;
  std::string pts;
  auto add = [&](double x, double y) { pts += format_double(x) + "," + format_double(y) + " "; };
  for (size_t i = 0; i < p.size(); ++i) add(p.r[i], p.t[i]);
  if (p.r.back() > 0.0) add(0.0, p.top());
  for (size_t i = p.size(); i-- > 0;) {
    if (p.r[i] > 0.0 || i == 0) add(-p.r[i], p.t[i]);
  }
  if (!pts.empty()) pts.pop_back();
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"" << format_double(x0)
     << " " << format_double(-T - pad) << " " << format_double(w) << " " << format_double(h)
     << "\" preserveAspectRatio=\"xMidYMid meet\">\n"
     << "<g transform=\"scale(1,-1)\">\n"
     << "<line x1=\"" << format_double(x0) << "\" y1=\"0\" x2=\"" << format_double(x0 + w)
     << "\" y2=\"0\" stroke=\"#888\" stroke-width=\"" << format_double(0.003 * w) << "\"/>\n"
     << "<polyline fill=\"none\" stroke=\"#1f4e8c\" stroke-width=\"" << format_double(0.004 * w) << "\" points=\""
     << pts << "\"/>\n"
     << "</g>\n</svg>\n";
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::invalid_input, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::invalid_input, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(Errc::invalid_input, "write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace sessile
