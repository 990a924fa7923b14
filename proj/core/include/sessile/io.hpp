#pragma once

#include <string>
#include <vector>

#include "sessile/profile.hpp"
#include "sessile/sets.hpp"
#include "sessile/tension.hpp"

namespace sessile {

// {"N": 3, "phi": {"family": "pnorm", "p": 3}, "h": {"family": "lp", "p": 3},
//  "derivative_mode": "closed_form"}
SurfaceTension tension_from_json(const std::string& text);
std::string tension_to_json(const SurfaceTension& tension);

// Built-in admissible tensions (N = 3).
std::vector<std::string> preset_names();
SurfaceTension preset(const std::string& name);

// A preset name, an inline JSON object, or a path to a JSON file.
SurfaceTension tension_from_arg(const std::string& arg);

// {"knots": [...], "scales": [...], "centers": [[x, y], ...],
//  "base": [[x, y], ...]}; base is ccw vertices, or [lo, hi] when N = 2.
SlicedSet sliced_set_from_json(const std::string& text, const SurfaceTension& tension);

std::string profile_to_csv(const Profile& p);
Profile profile_from_csv(const std::string& text);

// 800x600 plot of the even reflection of the profile, t upward.
std::string profile_svg(const Profile& p);

std::string read_file(const std::string& path);
// Writes to a temporary sibling and renames it over path.
void write_file_atomic(const std::string& path, const std::string& content);

// printf-style %.17g
std::string format_double(double x);

}  // namespace sessile
