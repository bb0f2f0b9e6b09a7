#pragma once

// JSON serialization for maps and coordinate transformations, plus CSV
// trajectory output. Matrix entries written as strings are exact
// rationals ("-3/4"); entries written as JSON numbers are doubles. Loads
// accept either form per entry.

#include <string>
#include <vector>

#include <json.hpp>

#include "qpmaps/qp_map.hpp"
#include "qpmaps/transform.hpp"

namespace qpmaps {

using json = nlohmann::ordered_json;

// Scalar <-> JSON entry ("p/q" string when exact, number otherwise).
json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const json& j, const std::string& where);

json map_to_json(const QPMap& map);
QPMap map_from_json(const json& j, double struct_tol = kStructTol);

json qmt_to_json(const QMT& t);
QMT qmt_from_json(const json& j, double struct_tol = kStructTol);

// File helpers; throw FileError on unreadable/unwritable paths and
// ParseError on malformed content.
json load_json_file(const std::string& path);
void save_json_file(const json& j, const std::string& path);
QPMap load_map(const std::string& path, double struct_tol = kStructTol);
void save_map(const QPMap& map, const std::string& path);
QMT load_qmt(const std::string& path, double struct_tol = kStructTol);

// Doubles formatted with 17 significant digits (round-trip exact).
std::string format_double(double v);

// CSV with header t,x1,...,xn; one row per recorded state.
std::string trajectory_csv(const Trajectory& tr);
void save_trajectory_csv(const Trajectory& tr, const std::string& path);

// Comma-separated positive components, e.g. "1,0.5,2e-1".
State parse_state(const std::string& text, std::size_t n);

} // namespace qpmaps
