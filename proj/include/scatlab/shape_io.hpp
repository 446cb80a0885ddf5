#pragma once

// JSON documents for shapes, motions, boundary conditions and solver settings.
//
// Shape document:
//   {"family": "circle", "radius": r}
//   {"family": "ellipse", "a": a, "b": b}
//   {"family": "trig", "x_cos": [...], "x_sin": [...], "y_cos": [...], "y_sin": [...]}
// optionally with "motion": {"theta": rad, "z": [x, y]} and
// "bc": {"type": "dirichlet" | "neumann" | "impedance", "lambda": [re, im]}.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "scatlab/geometry.hpp"
#include "scatlab/obstacle.hpp"
#include "scatlab/scatter.hpp"

namespace scatlab {

using json = nlohmann::ordered_json;

/// Parses JSON text; syntax errors become ConfigError with "source:line:column".
json parse_json_text(const std::string& text, const std::string& source);
json read_json_file(const std::filesystem::path& path);

json curve_to_json(const ParametricCurve& c);
ParametricCurve curve_from_json(const json& j);

json motion_to_json(const RigidMotion& m);
RigidMotion motion_from_json(const json& j);

json bc_to_json(const BoundaryCondition& bc);
BoundaryCondition bc_from_json(const json& j);

/// Shape document with "motion" and "bc"; missing keys default to the
/// identity motion and a Dirichlet condition.
json obstacle_to_json(const Obstacle& obs);
Obstacle obstacle_from_json(const json& j);

/// Missing keys keep their defaults; unknown keys are rejected.
json mfs_config_to_json(const MfsConfig& cfg);
MfsConfig mfs_config_from_json(const json& j);

/// Typed field access with ConfigError on missing or mistyped values.
double get_number(const json& j, const std::string& key);
double get_number(const json& j, const std::string& key, double fallback);
int get_int(const json& j, const std::string& key, int fallback);
Point get_point(const json& j, const std::string& key, Point fallback);

/// Throws ConfigError naming the first key of `j` not in `allowed`.
void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& context);

}  // namespace scatlab
