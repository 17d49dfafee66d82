#pragma once

#include <string>

#include <json.hpp>

#include "hgeom/cloud.hpp"
#include "hgeom/point.hpp"
#include "hgeom/region.hpp"
#include "hgeom/subgroup.hpp"
#include "hgeom/tangent.hpp"

namespace hgeom {

// JSON wire formats:
//   HPoint    -> [p_1, ..., p_2n, t]                       (2n+1 numbers)
//   Subgroup  -> {"kind": "horizontal"|"vertical", "n": int, "basis": [[...], ...]}
//   PointCloud-> {"n", "k_m", "total_mass", "points", "weights", "generator", "seed"}
//   Region    -> {"type": "cone"|"truncated_cone"|"cylinder"|"paraboloid", ...}

nlohmann::json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const nlohmann::json& j);

nlohmann::json to_json(const HPoint& p);
HPoint hpoint_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Subgroup& s);
Subgroup subgroup_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PointCloud& cloud);
PointCloud cloud_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Region& r);
Region region_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DensityReport& report);

nlohmann::json to_json(const TangentReport& report);

/// DensityReport rows as CSV: point_index, radius, ball_mass, normalized.
std::string density_csv(const std::vector<DensityReport>& reports, int k_m);

/// 17 significant digits, enough to round-trip a double exactly.
std::string format17(double x);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace hgeom
