#include "hgeom/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace hgeom {

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json j = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw InvalidInput("expected a JSON array of numbers");
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(int(i)) = j[i].get<double>();
  return v;
}

nlohmann::json to_json(const HPoint& p) {
  nlohmann::json j = vector_to_json(p.horiz);
  j.push_back(p.vert);
  return j;
}

HPoint hpoint_from_json(const nlohmann::json& j) {
  const Eigen::VectorXd all = vector_from_json(j);
  if (all.size() < 3 || all.size() % 2 == 0)
    throw InvalidInput("point: expected 2n+1 coordinates");
  return HPoint(all.head(all.size() - 1), all(all.size() - 1));
}

nlohmann::json to_json(const Subgroup& s) {
  nlohmann::json basis = nlohmann::json::array();
  for (int c = 0; c < s.basis.cols(); ++c) basis.push_back(vector_to_json(s.basis.col(c)));
  return {{"kind", s.kind == SubgroupKind::Horizontal ? "horizontal" : "vertical"},
          {"n", s.n()},
          {"basis", basis}};
}

Subgroup subgroup_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const int n = j.at("n").get<int>();
  const auto& rows = j.at("basis");
  Eigen::MatrixXd basis(2 * n, rows.size());
  for (size_t c = 0; c < rows.size(); ++c) {
    const Eigen::VectorXd v = vector_from_json(rows[c]);
    if (v.size() != 2 * n) throw InvalidInput("subgroup: basis vector has wrong length");
    basis.col(int(c)) = v;
  }
  if (kind == "horizontal")
    return make_subgroup(SubgroupKind::Horizontal, basis, n);
  if (kind == "vertical")
    return make_subgroup(SubgroupKind::Vertical, basis, n);
  throw InvalidInput("subgroup: kind must be 'horizontal' or 'vertical'");
}

nlohmann::json to_json(const PointCloud& cloud) {
  nlohmann::json points = nlohmann::json::array();
  for (const HPoint& p : cloud.points) points.push_back(to_json(p));
  nlohmann::json j{{"n", cloud.meta.n},
                   {"k_m", cloud.meta.k_m},
                   {"total_mass", cloud.meta.total_mass},
                   {"points", std::move(points)},
                   {"weights", vector_to_json(cloud.weights)},
                   {"generator", cloud.meta.generator},
                   {"seed", cloud.meta.seed}};
  if (!cloud.meta.ground_truth.empty())
    j["ground_truth"] = nlohmann::json::parse(cloud.meta.ground_truth);
  return j;
}

PointCloud cloud_from_json(const nlohmann::json& j) {
  PointCloud cloud;
  cloud.meta.n = j.at("n").get<int>();
  cloud.meta.k_m = j.at("k_m").get<int>();
  cloud.meta.total_mass = j.at("total_mass").get<double>();
  cloud.meta.generator = j.value("generator", std::string());
  cloud.meta.seed = j.value("seed", std::uint64_t(0));
  if (j.contains("ground_truth")) cloud.meta.ground_truth = j["ground_truth"].dump();
  for (const auto& pj : j.at("points")) cloud.points.push_back(hpoint_from_json(pj));
  cloud.weights = vector_from_json(j.at("weights"));
  validate_cloud(cloud);
  return cloud;
}

nlohmann::json to_json(const Region& r) {
  return std::visit(
      [](const auto& region) -> nlohmann::json {
        using T = std::decay_t<decltype(region)>;
        if constexpr (std::is_same_v<T, Cone>) {
          return {{"type", "cone"},
                  {"vertex", to_json(region.vertex)},
                  {"axis", to_json(region.axis)},
                  {"aperture", region.aperture}};
        } else if constexpr (std::is_same_v<T, TruncatedCone>) {
          return {{"type", "truncated_cone"},
                  {"vertex", to_json(region.vertex)},
                  {"axis", to_json(region.axis)},
                  {"aperture", region.aperture},
                  {"radius", region.radius}};
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          return {{"type", "cylinder"},
                  {"axis", to_json(region.axis)},
                  {"width", region.width}};
        } else {
          return {{"type", "paraboloid"},
                  {"center", to_json(region.center)},
                  {"base", to_json(region.base)},
                  {"lambda", region.lambda},
                  {"alpha", region.alpha}};
        }
      },
      r);
}

Region region_from_json(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "cone")
    return make_cone(hpoint_from_json(j.at("vertex")), subgroup_from_json(j.at("axis")),
                     j.at("aperture").get<double>());
  if (type == "truncated_cone")
    return make_truncated_cone(hpoint_from_json(j.at("vertex")),
                               subgroup_from_json(j.at("axis")),
                               j.at("aperture").get<double>(),
                               j.at("radius").get<double>());
  if (type == "cylinder")
    return make_cylinder(subgroup_from_json(j.at("axis")), j.at("width").get<double>());
  if (type == "paraboloid")
    return make_paraboloid(hpoint_from_json(j.at("center")),
                           subgroup_from_json(j.at("base")),
                           j.at("lambda").get<double>(), j.at("alpha").get<double>());
  throw InvalidInput("region: unknown type '" + type + "'");
}

nlohmann::json to_json(const DensityReport& report) {
  return {{"point", to_json(report.point)},
          {"radii", report.radii},
          {"ball_mass", report.ball_mass},
          {"upper_density", report.upper_density},
          {"lower_density", report.lower_density}};
}

nlohmann::json to_json(const TangentReport& report) {
  nlohmann::json scores = nlohmann::json::array();
  for (const TangentScore& s : report.scores)
    scores.push_back({{"radius", s.radius},
                      {"aperture", s.aperture},
                      {"normalized_mass", s.normalized_mass}});
  nlohmann::json j{{"point", to_json(report.point)},
                   {"scores", std::move(scores)},
                   {"converged", report.converged},
                   {"ok", report.ok}};
  if (report.ok)
    j["best_subgroup"] = to_json(report.best);
  else
    j["error"] = report.error;
  return j;
}

std::string format17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string density_csv(const std::vector<DensityReport>& reports, int k_m) {
  std::ostringstream out;
  out << "point_index,radius,ball_mass,normalized\n";
  for (size_t i = 0; i < reports.size(); ++i) {
    const DensityReport& r = reports[i];
    for (size_t j = 0; j < r.radii.size(); ++j) {
      const double normalized = r.ball_mass[j] / std::pow(r.radii[j], double(k_m));
      out << i << ',' << format17(r.radii[j]) << ',' << format17(r.ball_mass[j]) << ','
          << format17(normalized) << '\n';
    }
  }
  return out.str();
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open file: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write file: " + path);
  out << text;
}

}  // namespace hgeom
