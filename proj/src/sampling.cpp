#include "hgeom/sampling.hpp"

#include <cmath>

#include "hgeom/io.hpp"

namespace hgeom {

namespace {

// Haar measure on a subgroup is the product of Lebesgue measure on the
// horizontal part and (for vertical subgroups) the vertical coordinate; the
// homogeneous ball restricted to the subgroup is exactly (Euclidean ball in
// S') x [-R^2, R^2], so rejection from the bounding box is exact.
Eigen::VectorXd box_ball_sample(int dim, double radius, Rng& rng) {
  if (dim == 0) return Eigen::VectorXd(0);
  Eigen::VectorXd u(dim);
  while (true) {
    for (int i = 0; i < dim; ++i) u(i) = rng.uniform(-radius, radius);
    if (u.norm() <= radius) return u;
  }
}

}  // namespace

HPoint subgroup_ball_point(const Subgroup& s, double radius, Rng& rng) {
  const Eigen::VectorXd u = box_ball_sample(s.linear_dim(), radius, rng);
  HPoint p(s.basis * u, 0.0);
  if (s.kind == SubgroupKind::Vertical)
    p.vert = rng.uniform(-radius * radius, radius * radius);
  return p;
}

HPoint ambient_ball_point(int n, double radius, Rng& rng) {
  return HPoint(box_ball_sample(2 * n, radius, rng),
                rng.uniform(-radius * radius, radius * radius));
}

PointCloud sample_subgroup(const Subgroup& s, const HPoint& base, int count,
                           double box_radius, std::uint64_t seed) {
  if (base.n() != s.n()) throw InvalidInput("sample_subgroup: dimension mismatch");
  if (count <= 0) throw InvalidInput("sample_subgroup: count must be positive");
  if (!(box_radius > 0.0)) throw InvalidInput("sample_subgroup: radius must be positive");

  Rng rng(seed);
  PointCloud cloud;
  cloud.points.reserve(count);
  for (int i = 0; i < count; ++i)
    cloud.points.push_back(mul(base, subgroup_ball_point(s, box_radius, rng)));

  cloud.meta.n = s.n();
  cloud.meta.k_m = s.metric_dim();
  cloud.meta.total_mass = std::pow(box_radius, double(s.metric_dim()));
  cloud.meta.generator = "subgroup";
  cloud.meta.seed = seed;
  cloud.meta.ground_truth = nlohmann::json{{"subgroup", to_json(s)},
                                           {"base", to_json(base)},
                                           {"box_radius", box_radius}}
                                .dump();
  cloud.weights = Eigen::VectorXd::Constant(count, cloud.meta.total_mass / count);
  return cloud;
}

namespace {

HPoint graph_value(const SplitPair& pair, const GraphMap& map, const HPoint& w) {
  const int mv = pair.V.linear_dim();
  const Eigen::VectorXd u = pair.W.basis.transpose() * w.horiz;
  Eigen::VectorXd coeff = Eigen::VectorXd::Zero(mv);
  switch (map.family) {
    case GraphMap::Family::Constant:
      if (map.v0.size() != mv) throw InvalidInput("graph map: v0 has wrong size");
      coeff = map.v0;
      break;
    case GraphMap::Family::Linear:
      if (map.slope.rows() != mv || map.slope.cols() != u.size())
        throw InvalidInput("graph map: slope has wrong shape");
      coeff = map.slope * u;
      break;
    case GraphMap::Family::Sine: {
      // Bounded smooth perturbation with sup-norm <= amplitude.
      const double scale = map.amplitude / std::sqrt(double(std::max(mv, 1)));
      for (int j = 0; j < mv; ++j) {
        const double arg = u.size() > 0 ? u(j % u.size()) : 0.0;
        coeff(j) = scale * std::sin(map.frequency * arg + double(j));
      }
      break;
    }
  }
  return HPoint(pair.V.basis * coeff, 0.0);
}

const char* family_name(GraphMap::Family family) {
  switch (family) {
    case GraphMap::Family::Constant: return "constant";
    case GraphMap::Family::Linear: return "linear";
    case GraphMap::Family::Sine: return "sine";
  }
  return "unknown";
}

}  // namespace

PointCloud sample_intrinsic_graph(const SplitPair& pair, const GraphMap& map,
                                  double domain_radius, int count,
                                  std::uint64_t seed) {
  if (count <= 0) throw InvalidInput("sample_intrinsic_graph: count must be positive");
  if (!(domain_radius > 0.0))
    throw InvalidInput("sample_intrinsic_graph: radius must be positive");

  Rng rng(seed);
  PointCloud cloud;
  cloud.points.reserve(count);
  for (int i = 0; i < count; ++i) {
    const HPoint w = subgroup_ball_point(pair.W, domain_radius, rng);
    cloud.points.push_back(mul(w, graph_value(pair, map, w)));
  }

  cloud.meta.n = pair.W.n();
  cloud.meta.k_m = pair.W.metric_dim();
  cloud.meta.total_mass = std::pow(domain_radius, double(pair.W.metric_dim()));
  cloud.meta.generator = "graph";
  cloud.meta.seed = seed;
  nlohmann::json truth{{"family", family_name(map.family)},
                       {"W", to_json(pair.W)},
                       {"V", to_json(pair.V)},
                       {"domain_radius", domain_radius}};
  if (map.family == GraphMap::Family::Constant) truth["v0"] = vector_to_json(map.v0);
  if (map.family == GraphMap::Family::Linear) truth["slope_norm"] = map.slope.norm();
  if (map.family == GraphMap::Family::Sine) truth["amplitude"] = map.amplitude;
  cloud.meta.ground_truth = truth.dump();
  cloud.weights = Eigen::VectorXd::Constant(count, cloud.meta.total_mass / count);
  return cloud;
}

double similarity_dimension(const std::vector<IfsMap>& maps) {
  if (maps.empty()) throw InvalidInput("similarity_dimension: empty map list");
  // sum r_i^d is strictly decreasing in d; bisect.
  const auto value = [&](double d) {
    double s = 0.0;
    for (const IfsMap& m : maps) s += std::pow(m.ratio, d);
    return s;
  };
  double lo = 0.0, hi = 64.0;
  if (value(0.0) <= 1.0) return 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (value(mid) > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

PointCloud sample_ifs_fractal(const std::vector<IfsMap>& maps, int depth, int count,
                              std::uint64_t seed) {
  if (maps.empty()) throw InvalidInput("sample_ifs_fractal: empty map list");
  if (depth <= 0) throw InvalidInput("sample_ifs_fractal: depth must be positive");
  if (count <= 0) throw InvalidInput("sample_ifs_fractal: count must be positive");
  const int n = maps.front().shift.n();
  for (const IfsMap& m : maps) {
    if (!(m.ratio > 0.0 && m.ratio < 1.0))
      throw InvalidInput("sample_ifs_fractal: ratios must lie in (0,1)");
    if (m.shift.n() != n) throw InvalidInput("sample_ifs_fractal: dimension mismatch");
  }

  Rng rng(seed);
  PointCloud cloud;
  cloud.points.reserve(count);
  for (int i = 0; i < count; ++i) {
    HPoint x = identity(n);
    for (int d = 0; d < depth; ++d) {
      const IfsMap& m = maps[rng.uniform_int(int(maps.size()))];
      x = mul(m.shift, dilate(m.ratio, x));
    }
    cloud.points.push_back(std::move(x));
  }

  const double sim_dim = similarity_dimension(maps);
  cloud.meta.n = n;
  cloud.meta.k_m = int(std::lround(sim_dim));
  cloud.meta.total_mass = 1.0;
  cloud.meta.generator = "ifs";
  cloud.meta.seed = seed;
  cloud.meta.ground_truth =
      nlohmann::json{{"similarity_dimension", sim_dim},
                     {"depth", depth},
                     {"map_count", maps.size()},
                     {"note", "heuristic stand-in for an unrectifiable set"}}
          .dump();
  cloud.weights = Eigen::VectorXd::Constant(count, 1.0 / count);
  return cloud;
}

PointCloud sample_ball(int n, const HPoint& base, int count, double radius,
                       std::uint64_t seed) {
  if (n <= 0 || base.n() != n) throw InvalidInput("sample_ball: dimension mismatch");
  if (count <= 0) throw InvalidInput("sample_ball: count must be positive");
  if (!(radius > 0.0)) throw InvalidInput("sample_ball: radius must be positive");

  Rng rng(seed);
  PointCloud cloud;
  cloud.points.reserve(count);
  for (int i = 0; i < count; ++i)
    cloud.points.push_back(mul(base, ambient_ball_point(n, radius, rng)));

  cloud.meta.n = n;
  cloud.meta.k_m = 2 * n + 2;
  cloud.meta.total_mass = std::pow(radius, double(2 * n + 2));
  cloud.meta.generator = "ball";
  cloud.meta.seed = seed;
  cloud.meta.ground_truth =
      nlohmann::json{{"base", to_json(base)}, {"radius", radius}}.dump();
  cloud.weights = Eigen::VectorXd::Constant(count, cloud.meta.total_mass / count);
  return cloud;
}

}  // namespace hgeom
