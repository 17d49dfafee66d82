#include <doctest.h>

#include "hgeom/region.hpp"
#include "hgeom/sampling.hpp"

using namespace hgeom;

TEST_CASE("subgroup coset samples lie on the coset inside the ball") {
  const Subgroup plane = standard_grassmannian(1, 2);
  const PointCloud cloud = sample_subgroup(plane, identity(1), 2000, 1.0, 1);
  CHECK(cloud.meta.k_m == 3);
  CHECK(cloud.meta.total_mass == doctest::Approx(1.0));
  for (const HPoint& q : cloud.points) {
    CHECK(std::abs(q.horiz(0)) <= 1e-12);  // points of the form (0, y, t)
    CHECK(hom_norm(q) <= 1.0 + 1e-12);
    CHECK(dist_to_subgroup(q, plane) <= 1e-9);
  }

  const Subgroup line = standard_grassmannian(1, 1);
  const PointCloud lcloud = sample_subgroup(line, identity(1), 500, 2.0, 2);
  CHECK(lcloud.meta.k_m == 1);
  for (const HPoint& q : lcloud.points) {
    CHECK(std::abs(q.horiz(1)) <= 1e-12);  // points of the form (x, 0, 0)
    CHECK(std::abs(q.vert) <= 1e-12);
  }
}

TEST_CASE("left-translated coset samples are the left translate") {
  const Subgroup plane = standard_grassmannian(1, 2);
  Eigen::Vector2d bh(0.4, -0.2);
  const HPoint base(bh, 0.7);
  const PointCloud at_base = sample_subgroup(plane, base, 300, 1.0, 5);
  const PointCloud at_e = sample_subgroup(plane, identity(1), 300, 1.0, 5);
  for (int i = 0; i < 300; ++i)
    CHECK(coord_residual(at_base.points[i], mul(base, at_e.points[i])) <= 1e-12);
  for (const HPoint& q : at_base.points)
    CHECK(dist_to_subgroup(mul(inv(base), q), plane) <= 1e-9);
}

TEST_CASE("generators are deterministic given the seed") {
  const Subgroup plane = standard_grassmannian(1, 2);
  const PointCloud a = sample_subgroup(plane, identity(1), 200, 1.0, 9);
  const PointCloud b = sample_subgroup(plane, identity(1), 200, 1.0, 9);
  for (int i = 0; i < 200; ++i)
    CHECK(coord_residual(a.points[i], b.points[i]) == 0.0);
  const PointCloud c = sample_subgroup(plane, identity(1), 200, 1.0, 10);
  double diff = 0.0;
  for (int i = 0; i < 200; ++i) diff += coord_residual(a.points[i], c.points[i]);
  CHECK(diff > 0.0);
}

TEST_CASE("intrinsic graphs") {
  const Subgroup w = standard_grassmannian(1, 2);
  const SplitPair pair = make_split_pair(w, complement(w), CEstOptions{0});

  // phi == e gives the subgroup itself.
  GraphMap trivial;
  trivial.family = GraphMap::Family::Constant;
  trivial.v0 = Eigen::VectorXd::Zero(1);
  const PointCloud on_w = sample_intrinsic_graph(pair, trivial, 1.0, 500, 21);
  for (const HPoint& q : on_w.points) CHECK(dist_to_subgroup(q, w) <= 1e-9);

  // Constant phi: pi_V of each point reproduces the graph value.
  GraphMap constant;
  constant.family = GraphMap::Family::Constant;
  constant.v0 = Eigen::VectorXd::Constant(1, 0.3);
  const PointCloud shifted = sample_intrinsic_graph(pair, constant, 1.0, 500, 22);
  const HPoint v0(pair.V.basis * constant.v0, 0.0);
  for (const HPoint& q : shifted.points) {
    const auto [qw, qv] = project_split(pair, q);
    CHECK(coord_residual(qv, v0) <= 1e-10);
  }

  // Small linear slope: the intrinsic cone criterion holds with alpha = 0.5:
  // no other graph point enters the cone X(p, V, 0.5).
  GraphMap linear;
  linear.family = GraphMap::Family::Linear;
  linear.slope = 0.1 * Eigen::MatrixXd::Identity(1, 1);
  const PointCloud graph = sample_intrinsic_graph(pair, linear, 1.0, 256, 23);
  Rng pick(3);
  int pairs_checked = 0;
  for (int t = 0; t < 1000; ++t) {
    const int i = pick.uniform_int(graph.size());
    const int j = pick.uniform_int(graph.size());
    if (i == j) continue;
    const HPoint rel = mul(inv(graph.points[i]), graph.points[j]);
    ++pairs_checked;
    CHECK(dist_to_subgroup(rel, pair.V) > 0.5 * hom_norm(rel));
  }
  CHECK(pairs_checked >= 900);

  GraphMap sine;
  sine.family = GraphMap::Family::Sine;
  sine.amplitude = 0.05;
  sine.frequency = 3.0;
  const PointCloud wavy = sample_intrinsic_graph(pair, sine, 1.0, 200, 24);
  for (const HPoint& q : wavy.points) {
    const auto [qw, qv] = project_split(pair, q);
    CHECK(hom_norm(qv) <= sine.amplitude + 1e-9);
  }
}

TEST_CASE("ifs fractal sampler") {
  // Single map fixed at the identity: every iterate stays at e.
  std::vector<IfsMap> fixed{{identity(1), 0.5}};
  const PointCloud still = sample_ifs_fractal(fixed, 8, 64, 1);
  for (const HPoint& q : still.points) CHECK(hom_norm(q) == 0.0);

  // Two x-translations: similarity dimension 1, segment-like attractor.
  std::vector<IfsMap> segment;
  for (double s : {1.0, -1.0}) {
    Eigen::Vector2d h(s, 0.0);
    segment.push_back({HPoint(h, 0.0), 0.5});
  }
  CHECK(similarity_dimension(segment) == doctest::Approx(1.0));
  const PointCloud seg = sample_ifs_fractal(segment, 12, 512, 2);
  const Subgroup line = standard_grassmannian(1, 1);
  for (const HPoint& q : seg.points) {
    CHECK(hom_norm(q) <= 2.0 + 1e-9);
    CHECK(dist_to_subgroup(q, line) <= 1e-9);
  }

  // Four symplectically paired translations: similarity dimension 2.
  std::vector<IfsMap> four;
  for (int axis : {0, 1})
    for (double s : {1.0, -1.0}) {
      Eigen::Vector2d h = Eigen::Vector2d::Zero();
      h(axis) = s;
      four.push_back({HPoint(h, 0.0), 0.5});
    }
  CHECK(similarity_dimension(four) == doctest::Approx(2.0));

  CHECK_THROWS_AS(sample_ifs_fractal({}, 4, 16, 0), InvalidInput);
  CHECK_THROWS_AS(sample_ifs_fractal({{identity(1), 1.5}}, 4, 16, 0), InvalidInput);
}

TEST_CASE("ball sampler fills the homogeneous ball") {
  const PointCloud ball = sample_ball(1, identity(1), 4000, 1.0, 31);
  CHECK(ball.meta.k_m == 4);
  double max_norm = 0.0;
  int vertical_heavy = 0;
  for (const HPoint& q : ball.points) {
    max_norm = std::max(max_norm, hom_norm(q));
    vertical_heavy += std::sqrt(std::abs(q.vert)) > q.horiz.norm();
  }
  CHECK(max_norm <= 1.0 + 1e-12);
  CHECK(max_norm > 0.97);
  CHECK(vertical_heavy > 400);  // both norm regimes are populated
}

TEST_CASE("four-map fractal has mass outside every plane cone at small radii") {
  std::vector<IfsMap> four;
  for (int axis : {0, 1})
    for (double s : {1.0, -1.0}) {
      Eigen::Vector2d h = Eigen::Vector2d::Zero();
      h(axis) = s;
      four.push_back({HPoint(h, 0.0), 0.5});
    }
  const PointCloud cloud = sample_ifs_fractal(four, 14, 8192, 3);
  const MetricIndex index(cloud);
  Rng pick(5);
  // Threshold frozen from a Monte-Carlo scan over the same grid (min 0.0305).
  for (int t = 0; t < 4; ++t) {
    const HPoint& p = cloud.points[pick.uniform_int(cloud.size())];
    for (int a = 0; a < 12; ++a) {
      const double th = a * M_PI / 12.0;
      Eigen::MatrixXd b(2, 1);
      b << std::sin(th), std::cos(th);
      const Subgroup plane = make_subgroup(SubgroupKind::Vertical, b, 1);
      for (double r : {0.3, 0.2})
        CHECK(normalized_out_of_cone_mass(cloud, index, p, plane, 0.5, r) > 0.02);
    }
  }
}
