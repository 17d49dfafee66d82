#include <doctest.h>

#include "hgeom/sampling.hpp"
#include "hgeom/tangent.hpp"

using namespace hgeom;

namespace {

FitOptions base_options() {
  FitOptions opts;
  opts.radii = {0.4, 0.2, 0.1};
  opts.budget = 300;
  opts.seed = 5;
  return opts;
}

}  // namespace

TEST_CASE("plane coset recovery in H^1") {
  const Subgroup plane = standard_grassmannian(1, 2);
  const PointCloud cloud = sample_subgroup(plane, identity(1), 8000, 1.0, 41);
  const MetricIndex index(cloud);
  FitOptions opts = base_options();
  opts.aperture = 1e-3;
  const TangentReport rep = fit_tangent(cloud, index, cloud.points[100], 2, opts);
  CHECK(rep.converged);
  CHECK(rep.scores.back().normalized_mass <= 1e-9);
  CHECK(rho_metric(rep.best, plane) <= 0.05);
}

TEST_CASE("line coset recovery in H^1") {
  const Subgroup line = standard_grassmannian(1, 1);
  const PointCloud cloud = sample_subgroup(line, identity(1), 8000, 1.0, 43);
  const MetricIndex index(cloud);
  FitOptions opts = base_options();
  opts.aperture = 0.04;
  const TangentReport rep = fit_tangent(cloud, index, cloud.points[100], 1, opts);
  CHECK(rep.converged);
  CHECK(rho_metric(rep.best, line) <= 0.05);
}

TEST_CASE("uniform ball does not converge") {
  const PointCloud cloud = sample_ball(1, identity(1), 8000, 1.0, 47);
  const MetricIndex index(cloud);
  FitOptions opts = base_options();
  opts.aperture = 1e-3;
  opts.radii = {0.6, 0.45, 0.3};
  const TangentReport rep = fit_tangent(cloud, index, cloud.points[100], 2, opts);
  CHECK_FALSE(rep.converged);
  CHECK(rep.scores.back().normalized_mass > 0.05);
}

TEST_CASE("score is exactly left-invariant") {
  const Subgroup plane = standard_grassmannian(1, 2);
  const PointCloud cloud = sample_subgroup(plane, identity(1), 3000, 1.0, 53);
  const MetricIndex index(cloud);
  Rng rng(7);
  const Subgroup candidate = random_grassmannian(1, 2, rng);
  const HPoint p = cloud.points[42];

  Eigen::Vector2d gh(0.8, -0.3);
  const HPoint g(gh, 1.1);
  PointCloud moved = cloud;
  for (HPoint& q : moved.points) q = mul(g, q);
  const MetricIndex moved_index(moved);

  const std::vector<double> radii{0.4, 0.2, 0.1};
  const double here = tangent_score(cloud, index, p, candidate, 0.3, radii);
  const double there =
      tangent_score(moved, moved_index, mul(g, p), candidate, 0.3, radii);
  CHECK(std::abs(here - there) <= 1e-9 * std::max(1.0, here));
}

TEST_CASE("aperture monotonicity of the score") {
  const PointCloud cloud = sample_ball(1, identity(1), 3000, 1.0, 59);
  const MetricIndex index(cloud);
  Rng rng(11);
  const Subgroup candidate = random_grassmannian(1, 2, rng);
  const std::vector<double> radii{0.5, 0.3};
  double prev = std::numeric_limits<double>::infinity();
  for (double s : {0.1, 0.3, 0.6, 0.9}) {
    const double score =
        tangent_score(cloud, index, cloud.points[0], candidate, s, radii);
    CHECK(score <= prev + 1e-12);
    prev = score;
  }
}

TEST_CASE("coset clouds give exactly zero score at the truth") {
  const Subgroup plane = standard_grassmannian(1, 2);
  const PointCloud cloud = sample_subgroup(plane, identity(1), 4000, 1.0, 61);
  const MetricIndex index(cloud);
  const std::vector<double> radii{0.4, 0.2, 0.1};
  const double score =
      tangent_score(cloud, index, cloud.points[9], plane, 0.3, radii);
  CHECK(score <= 1e-12);
}

TEST_CASE("fit_tangent input validation") {
  const Subgroup plane = standard_grassmannian(1, 2);
  const PointCloud cloud = sample_subgroup(plane, identity(1), 100, 1.0, 67);
  const MetricIndex index(cloud);
  FitOptions opts = base_options();
  opts.aperture = 0.2;

  FitOptions empty = opts;
  empty.radii = {};
  CHECK_THROWS_AS(fit_tangent(cloud, index, cloud.points[0], 2, empty),
                  InvalidInput);

  FitOptions increasing = opts;
  increasing.radii = {0.1, 0.2};
  CHECK_THROWS_AS(fit_tangent(cloud, index, cloud.points[0], 2, increasing),
                  InvalidInput);

  CHECK_THROWS_AS(fit_tangent(cloud, index, cloud.points[0], 9, opts), InvalidInput);

  // Insufficient data: a far-away query point sees an empty largest ball.
  CHECK_THROWS_AS(
      fit_tangent(cloud, index, HPoint(Eigen::Vector2d(30, 0), 0.0), 2, opts),
      InsufficientData);
}

TEST_CASE("classify_cloud is deterministic and propagates per-point failures") {
  const Subgroup plane = standard_grassmannian(1, 2);
  PointCloud cloud = sample_subgroup(plane, identity(1), 2000, 1.0, 71);
  // Plant one isolated point; its fit must fail without aborting the batch.
  cloud.points[0] = HPoint(Eigen::Vector2d(40, 0), 0.0);
  FitOptions opts = base_options();
  opts.aperture = 1e-3;
  opts.budget = 120;

  const auto a = classify_cloud(cloud, 2, opts, 30, 77);
  const auto b = classify_cloud(cloud, 2, opts, 30, 77);
  REQUIRE(a.size() == 30);
  int failed = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].ok == b[i].ok);
    CHECK(a[i].converged == b[i].converged);
    if (a[i].ok) {
      CHECK(coord_residual(a[i].point, b[i].point) == 0.0);
      CHECK((a[i].best.basis - b[i].best.basis).norm() == 0.0);
    } else {
      ++failed;
      CHECK(!a[i].error.empty());
    }
  }
  // The planted point is drawn into the sample with these seeds or not;
  // either way the batch finishes and reports consistently.
  CHECK(failed <= 1);

  // Threaded run gives identical results.
  const auto c = classify_cloud(cloud, 2, opts, 30, 77, 2);
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].converged == c[i].converged);
    if (a[i].ok)
      CHECK((a[i].best.basis - c[i].best.basis).norm() == 0.0);
  }

  CHECK_THROWS_AS(classify_cloud(cloud, 2, opts, 0, 1), InvalidInput);
  CHECK_THROWS_AS(classify_cloud(cloud, 2, opts, 5000, 1), InvalidInput);
}

TEST_CASE("vertical 3-subgroup recovery in H^2") {
  Rng rng(12);
  const Subgroup truth = random_grassmannian(2, 3, rng);
  const PointCloud cloud = sample_subgroup(truth, identity(2), 20000, 1.0, 71);
  const MetricIndex index(cloud);
  FitOptions opts;
  opts.aperture = 0.02;
  opts.radii = {0.5, 0.35, 0.25};
  opts.budget = 2500;  // the H^2 Grassmannian needs a larger search than H^1
  Rng pick(9);
  for (int i = 0; i < 4; ++i) {
    const HPoint& p = cloud.points[pick.uniform_int(cloud.size())];
    opts.seed = 100 + i;
    const TangentReport rep = fit_tangent(cloud, index, p, 3, opts);
    CHECK(rep.converged);
    CHECK(rho_metric(rep.best, truth) <= 0.05);
  }
}
