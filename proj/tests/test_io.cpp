#include <doctest.h>

#include <cstdio>

#include "hgeom/checks.hpp"
#include "hgeom/io.hpp"
#include "hgeom/sampling.hpp"

using namespace hgeom;

TEST_CASE("point serialization is [p1..p2n, t]") {
  Eigen::Vector2d h(1.5, -2.0);
  const HPoint p(h, 0.25);
  const nlohmann::json j = to_json(p);
  CHECK(j.dump() == "[1.5,-2.0,0.25]");
  const HPoint q = hpoint_from_json(j);
  CHECK(coord_residual(p, q) == 0.0);
  CHECK_THROWS_AS(hpoint_from_json(nlohmann::json::parse("[1,2]")), InvalidInput);
}

TEST_CASE("subgroup serialization round-trips the span") {
  const Subgroup s = standard_grassmannian(2, 3);
  const Subgroup back = subgroup_from_json(to_json(s));
  CHECK(same_span(s, back));
  CHECK(back.kind == SubgroupKind::Vertical);

  CHECK_THROWS_AS(
      subgroup_from_json(nlohmann::json{{"kind", "diagonal"},
                                        {"n", 1},
                                        {"basis", nlohmann::json::array()}}),
      InvalidInput);
}

TEST_CASE("cloud serialization round-trips and validates") {
  const Subgroup plane = standard_grassmannian(1, 2);
  const PointCloud cloud = sample_subgroup(plane, identity(1), 100, 1.0, 3);
  nlohmann::json j = to_json(cloud);
  CHECK(j.at("k_m") == 3);
  CHECK(j.contains("ground_truth"));
  const PointCloud back = cloud_from_json(j);
  CHECK(back.size() == cloud.size());
  for (int i = 0; i < back.size(); ++i)
    CHECK(coord_residual(back.points[i], cloud.points[i]) == 0.0);
  CHECK(back.meta.generator == "subgroup");

  j["total_mass"] = 17.0;
  CHECK_THROWS_AS(cloud_from_json(j), InvalidInput);
}

TEST_CASE("region serialization covers all variants") {
  const Subgroup plane = standard_grassmannian(1, 2);
  const Subgroup line = standard_grassmannian(1, 1);
  const std::vector<Region> regions{
      make_cone(identity(1), plane, 0.5),
      make_truncated_cone(identity(1), line, 0.3, 2.0),
      make_cylinder(line, 0.25),
      make_paraboloid(identity(1), plane, 1.5, 0.5),
  };
  Rng rng(5);
  for (const Region& r : regions) {
    const Region back = region_from_json(to_json(r));
    CHECK(back.index() == r.index());
    for (int t = 0; t < 50; ++t) {
      Eigen::Vector2d h(rng.uniform(-2, 2), rng.uniform(-2, 2));
      const HPoint p(h, rng.uniform(-4, 4));
      CHECK(region_contains(r, p) == region_contains(back, p));
    }
  }
  CHECK_THROWS_AS(region_from_json(nlohmann::json{{"type", "wedge"}}), InvalidInput);
}

TEST_CASE("check reports serialize their full record") {
  const Subgroup w = standard_grassmannian(1, 2);
  const SplitPair pair = make_split_pair(w, complement(w), CEstOptions{0});
  const CheckReport rep = check_projection_identities(pair, 100, 9);
  const nlohmann::json j = to_json(rep);
  CHECK(j.at("check_name") == "projection_identities");
  CHECK(j.at("trials") == 100);
  CHECK(j.at("violations") == 0);
  CHECK(j.at("tolerance").get<double>() == rep.tolerance);
}

TEST_CASE("density csv rows") {
  DensityReport r;
  r.point = identity(1);
  r.radii = {0.5, 0.25};
  r.ball_mass = {1.0, 0.125};
  const std::string csv = density_csv({r}, 3);
  CHECK(csv.find("point_index,radius,ball_mass,normalized") == 0);
  CHECK(csv.find("0,0.5,1,8") != std::string::npos);
}

TEST_CASE("format17 round-trips doubles") {
  for (double x : {1.0 / 3.0, 2.0e-9, -123456.789, 3.5e200}) {
    const std::string s = format17(x);
    CHECK(std::stod(s) == x);
  }
}

TEST_CASE("file io") {
  const std::string path = "/tmp/hgeom_io_test.json";
  write_json_file(path, nlohmann::json{{"a", 1}});
  CHECK(read_json_file(path).at("a") == 1);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_json_file("/nonexistent/nope.json"), InvalidInput);
}
