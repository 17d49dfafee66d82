#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "hgeom/io.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + HGEOM_CLI_PATH + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), int(buf.size()), pipe)) result.output += buf.data();
  const int status = pclose(pipe);
  result.exit_code = WEXITSTATUS(status);
  return result;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli: generate is deterministic for fixed flags and seed") {
  const RunResult a = run_cli(
      "generate --type subgroup --kind vertical --n 1 --count 500 --seed 1 "
      "--out /tmp/hgeom_plane_a.json");
  CHECK(a.exit_code == 0);
  const RunResult b = run_cli(
      "generate --type subgroup --kind vertical --n 1 --count 500 --seed 1 "
      "--out /tmp/hgeom_plane_b.json");
  CHECK(b.exit_code == 0);
  CHECK(slurp("/tmp/hgeom_plane_a.json") == slurp("/tmp/hgeom_plane_b.json"));
  CHECK(slurp("/tmp/hgeom_plane_a.json").find("\"generator\"") != std::string::npos);
}

TEST_CASE("cli: dist prints the closed-form vertical distance") {
  using namespace hgeom;
  write_json_file("/tmp/hgeom_vplane.json", to_json(standard_grassmannian(1, 2)));
  const RunResult r =
      run_cli("dist --p \"[1,0,0]\" --subgroup /tmp/hgeom_vplane.json");
  CHECK(r.exit_code == 0);
  CHECK(std::stod(r.output) == doctest::Approx(1.0));
}

TEST_CASE("cli: contains") {
  using namespace hgeom;
  const Region cone = make_cone(identity(1), standard_grassmannian(1, 1), 0.5);
  write_json_file("/tmp/hgeom_cone.json", to_json(cone));
  CHECK(run_cli("contains --region /tmp/hgeom_cone.json --p \"[1,0,0]\"").output ==
        "true\n");
  CHECK(run_cli("contains --region /tmp/hgeom_cone.json --p \"[0,0,1]\"").output ==
        "false\n");
}

TEST_CASE("cli: verify emits a report and the exit-code contract") {
  const RunResult ok = run_cli(
      "verify --check paraboloid_in_cone --params "
      "'{\"n\":1,\"k\":2,\"lambda\":1,\"alpha\":1,\"s\":0.5}' --trials 500 "
      "--seed 7 --out /tmp/hgeom_rep1.json");
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("PASS") != std::string::npos);

  const RunResult ok2 = run_cli(
      "verify --check projection_identities --params '{\"n\":1,\"k\":2}' "
      "--trials 500 --seed 3 --out /tmp/hgeom_rep2.json");
  CHECK(ok2.exit_code == 0);

  const RunResult agg = run_cli(
      "report --in /tmp/hgeom_rep1.json /tmp/hgeom_rep2.json --out "
      "/tmp/hgeom_reports.csv");
  CHECK(agg.exit_code == 0);
  CHECK(agg.output.find("all checks passed") != std::string::npos);
  const std::string csv = slurp("/tmp/hgeom_reports.csv");
  CHECK(csv.find("check_name,trials,violations") == 0);
  CHECK(csv.find("paraboloid_in_cone") != std::string::npos);
}

TEST_CASE("cli: verify runs cloud-based and optimizer-based checks") {
  // A horizontal-line coset cloud feeds the two-cone covering check.
  const RunResult gen = run_cli(
      "generate --type subgroup --kind horizontal --n 1 --count 1500 --seed 21 "
      "--out /tmp/hgeom_linecloud.json");
  REQUIRE(gen.exit_code == 0);
  const RunResult twocone = run_cli(
      "verify --check two_cone_covering --params "
      "'{\"n\":1,\"k\":2,\"s\":0.5,\"rho\":1.2,\"cloud\":\"/tmp/hgeom_linecloud.json\"}' "
      "--trials 40 --seed 5");
  CHECK(twocone.exit_code == 0);
  CHECK(twocone.output.find("PASS two_cone_covering") != std::string::npos);

  const RunResult duality = run_cli(
      "verify --check rho_duality --params '{\"n\":1,\"k\":1,\"pairs\":5}' --seed 2");
  CHECK(duality.exit_code == 0);

  const RunResult separation = run_cli(
      "verify --check cone_separation --params '{\"n\":1,\"k\":2}' --trials 800 "
      "--seed 9");
  CHECK(separation.exit_code == 0);
}

TEST_CASE("cli: usage errors exit 2") {
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("generate --type subgroup").exit_code == 2);  // missing --out
  CHECK(run_cli("verify --check bogus --out /tmp/x.json").exit_code == 2);
  CHECK(run_cli("dist --p \"[1,0,0]\" --subgroup /nonexistent.json").exit_code == 2);
}

TEST_CASE("cli: HGEOM_SEED is the default-seed fallback") {
  const RunResult env_run = run_cli(
      "generate --type subgroup --kind vertical --n 1 --count 200 --out "
      "/tmp/hgeom_env_a.json",
      "HGEOM_SEED=99");
  CHECK(env_run.exit_code == 0);
  const RunResult flag_run = run_cli(
      "generate --type subgroup --kind vertical --n 1 --count 200 --seed 99 "
      "--out /tmp/hgeom_env_b.json");
  CHECK(flag_run.exit_code == 0);
  CHECK(slurp("/tmp/hgeom_env_a.json") == slurp("/tmp/hgeom_env_b.json"));

  // Command line overrides the environment.
  const RunResult override_run = run_cli(
      "generate --type subgroup --kind vertical --n 1 --count 200 --seed 5 "
      "--out /tmp/hgeom_env_c.json",
      "HGEOM_SEED=99");
  CHECK(override_run.exit_code == 0);
  CHECK(slurp("/tmp/hgeom_env_c.json") != slurp("/tmp/hgeom_env_a.json"));
}

TEST_CASE("cli: JSON config file supplies flags, command line wins") {
  using nlohmann::json;
  hgeom::write_json_file("/tmp/hgeom_cfg.json",
                         json{{"generate.count", 300},
                              {"generate.seed", 4},
                              {"generate.type", "subgroup"},
                              {"generate.kind", "vertical"},
                              {"generate.n", 1},
                              {"generate.out", "/tmp/hgeom_cfg_a.json"}});
  const RunResult from_cfg = run_cli("--config /tmp/hgeom_cfg.json generate");
  CHECK(from_cfg.exit_code == 0);
  CHECK(from_cfg.output.find("300 points") != std::string::npos);

  const RunResult overridden = run_cli(
      "--config /tmp/hgeom_cfg.json generate --count 120 --out /tmp/hgeom_cfg_b.json");
  CHECK(overridden.exit_code == 0);
  CHECK(overridden.output.find("120 points") != std::string::npos);
}

TEST_CASE("cli: density and tangent subcommands run end to end") {
  const RunResult gen = run_cli(
      "generate --type subgroup --kind vertical --n 1 --count 3000 --seed 11 "
      "--out /tmp/hgeom_cloud.json");
  REQUIRE(gen.exit_code == 0);

  const RunResult density = run_cli(
      "density --cloud /tmp/hgeom_cloud.json --samples 5 --radii 0.4,0.3,0.2 "
      "--seed 2 --out /tmp/hgeom_density.csv");
  CHECK(density.exit_code == 0);
  CHECK(slurp("/tmp/hgeom_density.csv").find("point_index") == 0);

  const RunResult tangent = run_cli(
      "tangent --cloud /tmp/hgeom_cloud.json --k 2 --aperture 0.001 "
      "--radii 0.4,0.2,0.1 --budget 150 --samples 4 --seed 3 "
      "--out /tmp/hgeom_tangent.json");
  CHECK(tangent.exit_code == 0);
  CHECK(tangent.output.find("4/4") != std::string::npos);
  const auto reports = hgeom::read_json_file("/tmp/hgeom_tangent.json");
  CHECK(reports.size() == 4);
  CHECK(reports[0].contains("best_subgroup"));
}
