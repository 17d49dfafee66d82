// hgeom: command-line front end for the Heisenberg geometry toolkit.
// Subcommands: generate, dist, contains, density, tangent, verify, report.
// Exit codes: 0 success, 1 check violations, 2 usage/input errors.

#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "hgeom/checks.hpp"
#include "hgeom/io.hpp"
#include "hgeom/sampling.hpp"
#include "hgeom/tangent.hpp"

namespace {

using namespace hgeom;

// JSON config files: {"flag": value, "subcommand.flag": value}. Values given
// on the command line win.
class ConfigJson : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    return "{}\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    input >> j;
    if (!j.is_object()) throw CLI::ConfigError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : j.items()) {
      CLI::ConfigItem item;
      std::vector<std::string> parts = CLI::detail::split(key, '.');
      item.name = parts.back();
      parts.pop_back();
      item.parents = std::move(parts);
      if (value.is_array()) {
        for (const auto& entry : value)
          item.inputs.push_back(entry.is_string() ? entry.get<std::string>()
                                                  : entry.dump());
      } else {
        item.inputs.push_back(value.is_string() ? value.get<std::string>()
                                                : value.dump());
      }
      items.push_back(std::move(item));
    }
    return items;
  }
};

std::vector<double> parse_radii(const std::string& text) {
  std::vector<double> radii;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) radii.push_back(std::stod(tok));
  return radii;
}

HPoint parse_point(const std::string& text) {
  return hpoint_from_json(nlohmann::json::parse(text));
}

Subgroup subgroup_from_params(const nlohmann::json& params, const char* key, int n,
                              int k) {
  if (params.contains(key)) return subgroup_from_json(params.at(key));
  return standard_grassmannian(n, k);
}

struct GenerateArgs {
  std::string type = "subgroup";
  std::string kind = "vertical";
  std::string out;
  std::string base = "";
  std::string maps_file;
  std::string family = "constant";
  std::string v0 = "";
  int n = 1;
  int k = 0;
  int count = 10000;
  int depth = 12;
  std::uint64_t seed = 0;
  double box_radius = 1.0;
  double slope = 0.1;
  double amplitude = 0.1;
  double frequency = 1.0;
  bool random_subgroup = false;
};

int run_generate(const GenerateArgs& a) {
  const HPoint base = a.base.empty() ? identity(a.n) : parse_point(a.base);
  PointCloud cloud;
  if (a.type == "subgroup") {
    const bool vertical = a.kind == "vertical";
    const int k = a.k > 0 ? a.k : (vertical ? a.n + 1 : 1);
    Subgroup s;
    if (a.random_subgroup) {
      Rng rng(a.seed ^ 0x5b6dULL);
      s = random_grassmannian(a.n, k, rng);
    } else {
      s = standard_grassmannian(a.n, k);
    }
    if ((s.kind == SubgroupKind::Vertical) != vertical)
      throw InvalidInput("generate: k is inconsistent with --kind");
    cloud = sample_subgroup(s, base, a.count, a.box_radius, a.seed);
  } else if (a.type == "graph") {
    const int k = a.k > 0 ? a.k : a.n + 1;
    const Subgroup w = standard_grassmannian(a.n, k);
    const SplitPair pair = make_split_pair(w, complement(w), CEstOptions{0});
    GraphMap map;
    if (a.family == "constant") {
      map.family = GraphMap::Family::Constant;
      map.v0 = a.v0.empty() ? Eigen::VectorXd::Zero(pair.V.linear_dim())
                            : vector_from_json(nlohmann::json::parse(a.v0));
    } else if (a.family == "linear") {
      map.family = GraphMap::Family::Linear;
      map.slope = a.slope * Eigen::MatrixXd::Identity(pair.V.linear_dim(),
                                                      pair.W.linear_dim());
    } else if (a.family == "sine") {
      map.family = GraphMap::Family::Sine;
      map.amplitude = a.amplitude;
      map.frequency = a.frequency;
    } else {
      throw InvalidInput("generate: unknown graph family '" + a.family + "'");
    }
    cloud = sample_intrinsic_graph(pair, map, a.box_radius, a.count, a.seed);
  } else if (a.type == "ifs") {
    std::vector<IfsMap> maps;
    if (!a.maps_file.empty()) {
      for (const auto& mj : read_json_file(a.maps_file))
        maps.push_back({hpoint_from_json(mj.at("shift")), mj.at("ratio").get<double>()});
    } else {
      // Four ratio-1/2 contractions along symplectically paired directions.
      for (int axis = 0; axis < 2 * a.n; ++axis) {
        for (const double sign : {1.0, -1.0}) {
          Eigen::VectorXd h = Eigen::VectorXd::Zero(2 * a.n);
          h(axis % (2 * a.n)) = sign;
          maps.push_back({HPoint(h, 0.0), 0.5});
          if (int(maps.size()) == 4) break;
        }
        if (int(maps.size()) == 4) break;
      }
    }
    cloud = sample_ifs_fractal(maps, a.depth, a.count, a.seed);
  } else if (a.type == "ball") {
    cloud = sample_ball(a.n, base, a.count, a.box_radius, a.seed);
  } else {
    throw InvalidInput("generate: unknown type '" + a.type + "'");
  }

  if (a.out.empty()) throw InvalidInput("generate: --out is required");
  write_json_file(a.out, to_json(cloud));
  std::cout << "wrote " << a.out << " (" << cloud.size() << " points, generator "
            << cloud.meta.generator << ", seed " << cloud.meta.seed << ")\n";
  return 0;
}

int run_verify(const std::string& check, const std::string& params_text, long trials,
               std::uint64_t seed, const std::string& out) {
  const nlohmann::json params =
      params_text.empty() ? nlohmann::json::object() : nlohmann::json::parse(params_text);
  const int n = params.value("n", 1);

  CheckReport report;
  if (check == "projection_identities" || check == "projection_sandwich") {
    SplitPair pair = [&] {
      if (params.contains("W") && params.contains("V"))
        return make_split_pair(subgroup_from_json(params.at("W")),
                               subgroup_from_json(params.at("V")));
      const Subgroup w = standard_grassmannian(n, params.value("k", n + 1));
      return make_split_pair(w, complement(w));
    }();
    report = check == "projection_identities"
                 ? check_projection_identities(pair, trials, seed)
                 : check_projection_sandwich(pair, trials, seed);
  } else if (check == "rho_duality") {
    report = check_rho_duality(n, params.value("k", 1),
                               int(params.value("pairs", trials)), seed);
  } else if (check == "cone_inversion") {
    const Subgroup v = subgroup_from_params(params, "V", n, params.value("k", n + 1));
    report = check_cone_inversion(v, params.value("alpha", 1.0),
                                  params.value("beta", 1.0), params.value("s", 1.0),
                                  params.value("M", 1.0), trials, seed);
  } else if (check == "two_cone_covering") {
    if (!params.contains("cloud"))
      throw InvalidInput("two_cone_covering: params must name a cloud file");
    const PointCloud cloud = cloud_from_json(read_json_file(params.at("cloud")));
    const Subgroup v = subgroup_from_params(params, "V", n, params.value("k", n + 1));
    const TwoConeConfig config = make_two_cone_config(
        params.value("s", 0.5), params.value("rho", 1.0), v, seed);
    report = check_two_cone_covering(config, cloud, trials);
  } else if (check == "cone_separation") {
    const int k = params.value("k", n + 1);
    const Subgroup v = subgroup_from_params(params, "V", n, k);
    Subgroup t;
    if (params.contains("T")) {
      t = subgroup_from_json(params.at("T"));
    } else {
      // Default partner: a small seeded perturbation of V.
      Rng rng(seed ^ 0x7e57);
      Eigen::MatrixXd u = orthocomplement_basis(v.basis, n);
      for (int c = 0; c < u.cols(); ++c)
        u.col(c) += 0.05 * rng.normal_vector(2 * n);
      t = make_subgroup(SubgroupKind::Vertical,
                        orthocomplement_basis(symplectic_orthonormalize(u), n), n);
    }
    double s0 = params.value("s0", 0.0);
    if (s0 <= 0.0) {
      const SplitPair pair = make_split_pair(v, complement(v));
      s0 = pair.c_est / 4.0;
    }
    report = check_cone_separation(v, t, s0, trials, seed);
  } else if (check == "paraboloid_in_cone") {
    const Subgroup v = subgroup_from_params(params, "V", n, params.value("k", n + 1));
    report = check_paraboloid_in_cone(v, params.value("lambda", 1.0),
                                      params.value("alpha", 1.0),
                                      params.value("s", 0.5), trials, seed);
  } else {
    throw InvalidInput("verify: unknown check '" + check + "'");
  }

  if (!out.empty()) write_json_file(out, to_json(report));
  std::cout << (report.passed() ? "PASS" : "FAIL") << " " << report.check_name
            << ": violations " << report.violations << "/" << report.trials
            << ", skipped " << report.skipped << ", worst margin "
            << format17(report.worst_margin) << "\n";
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hgeom: computational geometry of Heisenberg groups"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<ConfigJson>());
  app.set_config("--config", "", "JSON config file supplying any flag");

  // generate
  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "sample a point cloud");
  generate->add_option("--type", gen.type, "subgroup|graph|ifs|ball");
  generate->add_option("--kind", gen.kind, "horizontal|vertical (subgroup type)");
  generate->add_option("--n", gen.n, "ambient Heisenberg index n");
  generate->add_option("--k", gen.k, "topological dimension (0 = default for kind)");
  generate->add_option("--count", gen.count, "number of sample points");
  generate->add_option("--depth", gen.depth, "IFS composition depth");
  generate->add_option("--seed", gen.seed)->envname("HGEOM_SEED");
  generate->add_option("--box-radius,--radius", gen.box_radius,
                       "homogeneous ball radius");
  generate->add_option("--base", gen.base, "base point JSON, default identity");
  generate->add_option("--maps", gen.maps_file, "IFS maps JSON file");
  generate->add_option("--family", gen.family, "graph family: constant|linear|sine");
  generate->add_option("--v0", gen.v0, "constant graph value (V' coefficients)");
  generate->add_option("--slope", gen.slope, "linear graph slope");
  generate->add_option("--amplitude", gen.amplitude, "sine graph sup-norm");
  generate->add_option("--frequency", gen.frequency, "sine graph frequency");
  generate->add_flag("--random-subgroup", gen.random_subgroup,
                     "draw the subgroup from the seed instead of the standard one");
  generate->add_option("--out", gen.out, "output cloud JSON")->required();

  // dist
  std::string dist_p, dist_subgroup;
  CLI::App* dist_cmd = app.add_subcommand("dist", "distance from a point to a subgroup");
  dist_cmd->add_option("--p", dist_p, "point JSON [p1..p2n,t]")->required();
  dist_cmd->add_option("--subgroup", dist_subgroup, "subgroup JSON file")->required();

  // contains
  std::string contains_region, contains_p;
  CLI::App* contains_cmd = app.add_subcommand("contains", "region membership test");
  contains_cmd->add_option("--region", contains_region, "region JSON file")->required();
  contains_cmd->add_option("--p", contains_p, "point JSON")->required();

  // density
  std::string density_cloud, density_radii = "0.4,0.3,0.2", density_out;
  int density_samples = 50, density_km = 0;
  std::uint64_t density_seed = 0;
  CLI::App* density_cmd = app.add_subcommand("density", "finite-scale density sweep");
  density_cmd->add_option("--cloud", density_cloud)->required();
  density_cmd->add_option("--samples", density_samples, "query points drawn from the cloud");
  density_cmd->add_option("--radii", density_radii, "decreasing radius schedule");
  density_cmd->add_option("--k-m", density_km, "metric dimension (0 = cloud default)");
  density_cmd->add_option("--seed", density_seed)->envname("HGEOM_SEED");
  density_cmd->add_option("--out", density_out, "CSV output file");

  // tangent
  std::string tangent_cloud, tangent_radii = "0.4,0.2,0.1", tangent_out;
  int tangent_k = 2, tangent_budget = 64, tangent_samples = 20, tangent_threads = 1;
  double tangent_aperture = 0.2;
  std::uint64_t tangent_seed = 0;
  CLI::App* tangent_cmd = app.add_subcommand("tangent", "fit approximate tangent subgroups");
  tangent_cmd->add_option("--cloud", tangent_cloud)->required();
  tangent_cmd->add_option("--k", tangent_k, "subgroup dimension to fit");
  tangent_cmd->add_option("--aperture", tangent_aperture, "cone aperture s");
  tangent_cmd->add_option("--radii", tangent_radii, "decreasing radius schedule");
  tangent_cmd->add_option("--budget", tangent_budget, "candidate evaluations per point");
  tangent_cmd->add_option("--samples", tangent_samples, "query points");
  tangent_cmd->add_option("--seed", tangent_seed)->envname("HGEOM_SEED");
  tangent_cmd->add_option("--threads", tangent_threads, "worker cap");
  tangent_cmd->add_option("--out", tangent_out, "output report JSON");

  // verify
  std::string verify_check, verify_params, verify_out;
  long verify_trials = 10000;
  std::uint64_t verify_seed = 0;
  CLI::App* verify_cmd = app.add_subcommand("verify", "randomized lemma verification");
  verify_cmd
      ->add_option("--check", verify_check,
                   "projection_identities|projection_sandwich|rho_duality|"
                   "cone_inversion|two_cone_covering|cone_separation|paraboloid_in_cone")
      ->required();
  verify_cmd->add_option("--params", verify_params, "check parameters, JSON");
  verify_cmd->add_option("--trials", verify_trials);
  verify_cmd->add_option("--seed", verify_seed)->envname("HGEOM_SEED");
  verify_cmd->add_option("--out", verify_out, "report JSON file");

  // report
  std::vector<std::string> report_in;
  std::string report_out;
  CLI::App* report_cmd = app.add_subcommand("report", "aggregate check reports");
  report_cmd->add_option("--in", report_in, "check report JSON files")->required();
  report_cmd->add_option("--out", report_out, "CSV output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help exits 0, usage errors exit 2
  }

  try {
    if (*generate) return run_generate(gen);

    if (*dist_cmd) {
      const Subgroup s = subgroup_from_json(read_json_file(dist_subgroup));
      std::cout << format17(dist_to_subgroup(parse_point(dist_p), s)) << "\n";
      return 0;
    }

    if (*contains_cmd) {
      const Region region = region_from_json(read_json_file(contains_region));
      std::cout << (region_contains(region, parse_point(contains_p)) ? "true" : "false")
                << "\n";
      return 0;
    }

    if (*density_cmd) {
      const PointCloud cloud = cloud_from_json(read_json_file(density_cloud));
      const MetricIndex index(cloud);
      const std::vector<double> radii = parse_radii(density_radii);
      const int km = density_km > 0 ? density_km : cloud.meta.k_m;
      Rng rng(density_seed);
      std::vector<DensityReport> reports;
      const int samples = std::min(density_samples, cloud.size());
      for (int i = 0; i < samples; ++i)
        reports.push_back(density_at(cloud, index,
                                     cloud.points[rng.uniform_int(cloud.size())], km,
                                     radii));
      const std::string csv = density_csv(reports, km);
      if (!density_out.empty())
        write_text_file(density_out, csv);
      else
        std::cout << csv;
      std::cout << "density sweep: " << reports.size() << " query points, k_m " << km
                << "\n";
      return 0;
    }

    if (*tangent_cmd) {
      const PointCloud cloud = cloud_from_json(read_json_file(tangent_cloud));
      FitOptions opts;
      opts.aperture = tangent_aperture;
      opts.radii = parse_radii(tangent_radii);
      opts.budget = tangent_budget;
      const std::vector<TangentReport> reports = classify_cloud(
          cloud, tangent_k, opts, std::min(tangent_samples, cloud.size()),
          tangent_seed, tangent_threads);
      nlohmann::json j = nlohmann::json::array();
      int converged = 0;
      for (const TangentReport& r : reports) {
        j.push_back(to_json(r));
        converged += r.ok && r.converged;
      }
      if (!tangent_out.empty()) write_json_file(tangent_out, j);
      std::cout << "tangent: " << converged << "/" << reports.size()
                << " query points converged\n";
      return 0;
    }

    if (*verify_cmd)
      return run_verify(verify_check, verify_params, verify_trials, verify_seed,
                        verify_out);

    if (*report_cmd) {
      std::ostringstream csv;
      csv << "check_name,trials,violations,skipped,worst_margin,tolerance,seed\n";
      long total_violations = 0;
      for (const std::string& path : report_in) {
        const nlohmann::json j = read_json_file(path);
        const nlohmann::json& margin = j.at("worst_margin");
        csv << j.at("check_name").get<std::string>() << ',' << j.at("trials") << ','
            << j.at("violations") << ',' << j.at("skipped") << ','
            << (margin.is_null() ? "n/a" : format17(margin.get<double>())) << ','
            << format17(j.at("tolerance").get<double>()) << ',' << j.at("seed") << '\n';
        total_violations += j.at("violations").get<long>();
        std::cout << (j.at("violations").get<long>() == 0 ? "PASS " : "FAIL ")
                  << j.at("check_name").get<std::string>() << " (" << path << ")\n";
      }
      if (!report_out.empty()) write_text_file(report_out, csv.str());
      std::cout << (total_violations == 0 ? "all checks passed"
                                          : "violations present")
                << "\n";
      return total_violations == 0 ? 0 : 1;
    }
  } catch (const hgeom::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
