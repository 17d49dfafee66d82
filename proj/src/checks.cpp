#include "hgeom/checks.hpp"

#include <algorithm>
#include <cmath>

#include "hgeom/io.hpp"
#include "hgeom/region.hpp"
#include "hgeom/sampling.hpp"

namespace hgeom {

namespace {

constexpr double kExactTol = 1e-10;   // identity checks
constexpr double kNumericTol = 1e-9;  // solver-mediated inequality checks

HPoint random_point(int n, double scale, Rng& rng) {
  Eigen::VectorXd h(2 * n);
  for (int i = 0; i < 2 * n; ++i) h(i) = rng.uniform(-scale, scale);
  return HPoint(std::move(h), rng.uniform(-scale * scale, scale * scale));
}

}  // namespace

nlohmann::json to_json(const CheckReport& report) {
  nlohmann::json j{{"check_name", report.check_name},
                   {"trials", report.trials},
                   {"violations", report.violations},
                   {"skipped", report.skipped},
                   {"tolerance", report.tolerance},
                   {"seed", report.seed},
                   {"config", report.config},
                   {"notes", report.notes}};
  // All trials skipped leaves no margin; JSON cannot carry the infinity.
  if (std::isfinite(report.worst_margin))
    j["worst_margin"] = report.worst_margin;
  else
    j["worst_margin"] = nullptr;
  return j;
}

CheckReport check_projection_identities(const SplitPair& pair, long trials,
                                        std::uint64_t seed) {
  CheckReport report;
  report.check_name = "projection_identities";
  report.tolerance = kExactTol;
  report.seed = seed;
  report.config = {{"n", pair.W.n()},
                   {"W", to_json(pair.W)},
                   {"V", to_json(pair.V)}};

  Rng rng(seed);
  const int n = pair.W.n();
  for (long t = 0; t < trials; ++t) {
    const HPoint p = random_point(n, 5.0, rng);
    const HPoint q = random_point(n, 5.0, rng);
    const double lambda = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
    const HPoint pv = project_v(pair, p);
    const HPoint pw = project_w(pair, p);
    const HPoint qv = project_v(pair, q);
    const HPoint qw = project_w(pair, q);

    double res = 0.0;
    // pi_W(p^{-1}) = pi_V(p)^{-1} pi_W(p)^{-1} pi_V(p)
    res = std::max(res, coord_residual(project_w(pair, inv(p)),
                                       mul(mul(inv(pv), inv(pw)), pv)));
    // pi_V(p^{-1}) = pi_V(p)^{-1}
    res = std::max(res, coord_residual(project_v(pair, inv(p)), inv(pv)));
    // pi_W(delta p) = delta pi_W(p)
    res = std::max(res, coord_residual(project_w(pair, dilate(lambda, p)),
                                       dilate(lambda, pw)));
    // pi_V(delta p) = delta pi_V(p)
    res = std::max(res, coord_residual(project_v(pair, dilate(lambda, p)),
                                       dilate(lambda, pv)));
    // pi_W(p q) = pi_W(p) pi_V(p) pi_W(q) pi_V(p)^{-1}
    res = std::max(res, coord_residual(project_w(pair, mul(p, q)),
                                       mul(mul(mul(pw, pv), qw), inv(pv))));
    // pi_V(p q) = pi_V(p) pi_V(q)
    res = std::max(res, coord_residual(project_v(pair, mul(p, q)), mul(pv, qv)));

    report.record(-res);
  }
  return report;
}

CheckReport check_projection_sandwich(const SplitPair& pair, long trials,
                                      std::uint64_t seed) {
  if (!(pair.c_est > 0.0))
    throw InvalidInput("projection sandwich: the pair carries no c_est estimate");
  CheckReport report;
  report.check_name = "projection_sandwich";
  report.tolerance = kNumericTol;
  report.seed = seed;
  report.config = {{"n", pair.W.n()}, {"c_est", pair.c_est}, {"V", to_json(pair.V)}};

  Rng rng(seed);
  const int n = pair.W.n();
  for (long t = 0; t < trials; ++t) {
    const HPoint p = random_point(n, 3.0, rng);
    const HPoint pv = project_v(pair, p);
    const double dw = dist_to_subgroup(p, pair.W);
    const double dv = dist_to_subgroup(p, pair.V);
    const double nv = hom_norm(pv);
    const double composite = hom_norm(mul(inv(pv), p));
    const double margin = std::min(std::min(dw - pair.c_est * nv, nv - dw),
                                   std::min(dv - pair.c_est * composite, composite - dv));
    report.record(margin);
  }
  return report;
}

CheckReport check_rho_duality(int n, int k, int pairs, std::uint64_t seed) {
  CheckReport report;
  report.check_name = "rho_duality";
  report.seed = seed;
  report.config = {{"n", n}, {"k", k}, {"pairs", pairs}};

  Rng rng(seed);
  std::vector<double> margins;
  double max_tol = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const Subgroup s1 = random_grassmannian(n, k, rng);
    const Subgroup s2 = random_grassmannian(n, k, rng);
    const Subgroup c1 = complement(s1);
    const Subgroup c2 = complement(s2);

    RhoOptions opts;
    opts.seed = Rng::split(seed, std::uint64_t(i)).next_u64();
    const RhoResult r1 = rho_metric_detailed(s1, s2, opts);
    const RhoResult r2 = rho_metric_detailed(c1, c2, opts);

    // Pointwise, d(pi_{S1}(x), pi_{S2}(x)) = d(pi_{S1^perp}(x^{-1}), pi_{S2^perp}(x^{-1})),
    // so exchanging the refined maximizers couples the two sampled maxima.
    const auto eval1 = [&](const HPoint& x) {
      return dist(project_onto(s1, x), project_onto(s2, x));
    };
    const auto eval2 = [&](const HPoint& x) {
      return dist(project_onto(c1, x), project_onto(c2, x));
    };
    const double final1 = std::max(r1.value, eval1(inv(r2.argmax)));
    const double final2 = std::max(r2.value, eval2(inv(r1.argmax)));

    max_tol = std::max({max_tol, 2.0 * r1.tolerance, 2.0 * r2.tolerance});
    margins.push_back(-std::abs(final1 - final2));
  }
  report.tolerance = std::max(max_tol, kNumericTol);
  for (double margin : margins) report.record(margin);
  return report;
}

CheckReport check_cone_inversion(const Subgroup& v, double alpha, double beta,
                                 double s, double m, long trials, std::uint64_t seed) {
  if (v.kind != SubgroupKind::Vertical || !is_in_grassmannian(v))
    throw NotInGrassmannian("cone inversion: V must be a vertical Grassmannian element");
  if (!(alpha > 0.0) || !(beta > 0.0) || !(m > 0.0) || !(s > 0.0 && s <= 1.0))
    throw InvalidInput("cone inversion: bad parameters");

  const Subgroup vperp = complement(v);
  const int n = v.n();
  const double radius = alpha * alpha * m;      // ||x|| <= alpha^2 M
  const double thr = s * s * beta * beta * m;   // d(x, V^perp) <= s^2 beta^2 M
  const double bound = (beta * beta + 2.0 * std::sqrt(2.0) * alpha * beta) * s * m;

  CheckReport report;
  report.check_name = "cone_inversion";
  report.tolerance = kNumericTol;
  report.seed = seed;
  report.config = {{"n", n},        {"alpha", alpha}, {"beta", beta},
                   {"s", s},        {"M", m},         {"bound", bound},
                   {"radius", radius}, {"width", thr}};

  Rng rng(seed);
  long proposals = 0;
  HPoint worst_x = identity(n);
  double worst_val = -1.0;

  // Hypothesis points are built as v * z with v in V^perp and ||z|| <= thr,
  // which parametrizes { d(x, V^perp) <= thr } exactly; only the ball
  // constraint needs rejection.
  const auto draw = [&]() -> HPoint {
    while (true) {
      ++proposals;
      HPoint x;
      if (thr >= radius) {
        x = ambient_ball_point(n, radius, rng);
      } else {
        const HPoint velt = subgroup_ball_point(vperp, radius + thr, rng);
        x = mul(velt, ambient_ball_point(n, thr, rng));
        if (hom_norm(x) > radius) {
          if (proposals > 10000 &&
              double(report.trials) / double(proposals) < 1e-4)
            throw SamplingStarved(
                "cone inversion: acceptance rate below 1e-4; widen alpha or s");
          continue;
        }
      }
      return x;
    }
  };

  for (long t = 0; t < trials; ++t) {
    const HPoint x = draw();
    const double val = dist_to_subgroup(inv(x), vperp);
    if (val > worst_val) {
      worst_val = val;
      worst_x = x;
    }
    report.record(bound - val);
  }

  // Extremal search: pattern search on the (v, z) parameters maximizing
  // d(x^{-1}, V^perp) over the hypothesis set.
  const int kv = vperp.linear_dim();
  const int dim = kv + 2 * n + 1;
  Eigen::VectorXd state = Eigen::VectorXd::Zero(dim);
  {
    const Eigen::VectorXd vc = vperp.basis.transpose() * worst_x.horiz;
    state.head(kv) = vc;
    const HPoint z = mul(inv(HPoint(vperp.basis * vc, 0.0)), worst_x);
    state.segment(kv, 2 * n) = z.horiz;
    state(dim - 1) = z.vert;
  }
  const auto realize = [&](const Eigen::VectorXd& st) -> HPoint {
    Eigen::VectorXd vc = st.head(kv);
    if (vc.norm() > radius + thr) vc *= (radius + thr) / vc.norm();
    Eigen::VectorXd zh = st.segment(kv, 2 * n);
    if (zh.norm() > thr) zh *= thr / zh.norm();
    const double zt = std::clamp(st(dim - 1), -thr * thr, thr * thr);
    return mul(HPoint(vperp.basis * vc, 0.0), HPoint(zh, zt));
  };
  double best = worst_val;
  double step = 0.25 * (radius + thr);
  for (int round = 0; round < 48 && step > 1e-9 * m; ++round) {
    bool improved = false;
    for (int j = 0; j < dim; ++j) {
      for (const double sign : {1.0, -1.0}) {
        Eigen::VectorXd st = state;
        st(j) += sign * step;
        const HPoint x = realize(st);
        if (hom_norm(x) > radius) continue;
        const double val = dist_to_subgroup(inv(x), vperp);
        if (val > best) {
          best = val;
          state = st;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  report.record(bound - best);
  report.config["extremal_ratio"] = best / (s * m);
  report.config["acceptance_rate"] = double(report.trials) / double(proposals);
  report.notes.push_back("the last trial is the extremal-search candidate");
  return report;
}

TwoConeConfig make_two_cone_config(double s, double rho, Subgroup v,
                                   std::uint64_t seed) {
  if (!(s > 0.0 && s < 1.0)) throw InvalidInput("two-cone config: s must lie in (0,1)");
  if (!(rho > 0.0)) throw InvalidInput("two-cone config: rho must be positive");
  if (v.kind != SubgroupKind::Vertical || !is_in_grassmannian(v))
    throw NotInGrassmannian("two-cone config: V must be a vertical Grassmannian element");
  TwoConeConfig config;
  config.s = s;
  config.s_bar = s * s / 100.0;
  config.s_bar_1 = config.s_bar / 20.0;
  config.rho = rho;
  config.v = std::move(v);
  config.seed = seed;
  return config;
}

CheckReport check_two_cone_covering(const TwoConeConfig& config,
                                    const PointCloud& cloud, long trials) {
  if (config.s_bar != config.s * config.s / 100.0 ||
      config.s_bar_1 != config.s_bar / 20.0)
    throw InvalidInput("two-cone config: s_bar fields are inconsistent");
  if (cloud.size() == 0) throw InvalidInput("two-cone covering: empty cloud");
  if (cloud.meta.n != config.v.n())
    throw InvalidInput("two-cone covering: dimension mismatch");

  // Precondition: the cloud sits inside B(x0, rho) for some x0. The center
  // is not known, so the necessary diameter bound diam <= 2 rho is verified
  // from a few anchor points.
  {
    const int candidates = std::min(cloud.size(), 32);
    double diam = 0.0;
    for (int c = 0; c < candidates; ++c)
      for (const HPoint& p : cloud.points)
        diam = std::max(diam, dist(p, cloud.points[c]));
    if (diam > 2.0 * config.rho * (1.0 + 1e-9))
      throw InvalidInput("two-cone covering: cloud diameter exceeds 2 rho, so it "
                         "cannot lie in any B(x0, rho)");
  }

  const Subgroup vperp = complement(config.v);
  const double s = config.s;
  const double sbar = config.s_bar;

  CheckReport report;
  report.check_name = "two_cone_covering";
  report.tolerance = kNumericTol;
  report.seed = config.seed;
  report.config = {{"s", s},
                   {"s_bar", sbar},
                   {"s_bar_1", config.s_bar_1},
                   {"rho", config.rho},
                   {"V", to_json(config.v)},
                   {"cloud_generator", cloud.meta.generator},
                   {"cloud_points", cloud.size()}};

  Rng rng(config.seed);
  const int count = cloud.size();
  std::vector<HPoint> rel(count);
  std::vector<double> norms(count), dists(count);
  double density_proxy_max = 0.0;

  for (long t = 0; t < trials; ++t) {
    const HPoint& x = cloud.points[rng.uniform_int(count)];
    const HPoint xinv = inv(x);

    double h = 0.0;
    int y_idx = -1;
    for (int i = 0; i < count; ++i) {
      rel[i] = mul(xinv, cloud.points[i]);
      norms[i] = hom_norm(rel[i]);
      dists[i] = dist_to_subgroup(rel[i], vperp);
      if (dists[i] <= sbar * norms[i] + kBoundarySlack && norms[i] > h) {
        h = norms[i];
        y_idx = i;
      }
    }
    if (y_idx < 0 || h <= 0.0) {
      ++report.skipped;  // only x itself reaches the cone; h(x) = 0 convention
      continue;
    }

    double ball_mass = 0.0;
    for (int i = 0; i < count; ++i)
      if (norms[i] <= config.rho) ball_mass += cloud.weights(i);
    density_proxy_max =
        std::max(density_proxy_max,
                 ball_mass / std::pow(config.rho, double(config.v.metric_dim())));

    const HPoint y_inv = inv(rel[y_idx]);
    double trial_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < count; ++i) {
      if (dists[i] > sbar * h + kBoundarySlack) continue;  // outside the cylinder
      if (norms[i] > config.rho + kBoundarySlack) continue;
      const double margin_x = std::min(s * norms[i] - dists[i], 2.0 * h - norms[i]);
      const HPoint rel2 = mul(y_inv, rel[i]);
      const double norm2 = hom_norm(rel2);
      const double margin_y =
          std::min(s * norm2 - dist_to_subgroup(rel2, vperp), 2.0 * h - norm2);
      trial_margin = std::min(trial_margin, std::max(margin_x, margin_y));
    }
    report.record(trial_margin);
  }

  // The density-estimate constant is surfaced, not asserted: at desk scale it
  // towers above any finite-scale proxy.
  const double coefficient =
      density_estimate_bound(config.v.metric_dim(), s, 1.0);
  report.config["density_bound_coefficient"] = coefficient;
  report.config["density_proxy_max"] = density_proxy_max;
  report.notes.push_back(
      "finite-scale density proxy <= bound holds trivially; the bound is slack "
      "by many orders of magnitude at this scale");
  if (density_proxy_max > coefficient) ++report.violations;
  return report;
}

CheckReport check_cone_separation(const Subgroup& v, const Subgroup& t, double s0,
                                  long trials, std::uint64_t seed) {
  if (v.kind != SubgroupKind::Vertical || t.kind != SubgroupKind::Vertical)
    throw InvalidInput("cone separation: V and T must be vertical");
  if (!is_in_grassmannian(v) || !is_in_grassmannian(t))
    throw NotInGrassmannian("cone separation: V and T must lie in the Grassmannian");
  if (v.k() != t.k() || v.n() != t.n())
    throw InvalidInput("cone separation: V and T must share n and k");

  const double rho_vt = rho_metric(v, t);
  if (!(rho_vt < 1.0 / 3.0))
    throw InvalidInput("cone separation: precondition rho(V,T) < 1/3 fails (rho = " +
                       std::to_string(rho_vt) + ")");
  const Subgroup vperp = complement(v);
  const SplitPair pair = make_split_pair(v, vperp);
  if (!(s0 > 0.0 && s0 < pair.c_est / 3.0))
    throw InvalidInput("cone separation: s0 must lie in (0, c_est/3), c_est = " +
                       std::to_string(pair.c_est));

  CheckReport report;
  report.check_name = "cone_separation";
  report.tolerance = kNumericTol;
  report.seed = seed;
  report.config = {{"n", v.n()},       {"k", v.k()},   {"rho_VT", rho_vt},
                   {"s0", s0},         {"c_est", pair.c_est},
                   {"V", to_json(v)},  {"T", to_json(t)}};

  Rng rng(seed);
  long proposals = 0;
  const int n = v.n();
  while (report.trials < trials) {
    ++proposals;
    // q = v_elt * z lands in X(e, V^perp, s0) for ||z|| small against ||v_elt||;
    // the exact cone condition is re-tested before accepting.
    const HPoint velt = subgroup_ball_point(vperp, 1.0, rng);
    const double vn = hom_norm(velt);
    if (vn < 0.05) continue;
    const HPoint q = mul(velt, ambient_ball_point(n, s0 * vn / (1.0 - s0), rng));
    const double qn = hom_norm(q);
    if (qn <= 1e-9) continue;
    if (dist_to_subgroup(q, vperp) > s0 * qn) {
      if (proposals > 10000 && double(report.trials) / double(proposals) < 1e-4)
        throw SamplingStarved("cone separation: acceptance rate below 1e-4");
      continue;
    }
    report.record(dist_to_subgroup(q, t) - s0 * qn);
  }
  report.config["acceptance_rate"] = double(report.trials) / double(proposals);
  return report;
}

CheckReport check_paraboloid_in_cone(const Subgroup& v, double lambda, double alpha,
                                     double s, long trials, std::uint64_t seed) {
  if (!is_in_grassmannian(v))
    throw NotInGrassmannian("paraboloid in cone: V must lie in the Grassmannian");
  if (!(lambda > 0.0) || !(alpha > 0.0 && alpha <= 1.0) || !(s > 0.0 && s < 1.0))
    throw InvalidInput("paraboloid in cone: bad parameters");

  const double rstar = std::pow(s / lambda, 1.0 / alpha);

  CheckReport report;
  report.check_name = "paraboloid_in_cone";
  report.tolerance = kNumericTol;
  report.seed = seed;
  report.config = {{"n", v.n()},     {"lambda", lambda}, {"alpha", alpha},
                   {"s", s},         {"r_star", rstar},  {"V", to_json(v)}};

  Rng rng(seed);
  long proposals = 0;
  const int n = v.n();
  while (report.trials < trials) {
    ++proposals;
    const double r = rstar * rng.uniform(0.05, 1.0);
    const HPoint velt = subgroup_ball_point(v, r, rng);
    const HPoint y =
        mul(velt, ambient_ball_point(n, lambda * std::pow(r, 1.0 + alpha), rng));
    const double yn = hom_norm(y);
    if (yn > r) continue;
    if (dist_to_subgroup(y, v) > lambda * std::pow(yn, 1.0 + alpha)) {
      if (proposals > 10000 && double(report.trials) / double(proposals) < 1e-4)
        throw SamplingStarved("paraboloid in cone: acceptance rate below 1e-4");
      continue;
    }
    report.record(s * yn - dist_to_subgroup(y, v));
  }
  report.config["acceptance_rate"] = double(report.trials) / double(proposals);
  return report;
}

double density_estimate_bound(int k_m, double s, double lambda) {
  return std::pow(2.0, 11.0 * k_m + 1.0) * std::pow(2000.0, 4.0 * k_m) *
         std::pow(s, -7.0 * k_m) * lambda;
}

}  // namespace hgeom
