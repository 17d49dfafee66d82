#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hgeom/cloud.hpp"
#include "hgeom/subgroup.hpp"

namespace hgeom {

/// Outcome of one randomized verification run. Margins are signed RHS - LHS
/// for inequality checks and -(residual) for identity checks, so a violation
/// is always margin < -tolerance.
struct CheckReport {
  std::string check_name;
  long trials = 0;
  long violations = 0;
  long skipped = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  nlohmann::json config;
  std::vector<std::string> notes;

  bool passed() const { return violations == 0; }
  void record(double margin) {
    ++trials;
    worst_margin = std::min(worst_margin, margin);
    if (margin < -tolerance) ++violations;
  }
};

nlohmann::json to_json(const CheckReport& report);

/// All six algebraic identities of a complementary splitting on random
/// (p, q, lambda); exact algebra, tolerance 1e-10.
CheckReport check_projection_identities(const SplitPair& pair, long trials,
                                        std::uint64_t seed);

/// Both inequalities of the projection sandwich with the pair's estimated
/// constant: c ||pi_V(p)|| <= d(p,W) <= ||pi_V(p)|| and the composite bound
/// for d(p,V).
CheckReport check_projection_sandwich(const SplitPair& pair, long trials,
                                      std::uint64_t seed);

/// rho(S1,S2) = rho(S1^perp, S2^perp) on random Grassmannian pairs, both
/// sides evaluated on a shared, inversion-closed sampling schedule.
CheckReport check_rho_duality(int n, int k, int pairs, std::uint64_t seed);

/// d(x^{-1}, V^perp) <= (beta^2 + 2 sqrt(2) alpha beta) s M for x with
/// ||x|| <= alpha^2 M and d(x, V^perp) <= s^2 beta^2 M, plus an extremal
/// search for the worst ratio.
CheckReport check_cone_inversion(const Subgroup& v, double alpha, double beta,
                                 double s, double m, long trials, std::uint64_t seed);

/// Aperture bookkeeping of the two-cone covering: s_bar = s^2/100 and
/// s_bar_1 = s_bar/20 exactly as stored.
struct TwoConeConfig {
  double s = 0.0;
  double s_bar = 0.0;
  double s_bar_1 = 0.0;
  double rho = 0.0;  // containment radius of the cloud
  Subgroup v;        // vertical Grassmannian element
  std::uint64_t seed = 0;
};

TwoConeConfig make_two_cone_config(double s, double rho, Subgroup v,
                                   std::uint64_t seed);

/// For sampled base points x, every cloud point in the cylinder
/// N(x V^perp, s_bar h(x)) within B(x, rho) must lie in one of the two
/// truncated cones X(x, 2h(x), V^perp, s), X(y, 2h(x), V^perp, s), where
/// h(x) is the cone reach over the cloud and y a near-extremal cone member.
CheckReport check_two_cone_covering(const TwoConeConfig& config,
                                    const PointCloud& cloud, long trials);

/// X(e, V^perp, s0) excludes X(e, T, s0) away from the vertex, for
/// rho(V,T) < 1/3 and s0 < c_est/3.
CheckReport check_cone_separation(const Subgroup& v, const Subgroup& t, double s0,
                                  long trials, std::uint64_t seed);

/// Points of Q_alpha(e, V, lambda) within radius r <= (s/lambda)^(1/alpha)
/// lie in X(e, V, s).
CheckReport check_paraboloid_in_cone(const Subgroup& v, double lambda, double alpha,
                                     double s, long trials, std::uint64_t seed);

/// The density-estimate constant (2^{11 k_m + 1} * 2000^{4 k_m} * s^{-7 k_m}) * lambda.
/// Astronomically slack at desk scale; surfaced for reports, never asserted
/// against Monte-Carlo densities beyond the trivial direction.
double density_estimate_bound(int k_m, double s, double lambda);

}  // namespace hgeom
