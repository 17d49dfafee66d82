#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hgeom/cloud.hpp"
#include "hgeom/subgroup.hpp"

namespace hgeom {

struct TangentScore {
  double radius = 0.0;
  double aperture = 0.0;
  double normalized_mass = 0.0;  // out-of-cone mass / r^{k_m}
};

struct TangentReport {
  HPoint point;
  Subgroup best;
  std::vector<TangentScore> scores;  // one per radius, decreasing radii
  bool converged = false;            // score at the smallest radius below threshold
  bool ok = true;                    // false when the point had insufficient data
  std::string error;
};

struct FitOptions {
  double aperture = 0.2;       // cone aperture s used for scoring
  std::vector<double> radii;   // strictly decreasing, positive
  int budget = 64;             // total candidate evaluations
  std::uint64_t seed = 0;
  double converge_threshold = 0.05;
  int min_ball_points = 10;
  // Perturbation magnitude decays geometrically between these bounds. The
  // Grassmannian metric grows like sqrt(angle) near coincidence, so the floor
  // sets the achievable rho-resolution at roughly sqrt(2 * sigma_lo).
  double sigma_hi = 0.3;
  double sigma_lo = 1e-4;
};

/// Sum over the radius schedule of the normalized out-of-cone mass of the
/// candidate subgroup; the quantity fit_tangent minimizes. Exposed because
/// the score, unlike the optimizer, is exactly left-invariant.
double tangent_score(const PointCloud& cloud, const MetricIndex& index,
                     const HPoint& p, const Subgroup& v, double aperture,
                     const std::vector<double>& radii);

/// Fits an approximate tangent subgroup at p by minimizing tangent_score over
/// G(H^n, k): random orthonormal frames plus local perturbations of decaying
/// magnitude. Throws InsufficientData when the largest ball holds fewer than
/// min_ball_points cloud points.
TangentReport fit_tangent(const PointCloud& cloud, const MetricIndex& index,
                          const HPoint& p, int k, const FitOptions& opts);

/// Runs fit_tangent at sample_count support points drawn with the seed.
/// Deterministic given the seed; per-point failures are recorded in the
/// report (ok = false) without aborting the batch.
std::vector<TangentReport> classify_cloud(const PointCloud& cloud, int k,
                                          const FitOptions& opts, int sample_count,
                                          std::uint64_t seed, int threads = 1);

}  // namespace hgeom
