#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hgeom/point.hpp"
#include "hgeom/rng.hpp"
#include "hgeom/subgroup.hpp"

namespace hgeom {

struct CloudMeta {
  int n = 1;
  int k_m = 0;               // metric dimension of the generating set
  double total_mass = 0.0;   // declared H^{k_m} mass carried by the weights
  std::string generator;
  std::uint64_t seed = 0;
  std::string ground_truth;  // generator parameters, JSON-encoded when available
};

/// Weighted sample of a set E in H^n; weights carry the generator's share of
/// total H^{k_m} mass so density ratios are meaningful without knowing the
/// normalization of the Hausdorff measure.
struct PointCloud {
  std::vector<HPoint> points;
  Eigen::VectorXd weights;
  CloudMeta meta;

  int size() const { return int(points.size()); }
};

/// Throws InvalidInput when the cloud violates its invariants (weight sum vs
/// declared mass at 1e-9 relative, mixed dimensions, negative weights).
void validate_cloud(const PointCloud& cloud);

/// Ball-query index over the homogeneous distance: vantage-point tree with a
/// brute-force fallback below 2000 points. Built once, then read-only.
class MetricIndex {
 public:
  explicit MetricIndex(const PointCloud& cloud);

  /// Indices of points q with dist(q, center) <= radius.
  std::vector<int> ball(const HPoint& center, double radius) const;

  int size() const { return int(points_->size()); }

 private:
  struct Node {
    int point = -1;
    double threshold = 0.0;
    int inside = -1;
    int outside = -1;
  };

  int build(std::vector<int>& items, int lo, int hi, Rng& rng);
  void search(int node, const HPoint& center, double radius,
              std::vector<int>& out) const;

  const std::vector<HPoint>* points_ = nullptr;
  std::vector<Node> nodes_;
  int root_ = -1;
  bool brute_ = false;
};

/// Greedy upper bound for the delta-cover sum  sum_i 2^{-k} diam(piece_i)^k
/// over the sample support: repeatedly grow a piece of homogeneous diameter
/// <= delta around the point covering the most unprocessed neighbours.
/// Meaningful only for relative comparisons across scales.
double cover_measure(const PointCloud& cloud, const MetricIndex& index, double k,
                     double delta);

struct DensityReport {
  HPoint point;
  std::vector<double> radii;      // strictly decreasing
  std::vector<double> ball_mass;  // weight inside each ball
  double upper_density = 0.0;     // max over radii of mass / r^{k_m}
  double lower_density = 0.0;     // min over radii (finite-scale proxies)
};

/// Finite-scale density proxies at p: ball masses over the radius schedule
/// and the max/min of mass / r^{k_m}. No extrapolation to r -> 0 is made.
DensityReport density_at(const PointCloud& cloud, const MetricIndex& index,
                         const HPoint& p, int k_m, const std::vector<double>& radii);

/// Weight of cloud points in B(p, r) that fall outside the cone X(p, V, s).
double out_of_cone_mass(const PointCloud& cloud, const MetricIndex& index,
                        const HPoint& p, const Subgroup& v, double s, double r);

/// Same, divided by r^{k_m} with k_m taken from the cloud's metadata; this is
/// the finite-scale form of the approximate-tangent functional.
double normalized_out_of_cone_mass(const PointCloud& cloud, const MetricIndex& index,
                                   const HPoint& p, const Subgroup& v, double s,
                                   double r);

}  // namespace hgeom
