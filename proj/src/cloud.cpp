#include "hgeom/cloud.hpp"

#include "hgeom/region.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace hgeom {

void validate_cloud(const PointCloud& cloud) {
  if (cloud.weights.size() != cloud.size())
    throw InvalidInput("cloud: weights and points differ in length");
  if (cloud.size() == 0) return;
  const int n = cloud.meta.n;
  for (const HPoint& p : cloud.points)
    if (p.n() != n) throw InvalidInput("cloud: mixed ambient dimensions");
  if ((cloud.weights.array() < 0.0).any())
    throw InvalidInput("cloud: negative weight");
  const double sum = cloud.weights.sum();
  const double scale = std::max(std::abs(cloud.meta.total_mass), 1e-300);
  if (std::abs(sum - cloud.meta.total_mass) > 1e-9 * scale)
    throw InvalidInput("cloud: weights do not sum to the declared total mass");
}

MetricIndex::MetricIndex(const PointCloud& cloud) : points_(&cloud.points) {
  const int count = int(points_->size());
  brute_ = count < 2000;
  if (brute_ || count == 0) return;
  std::vector<int> items(count);
  std::iota(items.begin(), items.end(), 0);
  nodes_.reserve(count);
  Rng rng(0x7ee5u);
  root_ = build(items, 0, count, rng);
}

int MetricIndex::build(std::vector<int>& items, int lo, int hi, Rng& rng) {
  if (lo >= hi) return -1;
  const int id = int(nodes_.size());
  nodes_.push_back({});
  const int pick = lo + rng.uniform_int(hi - lo);
  std::swap(items[lo], items[pick]);
  nodes_[id].point = items[lo];
  if (hi - lo == 1) return id;

  const HPoint& vantage = (*points_)[items[lo]];
  const int mid = lo + 1 + (hi - lo - 1) / 2;
  std::nth_element(items.begin() + lo + 1, items.begin() + mid, items.begin() + hi,
                   [&](int a, int b) {
                     return dist((*points_)[a], vantage) < dist((*points_)[b], vantage);
                   });
  nodes_[id].threshold = dist((*points_)[items[mid]], vantage);
  const int inside = build(items, lo + 1, mid, rng);
  const int outside = build(items, mid, hi, rng);
  nodes_[id].inside = inside;
  nodes_[id].outside = outside;
  return id;
}

void MetricIndex::search(int node, const HPoint& center, double radius,
                         std::vector<int>& out) const {
  if (node < 0) return;
  const Node& nd = nodes_[node];
  const double d = dist((*points_)[nd.point], center);
  if (d <= radius) out.push_back(nd.point);
  if (d - radius <= nd.threshold) search(nd.inside, center, radius, out);
  if (d + radius >= nd.threshold) search(nd.outside, center, radius, out);
}

std::vector<int> MetricIndex::ball(const HPoint& center, double radius) const {
  std::vector<int> out;
  if (points_->empty()) return out;
  if (brute_) {
    for (int i = 0; i < int(points_->size()); ++i)
      if (dist((*points_)[i], center) <= radius) out.push_back(i);
    return out;
  }
  search(root_, center, radius, out);
  return out;
}

double cover_measure(const PointCloud& cloud, const MetricIndex& index, double k,
                     double delta) {
  if (!(delta > 0.0)) throw InvalidInput("cover_measure: delta must be positive");
  const int count = cloud.size();
  if (count == 0) return 0.0;

  std::vector<char> done(count, 0);
  // Candidate neighbourhood around a center, grown nearest-first while the
  // piece keeps homogeneous diameter <= delta; the diameter is tracked as
  // part of the growth.
  struct Piece {
    std::vector<int> members;
    double diam = 0.0;
  };
  const auto grow_piece = [&](int center) {
    std::vector<int> near = index.ball(cloud.points[center], delta);
    std::sort(near.begin(), near.end(), [&](int a, int b) {
      return dist(cloud.points[a], cloud.points[center]) <
             dist(cloud.points[b], cloud.points[center]);
    });
    Piece piece;
    for (int q : near) {
      if (done[q]) continue;
      double widest = 0.0;
      for (int m : piece.members) {
        widest = std::max(widest, dist(cloud.points[q], cloud.points[m]));
        if (widest > delta) break;
      }
      if (widest <= delta) {
        piece.members.push_back(q);
        piece.diam = std::max(piece.diam, widest);
      }
    }
    return piece;
  };

  // Lazy greedy: cached piece sizes only shrink as points are processed, so
  // a candidate whose refreshed size still beats the next cached bound is
  // the true maximizer.
  std::priority_queue<std::pair<int, int>> queue;  // (cached size, center)
  for (int i = 0; i < count; ++i)
    queue.emplace(int(index.ball(cloud.points[i], delta).size()), i);

  double total = 0.0;
  while (!queue.empty()) {
    const auto [cached, center] = queue.top();
    queue.pop();
    if (done[center]) continue;
    const Piece piece = grow_piece(center);
    if (!queue.empty() && int(piece.members.size()) < queue.top().first) {
      queue.emplace(int(piece.members.size()), center);
      continue;
    }
    total += std::pow(2.0, -k) * std::pow(piece.diam, k);
    for (int q : piece.members) done[q] = 1;
  }
  return total;
}

DensityReport density_at(const PointCloud& cloud, const MetricIndex& index,
                         const HPoint& p, int k_m, const std::vector<double>& radii) {
  for (size_t i = 0; i + 1 < radii.size(); ++i)
    if (!(radii[i] > radii[i + 1]))
      throw InvalidInput("density_at: radii must be strictly decreasing");
  for (double r : radii)
    if (!(r > 0.0)) throw InvalidInput("density_at: radii must be positive");

  DensityReport report;
  report.point = p;
  report.radii = radii;
  report.ball_mass.resize(radii.size(), 0.0);
  report.upper_density = 0.0;
  report.lower_density = radii.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < radii.size(); ++i) {
    double mass = 0.0;
    for (int idx : index.ball(p, radii[i])) mass += cloud.weights(idx);
    report.ball_mass[i] = mass;
    const double ratio = mass / std::pow(radii[i], double(k_m));
    report.upper_density = std::max(report.upper_density, ratio);
    report.lower_density = std::min(report.lower_density, ratio);
  }
  if (radii.empty()) report.lower_density = 0.0;
  return report;
}

double out_of_cone_mass(const PointCloud& cloud, const MetricIndex& index,
                        const HPoint& p, const Subgroup& v, double s, double r) {
  if (!(s > 0.0 && s < 1.0)) throw InvalidInput("out_of_cone_mass: s must lie in (0,1)");
  if (!(r > 0.0)) throw InvalidInput("out_of_cone_mass: r must be positive");
  double mass = 0.0;
  for (int idx : index.ball(p, r)) {
    const HPoint rel = mul(inv(p), cloud.points[idx]);
    if (dist_to_subgroup(rel, v) > s * hom_norm(rel) + kBoundarySlack)
      mass += cloud.weights(idx);
  }
  return mass;
}

double normalized_out_of_cone_mass(const PointCloud& cloud, const MetricIndex& index,
                                   const HPoint& p, const Subgroup& v, double s,
                                   double r) {
  return out_of_cone_mass(cloud, index, p, v, s, r) /
         std::pow(r, double(cloud.meta.k_m));
}

}  // namespace hgeom
