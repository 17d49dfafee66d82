#include "hgeom/region.hpp"

#include <cmath>

namespace hgeom {

namespace {

// Horizontal feasibility certificate for d(p, S) <= r:
// the feasible v-set { v in S' : |p' - v| <= r } is the ball in S' around
// c = P_{S'} p' of radius sqrt(r^2 - d0^2), and the affine functional
// l(v) = p_t - 2<v, J p'> ranges over an interval on it; d(p, S) <= r iff
// that interval meets [-r^2, r^2].
struct HorizontalFeasibility {
  double d0 = 0.0;     // Euclidean distance of p' to S'
  double lc = 0.0;     // l at the ball center
  double gnorm = 0.0;  // |P_{S'} J p'|
  bool vertical_mode = false;

  explicit HorizontalFeasibility(const HPoint& p, const Subgroup& s) {
    const Eigen::VectorXd c = s.basis * (s.basis.transpose() * p.horiz);
    d0 = (p.horiz - c).norm();
    if (s.kind == SubgroupKind::Vertical) {
      vertical_mode = true;  // t is free along the center
      return;
    }
    const Eigen::VectorXd jp = symplectic_image(p.horiz);
    lc = p.vert - 2.0 * c.dot(jp);
    gnorm = (s.basis * (s.basis.transpose() * jp)).norm();
  }

  bool feasible(double r) const {
    if (r < d0) return false;
    if (vertical_mode) return true;
    const double radius = std::sqrt(std::max(r * r - d0 * d0, 0.0));
    const double half = 2.0 * radius * gnorm;
    return lc - half <= r * r && lc + half >= -r * r;
  }
};

}  // namespace

double dist_to_subgroup_bisect(const HPoint& p, const Subgroup& s, double tol) {
  const HorizontalFeasibility cert(p, s);
  double hi = hom_norm(p);  // valid bracket: e lies in every subgroup
  if (hi == 0.0) return 0.0;
  double lo = 0.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (cert.feasible(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double dist_to_subgroup(const HPoint& p, const Subgroup& s) {
  if (s.kind == SubgroupKind::Vertical) {
    const Eigen::VectorXd c = s.basis * (s.basis.transpose() * p.horiz);
    return (p.horiz - c).norm();
  }
  return dist_to_subgroup_bisect(p, s);
}

Cone make_cone(HPoint vertex, Subgroup axis, double aperture) {
  if (!(aperture > 0.0 && aperture < 1.0))
    throw InvalidInput("cone aperture must lie in (0,1)");
  return Cone{std::move(vertex), std::move(axis), aperture};
}

TruncatedCone make_truncated_cone(HPoint vertex, Subgroup axis, double aperture,
                                  double radius) {
  if (!(aperture > 0.0 && aperture < 1.0))
    throw InvalidInput("cone aperture must lie in (0,1)");
  if (!(radius > 0.0)) throw InvalidInput("cone radius must be positive");
  return TruncatedCone{std::move(vertex), std::move(axis), aperture, radius};
}

Cylinder make_cylinder(Subgroup axis, double width) {
  if (!(width > 0.0)) throw InvalidInput("cylinder width must be positive");
  return Cylinder{std::move(axis), width};
}

Paraboloid make_paraboloid(HPoint center, Subgroup base, double lambda, double alpha) {
  if (!(lambda > 0.0)) throw InvalidInput("paraboloid lambda must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw InvalidInput("paraboloid alpha must lie in (0,1]");
  return Paraboloid{std::move(center), std::move(base), lambda, alpha};
}

bool contains(const Cone& c, const HPoint& p) {
  const HPoint rel = mul(inv(c.vertex), p);
  return dist_to_subgroup(rel, c.axis) <= c.aperture * hom_norm(rel) + kBoundarySlack;
}

bool contains(const TruncatedCone& c, const HPoint& p) {
  const HPoint rel = mul(inv(c.vertex), p);
  if (hom_norm(rel) > c.radius + kBoundarySlack) return false;
  return dist_to_subgroup(rel, c.axis) <= c.aperture * hom_norm(rel) + kBoundarySlack;
}

bool contains(const Cylinder& c, const HPoint& p) {
  return dist_to_subgroup(p, c.axis) <= c.width + kBoundarySlack;
}

bool contains(const Paraboloid& q, const HPoint& p) {
  const HPoint rel = mul(inv(q.center), p);
  return dist_to_subgroup(rel, q.base) <=
         q.lambda * std::pow(hom_norm(rel), 1.0 + q.alpha) + kBoundarySlack;
}

bool region_contains(const Region& r, const HPoint& p) {
  return std::visit([&](const auto& region) { return contains(region, p); }, r);
}

}  // namespace hgeom
