#pragma once

#include <Eigen/Core>

#include "hgeom/errors.hpp"

namespace hgeom {

/// A point of the Heisenberg group H^n in exponential coordinates:
/// horizontal part (p_1,...,p_2n) plus the vertical coordinate p_{2n+1}.
/// The identity is the all-zeros point.
struct HPoint {
  Eigen::VectorXd horiz;  // 2n entries
  double vert = 0.0;

  HPoint() = default;
  HPoint(Eigen::VectorXd h, double v) : horiz(std::move(h)), vert(v) {}

  int n() const { return int(horiz.size()) / 2; }
};

inline HPoint identity(int n) {
  return HPoint(Eigen::VectorXd::Zero(2 * n), 0.0);
}

namespace detail {
inline void require_same_dim(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                             const char* what) {
  if (a.size() != b.size())
    throw InvalidInput(std::string(what) + ": dimension mismatch (" +
                       std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()) + ")");
}
}  // namespace detail

/// Image of a horizontal vector under the standard symplectic matrix J,
/// so that omega(a, b) = <a, J b>. J maps (x, y) to (-y, x) blockwise.
inline Eigen::VectorXd symplectic_image(const Eigen::VectorXd& b) {
  const int n = int(b.size()) / 2;
  Eigen::VectorXd jb(2 * n);
  jb.head(n) = -b.tail(n);
  jb.tail(n) = b.head(n);
  return jb;
}

/// Standard symplectic form on R^2n:
///   omega(a, b) = sum_i (a_{i+n} b_i - a_i b_{i+n}).
/// The sign convention is fixed here once and used everywhere.
inline double omega(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  detail::require_same_dim(a, b, "omega");
  if (a.size() % 2 != 0) throw InvalidInput("omega: vectors must have even length");
  const int n = int(a.size()) / 2;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a(i + n) * b(i) - a(i) * b(i + n);
  return s;
}

/// Group product p * q = (p' + q', p_t + q_t + 2 omega(p', q')).
inline HPoint mul(const HPoint& p, const HPoint& q) {
  detail::require_same_dim(p.horiz, q.horiz, "mul");
  return HPoint(p.horiz + q.horiz, p.vert + q.vert + 2.0 * omega(p.horiz, q.horiz));
}

/// Group inverse p^{-1} = (-p', -p_t).
inline HPoint inv(const HPoint& p) { return HPoint(-p.horiz, -p.vert); }

/// Anisotropic dilation delta_r p = (r p', r^2 p_t), r > 0.
inline HPoint dilate(double r, const HPoint& p) {
  if (!(r > 0.0)) throw InvalidInput("dilate: r must be positive");
  return HPoint(r * p.horiz, r * r * p.vert);
}

/// Homogeneous norm ||p|| = max(|p'|, |p_t|^(1/2)).
inline double hom_norm(const HPoint& p) {
  return std::max(p.horiz.norm(), std::sqrt(std::abs(p.vert)));
}

/// Left-invariant distance d(p, q) = ||q^{-1} * p||.
inline double dist(const HPoint& p, const HPoint& q) {
  detail::require_same_dim(p.horiz, q.horiz, "dist");
  return hom_norm(mul(inv(q), p));
}

/// Largest absolute coordinate difference, used by exact-algebra checks.
inline double coord_residual(const HPoint& a, const HPoint& b) {
  double r = std::abs(a.vert - b.vert);
  for (int i = 0; i < a.horiz.size(); ++i)
    r = std::max(r, std::abs(a.horiz(i) - b.horiz(i)));
  return r;
}

}  // namespace hgeom
