#pragma once

#include <variant>

#include "hgeom/point.hpp"
#include "hgeom/subgroup.hpp"

namespace hgeom {

/// Absolute slack on non-strict boundary inequalities, absorbing float noise
/// in set-inclusion tests.
inline constexpr double kBoundarySlack = 1e-12;

/// Distance d(p, S) = inf_{s in S} ||s^{-1} p||.
/// Vertical S: closed form, the Euclidean distance of p' to S'.
/// Horizontal S: bisection on r over a closed-form feasibility test
/// (ball/interval intersection), absolute tolerance 1e-9.
double dist_to_subgroup(const HPoint& p, const Subgroup& s);

/// Bisection path for any kind, bypassing the vertical closed form;
/// kept separate so the two routes can be cross-checked.
double dist_to_subgroup_bisect(const HPoint& p, const Subgroup& s,
                               double tol = 1e-9);

/// Intrinsic cone X(p0, S, alpha) = { p : d(p0^{-1} p, S) <= alpha d(p, p0) }.
struct Cone {
  HPoint vertex;
  Subgroup axis;
  double aperture = 0.0;  // in (0,1)
};

/// X(p0, r, S, alpha) = X(p0, S, alpha) intersected with B(p0, r).
struct TruncatedCone {
  HPoint vertex;
  Subgroup axis;
  double aperture = 0.0;
  double radius = 0.0;
};

/// rho-neighbourhood N(S, width) = { p : d(p, S) <= width }.
struct Cylinder {
  Subgroup axis;
  double width = 0.0;
};

/// alpha-paraboloid Q_alpha(x, V, lambda) = { y : d(x^{-1} y, V) <= lambda d(x,y)^(1+alpha) }.
struct Paraboloid {
  HPoint center;
  Subgroup base;
  double lambda = 0.0;
  double alpha = 0.0;  // in (0,1]
};

using Region = std::variant<Cone, TruncatedCone, Cylinder, Paraboloid>;

Cone make_cone(HPoint vertex, Subgroup axis, double aperture);
TruncatedCone make_truncated_cone(HPoint vertex, Subgroup axis, double aperture,
                                  double radius);
Cylinder make_cylinder(Subgroup axis, double width);
Paraboloid make_paraboloid(HPoint center, Subgroup base, double lambda, double alpha);

bool contains(const Cone& c, const HPoint& p);
bool contains(const TruncatedCone& c, const HPoint& p);
bool contains(const Cylinder& c, const HPoint& p);
bool contains(const Paraboloid& q, const HPoint& p);
bool region_contains(const Region& r, const HPoint& p);

}  // namespace hgeom
