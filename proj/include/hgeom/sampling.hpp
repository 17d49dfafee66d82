#pragma once

#include <cstdint>
#include <vector>

#include "hgeom/cloud.hpp"
#include "hgeom/subgroup.hpp"

namespace hgeom {

/// Uniform sample of the coset base * S inside the homogeneous ball of radius
/// box_radius around base. Weights are uniform with total mass
/// box_radius^{k_m} (relative normalization of the Haar measure on S).
PointCloud sample_subgroup(const Subgroup& s, const HPoint& base, int count,
                           double box_radius, std::uint64_t seed);

/// Built-in intrinsic graph families phi : W -> V. The map depends only on
/// the horizontal coordinates of w, expressed in the basis of W'.
struct GraphMap {
  enum class Family { Constant, Linear, Sine };
  Family family = Family::Constant;
  Eigen::VectorXd v0;      // Constant: coefficients in the basis of V'
  Eigen::MatrixXd slope;   // Linear: dim V' x dim W'
  double amplitude = 0.0;  // Sine: sup-norm of the perturbation
  double frequency = 1.0;
};

/// Sample of gr_phi = { w * phi(w) } for w drawn uniformly in W within the
/// homogeneous ball of radius domain_radius.
PointCloud sample_intrinsic_graph(const SplitPair& pair, const GraphMap& map,
                                  double domain_radius, int count,
                                  std::uint64_t seed);

/// One contraction p -> shift * delta_ratio(p) of an iterated function system.
struct IfsMap {
  HPoint shift;
  double ratio = 0.5;  // in (0,1)
};

/// Chaos-game sample of the IFS attractor: each point is a random
/// depth-fold composition applied to the identity. meta.ground_truth records
/// the similarity dimension solving sum ratio_i^d = 1.
PointCloud sample_ifs_fractal(const std::vector<IfsMap>& maps, int depth, int count,
                              std::uint64_t seed);

/// Uniform (Haar) sample of the homogeneous ball B(base, radius); carries
/// full-dimensional mass, k_m = 2n + 2.
PointCloud sample_ball(int n, const HPoint& base, int count, double radius,
                       std::uint64_t seed);

/// Solves sum_i ratio_i^d = 1 for the similarity dimension d.
double similarity_dimension(const std::vector<IfsMap>& maps);

/// One Haar-uniform point of S inside the homogeneous ball of the given
/// radius around the identity.
HPoint subgroup_ball_point(const Subgroup& s, double radius, Rng& rng);

/// One Haar-uniform point of the ambient ball B(e, radius) in H^n.
HPoint ambient_ball_point(int n, double radius, Rng& rng);

}  // namespace hgeom
