#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <utility>

#include "hgeom/point.hpp"
#include "hgeom/rng.hpp"

namespace hgeom {

enum class SubgroupKind { Horizontal, Vertical };

/// A homogeneous subgroup of H^n, stored through an orthonormal basis of its
/// horizontal linear part. Horizontal subgroups are exp of an isotropic
/// subspace of R^2n; vertical subgroups contain the center, which is implicit
/// (a vertical subgroup of topological dimension k stores k-1 basis vectors).
struct Subgroup {
  SubgroupKind kind = SubgroupKind::Horizontal;
  Eigen::MatrixXd basis;  // 2n x m, orthonormal columns

  int n() const { return int(basis.rows()) / 2; }
  int linear_dim() const { return int(basis.cols()); }

  /// Topological dimension.
  int k() const {
    return kind == SubgroupKind::Horizontal ? linear_dim() : linear_dim() + 1;
  }

  /// Metric (Hausdorff) dimension: k for horizontal, k+1 for vertical.
  int metric_dim() const { return kind == SubgroupKind::Horizontal ? k() : k() + 1; }
};

/// Validates and orthonormalizes a spanning set into a Subgroup.
/// Throws InvalidInput on rank deficiency and NotASubgroup when a horizontal
/// span is not isotropic.
Subgroup make_subgroup(SubgroupKind kind, const Eigen::MatrixXd& span_vectors, int n);

/// max |omega(b_i, b_j)| over columns of the basis.
double isotropy_residual(const Eigen::MatrixXd& basis);

/// Orthonormal basis of the Euclidean orthogonal complement within R^2n.
Eigen::MatrixXd orthocomplement_basis(const Eigen::MatrixXd& basis, int n);

/// Gram-Schmidt against {b_i, J b_i}: returns an orthonormal frame spanning
/// an exactly isotropic subspace near the input columns. Throws InvalidInput
/// when the input degenerates under the sweep.
Eigen::MatrixXd symplectic_orthonormalize(const Eigen::MatrixXd& columns);

/// Subgroup with the orthocomplementary horizontal part and flipped kind.
/// For vertical input, throws NotInGrassmannian when the orthocomplement is
/// not isotropic.
Subgroup complement(const Subgroup& s);

/// True iff W is vertical, V horizontal, and W' + V' spans R^2n.
bool is_complementary_pair(const Subgroup& w, const Subgroup& v);

/// Membership in the intrinsic Grassmannian as handled by this library:
/// horizontal with 1 <= k <= n, or vertical with n+1 <= k <= 2n+1 whose
/// orthocomplement is isotropic.
bool is_in_grassmannian(const Subgroup& s);

/// Same horizontal span (projector distance below 1e-8) and same kind.
bool same_span(const Subgroup& a, const Subgroup& b);

/// Membership residual of p in S, in coordinate scale (0 iff p lies in S).
double membership_residual(const Subgroup& s, const HPoint& p);

struct CEstOptions {
  int sphere_samples = 100000;
  int refine_starts = 16;
  int refine_rounds = 64;
  std::uint64_t seed = 0x0c0e57ULL;
};

/// A complementary splitting H^n = W * V with its projection data and the
/// empirically estimated constant of the projection sandwich
///   c ||pi_V(p)|| <= d(p, W) <= ||pi_V(p)||.
struct SplitPair {
  Subgroup W;  // vertical, normal
  Subgroup V;  // horizontal
  Eigen::MatrixXd horiz_proj_v;  // 2n x 2n, oblique projector onto V' along W'
  double c_est = 0.0;
};

/// Validates the pair (kinds, direct sum to rank tolerance 1e-8), builds the
/// projector, and estimates c_est. Pass sphere_samples = 0 to skip the
/// estimate (c_est stays 0).
SplitPair make_split_pair(const Subgroup& w, const Subgroup& v,
                          const CEstOptions& opts = {});

/// Re-runs the c(V,W) estimate: minimum over unit-sphere samples (plus local
/// refinement) of both sandwich ratios, shrunk by 0.99.
double estimate_projection_constant(const SplitPair& pair, const CEstOptions& opts);

/// Component of p in V: (oblique projection of p' onto V' along W', 0).
HPoint project_v(const SplitPair& pair, const HPoint& p);

/// Component of p in W: p * project_v(p)^{-1}.
HPoint project_w(const SplitPair& pair, const HPoint& p);

/// Unique factorization p = w * v, returned as (w, v).
std::pair<HPoint, HPoint> project_split(const SplitPair& pair, const HPoint& p);

/// Projection onto a Grassmannian element through its orthogonal splitting
/// (complement(S), S); used by the Grassmannian metric rho.
HPoint project_onto(const Subgroup& s, const HPoint& p);

struct RhoOptions {
  int samples = 4096;  // low-discrepancy sphere samples; doubled by inversion closure
  int refine_starts = 8;
  int refine_rounds = 48;
  std::uint64_t seed = 0;
};

struct RhoResult {
  double value = 0.0;
  HPoint argmax;      // unit-sphere point achieving the reported maximum
  double tolerance = 0.0;  // final pattern-search step size
};

/// Sampled maximization of d(pi_{S1}(x), pi_{S2}(x)) over the unit sphere.
/// Deterministic given the options. Extra candidate points are evaluated in
/// addition to the schedule (used to couple paired evaluations).
RhoResult rho_metric_detailed(const Subgroup& s1, const Subgroup& s2,
                              const RhoOptions& opts = {},
                              std::span<const HPoint> extra = {});

double rho_metric(const Subgroup& s1, const Subgroup& s2, const RhoOptions& opts = {});

/// Uniform-ish random element of the Grassmannian G(H^n, k); frames are
/// orthonormalized Gaussian matrices with the isotropy constraint enforced
/// symplectically (on the subgroup for k <= n, on the orthocomplement
/// otherwise).
Subgroup random_grassmannian(int n, int k, Rng& rng);

/// Coordinate-aligned representative of G(H^n, k): span{e_1..e_k} for
/// horizontal k, and for vertical k the subgroup whose orthocomplement is
/// span{e_1..e_{2n-k+1}}.
Subgroup standard_grassmannian(int n, int k);

}  // namespace hgeom
