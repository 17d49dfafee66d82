#include "hgeom/subgroup.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "hgeom/region.hpp"

namespace hgeom {

namespace {

constexpr double kIsotropyTol = 1e-10;
constexpr double kRankTol = 1e-8;

Eigen::MatrixXd orthonormal_span(const Eigen::MatrixXd& m) {
  if (m.cols() == 0) return m;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(1e-10);
  if (qr.rank() < m.cols())
    throw InvalidInput("spanning set is rank deficient");
  return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

}  // namespace

double isotropy_residual(const Eigen::MatrixXd& basis) {
  double worst = 0.0;
  for (int i = 0; i < basis.cols(); ++i) {
    const Eigen::VectorXd jb = symplectic_image(basis.col(i));
    for (int j = i + 1; j < basis.cols(); ++j)
      worst = std::max(worst, std::abs(basis.col(j).dot(jb)));
  }
  return worst;
}

Subgroup make_subgroup(SubgroupKind kind, const Eigen::MatrixXd& span_vectors, int n) {
  if (n <= 0) throw InvalidInput("make_subgroup: n must be positive");
  Eigen::MatrixXd cols = span_vectors;
  if (cols.size() == 0) cols = Eigen::MatrixXd(2 * n, 0);
  if (cols.rows() != 2 * n)
    throw InvalidInput("make_subgroup: vectors must have length 2n");
  Eigen::MatrixXd basis = orthonormal_span(cols);
  if (kind == SubgroupKind::Horizontal && isotropy_residual(basis) > kIsotropyTol)
    throw NotASubgroup("horizontal span is not isotropic");
  if (kind == SubgroupKind::Vertical && basis.cols() > 2 * n)
    throw InvalidInput("make_subgroup: too many vectors");
  return Subgroup{kind, std::move(basis)};
}

Eigen::MatrixXd orthocomplement_basis(const Eigen::MatrixXd& basis, int n) {
  const int rows = 2 * n;
  const int m = int(basis.cols());
  if (m == 0) return Eigen::MatrixXd::Identity(rows, rows);
  if (m == rows) return Eigen::MatrixXd(rows, 0);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(rows - m);
}

Eigen::MatrixXd symplectic_orthonormalize(const Eigen::MatrixXd& columns) {
  Eigen::MatrixXd b(columns.rows(), columns.cols());
  for (int j = 0; j < columns.cols(); ++j) {
    Eigen::VectorXd w = columns.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < j; ++i) {
        w -= b.col(i).dot(w) * b.col(i);
        const Eigen::VectorXd jb = symplectic_image(b.col(i));
        w -= jb.dot(w) * jb;
      }
    }
    const double norm = w.norm();
    if (norm < 1e-8 * std::max(1.0, columns.col(j).norm()))
      throw InvalidInput("symplectic orthonormalization degenerated");
    b.col(j) = w / norm;
  }
  return b;
}

Subgroup complement(const Subgroup& s) {
  Eigen::MatrixXd u = orthocomplement_basis(s.basis, s.n());
  if (s.kind == SubgroupKind::Vertical) {
    if (isotropy_residual(u) > kIsotropyTol)
      throw NotInGrassmannian("orthocomplement of the vertical part is not isotropic");
    return Subgroup{SubgroupKind::Horizontal, std::move(u)};
  }
  return Subgroup{SubgroupKind::Vertical, std::move(u)};
}

bool is_complementary_pair(const Subgroup& w, const Subgroup& v) {
  if (w.kind != SubgroupKind::Vertical || v.kind != SubgroupKind::Horizontal)
    return false;
  if (w.n() != v.n()) return false;
  const int dim = 2 * w.n();
  if (w.linear_dim() + v.linear_dim() != dim) return false;
  Eigen::MatrixXd m(dim, dim);
  m << w.basis, v.basis;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(dim - 1) > kRankTol;
}

bool is_in_grassmannian(const Subgroup& s) {
  const int n = s.n();
  const int k = s.k();
  if (s.kind == SubgroupKind::Horizontal) return k >= 1 && k <= n;
  if (k < n + 1 || k > 2 * n + 1) return false;
  return isotropy_residual(orthocomplement_basis(s.basis, n)) <= kIsotropyTol;
}

bool same_span(const Subgroup& a, const Subgroup& b) {
  if (a.kind != b.kind || a.n() != b.n() || a.linear_dim() != b.linear_dim())
    return false;
  const Eigen::MatrixXd pa = a.basis * a.basis.transpose();
  const Eigen::MatrixXd pb = b.basis * b.basis.transpose();
  return (pa - pb).norm() <= 1e-8;
}

double membership_residual(const Subgroup& s, const HPoint& p) {
  const Eigen::VectorXd nearest = s.basis * (s.basis.transpose() * p.horiz);
  const double horiz = (p.horiz - nearest).norm();
  if (s.kind == SubgroupKind::Vertical) return horiz;
  // Coordinate-scale residual; the homogeneous square root would amplify
  // float noise beyond any usable tolerance.
  return std::max(horiz, std::abs(p.vert - 2.0 * omega(nearest, p.horiz)));
}

SplitPair make_split_pair(const Subgroup& w, const Subgroup& v, const CEstOptions& opts) {
  if (w.n() != v.n()) throw InvalidInput("make_split_pair: dimension mismatch");
  if (w.kind != SubgroupKind::Vertical || v.kind != SubgroupKind::Horizontal)
    throw InvalidInput("make_split_pair: expected (vertical W, horizontal V)");
  const int dim = 2 * w.n();
  const int kw = w.linear_dim();
  if (kw + v.linear_dim() != dim)
    throw InvalidInput("make_split_pair: W' + V' does not have full dimension");
  Eigen::MatrixXd m(dim, dim);
  m << w.basis, v.basis;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  if (svd.singularValues()(dim - 1) <= kRankTol)
    throw InvalidInput("make_split_pair: W' + V' is rank deficient");

  SplitPair pair;
  pair.W = w;
  pair.V = v;
  const Eigen::MatrixXd minv = m.partialPivLu().inverse();
  pair.horiz_proj_v = v.basis * minv.bottomRows(dim - kw);
  if (opts.sphere_samples > 0)
    pair.c_est = estimate_projection_constant(pair, opts);
  return pair;
}

HPoint project_v(const SplitPair& pair, const HPoint& p) {
  return HPoint(pair.horiz_proj_v * p.horiz, 0.0);
}

HPoint project_w(const SplitPair& pair, const HPoint& p) {
  return mul(p, inv(project_v(pair, p)));
}

std::pair<HPoint, HPoint> project_split(const SplitPair& pair, const HPoint& p) {
  HPoint v = project_v(pair, p);
  return {mul(p, inv(v)), v};
}

namespace {

// Sphere map from the rho design: a Euclidean-sphere sample g becomes
// (g', sign(g_t) g_t^2) normalized to homogeneous norm 1, covering both
// norm-active regimes.
HPoint to_unit_sphere(const Eigen::VectorXd& g) {
  const int dim = int(g.size());
  HPoint q(g.head(dim - 1), g(dim - 1) >= 0 ? g(dim - 1) * g(dim - 1)
                                            : -g(dim - 1) * g(dim - 1));
  const double norm = hom_norm(q);
  if (norm == 0.0) return q;
  return dilate(1.0 / norm, q);
}

// Low-discrepancy Gaussian stream: Weyl additive recurrence (generalized
// golden ratio) pushed through Box-Muller.
class WeylGaussian {
 public:
  WeylGaussian(int dim, std::uint64_t seed) : dim_(dim), alpha_(dim + 1) {
    double phi = 1.5;
    for (int it = 0; it < 64; ++it)
      phi = std::pow(1.0 + phi, 1.0 / (dim_ + 2));
    double a = 1.0;
    for (int j = 0; j <= dim_; ++j) {
      a /= phi;
      alpha_[j] = a;
    }
    index_ = double(seed % 1048576ULL);
  }

  Eigen::VectorXd next() {
    index_ += 1.0;
    Eigen::VectorXd g(dim_);
    for (int j = 0; j < dim_; j += 2) {
      const double u1 = std::max(frac(0.5 + index_ * alpha_[j]), 1e-300);
      const double u2 = frac(0.5 + index_ * alpha_[j + 1]);
      const double r = std::sqrt(-2.0 * std::log(u1));
      g(j) = r * std::cos(2.0 * M_PI * u2);
      if (j + 1 < dim_) g(j + 1) = r * std::sin(2.0 * M_PI * u2);
    }
    return g;
  }

 private:
  static double frac(double x) { return x - std::floor(x); }
  int dim_;
  std::vector<double> alpha_;
  double index_ = 0.0;
};

struct OrthoProjector {
  bool vertical = false;
  Eigen::MatrixXd pv;  // orthoprojector onto the horizontal part of the V leg

  HPoint apply(const HPoint& p) const {
    HPoint v(pv * p.horiz, 0.0);
    return vertical ? mul(p, inv(v)) : v;
  }
};

OrthoProjector make_ortho_projector(const Subgroup& s) {
  if (s.kind == SubgroupKind::Horizontal)
    return {false, s.basis * s.basis.transpose()};
  const Eigen::MatrixXd u = orthocomplement_basis(s.basis, s.n());
  return {true, u * u.transpose()};
}

}  // namespace

HPoint project_onto(const Subgroup& s, const HPoint& p) {
  return make_ortho_projector(s).apply(p);
}

RhoResult rho_metric_detailed(const Subgroup& s1, const Subgroup& s2,
                              const RhoOptions& opts, std::span<const HPoint> extra) {
  if (s1.n() != s2.n()) throw InvalidInput("rho_metric: dimension mismatch");
  if (!is_in_grassmannian(s1) || !is_in_grassmannian(s2))
    throw NotInGrassmannian("rho_metric: arguments must lie in the Grassmannian");
  if (s1.k() != s2.k()) throw InvalidInput("rho_metric: subgroups must share k");

  const OrthoProjector p1 = make_ortho_projector(s1);
  const OrthoProjector p2 = make_ortho_projector(s2);
  const auto score = [&](const HPoint& x) { return dist(p1.apply(x), p2.apply(x)); };

  const int dim = 2 * s1.n() + 1;
  WeylGaussian stream(dim, opts.seed);

  struct Candidate {
    double value;
    HPoint point;
  };
  std::vector<Candidate> best;
  const auto consider = [&](const HPoint& x) {
    const double v = score(x);
    if (int(best.size()) < opts.refine_starts) {
      best.push_back({v, x});
      std::sort(best.begin(), best.end(),
                [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
    } else if (v > best.back().value) {
      best.back() = {v, x};
      std::sort(best.begin(), best.end(),
                [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
    }
  };

  for (int i = 0; i < opts.samples; ++i) {
    const HPoint x = to_unit_sphere(stream.next());
    if (hom_norm(x) == 0.0) continue;
    consider(x);
    consider(inv(x));  // inversion-closed schedule
  }
  for (const HPoint& x : extra)
    if (hom_norm(x) > 0.0) consider(x);

  RhoResult result;
  if (best.empty()) return result;
  result.value = -1.0;

  for (const Candidate& start : best) {
    Eigen::VectorXd z(dim);
    z.head(dim - 1) = start.point.horiz;
    z(dim - 1) = start.point.vert;
    double value = start.value;
    double step = 0.25;
    for (int round = 0; round < opts.refine_rounds && step > 1e-7; ++round) {
      bool improved = false;
      for (int j = 0; j < dim; ++j) {
        for (const double sign : {1.0, -1.0}) {
          Eigen::VectorXd zt = z;
          zt(j) += sign * step;
          HPoint q(zt.head(dim - 1), zt(dim - 1));
          const double norm = hom_norm(q);
          if (norm == 0.0) continue;
          const HPoint x = dilate(1.0 / norm, q);
          const double v = score(x);
          if (v > value) {
            value = v;
            z.head(dim - 1) = x.horiz;
            z(dim - 1) = x.vert;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (value > result.value) {
      result.value = value;
      result.argmax = HPoint(z.head(dim - 1), z(dim - 1));
      result.tolerance = step;
    }
  }
  return result;
}

double rho_metric(const Subgroup& s1, const Subgroup& s2, const RhoOptions& opts) {
  return rho_metric_detailed(s1, s2, opts).value;
}

double estimate_projection_constant(const SplitPair& pair, const CEstOptions& opts) {
  Rng rng(opts.seed);
  const int dim = 2 * pair.W.n() + 1;

  // Both sandwich ratios are 0-homogeneous; the constant must sit under each.
  const auto ratios = [&](const HPoint& x, double& r1, double& r2) {
    r1 = r2 = std::numeric_limits<double>::infinity();
    const HPoint v = project_v(pair, x);
    const double nv = hom_norm(v);
    if (nv > 1e-12) r1 = dist_to_subgroup(x, pair.W) / nv;
    const double nc = hom_norm(mul(inv(v), x));
    if (nc > 1e-12) r2 = dist_to_subgroup(x, pair.V) / nc;
  };

  struct Candidate {
    double value;
    HPoint point;
  };
  std::vector<Candidate> worst;
  double best = std::numeric_limits<double>::infinity();
  const auto consider = [&](const HPoint& x) {
    double r1, r2;
    ratios(x, r1, r2);
    const double r = std::min(r1, r2);
    if (!std::isfinite(r)) return;
    best = std::min(best, r);
    if (int(worst.size()) < opts.refine_starts) {
      worst.push_back({r, x});
      std::sort(worst.begin(), worst.end(),
                [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
    } else if (r < worst.back().value) {
      worst.back() = {r, x};
      std::sort(worst.begin(), worst.end(),
                [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
    }
  };

  for (int i = 0; i < opts.sphere_samples; ++i) {
    const HPoint x = to_unit_sphere(rng.normal_vector(dim));
    if (hom_norm(x) == 0.0) continue;
    consider(x);
  }

  for (const Candidate& start : worst) {
    Eigen::VectorXd z(dim);
    z.head(dim - 1) = start.point.horiz;
    z(dim - 1) = start.point.vert;
    double value = start.value;
    double step = 0.2;
    for (int round = 0; round < opts.refine_rounds && step > 1e-6; ++round) {
      bool improved = false;
      for (int j = 0; j < dim; ++j) {
        for (const double sign : {1.0, -1.0}) {
          Eigen::VectorXd zt = z;
          zt(j) += sign * step;
          HPoint q(zt.head(dim - 1), zt(dim - 1));
          const double norm = hom_norm(q);
          if (norm == 0.0) continue;
          const HPoint x = dilate(1.0 / norm, q);
          double r1, r2;
          ratios(x, r1, r2);
          const double v = std::min(r1, r2);
          if (v < value) {
            value = v;
            z.head(dim - 1) = x.horiz;
            z(dim - 1) = x.vert;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    best = std::min(best, value);
  }

  if (!std::isfinite(best) || best <= 0.0)
    throw InsufficientData("projection constant estimate degenerated");
  return 0.99 * best;
}

Subgroup random_grassmannian(int n, int k, Rng& rng) {
  if (k >= 1 && k <= n) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      Eigen::MatrixXd g(2 * n, k);
      for (int j = 0; j < k; ++j) g.col(j) = rng.normal_vector(2 * n);
      try {
        return make_subgroup(SubgroupKind::Horizontal, symplectic_orthonormalize(g), n);
      } catch (const InvalidInput&) {
      }
    }
    throw InsufficientData("random_grassmannian: repeated degenerate frames");
  }
  if (k >= n + 1 && k <= 2 * n + 1) {
    const int cdim = 2 * n - (k - 1);
    if (cdim == 0)
      return make_subgroup(SubgroupKind::Vertical,
                           Eigen::MatrixXd::Identity(2 * n, 2 * n), n);
    for (int attempt = 0; attempt < 64; ++attempt) {
      Eigen::MatrixXd g(2 * n, cdim);
      for (int j = 0; j < cdim; ++j) g.col(j) = rng.normal_vector(2 * n);
      try {
        const Eigen::MatrixXd u = symplectic_orthonormalize(g);
        return make_subgroup(SubgroupKind::Vertical, orthocomplement_basis(u, n), n);
      } catch (const InvalidInput&) {
      }
    }
    throw InsufficientData("random_grassmannian: repeated degenerate frames");
  }
  throw InvalidInput("random_grassmannian: k is not admissible for G(H^n, k)");
}

Subgroup standard_grassmannian(int n, int k) {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  if (k >= 1 && k <= n)
    return make_subgroup(SubgroupKind::Horizontal, id.leftCols(k), n);
  if (k >= n + 1 && k <= 2 * n + 1)
    return make_subgroup(SubgroupKind::Vertical, id.rightCols(k - 1), n);
  throw InvalidInput("standard_grassmannian: k is not admissible for G(H^n, k)");
}

}  // namespace hgeom
