#include "hgeom/tangent.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "hgeom/region.hpp"

namespace hgeom {

namespace {

void validate_radii(const std::vector<double>& radii) {
  if (radii.empty()) throw InvalidInput("tangent fit: empty radius schedule");
  for (double r : radii)
    if (!(r > 0.0)) throw InvalidInput("tangent fit: radii must be positive");
  for (size_t i = 0; i + 1 < radii.size(); ++i)
    if (!(radii[i] > radii[i + 1]))
      throw InvalidInput("tangent fit: radii must be strictly decreasing");
}

// Cloud points near p, expressed relative to p and bucketed by the radius
// schedule once, so candidate subgroups are scored without re-querying.
struct LocalPatch {
  std::vector<HPoint> rel;     // p^{-1} q, sorted by homogeneous norm
  std::vector<double> norm;
  std::vector<double> weight;
  std::vector<size_t> bucket;  // rel[0..bucket[i]) lie in B(p, radii[i])
  std::vector<double> radii;
  double norm_power = 0.0;     // k_m of the cloud

  std::vector<double> scores(const Subgroup& v, double aperture) const {
    std::vector<double> mass(radii.size(), 0.0);
    for (size_t i = 0; i < rel.size(); ++i) {
      if (dist_to_subgroup(rel[i], v) <= aperture * norm[i] + kBoundarySlack)
        continue;
      for (size_t r = 0; r < radii.size(); ++r)
        if (i < bucket[r]) mass[r] += weight[i];
    }
    for (size_t r = 0; r < radii.size(); ++r)
      mass[r] /= std::pow(radii[r], norm_power);
    return mass;
  }

  double total_score(const Subgroup& v, double aperture) const {
    const std::vector<double> s = scores(v, aperture);
    return std::accumulate(s.begin(), s.end(), 0.0);
  }

  // Tie-breaker on the flat zero-score region: the worst aperture ratio
  // max d(rel, V)/||rel|| is minimized at the region's centre, so exact ties
  // in mass still carry a descent direction toward the true subgroup.
  double worst_ratio(const Subgroup& v) const {
    double worst = 0.0;
    for (size_t i = 0; i < rel.size(); ++i) {
      if (norm[i] < 1e-9) continue;
      worst = std::max(worst, dist_to_subgroup(rel[i], v) / norm[i]);
    }
    return worst;
  }
};

LocalPatch make_patch(const PointCloud& cloud, const MetricIndex& index,
                      const HPoint& p, const std::vector<double>& radii) {
  LocalPatch patch;
  patch.radii = radii;
  patch.norm_power = double(cloud.meta.k_m);
  std::vector<int> ids = index.ball(p, radii.front());
  const HPoint pinv = inv(p);
  std::vector<std::pair<double, int>> order;
  order.reserve(ids.size());
  for (int id : ids)
    order.emplace_back(dist(cloud.points[id], p), id);
  std::sort(order.begin(), order.end());
  for (const auto& [d, id] : order) {
    patch.rel.push_back(mul(pinv, cloud.points[id]));
    patch.norm.push_back(d);
    patch.weight.push_back(cloud.weights(id));
  }
  patch.bucket.resize(radii.size());
  for (size_t r = 0; r < radii.size(); ++r) {
    const auto it = std::upper_bound(patch.norm.begin(), patch.norm.end(), radii[r]);
    patch.bucket[r] = size_t(it - patch.norm.begin());
  }
  return patch;
}

// A Grassmannian element is represented through its isotropic parameter
// frame: the subgroup's own part for k <= n, the orthocomplement for
// vertical targets.
struct FrameParam {
  int n = 1;
  int k = 1;
  bool vertical = false;
  int frame_cols() const { return vertical ? 2 * n - (k - 1) : k; }

  Subgroup realize(const Eigen::MatrixXd& frame) const {
    if (!vertical) return Subgroup{SubgroupKind::Horizontal, frame};
    return Subgroup{SubgroupKind::Vertical, orthocomplement_basis(frame, n)};
  }

  Eigen::MatrixXd random_frame(Rng& rng) const {
    const int cols = frame_cols();
    for (int attempt = 0; attempt < 64; ++attempt) {
      Eigen::MatrixXd g(2 * n, cols);
      for (int j = 0; j < cols; ++j) g.col(j) = rng.normal_vector(2 * n);
      try {
        return symplectic_orthonormalize(g);
      } catch (const InvalidInput&) {
      }
    }
    throw InsufficientData("tangent fit: degenerate random frames");
  }

  // Rotates the frame by a small random perturbation, re-enforcing exact
  // isotropy; magnitude sigma decays over the budget.
  Eigen::MatrixXd perturb(const Eigen::MatrixXd& frame, double sigma, Rng& rng) const {
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::MatrixXd g = frame;
      for (int j = 0; j < g.cols(); ++j)
        g.col(j) += sigma * rng.normal_vector(int(g.rows()));
      try {
        return symplectic_orthonormalize(g);
      } catch (const InvalidInput&) {
      }
    }
    return frame;
  }
};

}  // namespace

double tangent_score(const PointCloud& cloud, const MetricIndex& index,
                     const HPoint& p, const Subgroup& v, double aperture,
                     const std::vector<double>& radii) {
  validate_radii(radii);
  return make_patch(cloud, index, p, radii).total_score(v, aperture);
}

TangentReport fit_tangent(const PointCloud& cloud, const MetricIndex& index,
                          const HPoint& p, int k, const FitOptions& opts) {
  validate_radii(opts.radii);
  if (opts.budget < 1) throw InvalidInput("tangent fit: budget must be >= 1");
  if (!(opts.aperture > 0.0 && opts.aperture < 1.0))
    throw InvalidInput("tangent fit: aperture must lie in (0,1)");
  const int n = cloud.meta.n;
  if (p.n() != n) throw InvalidInput("tangent fit: point dimension mismatch");
  if (k < 1 || k > 2 * n + 1)
    throw InvalidInput("tangent fit: k not admissible for G(H^n, k)");

  const LocalPatch patch = make_patch(cloud, index, p, opts.radii);
  if (int(patch.rel.size()) < opts.min_ball_points)
    throw InsufficientData("tangent fit: fewer than " +
                           std::to_string(opts.min_ball_points) +
                           " cloud points in the largest ball");

  FrameParam param{n, k, k > n};
  Rng rng(opts.seed);

  struct Candidate {
    Eigen::MatrixXd frame;
    double score = std::numeric_limits<double>::infinity();
    double ratio = std::numeric_limits<double>::infinity();
  };
  const auto evaluate = [&](Eigen::MatrixXd frame) {
    Candidate c;
    c.frame = std::move(frame);
    const Subgroup candidate = param.realize(c.frame);
    c.score = patch.total_score(candidate, opts.aperture);
    c.ratio = patch.worst_ratio(candidate);
    return c;
  };
  const auto better = [](const Candidate& a, const Candidate& b) {
    return a.score < b.score || (a.score == b.score && a.ratio < b.ratio);
  };

  // Random restarts, keeping a few leaders; each leader is then descended
  // independently, since the best restart alone can sit in a poor basin.
  const int restarts = std::max(4, opts.budget / 4);
  std::vector<Candidate> leaders;
  for (int i = 0; i < std::min(restarts, opts.budget); ++i) {
    Candidate c = evaluate(param.random_frame(rng));
    leaders.push_back(std::move(c));
    std::sort(leaders.begin(), leaders.end(), better);
    if (leaders.size() > 4) leaders.pop_back();
  }

  const int refine_steps = std::max(opts.budget - restarts, 0);
  const int per_leader = std::max(refine_steps / int(leaders.size()), 1);
  Candidate best = leaders.front();
  for (Candidate& leader : leaders) {
    Candidate current = leader;
    for (int i = 0; i < per_leader; ++i) {
      const double frac = per_leader > 1 ? double(i) / double(per_leader - 1) : 1.0;
      const double sigma =
          opts.sigma_hi * std::pow(opts.sigma_lo / opts.sigma_hi, frac);
      Candidate proposal = evaluate(param.perturb(current.frame, sigma, rng));
      if (better(proposal, current)) current = std::move(proposal);
    }
    if (better(current, best)) best = std::move(current);
  }

  TangentReport report;
  report.point = p;
  report.best = param.realize(best.frame);
  const std::vector<double> masses = patch.scores(report.best, opts.aperture);
  for (size_t r = 0; r < opts.radii.size(); ++r)
    report.scores.push_back({opts.radii[r], opts.aperture, masses[r]});
  report.converged = masses.back() <= opts.converge_threshold;
  return report;
}

std::vector<TangentReport> classify_cloud(const PointCloud& cloud, int k,
                                          const FitOptions& opts, int sample_count,
                                          std::uint64_t seed, int threads) {
  validate_radii(opts.radii);
  if (sample_count <= 0 || sample_count > cloud.size())
    throw InvalidInput("classify_cloud: sample_count out of range");

  // Query points drawn without replacement.
  Rng pick(seed);
  std::vector<int> ids(cloud.size());
  std::iota(ids.begin(), ids.end(), 0);
  for (int i = 0; i < sample_count; ++i)
    std::swap(ids[i], ids[i + pick.uniform_int(cloud.size() - i)]);
  ids.resize(sample_count);

  const MetricIndex index(cloud);
  std::vector<TangentReport> reports(sample_count);
  const auto run = [&](int i) {
    FitOptions local = opts;
    local.seed = Rng::split(seed, std::uint64_t(i)).next_u64();
    try {
      reports[i] = fit_tangent(cloud, index, cloud.points[ids[i]], k, local);
    } catch (const InsufficientData& e) {
      reports[i].point = cloud.points[ids[i]];
      reports[i].ok = false;
      reports[i].error = e.what();
    }
  };

  if (threads <= 1) {
    for (int i = 0; i < sample_count; ++i) run(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (int i = next++; i < sample_count; i = next++) run(i);
      });
    for (auto& th : pool) th.join();
  }
  return reports;
}

}  // namespace hgeom
