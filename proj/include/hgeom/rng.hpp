#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>

namespace hgeom {

/// Deterministic random stream (xoshiro256++ seeded through splitmix64).
/// All draws are pinned arithmetic, so identical seeds give byte-identical
/// output across platforms and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0,1).
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via the polar method; one spare draw is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  Eigen::VectorXd normal_vector(int dim) {
    Eigen::VectorXd g(dim);
    for (int i = 0; i < dim; ++i) g(i) = normal();
    return g;
  }

  /// Uniform point in the Euclidean unit ball of the given dimension.
  Eigen::VectorXd ball_point(int dim) {
    if (dim == 0) return Eigen::VectorXd(0);
    Eigen::VectorXd g = normal_vector(dim);
    const double norm = g.norm();
    if (norm == 0.0) return Eigen::VectorXd::Zero(dim);
    return g * (std::pow(uniform(), 1.0 / dim) / norm);
  }

  int uniform_int(int n) { return int(next_u64() % std::uint64_t(n)); }

  /// Independent stream derived from this seed and a stream index.
  static Rng split(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed;
    std::uint64_t a = splitmix64(x);
    x = stream + 0x9e3779b97f4a7c15ULL;
    std::uint64_t b = splitmix64(x);
    return Rng(a ^ rotl(b, 31));
  }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hgeom
