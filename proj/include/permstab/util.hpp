#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace permstab {

/// Seeded uniform stream with a fixed bits-to-double mapping. Avoids
/// std::uniform_real_distribution, whose output is implementation-defined,
/// so reports are reproducible across standard libraries.
class UniformRng {
 public:
  explicit UniformRng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double range(double lo, double hi) { return lo + (hi - lo) * unit(); }

  Eigen::VectorXd vector(Eigen::Index n, double lo, double hi) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = range(lo, hi);
    return v;
  }

  /// Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(unit() * static_cast<double>(hi - lo + 1));
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace permstab
