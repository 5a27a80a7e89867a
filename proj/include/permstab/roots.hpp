#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace permstab {

/// All complex roots of sum_k coeffs[k] t^k (coeffs low to high, leading
/// coefficient nonzero) by Aberth-Ehrlich simultaneous iteration.
/// Initial guesses sit on a circle at the Cauchy bound with an asymmetric
/// angle offset; updates are applied in place (Gauss-Seidel sweep).
inline std::vector<std::complex<double>> aberth_roots(const Eigen::VectorXd& coeffs,
                                                      int max_iters = 500,
                                                      double tol = 1e-12) {
  const int deg = static_cast<int>(coeffs.size()) - 1;
  if (deg < 1) throw std::invalid_argument("aberth_roots: degree must be at least 1");
  if (coeffs[deg] == 0.0)
    throw std::invalid_argument("aberth_roots: leading coefficient must be nonzero");

  const Eigen::VectorXd c = coeffs / coeffs[deg];  // monic
  double radius = 0.0;
  for (int k = 0; k < deg; ++k) radius = std::max(radius, std::abs(c[k]));
  radius = 1.0 + radius;  // Cauchy bound

  std::vector<std::complex<double>> z(deg);
  for (int k = 0; k < deg; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / deg + 0.4;
    z[k] = std::polar(radius * 0.8, angle);
  }

  for (int iter = 0; iter < max_iters; ++iter) {
    double worst = 0.0;
    for (int k = 0; k < deg; ++k) {
      // Horner for p and p' at z[k]
      std::complex<double> p = 1.0, dp = 0.0;
      for (int j = deg - 1; j >= 0; --j) {
        dp = dp * z[k] + p;
        p = p * z[k] + c[j];
      }
      if (p == 0.0) continue;
      if (dp == 0.0) {  // stationary start; nudge off the critical point
        z[k] += std::complex<double>(1e-8 * (1.0 + std::abs(z[k])), 1e-8);
        worst = 1.0;
        continue;
      }
      const std::complex<double> w = p / dp;
      std::complex<double> s = 0.0;
      for (int j = 0; j < deg; ++j)
        if (j != k) s += 1.0 / (z[k] - z[j]);
      const std::complex<double> denom = 1.0 - w * s;
      const std::complex<double> delta = (std::abs(denom) < 1e-300) ? w : w / denom;
      z[k] -= delta;
      worst = std::max(worst, std::abs(delta) / (1.0 + std::abs(z[k])));
    }
    if (worst <= tol) break;
  }
  return z;
}

}  // namespace permstab
