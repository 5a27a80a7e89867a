#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "permstab/eval.hpp"
#include "permstab/matrix.hpp"
#include "permstab/roots.hpp"
#include "permstab/util.hpp"

namespace permstab {

struct CertifyConfig {
  int samples = 1000;
  std::uint64_t seed = 42;
  double tol = 1e-9;
  double imag_tol = 1e-6;
  double real_tol = 1e-8;
};

/// Roots of a bivariate restriction's univariate form with a verdict:
/// pass iff every root is real and non-positive within scaled tolerances.
struct RootCertificate {
  Eigen::VectorXd coefficients;
  std::vector<Complex> roots;
  double max_imag_abs = 0.0;        // max |Im(root)| / (1 + |root|)
  double max_real_part = 0.0;       // max Re(root) / (1 + |root|)
  bool pass = false;
};

/// Worst sample of the modulus-dominance check |F(x+iy)| >= F(x).
struct DominanceSample {
  Eigen::VectorXd x, y;
  double lhs = 0.0, rhs = 0.0, margin = 0.0;
};

struct DominanceResult {
  bool pass = false;
  int samples = 0;
  double worst_margin = std::numeric_limits<double>::infinity();  // relative
  DominanceSample worst;
};

struct ConcavityResult {
  bool pass = false;
  int samples = 0;
  double worst_midpoint_margin = std::numeric_limits<double>::infinity();
  double worst_power_mean_margin = std::numeric_limits<double>::infinity();
};

struct RootCheckResult {
  bool pass = false;
  int samples = 0;
  double worst_scaled_imag = 0.0;
  double worst_scaled_real = -std::numeric_limits<double>::infinity();
};

struct CertifyReport {
  bool zero_polynomial = false;
  DominanceResult dominance;
  ConcavityResult concavity;
  RootCheckResult root_location;
  std::uint64_t seed = 0;
  double tol = 0.0;

  [[nodiscard]] bool all_pass() const {
    return !zero_polynomial && dominance.pass && concavity.pass && root_location.pass;
  }
};

/// Coefficients of q(t) = F(tX + Y), a univariate polynomial of degree <= M,
/// recovered from evaluations at the integer nodes t = 0..M by a direct
/// Vandermonde solve. Conditioning of the integer nodes is the limiting
/// factor and is acceptable for M <= 24.
inline Eigen::VectorXd restrict_bivariate(const NonNegMatrix& a,
                                          const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& y) {
  check_length(a, x.size(), "X");
  check_length(a, y.size(), "Y");
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (x[j] < 0.0 || y[j] < 0.0)
      throw std::domain_error("restrict_bivariate: X and Y must be non-negative");
    if (x[j] + y[j] <= 0.0)
      throw std::domain_error("restrict_bivariate: X + Y must be strictly positive");
  }
  const int m = a.rows();
  Eigen::MatrixXd vand(m + 1, m + 1);
  Eigen::VectorXd vals(m + 1);
  for (int t = 0; t <= m; ++t) {
    vals[t] = eval_F_fast(a, static_cast<double>(t) * x + y);
    double power = 1.0;
    for (int k = 0; k <= m; ++k) {
      vand(t, k) = power;
      power *= static_cast<double>(t);
    }
  }
  return vand.fullPivLu().solve(vals);
}

namespace detail {

// Replace clusters of nearly coincident roots by their common centroid.
// A k-fold root is only located to about eps^(1/k) by any double-precision
// solver, but the cluster centroid cancels the leading error term; for a
// conjugate cluster it also cancels the spurious imaginary parts.
inline void collapse_root_clusters(std::vector<Complex>& roots) {
  const std::size_t n = roots.size();
  if (n < 2) return;
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double scale = 1.0 + std::abs(roots[i]);
      if (std::abs(roots[i] - roots[j]) <= 1e-4 * scale) parent[find(j)] = find(i);
    }
  std::vector<Complex> sum(n, 0.0);
  std::vector<int> count(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    sum[r] += roots[i];
    ++count[r];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (count[r] > 1) roots[i] = sum[r] / static_cast<double>(count[r]);
  }
}

}  // namespace detail

/// Root-location certificate for a univariate coefficient vector (low to
/// high). Leading and trailing near-zero coefficients are trimmed relative to
/// the largest one; each trimmed trailing coefficient contributes an exact
/// root at zero.
inline RootCertificate certify_roots(const Eigen::VectorXd& coeffs,
                                     double imag_tol = 1e-6,
                                     double real_tol = 1e-8) {
  const double scale = coeffs.size() > 0 ? coeffs.cwiseAbs().maxCoeff() : 0.0;
  if (scale == 0.0)
    throw std::domain_error("certify_roots: all-zero coefficient vector");
  const double trim = 1e-12 * scale;
  int hi = static_cast<int>(coeffs.size()) - 1;
  while (hi > 0 && std::abs(coeffs[hi]) <= trim) --hi;
  int lo = 0;
  while (lo < hi && std::abs(coeffs[lo]) <= trim) ++lo;

  RootCertificate cert;
  cert.coefficients = coeffs;
  for (int k = 0; k < lo; ++k) cert.roots.emplace_back(0.0, 0.0);
  if (hi > lo) {
    const Eigen::VectorXd sub = coeffs.segment(lo, hi - lo + 1);
    auto found = aberth_roots(sub);
    detail::collapse_root_clusters(found);
    cert.roots.insert(cert.roots.end(), found.begin(), found.end());
  }

  cert.pass = true;
  cert.max_real_part = cert.roots.empty() ? 0.0 : -std::numeric_limits<double>::infinity();
  for (const Complex& r : cert.roots) {
    const double s = 1.0 + std::abs(r);
    cert.max_imag_abs = std::max(cert.max_imag_abs, std::abs(r.imag()) / s);
    cert.max_real_part = std::max(cert.max_real_part, r.real() / s);
    if (std::abs(r.imag()) > imag_tol * s || r.real() > real_tol * s) cert.pass = false;
  }
  return cert;
}

/// Sampling check of |F(x+iy)| >= F(x) for x >= 0. x is drawn from a positive
/// box (0.1, 1.1)^N to stay off the boundary, y from (-1, 1)^N.
inline DominanceResult certify_dominance(const NonNegMatrix& a, int samples,
                                         std::uint64_t seed, double tol = 1e-9) {
  if (is_zero_polynomial(a))
    throw std::domain_error("certify_dominance: F is identically zero");
  const int n = a.cols();
  UniformRng rng(seed);
  DominanceResult res;
  res.samples = samples;
  res.pass = true;
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd x = rng.vector(n, 0.1, 1.1);
    const Eigen::VectorXd y = rng.vector(n, -1.0, 1.0);
    Vec<Complex> z(n);
    for (int j = 0; j < n; ++j) z[j] = Complex(x[j], y[j]);
    const double lhs = std::abs(eval_F_complex(a, z));
    const double rhs = eval_F_fast(a, x);
    const double margin = (lhs - rhs) / std::max(1.0, rhs);
    if (margin < res.worst_margin) {
      res.worst_margin = margin;
      res.worst = DominanceSample{x, y, lhs, rhs, lhs - rhs};
    }
    if (margin < -tol) res.pass = false;
  }
  return res;
}

/// Sampling check of midpoint log-concavity, F((u+v)/2)^2 >= F(u) F(v), and of
/// concavity of F^(1/M), both at relative tolerance tol.
inline ConcavityResult certify_log_concavity(const NonNegMatrix& a, int samples,
                                             std::uint64_t seed, double tol = 1e-9) {
  if (is_zero_polynomial(a))
    throw std::domain_error("certify_log_concavity: F is identically zero");
  const int n = a.cols();
  const double inv_m = 1.0 / a.rows();
  UniformRng rng(seed);
  ConcavityResult res;
  res.samples = samples;
  res.pass = true;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd u = rng.vector(n, 0.0, 1.0);
    Eigen::VectorXd v = rng.vector(n, 0.0, 1.0);
    for (int guard = 0; guard < 100 && (u + v).minCoeff() <= 0.0; ++guard) {
      u = rng.vector(n, 0.0, 1.0);
      v = rng.vector(n, 0.0, 1.0);
    }
    const double fu = eval_F_fast(a, u);
    const double fv = eval_F_fast(a, v);
    const double fm = eval_F_fast(a, 0.5 * (u + v));

    const double mid_margin = (fm * fm - fu * fv) / std::max(1.0, fu * fv);
    res.worst_midpoint_margin = std::min(res.worst_midpoint_margin, mid_margin);
    if (fm * fm < fu * fv * (1.0 - tol)) res.pass = false;

    const double lhs = std::pow(fm, inv_m);
    const double rhs = 0.5 * (std::pow(fu, inv_m) + std::pow(fv, inv_m));
    const double pm_margin = (lhs - rhs) / std::max(1.0, rhs);
    res.worst_power_mean_margin = std::min(res.worst_power_mean_margin, pm_margin);
    if (lhs < rhs * (1.0 - tol)) res.pass = false;
  }
  return res;
}

/// Zero detection, modulus dominance, log-concavity, and root certificates
/// over random bivariate restrictions, aggregated into one report. A zero
/// polynomial is flagged and the remaining checks are skipped.
inline CertifyReport certify_all(const NonNegMatrix& a, const CertifyConfig& cfg = {}) {
  CertifyReport rep;
  rep.seed = cfg.seed;
  rep.tol = cfg.tol;
  rep.zero_polynomial = is_zero_polynomial(a);
  if (rep.zero_polynomial) return rep;

  rep.dominance = certify_dominance(a, cfg.samples, cfg.seed, cfg.tol);
  rep.concavity = certify_log_concavity(a, cfg.samples, cfg.seed + 1, cfg.tol);

  const int n = a.cols();
  UniformRng rng(cfg.seed + 2);
  rep.root_location.pass = true;
  for (int s = 0; s < cfg.samples; ++s) {
    Eigen::VectorXd x = rng.vector(n, 0.0, 1.0);
    Eigen::VectorXd y = rng.vector(n, 0.0, 1.0);
    for (int guard = 0; guard < 100 && (x + y).minCoeff() <= 0.0; ++guard) {
      x = rng.vector(n, 0.0, 1.0);
      y = rng.vector(n, 0.0, 1.0);
    }
    const Eigen::VectorXd coeffs = restrict_bivariate(a, x, y);
    if (coeffs.cwiseAbs().maxCoeff() == 0.0) continue;  // degenerate restriction
    const RootCertificate cert = certify_roots(coeffs, cfg.imag_tol, cfg.real_tol);
    ++rep.root_location.samples;
    rep.root_location.worst_scaled_imag =
        std::max(rep.root_location.worst_scaled_imag, cert.max_imag_abs);
    if (!cert.roots.empty())
      rep.root_location.worst_scaled_real =
          std::max(rep.root_location.worst_scaled_real, cert.max_real_part);
    if (!cert.pass) rep.root_location.pass = false;
  }
  return rep;
}

}  // namespace permstab
