#pragma once

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "permstab/matrix.hpp"

namespace permstab {

using Complex = std::complex<double>;

template <typename Scalar>
using Vec = Eigen::Vector<Scalar, Eigen::Dynamic>;

namespace detail {

// Coefficient of x_1...x_M in prod_j (b_j + w_j * (sum_i a(i,j) x_i)),
// extracted by inclusion-exclusion over row subsets T: substituting x_i = s
// on T reduces each term to [s^M] prod_j (b_j + s w_j rowsum_j(T)), which a
// degree-capped running product collects in O(N M) per subset.
//
// Subsets ascend in binary order and columns run left to right, so the
// summation order is identical for every scalar field (real inputs through
// the complex instantiation reproduce the real result bit for bit).
template <typename Scalar>
Scalar row_subset_coefficient(const Eigen::MatrixXd& a,
                              const Vec<Scalar>& constant,
                              const Vec<Scalar>& slope) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  std::vector<Scalar> poly(static_cast<std::size_t>(m) + 1);
  Scalar total{};
  const std::uint32_t full = std::uint32_t{1} << m;
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    std::fill(poly.begin(), poly.end(), Scalar{});
    poly[0] = Scalar{1};
    for (int j = 0; j < n; ++j) {
      double rowsum = 0.0;
      for (int i = 0; i < m; ++i)
        if (mask & (std::uint32_t{1} << i)) rowsum += a(i, j);
      const Scalar b = constant[j];
      const Scalar c = slope[j] * rowsum;
      for (int k = m; k >= 1; --k) poly[k] = poly[k] * b + poly[k - 1] * c;
      poly[0] *= b;
    }
    const bool negate = ((m - std::popcount(mask)) & 1) != 0;
    total += negate ? -poly[m] : poly[m];
  }
  return total;
}

}  // namespace detail

/// Permanent of a square K x K matrix by Ryser inclusion-exclusion over
/// column subsets, O(2^K K^2). Deterministic summation order.
inline double permanent_square(const Eigen::MatrixXd& b) {
  if (b.rows() != b.cols())
    throw std::invalid_argument("permanent_square requires a square matrix");
  const int k = static_cast<int>(b.rows());
  if (k == 0) return 1.0;
  if (k > kMaxRows)
    throw std::invalid_argument("permanent_square: dimension exceeds supported maximum");
  double total = 0.0;
  const std::uint32_t full = std::uint32_t{1} << k;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    double prod = 1.0;
    for (int i = 0; i < k; ++i) {
      double rowsum = 0.0;
      for (int j = 0; j < k; ++j)
        if (mask & (std::uint32_t{1} << j)) rowsum += b(i, j);
      prod *= rowsum;
    }
    total += ((k - std::popcount(mask)) & 1) ? -prod : prod;
  }
  return total;
}

/// F_A(lambda) = sum over column subsets S of size M of Per(A_S) prod_{j in S}
/// lambda_j, by direct enumeration of all C(N, M) subsets. Reference oracle;
/// exponential in N.
inline double eval_F_bruteforce(const NonNegMatrix& a, const Eigen::VectorXd& lambda) {
  check_length(a, lambda.size(), "lambda");
  const int m = a.rows();
  const int n = a.cols();
  std::vector<int> idx(m);
  for (int i = 0; i < m; ++i) idx[i] = i;
  double total = 0.0;
  Eigen::MatrixXd sub(m, m);
  for (;;) {
    for (int c = 0; c < m; ++c) sub.col(c) = a.entries().col(idx[c]);
    double prod = permanent_square(sub);
    for (int c = 0; c < m; ++c) prod *= lambda[idx[c]];
    total += prod;
    // next combination in lexicographic order
    int p = m - 1;
    while (p >= 0 && idx[p] == n - m + p) --p;
    if (p < 0) break;
    ++idx[p];
    for (int q = p + 1; q < m; ++q) idx[q] = idx[q - 1] + 1;
  }
  return total;
}

/// F_A(lambda) as the x_1...x_M coefficient of prod_j (1 + lambda_j sum_i
/// A(i,j) x_i), via inclusion-exclusion over row subsets. O(2^M N M), exact
/// to rounding, exponential only in the small dimension.
inline double eval_F_fast(const NonNegMatrix& a, const Eigen::VectorXd& lambda) {
  check_length(a, lambda.size(), "lambda");
  return detail::row_subset_coefficient<double>(a.entries(),
                                                Vec<double>::Ones(a.cols()), lambda);
}

/// Same algorithm as eval_F_fast over complex scalars. On a real point this
/// reproduces eval_F_fast bit for bit.
inline Complex eval_F_complex(const NonNegMatrix& a, const Vec<Complex>& z) {
  check_length(a, z.size(), "z");
  return detail::row_subset_coefficient<Complex>(a.entries(),
                                                 Vec<Complex>::Ones(a.cols()), z);
}

/// Companion polynomial R(lambda) = sum over |S| = M of Per(A_S) prod over the
/// complement of S of lambda_j; the x_1...x_M coefficient of
/// prod_j (lambda_j + sum_i A(i,j) x_i).
inline double eval_R(const NonNegMatrix& a, const Eigen::VectorXd& lambda) {
  check_length(a, lambda.size(), "lambda");
  return detail::row_subset_coefficient<double>(a.entries(), lambda,
                                                Vec<double>::Ones(a.cols()));
}

/// Exact gradient of F: multilinearity gives dF/dlambda_j = F at lambda_j = 1
/// minus F at lambda_j = 0, so 2N fast evaluations suffice.
inline Eigen::VectorXd grad_F(const NonNegMatrix& a, const Eigen::VectorXd& lambda) {
  check_length(a, lambda.size(), "lambda");
  const int n = a.cols();
  Eigen::VectorXd g(n);
  Eigen::VectorXd work = lambda;
  for (int j = 0; j < n; ++j) {
    work[j] = 1.0;
    const double f1 = eval_F_fast(a, work);
    work[j] = 0.0;
    const double f0 = eval_F_fast(a, work);
    work[j] = lambda[j];
    g[j] = f1 - f0;
  }
  return g;
}

/// Gradient of log F; requires F(lambda) > 0.
inline Eigen::VectorXd grad_log_F(const NonNegMatrix& a, const Eigen::VectorXd& lambda) {
  const double f = eval_F_fast(a, lambda);
  if (!(f > 0.0)) throw std::domain_error("log undefined at this point: F(lambda) = 0");
  return grad_F(a, lambda) / f;
}

/// Exact Hessian of F. Diagonal is zero (F is affine in each coordinate);
/// mixed partials come from four-corner multilinear overrides.
inline Eigen::MatrixXd hess_F(const NonNegMatrix& a, const Eigen::VectorXd& lambda) {
  check_length(a, lambda.size(), "lambda");
  const int n = a.cols();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd work = lambda;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      work[i] = 1.0; work[j] = 1.0;
      const double f11 = eval_F_fast(a, work);
      work[j] = 0.0;
      const double f10 = eval_F_fast(a, work);
      work[i] = 0.0; work[j] = 1.0;
      const double f01 = eval_F_fast(a, work);
      work[j] = 0.0;
      const double f00 = eval_F_fast(a, work);
      work[i] = lambda[i]; work[j] = lambda[j];
      h(i, j) = h(j, i) = f11 - f10 - f01 + f00;
    }
  return h;
}

/// F_A is identically zero iff it vanishes at the all-ones point: all
/// coefficients are non-negative and F(1,...,1) is their sum.
inline bool is_zero_polynomial(const NonNegMatrix& a) {
  return eval_F_fast(a, Eigen::VectorXd::Ones(a.cols())) == 0.0;
}

}  // namespace permstab
