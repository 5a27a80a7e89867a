#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace permstab {

// Hard cap on the row count: the evaluators enumerate 2^M row subsets and
// double-precision cancellation is only vetted at desk scale.
inline constexpr int kMaxRows = 24;

/// Non-negative M x N matrix with M < N. Validates once at construction;
/// downstream code trusts the invariants.
class NonNegMatrix {
 public:
  explicit NonNegMatrix(Eigen::MatrixXd entries) : a_(std::move(entries)) {
    const Eigen::Index m = a_.rows();
    const Eigen::Index n = a_.cols();
    if (m < 1 || n < 1)
      throw std::invalid_argument("matrix must have at least one row and one column");
    if (m >= n)
      throw std::invalid_argument("matrix requires M < N, got " + std::to_string(m) +
                                  "x" + std::to_string(n));
    if (m > kMaxRows)
      throw std::invalid_argument("row count " + std::to_string(m) +
                                  " exceeds supported maximum " + std::to_string(kMaxRows));
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const double v = a_(i, j);
        if (!std::isfinite(v) || v < 0.0)
          throw std::invalid_argument("entry (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") must be finite and non-negative");
      }
  }

  [[nodiscard]] const Eigen::MatrixXd& entries() const { return a_; }
  [[nodiscard]] int rows() const { return static_cast<int>(a_.rows()); }
  [[nodiscard]] int cols() const { return static_cast<int>(a_.cols()); }

 private:
  Eigen::MatrixXd a_;
};

inline void check_length(const NonNegMatrix& a, Eigen::Index len, const char* what) {
  if (len != a.cols())
    throw std::invalid_argument(std::string(what) + " must have length N=" +
                                std::to_string(a.cols()) + ", got " + std::to_string(len));
}

}  // namespace permstab
