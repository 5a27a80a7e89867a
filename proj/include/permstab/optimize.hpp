#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "permstab/eval.hpp"
#include "permstab/matrix.hpp"

namespace permstab {

struct MaximizeConfig {
  int max_iters = 10000;
  double gap_tol = 1e-8;
  double line_search_shrink = 0.5;
  std::uint64_t seed = 42;  // reserved; the default start is deterministic
};

struct TracePoint {
  double log_value;
  double gap;
};

struct MaximizeReport {
  Eigen::VectorXd argmax;
  double log_value = -std::numeric_limits<double>::infinity();
  double fw_gap = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
  std::vector<TracePoint> trace;
};

/// Frank-Wolfe gap max_j d_j log F - <lambda, d log F>; non-negative on the
/// simplex and zero exactly at the maximizer. By concavity it upper-bounds
/// log F(lambda*) - log F(lambda).
inline double fw_gap(const NonNegMatrix& a, const Eigen::VectorXd& lambda) {
  const Eigen::VectorXd g = grad_log_F(a, lambda);
  return g.maxCoeff() - g.dot(lambda);
}

namespace detail {

inline Eigen::VectorXd simplex_clean(Eigen::VectorXd v) {
  for (Eigen::Index j = 0; j < v.size(); ++j)
    if (v[j] < 0.0) v[j] = 0.0;
  const double total = v.sum();
  if (total > 0.0) v /= total;
  return v;
}

// Exact line search for log F(lambda + t d) on [0, 1]. F restricted to the
// line is a polynomial of degree <= M in t, recovered by interpolation at
// the nodes i/M; the maximizer is then located by bisection on the sign of
// its derivative, avoiding cancellation in log-value comparisons.
inline double exact_line_step(const NonNegMatrix& a, const Eigen::VectorXd& lambda,
                              const Eigen::VectorXd& dir) {
  const int m = a.rows();
  Eigen::MatrixXd vand(m + 1, m + 1);
  Eigen::VectorXd vals(m + 1);
  for (int i = 0; i <= m; ++i) {
    const double t = static_cast<double>(i) / m;
    vals[i] = eval_F_fast(a, lambda + t * dir);
    double power = 1.0;
    for (int k = 0; k <= m; ++k) {
      vand(i, k) = power;
      power *= t;
    }
  }
  const Eigen::VectorXd q = vand.fullPivLu().solve(vals);
  auto q_at = [&](double t) {
    double r = 0.0;
    for (int k = m; k >= 0; --k) r = r * t + q[k];
    return r;
  };
  auto dq_at = [&](double t) {
    double r = 0.0;
    for (int k = m; k >= 1; --k) r = r * t + k * q[k];
    return r;
  };
  // accept the full step only when the sampled values confirm it; near a
  // zero of F the interpolant's derivative at 1 is pure cancellation noise
  if (dq_at(1.0) >= 0.0 && vals[m] >= vals.maxCoeff() && vals[m] > 0.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 120; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (dq_at(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Zero out one coordinate with strictly negative Frank-Wolfe advantage if the
// renormalized log value does not decrease. Exact by multilinearity:
// zeroing lambda_k scales F by (1 - lambda_k g_k) and renormalizing by
// (1 - lambda_k)^(-M), so the log change is log1p(-lambda_k g_k)
// - M log1p(-lambda_k). A wrongly dropped coordinate reappears as the best
// vertex of a later Frank-Wolfe step, so the move is safe.
inline bool drop_step(const NonNegMatrix& a, Eigen::VectorXd& lambda,
                      const Eigen::VectorXd& g) {
  const int m = a.rows();
  const double base = g.dot(lambda);
  int best = -1;
  double best_val = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    if (lambda[k] <= 0.0 || lambda[k] >= 1.0) continue;
    if (g[k] - base >= 0.0) continue;
    if (lambda[k] * g[k] >= 1.0) continue;
    const double delta = std::log1p(-lambda[k] * g[k]) - m * std::log1p(-lambda[k]);
    if (delta < 0.0) continue;
    if (lambda[k] < best_val) {
      best_val = lambda[k];
      best = static_cast<int>(k);
    }
  }
  if (best < 0) return false;
  lambda[best] = 0.0;
  lambda = simplex_clean(std::move(lambda));
  return true;
}

// Newton refinement on the current support with the simplex constraint
// eliminated against the last support coordinate. Iterates on the reduced
// stationarity system and keeps going only while the reduced-gradient norm
// shrinks; this measure is computed from exact multilinear gradients, so the
// polish keeps converging where log-value comparisons are pure round-off.
// Steps are clipped to the boundary, so a support coordinate can land on
// exactly zero. Callers decide whether to accept the polished point.
inline void newton_polish(const NonNegMatrix& a, Eigen::VectorXd& lambda,
                          int max_rounds = 40) {
  const int n = a.cols();
  Eigen::VectorXd saved = lambda;
  double best_norm = std::numeric_limits<double>::infinity();
  std::vector<int> prev_support;
  for (int round = 0; round < max_rounds; ++round) {
    std::vector<int> support;
    for (int j = 0; j < n; ++j)
      if (lambda[j] > 0.0) support.push_back(j);
    if (support.size() < 2) break;
    if (support != prev_support) {
      // active set changed; reduced-gradient norms are not comparable
      best_norm = std::numeric_limits<double>::infinity();
      prev_support = support;
    }
    const double f = eval_F_fast(a, lambda);
    if (!(f > 0.0)) {
      lambda = saved;
      return;
    }
    const Eigen::VectorXd g = grad_F(a, lambda) / f;
    const Eigen::MatrixXd h = hess_F(a, lambda) / f - g * g.transpose();

    const int k = support.back();
    const int r = static_cast<int>(support.size()) - 1;
    Eigen::VectorXd gr(r);
    Eigen::MatrixXd hr(r, r);
    for (int i = 0; i < r; ++i) {
      gr[i] = g[support[i]] - g[k];
      for (int j = 0; j < r; ++j)
        hr(i, j) = h(support[i], support[j]) - h(support[i], k) - h(k, support[j]) + h(k, k);
    }
    const double norm = gr.norm();
    if (!(norm < best_norm)) {  // no progress on stationarity; keep the best point
      lambda = saved;
      return;
    }
    best_norm = norm;
    saved = lambda;

    const Eigen::VectorXd dx = hr.fullPivLu().solve(-gr);
    if (!dx.allFinite()) return;
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < r; ++i) dir[support[i]] = dx[i];
    dir[k] = -dx.sum();

    // clip the step to the first boundary coordinate it would cross; the
    // blocking coordinate lands on exactly zero and leaves the active set
    double t = 1.0;
    int blocker = -1;
    for (int j : support)
      if (dir[j] < 0.0 && lambda[j] / -dir[j] < t) {
        t = lambda[j] / -dir[j];
        blocker = j;
      }
    if (!(t > 0.0)) return;
    lambda += t * dir;
    if (blocker >= 0) lambda[blocker] = 0.0;
    lambda = simplex_clean(std::move(lambda));
    if (blocker < 0 && t * dir.cwiseAbs().maxCoeff() < 1e-18) return;
  }
}

}  // namespace detail

/// Concave maximization of log F over the probability simplex by Frank-Wolfe
/// ascent from the uniform point, with an exact line search along each vertex
/// direction. When the gap stagnates (boundary optima make plain Frank-Wolfe
/// zigzag), a guarded coordinate drop and a Newton polish on the active
/// support restore fast convergence; both moves are monotone in log F, and
/// the convergence certificate remains the full-simplex Frank-Wolfe gap.
inline MaximizeReport maximize_log_F(const NonNegMatrix& a, const MaximizeConfig& cfg = {}) {
  if (is_zero_polynomial(a))
    throw std::domain_error("maximize_log_F: F is identically zero");
  const int n = a.cols();
  Eigen::VectorXd lambda = Eigen::VectorXd::Constant(n, 1.0 / n);

  MaximizeReport rep;
  bool force_polish = false;
  int it = 0;
  while (it < cfg.max_iters) {
    ++it;
    const double f = eval_F_fast(a, lambda);
    const Eigen::VectorXd g = grad_F(a, lambda) / f;
    Eigen::Index jstar = 0;
    const double gmax = g.maxCoeff(&jstar);  // first maximum: lowest-index tie break
    const double gap = gmax - g.dot(lambda);
    rep.trace.push_back({std::log(f), gap});
    if (gap <= cfg.gap_tol) break;

    // zigzag near a boundary optimum makes the gap oscillate, so stagnation
    // is judged over a window: the gap should at least halve every 10 steps
    const std::size_t steps = rep.trace.size();
    const bool stagnant =
        force_polish || (steps > 10 && gap > 0.5 * rep.trace[steps - 11].gap);
    force_polish = false;
    if (stagnant) {
      // polish first; drop a coordinate only when polishing alone is stuck,
      // so small interior coordinates are not evicted prematurely
      Eigen::VectorXd cand = lambda;
      detail::newton_polish(a, cand);
      const double fc = eval_F_fast(a, cand);
      bool improved = false;
      if (fc >= f * (1.0 - 1e-12)) {  // allow round-off-level value ties
        const Eigen::VectorXd gc = grad_F(a, cand) / fc;
        if (gc.maxCoeff() - gc.dot(cand) < gap) {
          lambda = std::move(cand);
          improved = true;
        }
      }
      if (!improved && detail::drop_step(a, lambda, g)) {
        Eigen::VectorXd dropped = lambda;
        detail::newton_polish(a, dropped);
        const double fl = eval_F_fast(a, lambda);
        if (eval_F_fast(a, dropped) >= fl * (1.0 - 1e-12)) {
          lambda = std::move(dropped);
          improved = true;
        }
      }
      if (improved) continue;  // otherwise fall through to a plain step
    }

    Eigen::VectorXd dir = -lambda;
    dir[jstar] += 1.0;
    const double t = detail::exact_line_step(a, lambda, dir);
    Eigen::VectorXd next = detail::simplex_clean(lambda + t * dir);
    if (eval_F_fast(a, next) >= f)
      lambda = std::move(next);
    else
      force_polish = true;  // numerical stall; force a polish on the next round
  }

  const double f = eval_F_fast(a, lambda);
  const Eigen::VectorXd g = grad_F(a, lambda) / f;
  rep.argmax = lambda;
  rep.log_value = std::log(f);
  rep.fw_gap = g.maxCoeff() - g.dot(lambda);
  rep.iterations = it;
  rep.converged = rep.fw_gap <= cfg.gap_tol;
  return rep;
}

/// Exhaustive lattice search over the simplex at the given resolution;
/// acceptance oracle for small N. Returns the best lattice point and its
/// log value.
inline std::pair<Eigen::VectorXd, double> grid_search_oracle(const NonNegMatrix& a,
                                                             double resolution) {
  const int n = a.cols();
  if (n > 4) throw std::invalid_argument("grid_search_oracle: N must be at most 4");
  const long steps = std::lround(1.0 / resolution);
  if (steps < 1) throw std::invalid_argument("grid_search_oracle: resolution too coarse");
  if (is_zero_polynomial(a))
    throw std::domain_error("grid_search_oracle: F is identically zero");

  Eigen::VectorXd lambda(n), best_lambda(n);
  double best_f = -1.0;
  // lexicographic enumeration of compositions of `steps` into n parts
  const auto evaluate = [&](auto&& self, int pos, long remaining) -> void {
    if (pos == n - 1) {
      lambda[pos] = static_cast<double>(remaining) / steps;
      const double f = eval_F_fast(a, lambda);
      if (f > best_f) {
        best_f = f;
        best_lambda = lambda;
      }
      return;
    }
    for (long k = 0; k <= remaining; ++k) {
      lambda[pos] = static_cast<double>(k) / steps;
      self(self, pos + 1, remaining - k);
    }
  };
  evaluate(evaluate, 0, steps);
  return {best_lambda, std::log(best_f)};
}

}  // namespace permstab
