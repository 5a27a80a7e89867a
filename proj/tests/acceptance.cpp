// Acceptance gate: every release criterion in one binary, one verdict line
// each. Exits non-zero if any criterion fails.
//
//   acceptance --permstab PATH_TO_CLI
//
// The CLI path is needed only for the determinism criterion; all other
// criteria exercise the library directly.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "permstab/certify.hpp"
#include "permstab/eval.hpp"
#include "permstab/matrix.hpp"
#include "permstab/optimize.hpp"
#include "permstab/util.hpp"

using namespace permstab;

namespace {

NonNegMatrix random_int_matrix(UniformRng& rng, int m, int n) {
  Eigen::MatrixXd a(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = static_cast<double>(rng.integer(0, 9));
  return NonNegMatrix(a);
}

NonNegMatrix random_nonzero_matrix(UniformRng& rng, int m, int n) {
  for (;;) {
    Eigen::MatrixXd a(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = rng.unit();
    NonNegMatrix cand(a);
    if (!is_zero_polynomial(cand)) return cand;
  }
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

// 1. fast evaluator vs subset-enumeration oracle, desk shapes, under 5 s
bool criterion_oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  UniformRng rng(101);
  double worst = 0.0;
  const int shapes[3][2] = {{2, 4}, {3, 6}, {4, 8}};
  for (const auto& shape : shapes)
    for (int rep = 0; rep < 100; ++rep) {
      const NonNegMatrix a = random_int_matrix(rng, shape[0], shape[1]);
      for (int s = 0; s < 10; ++s) {
        const Eigen::VectorXd lam = rng.vector(shape[1], 0.0, 1.0);
        worst = std::max(worst, rel_err(eval_F_fast(a, lam), eval_F_bruteforce(a, lam)));
      }
    }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return worst <= 1e-9 && secs < 5.0;
}

// 2. product-of-lambda times R(1/lambda) reproduces F(lambda)
bool criterion_inversion_identity() {
  UniformRng rng(102);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const int m = static_cast<int>(rng.integer(1, 4));
    const int n = m + static_cast<int>(rng.integer(1, 4));
    const NonNegMatrix a = random_nonzero_matrix(rng, m, n);
    const Eigen::VectorXd lam = rng.vector(n, 0.1, 1.0);
    const Eigen::VectorXd inv = lam.cwiseInverse();
    const double lhs = lam.prod() * eval_R(a, inv);
    worst = std::max(worst, rel_err(lhs, eval_F_fast(a, lam)));
  }
  return worst <= 1e-9;
}

// 3. midpoint log-concavity with zero violations, plus the negative control
//    t^2 + 1 that the root harness must reject
bool criterion_log_concavity() {
  UniformRng rng(103);
  for (int rep = 0; rep < 20; ++rep) {
    const int m = static_cast<int>(rng.integer(1, 4));
    const int n = m + static_cast<int>(rng.integer(1, 4));
    const NonNegMatrix a = random_nonzero_matrix(rng, m, n);
    const ConcavityResult res = certify_log_concavity(a, 1000, rng.integer(1, 1 << 20));
    if (!res.pass || res.worst_midpoint_margin < -1e-9) return false;
  }
  const RootCertificate control = certify_roots(Eigen::Vector3d(1.0, 0.0, 1.0));
  return !control.pass;
}

// 4. |F(x + iy)| >= F(x) on random samples
bool criterion_modulus_dominance() {
  UniformRng rng(104);
  for (int rep = 0; rep < 20; ++rep) {
    const int m = static_cast<int>(rng.integer(1, 4));
    const int n = m + static_cast<int>(rng.integer(1, 4));
    const NonNegMatrix a = random_nonzero_matrix(rng, m, n);
    const DominanceResult res = certify_dominance(a, 1000, rng.integer(1, 1 << 20));
    if (!res.pass || res.worst_margin < -1e-9) return false;
  }
  return true;
}

// 5. bivariate restrictions have real non-positive roots
bool criterion_root_certificate() {
  UniformRng rng(105);
  for (int mat = 0; mat < 20; ++mat) {
    const int m = static_cast<int>(rng.integer(1, 6));
    const int n = m + static_cast<int>(rng.integer(1, 4));
    const NonNegMatrix a = random_nonzero_matrix(rng, m, n);
    for (int r = 0; r < 10; ++r) {
      const Eigen::VectorXd x = rng.vector(n, 0.0, 1.0);
      const Eigen::VectorXd y = rng.vector(n, 0.05, 1.0);
      const RootCertificate cert = certify_roots(restrict_bivariate(a, x, y));
      for (const auto& root : cert.roots) {
        const double scale = 1.0 + std::abs(root);
        if (std::abs(root.imag()) > 1e-6 * scale) return false;
        if (root.real() > 1e-8 * scale) return false;
      }
    }
  }
  return true;
}

// 6. analytic gradient vs central differences, and the Euler identity
bool criterion_gradient_check() {
  UniformRng rng(106);
  for (int rep = 0; rep < 50; ++rep) {
    const int m = static_cast<int>(rng.integer(1, 4));
    const int n = m + static_cast<int>(rng.integer(1, 4));
    const NonNegMatrix a = random_nonzero_matrix(rng, m, n);
    const Eigen::VectorXd lam = rng.vector(n, 0.1, 1.0);
    const Eigen::VectorXd g = grad_F(a, lam);
    const double h = 1e-5;
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd hi = lam, lo = lam;
      hi[j] += h;
      lo[j] -= h;
      const double fd = (eval_F_fast(a, hi) - eval_F_fast(a, lo)) / (2.0 * h);
      if (rel_err(g[j], fd) > 1e-6) return false;
    }
    if (rel_err(lam.dot(g), m * eval_F_fast(a, lam)) > 1e-9) return false;
  }
  return true;
}

// 7. optimizer exactness on instances with known closed-form answers
bool criterion_optimizer_forced_cases() {
  const MaximizeReport sym = maximize_log_F(NonNegMatrix{Eigen::MatrixXd::Ones(2, 4)});
  if (!sym.converged) return false;
  for (int j = 0; j < 4; ++j)
    if (std::abs(sym.argmax[j] - 0.25) > 1e-6) return false;
  if (std::abs(std::exp(sym.log_value) - 0.75) > 1e-8) return false;

  Eigen::MatrixXd row(1, 3);
  row << 1, 2, 4;
  const MaximizeReport lin = maximize_log_F(NonNegMatrix(row));
  if (!lin.converged) return false;
  if (std::abs(lin.argmax[0]) > 1e-10 || std::abs(lin.argmax[1]) > 1e-10) return false;
  if (std::abs(lin.argmax[2] - 1.0) > 1e-10) return false;
  return std::abs(lin.log_value - std::log(4.0)) <= 1e-10;
}

// 8. optimizer dominates the exhaustive simplex lattice
bool criterion_optimizer_vs_grid() {
  UniformRng rng(108);
  for (int rep = 0; rep < 20; ++rep) {
    const NonNegMatrix a = random_nonzero_matrix(rng, 2, 3);
    const MaximizeReport res = maximize_log_F(a);
    if (!res.converged || res.fw_gap > 1e-8) return false;
    const auto [pt, oracle_val] = grid_search_oracle(a, 1e-3);
    if (res.log_value < oracle_val - 1e-5) return false;
  }
  return true;
}

// 9. repeated CLI runs with a fixed seed emit byte-identical reports
//    (wall time excluded)
std::string run_cli(const std::string& cli, const std::string& args,
                    const std::string& out_path) {
  const std::string cmd = cli + " " + args + " --output " + out_path;
  if (std::system(cmd.c_str()) != 0) return "";
  std::ifstream in(out_path);
  std::ostringstream kept;
  std::string line;
  while (std::getline(in, line))
    if (line.find("wall_time_ms") == std::string::npos) kept << line << "\n";
  return kept.str();
}

bool criterion_determinism(const std::string& cli) {
  if (cli.empty()) return false;
  const auto dir = std::filesystem::temp_directory_path();
  const std::string matrix = (dir / "acc_det.csv").string();
  {
    std::ofstream out(matrix);
    out << "3,1,4,1,5\n9,2,6,5,3\n5,8,9,7,9\n";
  }
  for (const std::string args :
       {"certify --matrix " + matrix + " --seed 7 --samples 300",
        "maximize --matrix " + matrix + " --seed 7"}) {
    const std::string r1 = run_cli(cli, args, (dir / "acc_det_1.json").string());
    const std::string r2 = run_cli(cli, args, (dir / "acc_det_2.json").string());
    if (r1.empty() || r1 != r2) return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--permstab") cli = argv[i + 1];

  const std::vector<std::pair<std::string, std::function<bool()>>> criteria = {
      {"1 oracle equivalence (fast vs brute force, <5s)", criterion_oracle_equivalence},
      {"2 inversion identity prod(lambda) R(1/lambda) = F", criterion_inversion_identity},
      {"3 log-concavity certificate + negative control", criterion_log_concavity},
      {"4 modulus dominance |F(x+iy)| >= F(x)", criterion_modulus_dominance},
      {"5 root certificate: real non-positive roots", criterion_root_certificate},
      {"6 gradient vs finite differences + Euler identity", criterion_gradient_check},
      {"7 optimizer forced cases", criterion_optimizer_forced_cases},
      {"8 optimizer vs grid oracle", criterion_optimizer_vs_grid},
      {"9 CLI determinism (fixed seed)", [&cli] { return criterion_determinism(cli); }},
  };

  int failures = 0;
  for (const auto& [name, run] : criteria) {
    bool ok = false;
    try {
      ok = run();
    } catch (const std::exception& e) {
      std::cout << "criterion " << name << ": exception: " << e.what() << "\n";
    }
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << name << "\n";
    if (!ok) ++failures;
  }
  if (failures) std::cout << failures << " criterion(s) failed\n";
  return failures == 0 ? 0 : 1;
}
