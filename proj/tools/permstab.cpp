// Command-line front end: matrix ingestion, command dispatch, JSON reports.
//
//   permstab <eval|grad|maximize|certify|oracle-check> --matrix PATH
//            [--lambda LIST] [--tol R] [--samples K] [--seed S]
//            [--max-iters I] [--gap-tol R] [--output PATH]
//
// Exit codes: 0 success / certificate pass, 1 usage or parse error,
// 2 certificate failure (including zero polynomials for maximize/certify).

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "permstab/certify.hpp"
#include "permstab/eval.hpp"
#include "permstab/io.hpp"
#include "permstab/matrix.hpp"
#include "permstab/optimize.hpp"
#include "permstab/util.hpp"

namespace {

using nlohmann::ordered_json;

struct Options {
  std::string matrix;
  std::string lambda;
  std::string output;
  double tol = 1e-9;
  int samples = 1000;
  std::uint64_t seed = 42;
  int max_iters = 10000;
  double gap_tol = 1e-8;
};

ordered_json vector_json(const Eigen::VectorXd& v) {
  ordered_json arr = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

void emit(const ordered_json& report, const std::string& output) {
  if (output.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream out(output);
    if (!out) throw std::invalid_argument("cannot open output file: " + output);
    out << report.dump(2) << "\n";
  }
}

ordered_json report_header(const char* command, const Options& opt,
                           const permstab::NonNegMatrix& a) {
  ordered_json rep;
  rep["command"] = command;
  rep["matrix"] = opt.matrix;
  rep["matrix_digest"] = permstab::matrix_digest(a);
  rep["rows"] = a.rows();
  rep["cols"] = a.cols();
  return rep;
}

int cmd_eval(const Options& opt) {
  const auto a = permstab::parse_matrix(opt.matrix);
  const auto lambda = permstab::parse_lambda(opt.lambda, a.cols());
  const auto start = std::chrono::steady_clock::now();
  const double value = permstab::eval_F_fast(a, lambda);
  const double r_value = permstab::eval_R(a, lambda);
  ordered_json rep = report_header("eval", opt, a);
  rep["lambda"] = vector_json(lambda);
  rep["value"] = value;
  rep["companion_R"] = r_value;
  rep["zero_polynomial"] = permstab::is_zero_polynomial(a);
  rep["wall_time_ms"] = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start).count();
  emit(rep, opt.output);
  return 0;
}

int cmd_grad(const Options& opt) {
  const auto a = permstab::parse_matrix(opt.matrix);
  const auto lambda = permstab::parse_lambda(opt.lambda, a.cols());
  const auto start = std::chrono::steady_clock::now();
  const double value = permstab::eval_F_fast(a, lambda);
  const Eigen::VectorXd g = permstab::grad_F(a, lambda);
  ordered_json rep = report_header("grad", opt, a);
  rep["lambda"] = vector_json(lambda);
  rep["value"] = value;
  rep["grad_F"] = vector_json(g);
  if (value > 0.0)
    rep["grad_log_F"] = vector_json(g / value);
  else
    rep["grad_log_F"] = nullptr;
  rep["zero_polynomial"] = permstab::is_zero_polynomial(a);
  rep["wall_time_ms"] = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start).count();
  emit(rep, opt.output);
  return 0;
}

int cmd_maximize(const Options& opt) {
  const auto a = permstab::parse_matrix(opt.matrix);
  const auto start = std::chrono::steady_clock::now();
  ordered_json rep = report_header("maximize", opt, a);
  rep["seed"] = opt.seed;
  rep["max_iters"] = opt.max_iters;
  rep["gap_tol"] = opt.gap_tol;
  if (permstab::is_zero_polynomial(a)) {
    rep["zero_polynomial"] = true;
    rep["wall_time_ms"] = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start).count();
    emit(rep, opt.output);
    return 2;
  }
  permstab::MaximizeConfig cfg;
  cfg.max_iters = opt.max_iters;
  cfg.gap_tol = opt.gap_tol;
  cfg.seed = opt.seed;
  const auto res = permstab::maximize_log_F(a, cfg);
  rep["zero_polynomial"] = false;
  rep["argmax"] = vector_json(res.argmax);
  rep["log_value"] = res.log_value;
  rep["value"] = std::exp(res.log_value);
  rep["fw_gap"] = res.fw_gap;
  rep["iterations"] = res.iterations;
  rep["converged"] = res.converged;
  rep["wall_time_ms"] = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start).count();
  emit(rep, opt.output);
  return res.converged ? 0 : 2;
}

int cmd_certify(const Options& opt) {
  const auto a = permstab::parse_matrix(opt.matrix);
  const auto start = std::chrono::steady_clock::now();
  ordered_json rep = report_header("certify", opt, a);
  rep["seed"] = opt.seed;
  rep["samples"] = opt.samples;
  rep["tol"] = opt.tol;
  permstab::CertifyConfig cfg;
  cfg.samples = opt.samples;
  cfg.seed = opt.seed;
  cfg.tol = opt.tol;
  const auto res = permstab::certify_all(a, cfg);
  rep["zero_polynomial"] = res.zero_polynomial;
  if (!res.zero_polynomial) {
    rep["dominance"] = {{"pass", res.dominance.pass},
                        {"samples", res.dominance.samples},
                        {"worst_margin", res.dominance.worst_margin}};
    rep["log_concavity"] = {{"pass", res.concavity.pass},
                            {"samples", res.concavity.samples},
                            {"worst_midpoint_margin", res.concavity.worst_midpoint_margin},
                            {"worst_power_mean_margin", res.concavity.worst_power_mean_margin}};
    rep["root_location"] = {{"pass", res.root_location.pass},
                            {"samples", res.root_location.samples},
                            {"worst_scaled_imag", res.root_location.worst_scaled_imag},
                            {"worst_scaled_real", res.root_location.worst_scaled_real}};
    rep["all_pass"] = res.all_pass();
  }
  rep["wall_time_ms"] = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start).count();
  emit(rep, opt.output);
  if (res.zero_polynomial) return 2;
  return res.all_pass() ? 0 : 2;
}

int cmd_oracle_check(const Options& opt) {
  const auto a = permstab::parse_matrix(opt.matrix);
  const auto start = std::chrono::steady_clock::now();
  permstab::UniformRng rng(opt.seed);
  double worst = 0.0;
  for (int s = 0; s < opt.samples; ++s) {
    const Eigen::VectorXd lambda = rng.vector(a.cols(), 0.0, 1.0);
    const double fast = permstab::eval_F_fast(a, lambda);
    const double brute = permstab::eval_F_bruteforce(a, lambda);
    worst = std::max(worst, std::abs(fast - brute) / std::max(1.0, std::abs(brute)));
  }
  const bool pass = worst <= opt.tol;
  ordered_json rep = report_header("oracle-check", opt, a);
  rep["seed"] = opt.seed;
  rep["samples"] = opt.samples;
  rep["tol"] = opt.tol;
  rep["max_relative_deviation"] = worst;
  rep["pass"] = pass;
  rep["wall_time_ms"] = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start).count();
  emit(rep, opt.output);
  return pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Permanental polynomial evaluation, stability certificates, and "
               "simplex maximization"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&opt](CLI::App* sub, bool needs_lambda) {
    sub->add_option("--matrix", opt.matrix, "matrix file (CSV or JSON)")->required();
    if (needs_lambda)
      sub->add_option("--lambda", opt.lambda,
                      "comma-separated values or a one-row CSV file")->required();
    sub->add_option("--tol", opt.tol, "certificate tolerance");
    sub->add_option("--samples", opt.samples, "sample count");
    sub->add_option("--seed", opt.seed, "RNG seed");
    sub->add_option("--max-iters", opt.max_iters, "iteration cap");
    sub->add_option("--gap-tol", opt.gap_tol, "Frank-Wolfe gap tolerance");
    sub->add_option("--output", opt.output, "report path (default stdout)");
  };

  auto* eval = app.add_subcommand("eval", "evaluate F and its companion R at lambda");
  add_common(eval, true);
  auto* grad = app.add_subcommand("grad", "gradient of F (and log F) at lambda");
  add_common(grad, true);
  auto* maximize = app.add_subcommand("maximize", "maximize log F over the simplex");
  add_common(maximize, false);
  auto* certify = app.add_subcommand("certify", "run the stability certificates");
  add_common(certify, false);
  auto* oracle = app.add_subcommand("oracle-check",
                                    "cross-check fast evaluation against brute force");
  add_common(oracle, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (eval->parsed()) return cmd_eval(opt);
    if (grad->parsed()) return cmd_grad(opt);
    if (maximize->parsed()) return cmd_maximize(opt);
    if (certify->parsed()) return cmd_certify(opt);
    if (oracle->parsed()) return cmd_oracle_check(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
