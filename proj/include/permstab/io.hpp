#pragma once

#include <Eigen/Dense>

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "permstab/matrix.hpp"

namespace permstab {

namespace detail {

inline std::vector<double> split_csv_row(const std::string& line, int row) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string token;
  int col = 0;
  while (std::getline(ss, token, ',')) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(token, &pos);
      while (pos < token.size() && std::isspace(static_cast<unsigned char>(token[pos]))) ++pos;
      if (pos != token.size()) throw std::invalid_argument("trailing characters");
      out.push_back(v);
    } catch (const std::exception&) {
      throw std::invalid_argument("non-numeric token '" + token + "' at row " +
                                  std::to_string(row) + ", column " + std::to_string(col));
    }
    ++col;
  }
  return out;
}

inline NonNegMatrix rows_to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("matrix input is empty");
  const std::size_t ncols = rows[0].size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != ncols)
      throw std::invalid_argument("ragged rows: row " + std::to_string(i) + " has " +
                                  std::to_string(rows[i].size()) + " entries, expected " +
                                  std::to_string(ncols));
    for (std::size_t j = 0; j < ncols; ++j)
      if (rows[i][j] < 0.0)
        throw std::invalid_argument("negative entry at row " + std::to_string(i) +
                                    ", column " + std::to_string(j));
  }
  Eigen::MatrixXd m(rows.size(), ncols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < ncols; ++j) m(i, j) = rows[i][j];
  return NonNegMatrix(std::move(m));
}

}  // namespace detail

/// Matrix ingestion. CSV rows are matrix rows; a .json file carries
/// {"matrix": [[...], ...]}. Validation errors name the offending row and
/// column.
inline NonNegMatrix parse_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix file: " + path);
  std::vector<std::vector<double>> rows;
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("invalid JSON in " + path + ": " + e.what());
    }
    if (!doc.contains("matrix") || !doc["matrix"].is_array())
      throw std::invalid_argument(path + ": expected an object with a \"matrix\" array");
    int r = 0;
    for (const auto& row : doc["matrix"]) {
      std::vector<double> vals;
      int c = 0;
      for (const auto& v : row) {
        if (!v.is_number())
          throw std::invalid_argument("non-numeric entry at row " + std::to_string(r) +
                                      ", column " + std::to_string(c));
        vals.push_back(v.get<double>());
        ++c;
      }
      rows.push_back(std::move(vals));
      ++r;
    }
  } else {
    std::string line;
    int r = 0;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
      rows.push_back(detail::split_csv_row(line, r));
      ++r;
    }
  }
  return detail::rows_to_matrix(rows);
}

/// Lambda from an inline comma list or, if the argument names a readable
/// file, from its first CSV row. Exactly n entries are required.
inline Eigen::VectorXd parse_lambda(const std::string& arg, Eigen::Index n) {
  std::vector<double> vals;
  std::ifstream in(arg);
  if (in) {
    std::string line;
    while (std::getline(in, line) && line.find_first_not_of(" \t\r\n") == std::string::npos) {}
    vals = detail::split_csv_row(line, 0);
  } else {
    vals = detail::split_csv_row(arg, 0);
  }
  if (static_cast<Eigen::Index>(vals.size()) != n)
    throw std::invalid_argument("lambda must have exactly " + std::to_string(n) +
                                " entries, got " + std::to_string(vals.size()));
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = vals[i];
  return v;
}

/// FNV-1a digest of the matrix dimensions and entries in a canonical text
/// form; stable input fingerprint for reports.
inline std::string matrix_digest(const NonNegMatrix& a) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const std::string& s) {
    for (const char ch : s) {
      h ^= static_cast<unsigned char>(ch);
      h *= 1099511628211ULL;
    }
  };
  mix(std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + ";");
  char buf[40];
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g,", a.entries()(i, j));
      mix(buf);
    }
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace permstab
