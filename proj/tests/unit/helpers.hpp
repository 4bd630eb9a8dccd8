#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "jsbl/model.hpp"

namespace testutil {

inline jsbl::Vector randn(jsbl::Index n, std::mt19937_64& g) {
  std::normal_distribution<double> d;
  jsbl::Vector v(n);
  for (jsbl::Index i = 0; i < n; ++i) v(i) = d(g);
  return v;
}

inline jsbl::Matrix randn(jsbl::Index r, jsbl::Index c, std::mt19937_64& g) {
  std::normal_distribution<double> d;
  jsbl::Matrix m(r, c);
  for (jsbl::Index j = 0; j < c; ++j)
    for (jsbl::Index i = 0; i < r; ++i) m(i, j) = d(g);
  return m;
}

inline double uniform(double lo, double hi, std::mt19937_64& g) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline jsbl::Vector positive(jsbl::Index n, double lo, double hi, std::mt19937_64& g) {
  jsbl::Vector v(n);
  for (jsbl::Index i = 0; i < n; ++i) v(i) = uniform(lo, hi, g);
  return v;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("jsbl_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

/// Random MMV problem with dense F_l and a difference-like R.
inline jsbl::MMVProblem random_problem(jsbl::Index N, jsbl::Index M, jsbl::Index K, jsbl::Index L,
                                       std::mt19937_64& g) {
  jsbl::MMVProblem p;
  p.sparsifier = jsbl::LinearMap::from_dense(randn(K, N, g));
  for (jsbl::Index l = 0; l < L; ++l) {
    p.forward_ops.push_back(jsbl::LinearMap::from_dense(randn(M, N, g)));
    p.measurements.push_back(randn(M, g));
  }
  return p;
}

}  // namespace testutil
