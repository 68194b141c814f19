#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "avc/common.hpp"

namespace avc {

enum class KernelType { rbf, linear };

struct SvrConfig {
  double c = 1.0;
  double epsilon = 0.05;
  KernelType kernel = KernelType::rbf;
  double gamma = 0.0;  // <= 0 selects 1 / (dims * variance of all entries)
  double tol = 1e-3;
  int64_t max_iter = 10'000'000;
  double cache_mb = 512.0;
};

struct SvrModel {
  SvrConfig config;  // gamma holds the resolved value after training
  int64_t dims = 0;
  Matrix support_vectors;          // n_sv x dims
  std::vector<double> dual_coefs;  // alpha - alpha*, one per support vector
  double bias = 0.0;

  // Training diagnostics.
  bool converged = true;
  int64_t iterations = 0;
  double dual_objective = 0.0;  // 1/2 b'Qb + p'b of the solved dual, minimized
  std::vector<int64_t> sv_indices;          // training rows of the SVs, not persisted
  std::vector<std::string> feature_subset;  // pipeline metadata, may be empty

  int64_t n_support() const { return support_vectors.rows; }
  double predict_row(const float* x) const;
  Series predict(const Matrix& x) const;
};

// Trains the epsilon-insensitive dual with sequential minimal optimization:
// maximal-KKT-violating pair selection, analytic two-variable updates, and
// an LRU kernel-column cache. Non-convergence within max_iter flags the
// model instead of failing.
SvrModel train_svr(const Matrix& x, const Series& y, const SvrConfig& cfg);

// Largest violation of the optimality conditions over the training set,
// using the trained bias. At most cfg.tol after a converged run.
double kkt_residual(const SvrModel& model, const Matrix& x, const Series& y);

struct GridSearchCell {
  double c = 0.0;
  double epsilon = 0.0;
  double mse = 0.0;
};

struct GridSearchResult {
  double c_best = 0.0;
  double epsilon_best = 0.0;
  std::vector<GridSearchCell> table;
};

// Exhaustive (C, epsilon) grid, scored by mean cross-validated squared
// error over deterministic interleaved folds. Ties prefer larger epsilon,
// then smaller C.
GridSearchResult grid_search_svr(const Matrix& x, const Series& y,
                                 const std::vector<double>& c_grid,
                                 const std::vector<double>& eps_grid,
                                 int folds, const SvrConfig& base);

}  // namespace avc
