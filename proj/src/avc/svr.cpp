#include "avc/svr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>

namespace avc {

namespace {

constexpr double kTau = 1e-12;  // curvature floor for degenerate pairs

double dot_rows(const float* a, const float* b, int64_t d) {
  double acc = 0.0;
  for (int64_t i = 0; i < d; ++i) acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return acc;
}

double squared_norm(const float* a, int64_t d) { return dot_rows(a, a, d); }

// Kernel evaluations against the training matrix, with precomputed norms.
class KernelEval {
 public:
  KernelEval(const Matrix& x, KernelType type, double gamma)
      : x_(x), type_(type), gamma_(gamma) {
    if (type_ == KernelType::rbf) {
      norms_.resize(static_cast<size_t>(x_.rows));
      for (int64_t i = 0; i < x_.rows; ++i)
        norms_[static_cast<size_t>(i)] = squared_norm(x_.row(i), x_.cols);
    }
  }

  double at(int64_t i, int64_t j) const {
    const double d = dot_rows(x_.row(i), x_.row(j), x_.cols);
    if (type_ == KernelType::linear) return d;
    const double sq = norms_[static_cast<size_t>(i)] + norms_[static_cast<size_t>(j)] - 2.0 * d;
    return std::exp(-gamma_ * std::max(sq, 0.0));
  }

  void fill_column(int64_t i, double* out) const {
    for (int64_t j = 0; j < x_.rows; ++j) out[j] = at(i, j);
  }

 private:
  const Matrix& x_;
  KernelType type_;
  double gamma_;
  std::vector<double> norms_;
};

// LRU cache of kernel columns. Stored in double so the incremental
// gradient stays accurate at tight tolerances.
class KernelCache {
 public:
  KernelCache(const KernelEval& eval, int64_t l, double budget_mb)
      : eval_(eval), l_(l) {
    const double bytes = std::max(budget_mb, 1.0) * 1024.0 * 1024.0;
    max_entries_ = std::max<int64_t>(2, static_cast<int64_t>(bytes / (static_cast<double>(l) * sizeof(double))));
  }

  const double* column(int64_t i) {
    auto it = index_.find(i);
    if (it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->data.data();
    }
    if (static_cast<int64_t>(lru_.size()) >= max_entries_) {
      index_.erase(lru_.back().key);
      lru_.pop_back();
    }
    lru_.push_front(Entry{i, std::vector<double>(static_cast<size_t>(l_))});
    eval_.fill_column(i, lru_.front().data.data());
    index_[i] = lru_.begin();
    return lru_.front().data.data();
  }

 private:
  struct Entry {
    int64_t key;
    std::vector<double> data;
  };

  const KernelEval& eval_;
  int64_t l_;
  int64_t max_entries_;
  std::list<Entry> lru_;
  std::unordered_map<int64_t, std::list<Entry>::iterator> index_;
};

double resolve_gamma(const Matrix& x, const SvrConfig& cfg) {
  if (cfg.kernel == KernelType::linear) return 0.0;
  if (cfg.gamma > 0.0) return cfg.gamma;
  // Variance of the flattened training matrix.
  double mean = 0.0;
  for (float v : x.data) mean += v;
  mean /= static_cast<double>(x.data.size());
  double var = 0.0;
  for (float v : x.data) var += (v - mean) * (v - mean);
  var /= static_cast<double>(x.data.size());
  if (var <= 0.0) return 1.0 / static_cast<double>(x.cols);
  return 1.0 / (static_cast<double>(x.cols) * var);
}

// The dual is posed over 2l box variables: t < l carries sign +1 and linear
// term eps - y[t], t >= l sign -1 and eps + y[t-l]. The model coefficient of
// point u is beta[u] - beta[u+l].
struct SmoResult {
  std::vector<double> beta;
  double bias = 0.0;
  double objective = 0.0;
  int64_t iterations = 0;
  bool converged = false;
};

SmoResult solve_smo(const Matrix& x, const Series& y, const SvrConfig& cfg, double gamma) {
  const int64_t l = x.rows;
  const int64_t n2 = 2 * l;
  const double c = cfg.c;

  KernelEval eval(x, cfg.kernel, gamma);
  KernelCache cache(eval, l, cfg.cache_mb);

  std::vector<double> beta(static_cast<size_t>(n2), 0.0);
  std::vector<double> lin(static_cast<size_t>(n2));
  std::vector<double> grad(static_cast<size_t>(n2));
  for (int64_t t = 0; t < l; ++t) {
    lin[static_cast<size_t>(t)] = cfg.epsilon - y[static_cast<size_t>(t)];
    lin[static_cast<size_t>(t + l)] = cfg.epsilon + y[static_cast<size_t>(t)];
  }
  grad = lin;

  auto sign_of = [l](int64_t t) { return t < l ? 1.0 : -1.0; };

  SmoResult res;
  int64_t iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    // Maximal violating pair on -sign * gradient.
    double up_best = -std::numeric_limits<double>::infinity();
    double low_best = std::numeric_limits<double>::infinity();
    int64_t i = -1, j = -1;
    for (int64_t t = 0; t < n2; ++t) {
      const double b = beta[static_cast<size_t>(t)];
      const double val = -sign_of(t) * grad[static_cast<size_t>(t)];
      const bool in_up = t < l ? b < c : b > 0.0;
      const bool in_low = t < l ? b > 0.0 : b < c;
      if (in_up && val > up_best) {
        up_best = val;
        i = t;
      }
      if (in_low && val < low_best) {
        low_best = val;
        j = t;
      }
    }
    if (i < 0 || j < 0 || up_best - low_best <= cfg.tol) {
      res.converged = true;
      break;
    }

    const double* col_i = cache.column(i % l);
    const double* col_j = cache.column(j % l);
    const double yi = sign_of(i);
    const double yj = sign_of(j);
    const double s = yi * yj;
    const double k_ii = col_i[i % l];
    const double k_jj = col_j[j % l];
    const double k_ij = col_i[j % l];
    // Second derivative along the feasible direction; the sign factors
    // cancel, leaving the same expression for both pair kinds.
    const double curvature = std::max(k_ii + k_jj - 2.0 * k_ij, kTau);

    // Analytic two-variable step with quadrant clipping. Clipped variables
    // land exactly on 0 or C and the partner is recomputed from the exact
    // pre-step invariant, so the equality constraint never drifts.
    const double old_i = beta[static_cast<size_t>(i)];
    const double old_j = beta[static_cast<size_t>(j)];
    double bi = old_i;
    double bj = old_j;
    const double gi = grad[static_cast<size_t>(i)];
    const double gj = grad[static_cast<size_t>(j)];
    if (s < 0.0) {
      const double delta = (-gi - gj) / curvature;
      const double diff = bi - bj;
      bi += delta;
      bj += delta;
      if (diff > 0.0) {
        if (bj < 0.0) {
          bj = 0.0;
          bi = diff;
        }
      } else {
        if (bi < 0.0) {
          bi = 0.0;
          bj = -diff;
        }
      }
      if (bi > c) {
        bi = c;
        bj = c - diff;
      }
      if (bj > c) {
        bj = c;
        bi = c + diff;
      }
    } else {
      const double delta = (gi - gj) / curvature;
      const double sum = bi + bj;
      bi -= delta;
      bj += delta;
      if (sum > c) {
        if (bi > c) {
          bi = c;
          bj = sum - c;
        }
        if (bj > c) {
          bj = c;
          bi = sum - c;
        }
      } else {
        if (bj < 0.0) {
          bj = 0.0;
          bi = sum;
        }
        if (bi < 0.0) {
          bi = 0.0;
          bj = sum;
        }
      }
    }
    const double d_i = bi - old_i;
    const double d_j = bj - old_j;
    beta[static_cast<size_t>(i)] = bi;
    beta[static_cast<size_t>(j)] = bj;

    const double a_i = yi * d_i;
    const double a_j = yj * d_j;
    for (int64_t u = 0; u < l; ++u) {
      const double d = a_i * col_i[u] + a_j * col_j[u];
      grad[static_cast<size_t>(u)] += d;
      grad[static_cast<size_t>(u + l)] -= d;
    }
  }
  res.iterations = iter;

  // Bias from the optimality conditions, libsvm-style.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  int64_t free_count = 0;
  for (int64_t t = 0; t < n2; ++t) {
    const double yt = sign_of(t);
    const double yg = yt * grad[static_cast<size_t>(t)];
    const double b = beta[static_cast<size_t>(t)];
    if (b >= c) {
      if (yt < 0.0)
        ub = std::min(ub, yg);
      else
        lb = std::max(lb, yg);
    } else if (b <= 0.0) {
      if (yt > 0.0)
        ub = std::min(ub, yg);
      else
        lb = std::max(lb, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  double rho;
  if (free_count > 0)
    rho = free_sum / static_cast<double>(free_count);
  else
    rho = 0.5 * (ub + lb);
  res.bias = -rho;

  double obj = 0.0;
  for (int64_t t = 0; t < n2; ++t)
    obj += beta[static_cast<size_t>(t)] * (grad[static_cast<size_t>(t)] + lin[static_cast<size_t>(t)]);
  res.objective = 0.5 * obj;
  res.beta = std::move(beta);
  return res;
}

}  // namespace

double SvrModel::predict_row(const float* x) const {
  double acc = bias;
  const int64_t n_sv = support_vectors.rows;
  if (config.kernel == KernelType::linear) {
    for (int64_t i = 0; i < n_sv; ++i)
      acc += dual_coefs[static_cast<size_t>(i)] * dot_rows(support_vectors.row(i), x, dims);
    return acc;
  }
  const double xn = squared_norm(x, dims);
  for (int64_t i = 0; i < n_sv; ++i) {
    const float* sv = support_vectors.row(i);
    const double sq = squared_norm(sv, dims) + xn - 2.0 * dot_rows(sv, x, dims);
    acc += dual_coefs[static_cast<size_t>(i)] * std::exp(-config.gamma * std::max(sq, 0.0));
  }
  return acc;
}

Series SvrModel::predict(const Matrix& x) const {
  require(x.cols == dims, Status::DimensionMismatch,
          "feature dimension " + std::to_string(x.cols) + " does not match model (" +
              std::to_string(dims) + ")");
  Series out(static_cast<size_t>(x.rows));
  for (int64_t r = 0; r < x.rows; ++r) out[static_cast<size_t>(r)] = predict_row(x.row(r));
  return out;
}

SvrModel train_svr(const Matrix& x, const Series& y, const SvrConfig& cfg) {
  require(x.rows >= 2, Status::InvalidArgument, "need at least two training rows");
  require(static_cast<size_t>(x.rows) == y.size(), Status::DimensionMismatch,
          "row/target count mismatch");
  require(cfg.c > 0.0 && cfg.epsilon >= 0.0 && cfg.tol > 0.0, Status::InvalidArgument,
          "require C > 0, epsilon >= 0, tol > 0");
  for (float v : x.data)
    require(std::isfinite(v), Status::NumericFailure, "non-finite feature value");
  for (double v : y)
    require(std::isfinite(v), Status::NumericFailure, "non-finite target value");

  const double gamma = resolve_gamma(x, cfg);
  SmoResult res = solve_smo(x, y, cfg, gamma);

  const int64_t l = x.rows;
  std::vector<int64_t> sv_rows;
  std::vector<double> coefs;
  for (int64_t u = 0; u < l; ++u) {
    const double coef = res.beta[static_cast<size_t>(u)] - res.beta[static_cast<size_t>(u + l)];
    if (coef != 0.0) {
      sv_rows.push_back(u);
      coefs.push_back(coef);
    }
  }

  SvrModel model;
  model.config = cfg;
  model.config.gamma = gamma;
  model.dims = x.cols;
  model.bias = res.bias;
  model.converged = res.converged;
  model.iterations = res.iterations;
  model.dual_objective = res.objective;
  model.dual_coefs = std::move(coefs);
  model.sv_indices = sv_rows;
  model.support_vectors = Matrix(static_cast<int64_t>(sv_rows.size()), x.cols);
  for (size_t i = 0; i < sv_rows.size(); ++i) {
    const float* src = x.row(sv_rows[i]);
    std::copy(src, src + x.cols, model.support_vectors.row(static_cast<int64_t>(i)));
  }
  return model;
}

double kkt_residual(const SvrModel& model, const Matrix& x, const Series& y) {
  require(x.cols == model.dims, Status::DimensionMismatch, "feature dimension mismatch");
  require(static_cast<size_t>(x.rows) == y.size(), Status::DimensionMismatch,
          "row/target count mismatch");
  const double c = model.config.c;
  const double eps = model.config.epsilon;

  // Recover per-row coefficients; rows that are not support vectors have 0.
  require(model.sv_indices.size() == model.dual_coefs.size(), Status::InvalidArgument,
          "model lacks training-row indices (loaded from disk?)");
  std::vector<double> coef(static_cast<size_t>(x.rows), 0.0);
  for (size_t i = 0; i < model.sv_indices.size(); ++i) {
    const int64_t r = model.sv_indices[i];
    require(r >= 0 && r < x.rows, Status::InvalidArgument, "stale support-vector index");
    coef[static_cast<size_t>(r)] = model.dual_coefs[i];
  }

  double worst = 0.0;
  for (int64_t r = 0; r < x.rows; ++r) {
    const double err = model.predict_row(x.row(r)) - y[static_cast<size_t>(r)];
    const double b = coef[static_cast<size_t>(r)];
    double violation = 0.0;
    if (b >= c) {
      violation = err + eps;  // must sit below the tube: err <= -eps
    } else if (b <= -c) {
      violation = eps - err;  // must sit above the tube: err >= eps
    } else if (b > 0.0) {
      violation = std::fabs(err + eps);
    } else if (b < 0.0) {
      violation = std::fabs(err - eps);
    } else {
      violation = std::fabs(err) - eps;  // inside the tube
    }
    worst = std::max(worst, violation);
  }
  return worst;
}

GridSearchResult grid_search_svr(const Matrix& x, const Series& y,
                                 const std::vector<double>& c_grid,
                                 const std::vector<double>& eps_grid,
                                 int folds, const SvrConfig& base) {
  require(!c_grid.empty() && !eps_grid.empty(), Status::InvalidArgument, "empty grid");
  require(folds >= 2, Status::InvalidArgument, "need at least two folds");
  require(x.rows >= folds, Status::InvalidArgument, "more folds than rows");

  GridSearchResult result;
  double best_mse = std::numeric_limits<double>::infinity();
  for (double c : c_grid) {
    for (double eps : eps_grid) {
      SvrConfig cfg = base;
      cfg.c = c;
      cfg.epsilon = eps;

      double total_se = 0.0;
      int64_t total_count = 0;
      for (int f = 0; f < folds; ++f) {
        Matrix train_x(0, x.cols), test_x(0, x.cols);
        Series train_y, test_y;
        std::vector<int64_t> train_rows, test_rows;
        for (int64_t r = 0; r < x.rows; ++r) {
          if (r % folds == f)
            test_rows.push_back(r);
          else
            train_rows.push_back(r);
        }
        auto gather = [&](const std::vector<int64_t>& rows, Matrix& mx, Series& my) {
          mx = Matrix(static_cast<int64_t>(rows.size()), x.cols);
          my.resize(rows.size());
          for (size_t i = 0; i < rows.size(); ++i) {
            const float* src = x.row(rows[i]);
            std::copy(src, src + x.cols, mx.row(static_cast<int64_t>(i)));
            my[i] = y[static_cast<size_t>(rows[i])];
          }
        };
        gather(train_rows, train_x, train_y);
        gather(test_rows, test_x, test_y);
        require(train_x.rows >= 2, Status::InvalidArgument, "degenerate fold");

        SvrModel model = train_svr(train_x, train_y, cfg);
        Series pred = model.predict(test_x);
        for (size_t i = 0; i < pred.size(); ++i) {
          const double d = pred[i] - test_y[i];
          total_se += d * d;
        }
        total_count += test_x.rows;
      }
      const double mse = total_se / static_cast<double>(total_count);
      result.table.push_back({c, eps, mse});

      // Ties prefer larger epsilon, then smaller C.
      const bool better =
          mse < best_mse ||
          (mse == best_mse && (eps > result.epsilon_best ||
                               (eps == result.epsilon_best && c < result.c_best)));
      if (result.table.size() == 1 || better) {
        best_mse = mse;
        result.c_best = c;
        result.epsilon_best = eps;
      }
    }
  }
  return result;
}

}  // namespace avc
