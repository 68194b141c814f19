#pragma once

#include <string>
#include <vector>

#include "avc/common.hpp"
#include "avc/detector.hpp"

namespace avc {

struct SweepConfig {
  double t_d = kDefaultDistanceThreshold;
  int n_thresholds = 100;  // thresholds i * t_d / n for i = 0..n-1
  DetectionConfig detection;
};

struct SweepReport {
  double t_d = kDefaultDistanceThreshold;
  std::vector<double> thresholds;
  std::vector<int64_t> tp, fp, fn, n_est;
  int64_t n_true = 0;

  size_t size() const { return thresholds.size(); }
  double p_tp(size_t i) const {
    return static_cast<double>(tp[i]) / static_cast<double>(n_true);
  }
  // fn = n_true - tp by construction, so the complement is exact.
  double p_fn(size_t i) const { return 1.0 - p_tp(i); }
  double p_fp(size_t i) const {
    return static_cast<double>(fp[i]) / static_cast<double>(n_true);
  }
  double rvce_at(size_t i) const;
};

// Pools detection counts over clips for every threshold on the grid.
// Minima are detected once per clip; only the threshold criterion is
// re-evaluated per grid point.
class SweepAccumulator {
 public:
  explicit SweepAccumulator(const SweepConfig& cfg);

  void add_clip(const Series& prediction, const std::vector<double>& passby_times,
                double clip_len_s, double frame_hop_s);

  // Pools the counts of an already-computed report (e.g. one fold's sweep).
  // The grid and t_d must match.
  void add_counts(const SweepReport& report);

  // Requires at least one vehicle over the accumulated clips.
  SweepReport report() const;

 private:
  SweepConfig cfg_;
  std::vector<int64_t> tp_, fp_, fn_;
  int64_t n_true_ = 0;
};

// Mean of p_tp over the threshold grid (the normalized area under the
// true-positive curve).
double nauc(const SweepReport& report);

struct EfpResult {
  double efp = 0.0;        // p_fp at the crossing threshold
  double delta_efp = 0.0;  // |p_fp - p_fn| at that threshold
  int i_min = 0;           // threshold index of the closest approach
};

// Threshold where false-positive and false-negative probabilities are
// closest (smallest index on ties).
EfpResult equal_false_probabilities(const SweepReport& report);

// Relative counting error in percent, |true - estimated| / true * 100.
double rvce_percent(int64_t n_true, int64_t n_est);

void write_sweep_csv(const SweepReport& report, const std::string& path);
void write_summary_json(const SweepReport& report, const std::string& path);

}  // namespace avc
