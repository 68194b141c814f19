#include "avc/metrics.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "avc/text.hpp"

namespace avc {

double SweepReport::rvce_at(size_t i) const {
  return rvce_percent(n_true, n_est[i]);
}

SweepAccumulator::SweepAccumulator(const SweepConfig& cfg) : cfg_(cfg) {
  require(cfg.t_d > 0.0, Status::InvalidArgument, "distance threshold must be positive");
  require(cfg.n_thresholds >= 1, Status::InvalidArgument, "need at least one threshold");
  tp_.assign(static_cast<size_t>(cfg.n_thresholds), 0);
  fp_.assign(static_cast<size_t>(cfg.n_thresholds), 0);
  fn_.assign(static_cast<size_t>(cfg.n_thresholds), 0);
}

void SweepAccumulator::add_clip(const Series& prediction,
                                const std::vector<double>& passby_times,
                                double clip_len_s, double frame_hop_s) {
  Series smoothed = smooth_prediction(prediction, cfg_.detection.post_ma);
  std::vector<Minimum> minima = find_minima(smoothed, cfg_.detection.prominence);
  std::vector<Vpi> vpis = vehicle_pass_intervals(passby_times, cfg_.t_d, clip_len_s);
  n_true_ += static_cast<int64_t>(passby_times.size());

  for (int i = 0; i < cfg_.n_thresholds; ++i) {
    const double threshold = static_cast<double>(i) * cfg_.t_d / cfg_.n_thresholds;
    DetectionOutcome outcome = classify_minima(minima, threshold, vpis, frame_hop_s);
    tp_[static_cast<size_t>(i)] += outcome.tp;
    fp_[static_cast<size_t>(i)] += outcome.fp;
    fn_[static_cast<size_t>(i)] += outcome.fn;
  }
}

void SweepAccumulator::add_counts(const SweepReport& report) {
  require(report.size() == tp_.size(), Status::DimensionMismatch,
          "threshold grid size mismatch");
  require(report.t_d == cfg_.t_d, Status::InvalidArgument, "t_d mismatch");
  for (size_t i = 0; i < report.size(); ++i) {
    tp_[i] += report.tp[i];
    fp_[i] += report.fp[i];
    fn_[i] += report.fn[i];
  }
  n_true_ += report.n_true;
}

SweepReport SweepAccumulator::report() const {
  require(n_true_ > 0, Status::InvalidArgument,
          "no vehicles in the accumulated clips; probabilities are undefined");
  SweepReport rep;
  rep.t_d = cfg_.t_d;
  rep.n_true = n_true_;
  rep.tp = tp_;
  rep.fp = fp_;
  rep.fn = fn_;
  rep.thresholds.resize(static_cast<size_t>(cfg_.n_thresholds));
  rep.n_est.resize(static_cast<size_t>(cfg_.n_thresholds));
  for (int i = 0; i < cfg_.n_thresholds; ++i) {
    rep.thresholds[static_cast<size_t>(i)] =
        static_cast<double>(i) * cfg_.t_d / cfg_.n_thresholds;
    rep.n_est[static_cast<size_t>(i)] =
        rep.tp[static_cast<size_t>(i)] + rep.fp[static_cast<size_t>(i)];
  }
  return rep;
}

double nauc(const SweepReport& report) {
  require(report.size() > 0, Status::InvalidArgument, "empty report");
  double acc = 0.0;
  for (size_t i = 0; i < report.size(); ++i) acc += report.p_tp(i);
  return acc / static_cast<double>(report.size());
}

EfpResult equal_false_probabilities(const SweepReport& report) {
  require(report.size() > 0, Status::InvalidArgument, "empty report");
  EfpResult res;
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < report.size(); ++i) {
    const double diff = std::fabs(report.p_fp(i) - report.p_fn(i));
    if (diff < best) {
      best = diff;
      res.i_min = static_cast<int>(i);
    }
  }
  res.efp = report.p_fp(static_cast<size_t>(res.i_min));
  res.delta_efp = best;
  return res;
}

double rvce_percent(int64_t n_true, int64_t n_est) {
  require(n_true > 0, Status::InvalidArgument, "true count must be positive");
  return std::fabs(static_cast<double>(n_true - n_est)) /
         static_cast<double>(n_true) * 100.0;
}

void write_sweep_csv(const SweepReport& report, const std::string& path) {
  std::string out = "threshold_s,p_tp,p_fp,p_fn,n_est,rvce_pct\n";
  for (size_t i = 0; i < report.size(); ++i) {
    out += format_double(report.thresholds[i], 10);
    out += ',';
    out += format_double(report.p_tp(i), 10);
    out += ',';
    out += format_double(report.p_fp(i), 10);
    out += ',';
    out += format_double(report.p_fn(i), 10);
    out += ',';
    out += std::to_string(report.n_est[i]);
    out += ',';
    out += format_double(report.rvce_at(i), 10);
    out += '\n';
  }
  write_text_file(path, out);
}

void write_summary_json(const SweepReport& report, const std::string& path) {
  EfpResult efp = equal_false_probabilities(report);
  nlohmann::json j;
  j["nauc"] = nauc(report);
  j["efp"] = efp.efp;
  j["delta_efp"] = efp.delta_efp;
  j["i_min"] = efp.i_min;
  j["threshold_at_efp_s"] = report.thresholds[static_cast<size_t>(efp.i_min)];
  j["rvce_at_efp_pct"] = report.rvce_at(static_cast<size_t>(efp.i_min));
  j["n_true"] = report.n_true;
  j["n_est_at_efp"] = report.n_est[static_cast<size_t>(efp.i_min)];
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace avc
