#include "avc/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "avc/features.hpp"

namespace avc {

Series smooth_prediction(const Series& prediction, const std::vector<int>& lengths) {
  int max_len = 1;
  for (int len : lengths) max_len = std::max(max_len, len);
  require(static_cast<int64_t>(prediction.size()) >= max_len, Status::InvalidArgument,
          "prediction shorter than the smoothing window");
  return ma_smooth(prediction, lengths);
}

std::vector<Minimum> find_minima(const Series& series, double prominence) {
  require(series.size() >= 3, Status::InvalidArgument, "series too short for minima detection");
  require(prominence > 0.0, Status::InvalidArgument, "prominence must be positive");
  const int64_t n = static_cast<int64_t>(series.size());

  // Work on the negated series: minima become peaks.
  auto g = [&](int64_t i) { return -series[static_cast<size_t>(i)]; };

  std::vector<int64_t> peaks;
  int64_t i = 1;
  while (i < n - 1) {
    if (g(i - 1) < g(i)) {
      int64_t ahead = i + 1;
      while (ahead < n - 1 && g(ahead) == g(i)) ++ahead;
      if (g(ahead) < g(i)) {
        peaks.push_back(i + (ahead - 1 - i) / 2);  // plateau midpoint, left of center
        i = ahead;
        continue;
      }
      i = ahead;
      continue;
    }
    ++i;
  }

  std::vector<Minimum> out;
  for (int64_t p : peaks) {
    // Prominence: height above the higher of the lowest saddles on the way
    // to the nearest higher terrain (or the series ends).
    double left_min = g(p);
    for (int64_t j = p - 1; j >= 0 && g(j) <= g(p); --j) left_min = std::min(left_min, g(j));
    double right_min = g(p);
    for (int64_t j = p + 1; j < n && g(j) <= g(p); ++j) right_min = std::min(right_min, g(j));
    const double prom = g(p) - std::max(left_min, right_min);
    if (prom >= prominence)
      out.push_back({p, series[static_cast<size_t>(p)]});
  }
  return out;
}

DetectionOutcome classify_minima(const std::vector<Minimum>& minima,
                                 double threshold_s,
                                 const std::vector<Vpi>& vpis,
                                 double frame_hop_s) {
  require(frame_hop_s > 0.0, Status::InvalidArgument, "frame hop must be positive");
  for (size_t i = 1; i < vpis.size(); ++i)
    require(vpis[i].start_s >= vpis[i - 1].end_s - 1e-12, Status::InvalidArgument,
            "pass-by intervals overlap");

  // Sort by index so the outcome does not depend on input order.
  std::vector<Minimum> sorted = minima;
  std::sort(sorted.begin(), sorted.end(), [](const Minimum& a, const Minimum& b) {
    return a.index < b.index;
  });

  DetectionOutcome outcome;
  std::vector<int> best_per_vpi(vpis.size(), -1);  // index into outcome.detections
  for (const Minimum& m : sorted) {
    if (!(m.value < threshold_s)) continue;  // criterion 1, strict
    ClassifiedMinimum cm;
    cm.minimum = m;
    cm.time_s = static_cast<double>(m.index) * frame_hop_s;
    cm.label = MinimumLabel::false_positive;
    const int v = vpi_containing(vpis, cm.time_s);
    if (v >= 0) {
      int& best = best_per_vpi[static_cast<size_t>(v)];
      if (best < 0) {
        cm.label = MinimumLabel::true_positive;
        cm.vehicle_index = v;
        best = static_cast<int>(outcome.detections.size());
      } else if (m.value < outcome.detections[static_cast<size_t>(best)].minimum.value) {
        // Deeper minimum takes over as the interval's true positive.
        auto& prev = outcome.detections[static_cast<size_t>(best)];
        prev.label = MinimumLabel::false_positive;
        prev.vehicle_index = -1;
        cm.label = MinimumLabel::true_positive;
        cm.vehicle_index = v;
        best = static_cast<int>(outcome.detections.size());
      }
    }
    outcome.detections.push_back(cm);
  }

  for (const auto& cm : outcome.detections) {
    if (cm.label == MinimumLabel::true_positive)
      ++outcome.tp;
    else
      ++outcome.fp;
  }
  outcome.fn = static_cast<int>(vpis.size()) - outcome.tp;
  return outcome;
}

}  // namespace avc
