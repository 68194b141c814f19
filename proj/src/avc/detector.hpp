#pragma once

#include <vector>

#include "avc/common.hpp"
#include "avc/cvmd.hpp"

namespace avc {

struct DetectionConfig {
  std::vector<int> post_ma = {7, 5, 3};  // smoothing applied to predictions
  double prominence = 0.05;
};

struct Minimum {
  int64_t index = 0;
  double value = 0.0;
};

// Moving-average filtering of the regression output before minima detection.
Series smooth_prediction(const Series& prediction, const std::vector<int>& lengths);

// Interior local minima with topographic prominence >= `prominence`
// (measured on the negated series). Plateaus report their midpoint index,
// left of center on even-sized plateaus. Endpoints are never minima.
std::vector<Minimum> find_minima(const Series& series, double prominence);

enum class MinimumLabel { true_positive, false_positive };

struct ClassifiedMinimum {
  Minimum minimum;
  double time_s = 0.0;
  MinimumLabel label = MinimumLabel::false_positive;
  int vehicle_index = -1;  // matched vehicle for true positives
};

struct DetectionOutcome {
  std::vector<ClassifiedMinimum> detections;  // minima below threshold
  int tp = 0;
  int fp = 0;
  int fn = 0;

  int detected_count() const { return tp + fp; }
};

// Applies the two detection criteria: a minimum counts only when its value
// is strictly below the threshold, and it must fall inside a pass-by
// interval to be a true positive. Each interval yields at most one true
// positive (deepest minimum, earliest on ties); surplus in-interval minima
// and all out-of-interval minima are false positives. Intervals with no
// qualifying minimum are false negatives.
DetectionOutcome classify_minima(const std::vector<Minimum>& minima,
                                 double threshold_s,
                                 const std::vector<Vpi>& vpis,
                                 double frame_hop_s);

}  // namespace avc
