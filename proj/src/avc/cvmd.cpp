#include "avc/cvmd.hpp"

#include <algorithm>
#include <cmath>

namespace avc {

double single_vehicle_distance(double t, double t_pass, double t_d) {
  require(t_d > 0.0, Status::InvalidArgument, "distance threshold must be positive");
  const double d = std::fabs(t - t_pass);
  return d < t_d ? d : t_d;
}

Series cvmd_series(const std::vector<double>& passby_times,
                   const std::vector<double>& frame_times, double t_d) {
  require(t_d > 0.0, Status::InvalidArgument, "distance threshold must be positive");
  Series out(frame_times.size(), t_d);
  for (size_t m = 0; m < frame_times.size(); ++m) {
    double best = t_d;
    for (double t_pass : passby_times)
      best = std::min(best, single_vehicle_distance(frame_times[m], t_pass, t_d));
    out[m] = best;
  }
  return out;
}

std::vector<Vpi> vehicle_pass_intervals(const std::vector<double>& passby_times,
                                        double t_d, double clip_len_s) {
  require(t_d > 0.0, Status::InvalidArgument, "distance threshold must be positive");
  require(std::is_sorted(passby_times.begin(), passby_times.end()),
          Status::InvalidArgument, "pass-by times must be sorted");

  std::vector<Vpi> out;
  out.reserve(passby_times.size());
  for (size_t l = 0; l < passby_times.size(); ++l) {
    const double t = passby_times[l];
    double start = t - t_d;
    double end = t + t_d;
    if (l > 0) start = std::max(start, 0.5 * (passby_times[l - 1] + t));
    if (l + 1 < passby_times.size()) end = std::min(end, 0.5 * (t + passby_times[l + 1]));
    start = std::max(start, 0.0);
    end = std::min(end, clip_len_s);
    out.push_back({static_cast<int>(l), start, end, t});
  }
  return out;
}

int vpi_containing(const std::vector<Vpi>& vpis, double t) {
  int best = -1;
  double best_dist = 0.0;
  for (const auto& vpi : vpis) {
    if (t < vpi.start_s || t > vpi.end_s) continue;
    const double dist = std::fabs(t - vpi.passby_s);
    if (best < 0 || dist < best_dist) {
      best = vpi.vehicle_index;
      best_dist = dist;
    }
  }
  return best;
}

}  // namespace avc
