#pragma once

#include <vector>

#include "avc/common.hpp"

namespace avc {

constexpr double kDefaultDistanceThreshold = 0.75;  // seconds

// Clipped vehicle-to-microphone distance of one vehicle passing at t_pass:
// |t - t_pass| while below t_d, t_d elsewhere.
double single_vehicle_distance(double t, double t_pass, double t_d);

// Pointwise minimum of the per-vehicle distances, sampled at frame_times.
// No vehicles gives the constant t_d.
Series cvmd_series(const std::vector<double>& passby_times,
                   const std::vector<double>& frame_times, double t_d);

struct Vpi {
  int vehicle_index = 0;
  double start_s = 0.0;
  double end_s = 0.0;
  double passby_s = 0.0;
};

// Pass-by intervals [T - t_d, T + t_d], clipped to [0, clip_len]. Where
// neighbours would overlap the shared boundary is the midpoint between the
// two pass-by times, so intervals stay disjoint.
std::vector<Vpi> vehicle_pass_intervals(const std::vector<double>& passby_times,
                                        double t_d, double clip_len_s);

// Index of the interval containing t, or -1. A time sitting exactly on a
// shared boundary goes to the interval whose pass-by time is nearer
// (earlier one on an exact tie).
int vpi_containing(const std::vector<Vpi>& vpis, double t);

}  // namespace avc
