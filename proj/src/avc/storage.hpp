#pragma once

#include <optional>
#include <string>
#include <vector>

#include "avc/common.hpp"
#include "avc/features.hpp"
#include "avc/svr.hpp"

namespace avc {

// All binary payloads are little-endian float32. Each artifact is a JSON
// header `<stem>.json` next to a raw data file `<stem>.bin`.

struct FeatureCacheHeader {
  std::string clip_id;
  int64_t n_frames = 0;
  int64_t n_features = 0;
  int64_t n_samples = 0;
  int sample_rate = 0;
  FeatureConfig config;
};

void save_feature_cache(const std::string& stem, const FeatureCacheHeader& header,
                        const Matrix& features);
Matrix load_feature_cache(const std::string& stem, FeatureCacheHeader* header = nullptr);

// True when a cache at `stem` exists, matches the config and clip identity,
// and is not older than `source_mtime_ns`.
bool feature_cache_fresh(const std::string& stem, const FeatureCacheHeader& expected);

struct TargetCacheHeader {
  std::string clip_id;
  int64_t n_frames = 0;
  double t_d = 0.0;
  double frame_hop_s = 0.0;
};

void save_target_cache(const std::string& stem, const TargetCacheHeader& header,
                       const Series& target);
Series load_target_cache(const std::string& stem, TargetCacheHeader* header = nullptr);
bool target_cache_fresh(const std::string& stem, const TargetCacheHeader& expected);

// Model persistence: JSON header plus one binary blob holding the support
// vectors (row-major) followed by the dual coefficients.
void save_model(const SvrModel& model, const std::string& stem,
                const std::optional<FeatureConfig>& feature_config = std::nullopt,
                std::optional<double> t_d = std::nullopt);

struct ModelExtras {
  std::optional<FeatureConfig> feature_config;
  std::optional<double> t_d;
};

SvrModel load_model(const std::string& stem, ModelExtras* extras = nullptr);

}  // namespace avc
