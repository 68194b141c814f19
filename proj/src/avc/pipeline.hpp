#pragma once

#include <string>
#include <vector>

#include "avc/common.hpp"
#include "avc/dataset.hpp"
#include "avc/detector.hpp"
#include "avc/features.hpp"
#include "avc/metrics.hpp"
#include "avc/storage.hpp"
#include "avc/svr.hpp"

namespace avc {

struct PipelineConfig {
  FeatureConfig features;
  double t_d = kDefaultDistanceThreshold;
  SvrConfig svr;
  DetectionConfig detection;
  int n_thresholds = 100;
  int stride = 1;  // training-row subsampling, 1 = every frame
  int jobs = 1;    // worker threads for per-clip stages
  std::vector<std::string> feature_subset;  // empty = all blocks
};

// Cache file stems for a clip id inside a cache directory.
std::string feature_cache_stem(const std::string& cache_dir, const std::string& clip_id);
std::string target_cache_stem(const std::string& cache_dir, const std::string& clip_id);

// Computes and stores feature tensors (and distance targets where
// annotations exist) for every manifest entry. Up-to-date caches are
// skipped unless `force`. Returns the number of clips processed anew.
int extract_features(const Manifest& manifest, const std::string& cache_dir,
                     const PipelineConfig& cfg, bool force = false);

// Concatenates cached features/targets (honoring subset and stride) and
// trains the regressor. Caches must exist; the column layout comes from the
// cache headers. used_features (optional) receives the cached feature
// configuration, e.g. for embedding into the model file.
SvrModel train_from_manifest(const Manifest& manifest, const std::string& cache_dir,
                             const PipelineConfig& cfg,
                             FeatureConfig* used_features = nullptr);

// Predicts every manifest clip from its cache and pools the detection sweep.
SweepReport sweep_manifest(const SvrModel& model, const Manifest& manifest,
                           const std::string& cache_dir, const PipelineConfig& cfg);

// k-fold cross validation with pooled counts across the fold test sets.
SweepReport crossval_manifest(const Manifest& manifest, int k, uint64_t seed,
                              const std::string& cache_dir, const PipelineConfig& cfg);

struct AblationRow {
  std::string subset;  // e.g. "HFP+LMS"
  double nauc = 0.0;
  double efp = 0.0;
  double delta_efp = 0.0;
  int i_min = 0;
};

// Repeats the cross-validated sweep for each feature subset.
std::vector<AblationRow> ablation_run(const Manifest& manifest,
                                      const std::vector<std::vector<std::string>>& subsets,
                                      int k, uint64_t seed, const std::string& cache_dir,
                                      const PipelineConfig& cfg);

void write_ablation_csv(const std::vector<AblationRow>& rows, const std::string& path);

// In-memory feature extraction + prediction for a single clip.
Series predict_clip(const SvrModel& model, const AudioClip& clip, const PipelineConfig& cfg);

struct ClipCount {
  int count = 0;
  std::vector<Minimum> detections;     // minima below the threshold
  Series smoothed;                     // filtered prediction
  double frame_hop_s = 0.0;
  bool classified = false;             // true when annotations were supplied
  DetectionOutcome outcome;
};

ClipCount count_clip(const SvrModel& model, const AudioClip& clip, double threshold_s,
                     const PipelineConfig& cfg, const AnnotationSet* annotations = nullptr);

void write_detections_csv(const std::string& clip_id, const ClipCount& result,
                          const std::string& path);
void write_prediction_csv(const Series& prediction, double frame_hop_s,
                          const std::string& path);

std::vector<std::string> parse_feature_subset(const std::string& text);

}  // namespace avc
