#include "avc/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <filesystem>
#include <functional>
#include <mutex>
#include <thread>

#include "avc/text.hpp"

namespace fs = std::filesystem;

namespace avc {

namespace {

// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first exception
// wins; remaining work still runs to completion.
void parallel_for(int64_t n, int jobs, const std::function<void(int64_t)>& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || n <= 1) {
    for (int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const int64_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  const int count = static_cast<int>(std::min<int64_t>(jobs, n));
  threads.reserve(static_cast<size_t>(count));
  for (int t = 0; t < count; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

std::string clip_id_for_entry(const Manifest& manifest, size_t i) {
  return fs::path(manifest.entries[i].clip_path).stem().string();
}

double frame_hop_seconds(const FeatureConfig& cfg) {
  return static_cast<double>(cfg.stft.n_hop) / kDatasetSampleRate;
}

std::vector<int> subset_columns(const FeatureConfig& cfg,
                                const std::vector<std::string>& subset) {
  FeatureLayout layout = FeatureLayout::for_config(cfg);
  if (subset.empty()) {
    std::vector<int> all(static_cast<size_t>(layout.total_cols()));
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return all;
  }
  return layout.columns_for(subset);
}

}  // namespace

std::string feature_cache_stem(const std::string& cache_dir, const std::string& clip_id) {
  return (fs::path(cache_dir) / (clip_id + ".features")).string();
}

std::string target_cache_stem(const std::string& cache_dir, const std::string& clip_id) {
  return (fs::path(cache_dir) / (clip_id + ".target")).string();
}

int extract_features(const Manifest& manifest, const std::string& cache_dir,
                     const PipelineConfig& cfg, bool force) {
  fs::create_directories(cache_dir);
  std::atomic<int> processed{0};
  parallel_for(static_cast<int64_t>(manifest.size()), cfg.jobs, [&](int64_t i) {
    const auto idx = static_cast<size_t>(i);
    const std::string clip_id = clip_id_for_entry(manifest, idx);
    const std::string stem = feature_cache_stem(cache_dir, clip_id);
    AudioClip clip = load_clip(manifest.resolve_clip(idx));

    FeatureCacheHeader header;
    header.clip_id = clip_id;
    header.n_samples = static_cast<int64_t>(clip.samples.size());
    header.sample_rate = clip.sample_rate;
    header.config = cfg.features;
    header.n_frames = frame_count(header.n_samples, cfg.features.stft);
    header.n_features = cfg.features.feature_dim();

    if (force || !feature_cache_fresh(stem, header)) {
      Matrix features = assemble_features(clip, cfg.features);
      header.n_frames = features.rows;
      header.n_features = features.cols;
      save_feature_cache(stem, header, features);
      processed.fetch_add(1);
    }

    const std::string ann_path = manifest.resolve_annotation(idx);
    if (ann_path.empty()) return;
    const std::string target_stem = target_cache_stem(cache_dir, clip_id);
    const double hop_s = frame_hop_seconds(cfg.features);
    TargetCacheHeader theader{clip_id, header.n_frames, cfg.t_d, hop_s};
    if (!force && target_cache_fresh(target_stem, theader)) return;

    AnnotationSet ann = load_annotations(ann_path, clip.duration_s());
    std::vector<double> frame_times(static_cast<size_t>(header.n_frames));
    for (int64_t f = 0; f < header.n_frames; ++f)
      frame_times[static_cast<size_t>(f)] = static_cast<double>(f) * hop_s;
    Series target = cvmd_series(ann.times(), frame_times, cfg.t_d);
    save_target_cache(target_stem, theader, target);
  });
  return processed.load();
}

SvrModel train_from_manifest(const Manifest& manifest, const std::string& cache_dir,
                             const PipelineConfig& cfg,
                             FeatureConfig* used_features) {
  require(manifest.size() > 0, Status::InvalidArgument, "empty manifest");
  require(cfg.stride >= 1, Status::InvalidArgument, "stride must be at least 1");

  // Column layout follows whatever configuration the caches were built with.
  const std::string first_id = clip_id_for_entry(manifest, 0);
  const std::string first_stem = feature_cache_stem(cache_dir, first_id);
  require(fs::exists(first_stem + ".json"), Status::Io,
          "missing feature cache for " + first_id + "; run extract first");
  FeatureCacheHeader first_header;
  load_feature_cache(first_stem, &first_header);
  if (used_features) *used_features = first_header.config;
  const std::vector<int> cols = subset_columns(first_header.config, cfg.feature_subset);

  std::vector<Matrix> parts(manifest.size());
  std::vector<Series> targets(manifest.size());
  parallel_for(static_cast<int64_t>(manifest.size()), cfg.jobs, [&](int64_t i) {
    const auto idx = static_cast<size_t>(i);
    const std::string clip_id = clip_id_for_entry(manifest, idx);
    const std::string stem = feature_cache_stem(cache_dir, clip_id);
    require(fs::exists(stem + ".json"), Status::Io,
            "missing feature cache for " + clip_id + "; run extract first");
    const std::string tstem = target_cache_stem(cache_dir, clip_id);
    require(fs::exists(tstem + ".json"), Status::Io,
            "missing target cache for " + clip_id + "; run extract first");

    FeatureCacheHeader header;
    Matrix features = load_feature_cache(stem, &header);
    require(features.cols == first_header.n_features, Status::DimensionMismatch,
            "cache feature width mismatch for " + clip_id);
    Series target = load_target_cache(tstem);
    require(features.rows == static_cast<int64_t>(target.size()), Status::DimensionMismatch,
            "feature/target length mismatch for " + clip_id);

    Matrix sliced = select_columns(features, cols);
    if (cfg.stride == 1) {
      parts[idx] = std::move(sliced);
      targets[idx] = std::move(target);
    } else {
      const int64_t kept = (sliced.rows + cfg.stride - 1) / cfg.stride;
      Matrix sub(kept, sliced.cols);
      Series suby(static_cast<size_t>(kept));
      for (int64_t r = 0; r < kept; ++r) {
        const float* src = sliced.row(r * cfg.stride);
        std::copy(src, src + sliced.cols, sub.row(r));
        suby[static_cast<size_t>(r)] = target[static_cast<size_t>(r * cfg.stride)];
      }
      parts[idx] = std::move(sub);
      targets[idx] = std::move(suby);
    }
  });

  int64_t total_rows = 0;
  for (const auto& p : parts) total_rows += p.rows;
  require(total_rows >= 2, Status::InvalidArgument, "not enough training rows");
  Matrix x(total_rows, parts.front().cols);
  Series y;
  y.reserve(static_cast<size_t>(total_rows));
  int64_t cursor = 0;
  for (size_t i = 0; i < parts.size(); ++i) {
    std::copy(parts[i].data.begin(), parts[i].data.end(), x.row(cursor));
    cursor += parts[i].rows;
    y.insert(y.end(), targets[i].begin(), targets[i].end());
  }

  SvrModel model = train_svr(x, y, cfg.svr);
  model.feature_subset = cfg.feature_subset;
  return model;
}

SweepReport sweep_manifest(const SvrModel& model, const Manifest& manifest,
                           const std::string& cache_dir, const PipelineConfig& cfg) {
  require(manifest.size() > 0, Status::InvalidArgument, "empty manifest");
  const std::vector<std::string>& subset =
      model.feature_subset.empty() ? cfg.feature_subset : model.feature_subset;

  const std::string first_stem =
      feature_cache_stem(cache_dir, clip_id_for_entry(manifest, 0));
  require(fs::exists(first_stem + ".json"), Status::Io,
          "missing feature cache for " + clip_id_for_entry(manifest, 0) +
              "; run extract first");
  FeatureCacheHeader first_header;
  load_feature_cache(first_stem, &first_header);
  const std::vector<int> cols = subset_columns(first_header.config, subset);

  SweepConfig sweep_cfg;
  sweep_cfg.t_d = cfg.t_d;
  sweep_cfg.n_thresholds = cfg.n_thresholds;
  sweep_cfg.detection = cfg.detection;
  SweepAccumulator acc(sweep_cfg);

  std::vector<Series> predictions(manifest.size());
  std::vector<std::vector<double>> passbys(manifest.size());
  std::vector<double> clip_lens(manifest.size());
  std::vector<double> hops(manifest.size());

  parallel_for(static_cast<int64_t>(manifest.size()), cfg.jobs, [&](int64_t i) {
    const auto idx = static_cast<size_t>(i);
    const std::string clip_id = clip_id_for_entry(manifest, idx);
    const std::string stem = feature_cache_stem(cache_dir, clip_id);
    require(fs::exists(stem + ".json"), Status::Io,
            "missing feature cache for " + clip_id + "; run extract first");
    FeatureCacheHeader header;
    Matrix features = load_feature_cache(stem, &header);
    Matrix sliced = select_columns(features, cols);
    predictions[idx] = model.predict(sliced);

    const std::string ann_path = manifest.resolve_annotation(idx);
    require(!ann_path.empty(), Status::InvalidArgument,
            "manifest entry " + clip_id + " lacks annotations; cannot evaluate");
    const double clip_len =
        static_cast<double>(header.n_samples) / header.sample_rate;
    AnnotationSet ann = load_annotations(ann_path, clip_len);
    passbys[idx] = ann.times();
    clip_lens[idx] = clip_len;
    hops[idx] = static_cast<double>(header.config.stft.n_hop) / header.sample_rate;
  });

  for (size_t i = 0; i < manifest.size(); ++i)
    acc.add_clip(predictions[i], passbys[i], clip_lens[i], hops[i]);
  return acc.report();
}

SweepReport crossval_manifest(const Manifest& manifest, int k, uint64_t seed,
                              const std::string& cache_dir, const PipelineConfig& cfg) {
  auto folds = split_kfold(manifest, k, seed);

  SweepConfig sweep_cfg;
  sweep_cfg.t_d = cfg.t_d;
  sweep_cfg.n_thresholds = cfg.n_thresholds;
  sweep_cfg.detection = cfg.detection;
  SweepAccumulator acc(sweep_cfg);

  for (const auto& [train, test] : folds) {
    SvrModel model = train_from_manifest(train, cache_dir, cfg);
    SweepReport fold_report = sweep_manifest(model, test, cache_dir, cfg);
    acc.add_counts(fold_report);
  }
  return acc.report();
}

std::vector<AblationRow> ablation_run(const Manifest& manifest,
                                      const std::vector<std::vector<std::string>>& subsets,
                                      int k, uint64_t seed, const std::string& cache_dir,
                                      const PipelineConfig& cfg) {
  require(!subsets.empty(), Status::InvalidArgument, "no feature subsets given");
  std::vector<AblationRow> rows;
  for (const auto& subset : subsets) {
    require(!subset.empty(), Status::InvalidArgument, "empty feature subset");
    PipelineConfig sub_cfg = cfg;
    sub_cfg.feature_subset = subset;
    SweepReport report = crossval_manifest(manifest, k, seed, cache_dir, sub_cfg);
    EfpResult efp = equal_false_probabilities(report);
    AblationRow row;
    for (size_t i = 0; i < subset.size(); ++i) {
      if (i) row.subset += '+';
      row.subset += subset[i];
    }
    row.nauc = nauc(report);
    row.efp = efp.efp;
    row.delta_efp = efp.delta_efp;
    row.i_min = efp.i_min;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_ablation_csv(const std::vector<AblationRow>& rows, const std::string& path) {
  std::string out = "subset,nauc,efp_pct,delta_efp_pct,i_min\n";
  for (const auto& row : rows) {
    out += row.subset;
    out += ',';
    out += format_double(row.nauc, 10);
    out += ',';
    out += format_double(row.efp * 100.0, 10);
    out += ',';
    out += format_double(row.delta_efp * 100.0, 10);
    out += ',';
    out += std::to_string(row.i_min);
    out += '\n';
  }
  write_text_file(path, out);
}

Series predict_clip(const SvrModel& model, const AudioClip& clip, const PipelineConfig& cfg) {
  Matrix features = assemble_features(clip, cfg.features);
  const std::vector<std::string>& subset =
      model.feature_subset.empty() ? cfg.feature_subset : model.feature_subset;
  Matrix sliced = select_columns(features, subset_columns(cfg.features, subset));
  return model.predict(sliced);
}

ClipCount count_clip(const SvrModel& model, const AudioClip& clip, double threshold_s,
                     const PipelineConfig& cfg, const AnnotationSet* annotations) {
  require(threshold_s >= 0.0 && threshold_s <= cfg.t_d, Status::InvalidArgument,
          "threshold must lie in [0, t_d]");
  Series prediction = predict_clip(model, clip, cfg);
  ClipCount result;
  result.frame_hop_s = frame_hop_seconds(cfg.features);
  result.smoothed = smooth_prediction(prediction, cfg.detection.post_ma);
  std::vector<Minimum> minima = find_minima(result.smoothed, cfg.detection.prominence);
  for (const Minimum& m : minima)
    if (m.value < threshold_s) result.detections.push_back(m);

  if (annotations) {
    std::vector<Vpi> vpis =
        vehicle_pass_intervals(annotations->times(), cfg.t_d, clip.duration_s());
    result.outcome = classify_minima(minima, threshold_s, vpis, result.frame_hop_s);
    result.classified = true;
    result.count = result.outcome.detected_count();
  } else {
    result.count = static_cast<int>(result.detections.size());
  }
  return result;
}

void write_detections_csv(const std::string& clip_id, const ClipCount& result,
                          const std::string& path) {
  std::string out = "clip_id,time_s,value_s,class\n";
  if (result.classified) {
    for (const auto& det : result.outcome.detections) {
      out += clip_id;
      out += ',';
      out += format_double(det.time_s, 10);
      out += ',';
      out += format_double(det.minimum.value, 10);
      out += ',';
      out += det.label == MinimumLabel::true_positive ? "TP" : "FP";
      out += '\n';
    }
    out += "# summary tp=" + std::to_string(result.outcome.tp) +
           " fp=" + std::to_string(result.outcome.fp) +
           " fn=" + std::to_string(result.outcome.fn) + "\n";
  } else {
    for (const auto& det : result.detections) {
      out += clip_id;
      out += ',';
      out += format_double(static_cast<double>(det.index) * result.frame_hop_s, 10);
      out += ',';
      out += format_double(det.value, 10);
      out += ",detection\n";
    }
  }
  write_text_file(path, out);
}

void write_prediction_csv(const Series& prediction, double frame_hop_s,
                          const std::string& path) {
  std::string out = "time_s,predicted_distance_s\n";
  for (size_t i = 0; i < prediction.size(); ++i) {
    out += format_double(static_cast<double>(i) * frame_hop_s, 10);
    out += ',';
    out += format_double(prediction[i], 10);
    out += '\n';
  }
  write_text_file(path, out);
}

std::vector<std::string> parse_feature_subset(const std::string& text) {
  std::vector<std::string> names;
  std::string current;
  for (char c : text) {
    if (c == '+' || c == ',') {
      if (!current.empty()) names.push_back(current);
      current.clear();
    } else if (c != ' ') {
      current.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
  }
  if (!current.empty()) names.push_back(current);
  return names;
}

}  // namespace avc
