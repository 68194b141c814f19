#include "avc.h"

#include <cstring>
#include <optional>
#include <string>

#include "avc/dataset.hpp"
#include "avc/detector.hpp"
#include "avc/features.hpp"
#include "avc/metrics.hpp"
#include "avc/pipeline.hpp"
#include "avc/storage.hpp"
#include "avc/svr.hpp"

namespace {

thread_local std::string g_last_error;

avc_status set_error(avc::Status code, const std::string& message) {
  g_last_error = message;
  return static_cast<avc_status>(static_cast<int>(code));
}

// Runs a callable, translating exceptions into status codes.
template <typename Fn>
avc_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return AVC_OK;
  } catch (const avc::Error& e) {
    return set_error(e.code(), e.what());
  } catch (const std::exception& e) {
    return set_error(avc::Status::NumericFailure, e.what());
  }
}

avc_status require_arg(bool ok, const char* message) {
  if (ok) return AVC_OK;
  return set_error(avc::Status::InvalidArgument, message);
}

avc::PipelineConfig to_core(const avc_pipeline_config& c) {
  avc::PipelineConfig cfg;
  cfg.features.stft.n_window = c.n_window;
  cfg.features.stft.n_hop = c.n_hop;
  cfg.features.stft.centered = c.centered != 0;
  cfg.features.context_k = c.context_k;
  cfg.features.n_mel = c.n_mel;
  cfg.features.hfp_fmin_hz = c.hfp_fmin_hz;
  cfg.features.hfp_fmax_hz = c.hfp_fmax_hz;
  cfg.features.trf_percentile = c.trf_percentile;
  cfg.features.feature_ma.assign(c.feature_ma, c.feature_ma + c.n_feature_ma);
  cfg.t_d = c.t_d;
  cfg.svr.c = c.svr_c;
  cfg.svr.epsilon = c.svr_epsilon;
  cfg.svr.gamma = c.svr_gamma;
  cfg.svr.tol = c.svr_tol;
  cfg.svr.max_iter = c.svr_max_iter;
  cfg.svr.kernel = c.svr_kernel == AVC_KERNEL_LINEAR ? avc::KernelType::linear
                                                     : avc::KernelType::rbf;
  cfg.svr.cache_mb = c.svr_cache_mb;
  cfg.detection.post_ma.assign(c.post_ma, c.post_ma + c.n_post_ma);
  cfg.detection.prominence = c.prominence;
  cfg.n_thresholds = c.n_thresholds;
  cfg.stride = c.stride;
  cfg.jobs = c.jobs;
  cfg.feature_subset = avc::parse_feature_subset(c.feature_subset);
  return cfg;
}

avc::SweepConfig sweep_config(const avc::PipelineConfig& cfg) {
  avc::SweepConfig sc;
  sc.t_d = cfg.t_d;
  sc.n_thresholds = cfg.n_thresholds;
  sc.detection = cfg.detection;
  return sc;
}

}  // namespace

struct avc_clip {
  avc::AudioClip clip;
};

struct avc_annotations {
  avc::AnnotationSet set;
};

struct avc_manifest {
  avc::Manifest manifest;
};

struct avc_matrix {
  avc::Matrix matrix;
};

struct avc_model {
  avc::SvrModel model;
  std::optional<avc::FeatureConfig> feature_config;
  std::optional<double> t_d;
};

struct avc_sweep {
  avc::SweepAccumulator accumulator;
  mutable std::optional<avc::SweepReport> report;

  explicit avc_sweep(const avc::SweepConfig& cfg) : accumulator(cfg) {}

  const avc::SweepReport& materialize() const {
    if (!report) report = accumulator.report();
    return *report;
  }
};

extern "C" {

const char* avc_version(void) { return "0.1.0"; }

const char* avc_status_name(avc_status status) {
  return avc::status_name(static_cast<avc::Status>(static_cast<int>(status)));
}

const char* avc_last_error(void) { return g_last_error.c_str(); }

void avc_pipeline_config_defaults(avc_pipeline_config* config) {
  if (!config) return;
  std::memset(config, 0, sizeof(*config));
  config->n_window = 4096;
  config->n_hop = 1638;
  config->centered = 1;
  config->context_k = 10;
  config->n_mel = 64;
  config->hfp_fmin_hz = 6000.0;
  config->hfp_fmax_hz = 22050.0;
  config->trf_percentile = 90.0;
  config->feature_ma[0] = 11;
  config->feature_ma[1] = 5;
  config->n_feature_ma = 2;
  config->t_d = 0.75;
  config->svr_c = 1.0;
  config->svr_epsilon = 0.05;
  config->svr_gamma = 0.0;
  config->svr_tol = 1e-3;
  config->svr_max_iter = 10000000;
  config->svr_kernel = AVC_KERNEL_RBF;
  config->svr_cache_mb = 512.0;
  config->post_ma[0] = 7;
  config->post_ma[1] = 5;
  config->post_ma[2] = 3;
  config->n_post_ma = 3;
  config->prominence = 0.05;
  config->n_thresholds = 100;
  config->stride = 1;
  config->jobs = 1;
  config->feature_subset[0] = '\0';
}

/* ---- clips ---- */

avc_status avc_clip_load(const char* path, avc_clip** out) {
  if (auto s = require_arg(path && out, "path and out must be non-null")) return s;
  return guarded([&] { *out = new avc_clip{avc::load_clip(path)}; });
}

avc_status avc_clip_save(const avc_clip* clip, const char* path) {
  if (auto s = require_arg(clip && path, "clip and path must be non-null")) return s;
  return guarded([&] { avc::save_clip(clip->clip, path); });
}

avc_status avc_clip_synth(const char* id, double duration_s,
                          const double* passby_times, int n_passbys,
                          double noise_level, uint64_t seed, avc_clip** out,
                          avc_annotations** out_annotations) {
  if (auto s = require_arg(out && (n_passbys == 0 || passby_times),
                           "out must be non-null; passby_times required"))
    return s;
  return guarded([&] {
    avc::SynthSpec spec;
    spec.id = id ? id : "synth";
    spec.duration_s = duration_s;
    spec.passby_times.assign(passby_times, passby_times + n_passbys);
    spec.noise_level = noise_level;
    spec.seed = seed;
    auto [clip, ann] = avc::synth_clip(spec);
    *out = new avc_clip{std::move(clip)};
    if (out_annotations) *out_annotations = new avc_annotations{std::move(ann)};
  });
}

int64_t avc_clip_length(const avc_clip* clip) {
  return clip ? static_cast<int64_t>(clip->clip.samples.size()) : 0;
}

int avc_clip_sample_rate(const avc_clip* clip) {
  return clip ? clip->clip.sample_rate : 0;
}

double avc_clip_duration_s(const avc_clip* clip) {
  return clip ? clip->clip.duration_s() : 0.0;
}

const char* avc_clip_id(const avc_clip* clip) {
  return clip ? clip->clip.id.c_str() : "";
}

const double* avc_clip_samples(const avc_clip* clip) {
  return clip ? clip->clip.samples.data() : nullptr;
}

void avc_clip_free(avc_clip* clip) { delete clip; }

/* ---- annotations ---- */

avc_status avc_annotations_load(const char* path, double max_time_s,
                                avc_annotations** out) {
  if (auto s = require_arg(path && out, "path and out must be non-null")) return s;
  return guarded([&] {
    *out = new avc_annotations{avc::load_annotations(path, max_time_s)};
  });
}

avc_status avc_annotations_save(const avc_annotations* annotations, const char* path) {
  if (auto s = require_arg(annotations && path, "annotations and path must be non-null"))
    return s;
  return guarded([&] { avc::save_annotations(annotations->set, path); });
}

int avc_annotations_count(const avc_annotations* annotations) {
  return annotations ? static_cast<int>(annotations->set.size()) : 0;
}

double avc_annotations_time(const avc_annotations* annotations, int index) {
  if (!annotations || index < 0 ||
      index >= static_cast<int>(annotations->set.size()))
    return -1.0;
  return annotations->set.entries[static_cast<size_t>(index)].time_s;
}

const char* avc_annotations_class(const avc_annotations* annotations, int index) {
  if (!annotations || index < 0 ||
      index >= static_cast<int>(annotations->set.size()))
    return "";
  return annotations->set.entries[static_cast<size_t>(index)].vehicle_class.c_str();
}

void avc_annotations_free(avc_annotations* annotations) { delete annotations; }

/* ---- features ---- */

avc_status avc_features_compute(const avc_clip* clip,
                                const avc_pipeline_config* config,
                                avc_matrix** out) {
  if (auto s = require_arg(clip && config && out, "clip, config and out must be non-null"))
    return s;
  return guarded([&] {
    avc::PipelineConfig cfg = to_core(*config);
    *out = new avc_matrix{avc::assemble_features(clip->clip, cfg.features)};
  });
}

int64_t avc_matrix_rows(const avc_matrix* matrix) {
  return matrix ? matrix->matrix.rows : 0;
}

int64_t avc_matrix_cols(const avc_matrix* matrix) {
  return matrix ? matrix->matrix.cols : 0;
}

const float* avc_matrix_data(const avc_matrix* matrix) {
  return matrix ? matrix->matrix.data.data() : nullptr;
}

void avc_matrix_free(avc_matrix* matrix) { delete matrix; }

avc_status avc_cvmd(const avc_annotations* annotations, int64_t n_frames,
                    double frame_hop_s, double t_d, double* out) {
  if (auto s = require_arg(annotations && out && n_frames > 0 && frame_hop_s > 0,
                           "need annotations, out, positive frame count and hop"))
    return s;
  return guarded([&] {
    std::vector<double> frame_times(static_cast<size_t>(n_frames));
    for (int64_t i = 0; i < n_frames; ++i)
      frame_times[static_cast<size_t>(i)] = static_cast<double>(i) * frame_hop_s;
    avc::Series series = avc::cvmd_series(annotations->set.times(), frame_times, t_d);
    std::copy(series.begin(), series.end(), out);
  });
}

/* ---- regression ---- */

avc_status avc_train(const avc_matrix* x, const double* y,
                     const avc_pipeline_config* config, avc_model** out) {
  if (auto s = require_arg(x && y && config && out, "x, y, config and out must be non-null"))
    return s;
  return guarded([&] {
    avc::PipelineConfig cfg = to_core(*config);
    avc::Series targets(y, y + x->matrix.rows);
    *out = new avc_model{avc::train_svr(x->matrix, targets, cfg.svr), std::nullopt,
                         std::nullopt};
  });
}

avc_status avc_model_predict(const avc_model* model, const avc_matrix* x,
                             double* out) {
  if (auto s = require_arg(model && x && out, "model, x and out must be non-null"))
    return s;
  return guarded([&] {
    avc::Series pred = model->model.predict(x->matrix);
    std::copy(pred.begin(), pred.end(), out);
  });
}

avc_status avc_model_save(const avc_model* model, const char* stem) {
  if (auto s = require_arg(model && stem, "model and stem must be non-null")) return s;
  return guarded([&] {
    avc::save_model(model->model, stem, model->feature_config, model->t_d);
  });
}

avc_status avc_model_load(const char* stem, avc_model** out) {
  if (auto s = require_arg(stem && out, "stem and out must be non-null")) return s;
  return guarded([&] {
    avc::ModelExtras extras;
    avc::SvrModel m = avc::load_model(stem, &extras);
    *out = new avc_model{std::move(m), extras.feature_config, extras.t_d};
  });
}

int64_t avc_model_n_support(const avc_model* model) {
  return model ? model->model.n_support() : 0;
}

int64_t avc_model_dims(const avc_model* model) {
  return model ? model->model.dims : 0;
}

double avc_model_bias(const avc_model* model) {
  return model ? model->model.bias : 0.0;
}

int avc_model_converged(const avc_model* model) {
  return model && model->model.converged ? 1 : 0;
}

void avc_model_free(avc_model* model) { delete model; }

/* ---- detection and sweeps ---- */

avc_status avc_count_series(const double* prediction, int64_t n_frames,
                            double frame_hop_s, double threshold_s,
                            double clip_len_s,
                            const avc_pipeline_config* config,
                            const avc_annotations* annotations,
                            int* out_count, int* out_tp, int* out_fp,
                            int* out_fn) {
  if (auto s = require_arg(prediction && config && out_count && n_frames > 0,
                           "prediction, config and out_count must be non-null"))
    return s;
  return guarded([&] {
    avc::PipelineConfig cfg = to_core(*config);
    avc::Series series(prediction, prediction + n_frames);
    avc::Series smoothed = avc::smooth_prediction(series, cfg.detection.post_ma);
    auto minima = avc::find_minima(smoothed, cfg.detection.prominence);
    if (annotations) {
      auto vpis = avc::vehicle_pass_intervals(annotations->set.times(), cfg.t_d,
                                              clip_len_s);
      avc::DetectionOutcome outcome =
          avc::classify_minima(minima, threshold_s, vpis, frame_hop_s);
      *out_count = outcome.detected_count();
      if (out_tp) *out_tp = outcome.tp;
      if (out_fp) *out_fp = outcome.fp;
      if (out_fn) *out_fn = outcome.fn;
    } else {
      int count = 0;
      for (const auto& m : minima)
        if (m.value < threshold_s) ++count;
      *out_count = count;
      if (out_tp) *out_tp = -1;
      if (out_fp) *out_fp = -1;
      if (out_fn) *out_fn = -1;
    }
  });
}

avc_status avc_sweep_new(const avc_pipeline_config* config, avc_sweep** out) {
  if (auto s = require_arg(config && out, "config and out must be non-null")) return s;
  return guarded([&] {
    *out = new avc_sweep(sweep_config(to_core(*config)));
  });
}

avc_status avc_sweep_add_clip(avc_sweep* sweep, const double* prediction,
                              int64_t n_frames, double frame_hop_s,
                              double clip_len_s,
                              const avc_annotations* annotations) {
  if (auto s = require_arg(sweep && prediction && annotations && n_frames > 0,
                           "sweep, prediction and annotations must be non-null"))
    return s;
  return guarded([&] {
    avc::Series series(prediction, prediction + n_frames);
    sweep->accumulator.add_clip(series, annotations->set.times(), clip_len_s,
                                frame_hop_s);
    sweep->report.reset();
  });
}

int avc_sweep_size(const avc_sweep* sweep) {
  if (!sweep) return 0;
  try {
    return static_cast<int>(sweep->materialize().size());
  } catch (const std::exception&) {
    return 0;
  }
}

avc_status avc_sweep_point(const avc_sweep* sweep, int index,
                           double* out_threshold_s, double* out_p_tp,
                           double* out_p_fp, double* out_p_fn,
                           long long* out_n_est) {
  if (auto s = require_arg(sweep && index >= 0, "sweep must be non-null")) return s;
  return guarded([&] {
    const avc::SweepReport& rep = sweep->materialize();
    avc::require(index < static_cast<int>(rep.size()), avc::Status::InvalidArgument,
                 "threshold index out of range");
    const auto i = static_cast<size_t>(index);
    if (out_threshold_s) *out_threshold_s = rep.thresholds[i];
    if (out_p_tp) *out_p_tp = rep.p_tp(i);
    if (out_p_fp) *out_p_fp = rep.p_fp(i);
    if (out_p_fn) *out_p_fn = rep.p_fn(i);
    if (out_n_est) *out_n_est = rep.n_est[i];
  });
}

avc_status avc_sweep_nauc(const avc_sweep* sweep, double* out) {
  if (auto s = require_arg(sweep && out, "sweep and out must be non-null")) return s;
  return guarded([&] { *out = avc::nauc(sweep->materialize()); });
}

avc_status avc_sweep_efp(const avc_sweep* sweep, double* out_efp,
                         double* out_delta_efp, int* out_i_min) {
  if (auto s = require_arg(sweep != nullptr, "sweep must be non-null")) return s;
  return guarded([&] {
    avc::EfpResult res = avc::equal_false_probabilities(sweep->materialize());
    if (out_efp) *out_efp = res.efp;
    if (out_delta_efp) *out_delta_efp = res.delta_efp;
    if (out_i_min) *out_i_min = res.i_min;
  });
}

avc_status avc_sweep_rvce(const avc_sweep* sweep, int index, double* out_pct) {
  if (auto s = require_arg(sweep && out_pct && index >= 0,
                           "sweep and out_pct must be non-null"))
    return s;
  return guarded([&] {
    const avc::SweepReport& rep = sweep->materialize();
    avc::require(index < static_cast<int>(rep.size()), avc::Status::InvalidArgument,
                 "threshold index out of range");
    *out_pct = rep.rvce_at(static_cast<size_t>(index));
  });
}

avc_status avc_sweep_write(const avc_sweep* sweep, const char* csv_path,
                           const char* json_path) {
  if (auto s = require_arg(sweep != nullptr, "sweep must be non-null")) return s;
  return guarded([&] {
    const avc::SweepReport& rep = sweep->materialize();
    if (csv_path) avc::write_sweep_csv(rep, csv_path);
    if (json_path) avc::write_summary_json(rep, json_path);
  });
}

void avc_sweep_free(avc_sweep* sweep) { delete sweep; }

/* ---- manifests and pipeline ---- */

avc_status avc_manifest_load(const char* path, avc_manifest** out) {
  if (auto s = require_arg(path && out, "path and out must be non-null")) return s;
  return guarded([&] { *out = new avc_manifest{avc::load_manifest(path)}; });
}

avc_status avc_manifest_save(const avc_manifest* manifest, const char* path) {
  if (auto s = require_arg(manifest && path, "manifest and path must be non-null"))
    return s;
  return guarded([&] { avc::save_manifest(manifest->manifest, path); });
}

int avc_manifest_count(const avc_manifest* manifest) {
  return manifest ? static_cast<int>(manifest->manifest.size()) : 0;
}

const char* avc_manifest_clip_path(const avc_manifest* manifest, int index) {
  if (!manifest || index < 0 ||
      index >= static_cast<int>(manifest->manifest.size()))
    return "";
  return manifest->manifest.entries[static_cast<size_t>(index)].clip_path.c_str();
}

avc_status avc_manifest_fold(const avc_manifest* manifest, int k, uint64_t seed,
                             int fold, avc_manifest** out_train,
                             avc_manifest** out_test) {
  if (auto s = require_arg(manifest && out_train && out_test && fold >= 0,
                           "manifest and out manifests must be non-null"))
    return s;
  return guarded([&] {
    avc::require(fold < k, avc::Status::InvalidArgument, "fold index out of range");
    auto folds = avc::split_kfold(manifest->manifest, k, seed);
    auto& [train, test] = folds[static_cast<size_t>(fold)];
    *out_train = new avc_manifest{std::move(train)};
    *out_test = new avc_manifest{std::move(test)};
  });
}

void avc_manifest_free(avc_manifest* manifest) { delete manifest; }

avc_status avc_pipeline_synth_corpus(const char* out_dir, int n_clips,
                                     double duration_s, double mean_passbys,
                                     double min_gap_s, double noise_level,
                                     uint64_t seed) {
  if (auto s = require_arg(out_dir != nullptr, "out_dir must be non-null")) return s;
  return guarded([&] {
    avc::SynthCorpusSpec spec;
    spec.n_clips = n_clips;
    spec.duration_s = duration_s;
    spec.mean_passbys = mean_passbys;
    spec.min_gap_s = min_gap_s;
    spec.noise_level = noise_level;
    spec.seed = seed;
    avc::synth_corpus(spec, out_dir);
  });
}

avc_status avc_pipeline_extract(const avc_manifest* manifest,
                                const char* cache_dir,
                                const avc_pipeline_config* config, int force,
                                int* out_processed) {
  if (auto s = require_arg(manifest && cache_dir && config,
                           "manifest, cache_dir and config must be non-null"))
    return s;
  return guarded([&] {
    int n = avc::extract_features(manifest->manifest, cache_dir, to_core(*config),
                                  force != 0);
    if (out_processed) *out_processed = n;
  });
}

avc_status avc_pipeline_train(const avc_manifest* manifest,
                              const char* cache_dir,
                              const avc_pipeline_config* config,
                              const char* model_stem, avc_model** out_model) {
  if (auto s = require_arg(manifest && cache_dir && config,
                           "manifest, cache_dir and config must be non-null"))
    return s;
  return guarded([&] {
    avc::PipelineConfig cfg = to_core(*config);
    avc::FeatureConfig used;
    avc::SvrModel model =
        avc::train_from_manifest(manifest->manifest, cache_dir, cfg, &used);
    if (model_stem) avc::save_model(model, model_stem, used, cfg.t_d);
    if (out_model) *out_model = new avc_model{std::move(model), used, cfg.t_d};
  });
}

avc_status avc_pipeline_sweep(const avc_model* model,
                              const avc_manifest* manifest,
                              const char* cache_dir,
                              const avc_pipeline_config* config,
                              avc_sweep** out) {
  if (auto s = require_arg(model && manifest && cache_dir && config && out,
                           "model, manifest, cache_dir, config and out must be non-null"))
    return s;
  return guarded([&] {
    avc::PipelineConfig cfg = to_core(*config);
    avc::SweepReport rep =
        avc::sweep_manifest(model->model, manifest->manifest, cache_dir, cfg);
    auto* handle = new avc_sweep(sweep_config(cfg));
    handle->accumulator.add_counts(rep);
    *out = handle;
  });
}

avc_status avc_pipeline_crossval(const avc_manifest* manifest, int k,
                                 uint64_t seed, const char* cache_dir,
                                 const avc_pipeline_config* config,
                                 avc_sweep** out) {
  if (auto s = require_arg(manifest && cache_dir && config && out,
                           "manifest, cache_dir, config and out must be non-null"))
    return s;
  return guarded([&] {
    avc::PipelineConfig cfg = to_core(*config);
    avc::SweepReport rep =
        avc::crossval_manifest(manifest->manifest, k, seed, cache_dir, cfg);
    auto* handle = new avc_sweep(sweep_config(cfg));
    handle->accumulator.add_counts(rep);
    *out = handle;
  });
}

avc_status avc_pipeline_ablate(const avc_manifest* manifest,
                               const char* subsets, int k, uint64_t seed,
                               const char* cache_dir,
                               const avc_pipeline_config* config,
                               const char* out_csv) {
  if (auto s = require_arg(manifest && subsets && cache_dir && config && out_csv,
                           "manifest, subsets, cache_dir, config and out_csv "
                           "must be non-null"))
    return s;
  return guarded([&] {
    std::vector<std::vector<std::string>> parsed;
    std::string current;
    const std::string text(subsets);
    for (size_t i = 0; i <= text.size(); ++i) {
      if (i == text.size() || text[i] == ',') {
        if (!current.empty()) parsed.push_back(avc::parse_feature_subset(current));
        current.clear();
      } else {
        current.push_back(text[i]);
      }
    }
    auto rows = avc::ablation_run(manifest->manifest, parsed, k, seed, cache_dir,
                                  to_core(*config));
    avc::write_ablation_csv(rows, out_csv);
  });
}

avc_status avc_pipeline_predict_clip(const avc_model* model,
                                     const char* clip_path,
                                     const avc_pipeline_config* config,
                                     const char* out_csv) {
  if (auto s = require_arg(model && clip_path && config && out_csv,
                           "model, clip_path, config and out_csv must be non-null"))
    return s;
  return guarded([&] {
    avc::PipelineConfig cfg = to_core(*config);
    if (model->feature_config) cfg.features = *model->feature_config;
    if (model->t_d) cfg.t_d = *model->t_d;
    avc::AudioClip clip = avc::load_clip(clip_path);
    avc::Series pred = avc::predict_clip(model->model, clip, cfg);
    const double hop =
        static_cast<double>(cfg.features.stft.n_hop) / clip.sample_rate;
    avc::write_prediction_csv(pred, hop, out_csv);
  });
}

avc_status avc_pipeline_count_clip(const avc_model* model,
                                   const char* clip_path, double threshold_s,
                                   const avc_pipeline_config* config,
                                   const char* annotations_path,
                                   const char* out_csv, int* out_count,
                                   int* out_tp, int* out_fp, int* out_fn) {
  if (auto s = require_arg(model && clip_path && config && out_count,
                           "model, clip_path, config and out_count must be non-null"))
    return s;
  return guarded([&] {
    avc::PipelineConfig cfg = to_core(*config);
    if (model->feature_config) cfg.features = *model->feature_config;
    if (model->t_d) cfg.t_d = *model->t_d;
    avc::AudioClip clip = avc::load_clip(clip_path);
    std::optional<avc::AnnotationSet> ann;
    if (annotations_path)
      ann = avc::load_annotations(annotations_path, clip.duration_s());
    avc::ClipCount result = avc::count_clip(model->model, clip, threshold_s, cfg,
                                            ann ? &*ann : nullptr);
    *out_count = result.count;
    if (out_tp) *out_tp = result.classified ? result.outcome.tp : -1;
    if (out_fp) *out_fp = result.classified ? result.outcome.fp : -1;
    if (out_fn) *out_fn = result.classified ? result.outcome.fn : -1;
    if (out_csv) avc::write_detections_csv(clip.id, result, out_csv);
  });
}

} /* extern "C" */
