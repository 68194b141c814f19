// avc command-line tool: synthesis, feature extraction, training, counting
// and evaluation sweeps, all through the shared-library C API.
//
// Pipeline parameters are global options (also settable through a key=value
// config file via --config); subcommands carry their own paths and seeds and
// fall through to the global set, so flags may appear on either side of the
// subcommand name. Flags always override config-file values.

#include <avc.h>

#include <CLI11.hpp>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
int exit_code_for(avc_status status) {
  switch (status) {
    case AVC_OK: return 0;
    case AVC_E_ARG: return 1;
    case AVC_E_NUMERIC: return 3;
    default: return 2;
  }
}

int fail(avc_status status) {
  std::fprintf(stderr, "error: %s (%s)\n", avc_last_error(), avc_status_name(status));
  return exit_code_for(status);
}

struct Options {
  avc_pipeline_config cfg;
  std::vector<int> feature_ma = {11, 5};
  std::vector<int> post_ma = {7, 5, 3};
  std::string subset;
  std::string kernel = "rbf";

  Options() { avc_pipeline_config_defaults(&cfg); }

  bool finalize() {
    if (feature_ma.size() > AVC_MAX_MA || post_ma.size() > AVC_MAX_MA) {
      std::fprintf(stderr, "error: at most %d moving-average stages\n", AVC_MAX_MA);
      return false;
    }
    cfg.n_feature_ma = static_cast<int>(feature_ma.size());
    for (size_t i = 0; i < feature_ma.size(); ++i) cfg.feature_ma[i] = feature_ma[i];
    cfg.n_post_ma = static_cast<int>(post_ma.size());
    for (size_t i = 0; i < post_ma.size(); ++i) cfg.post_ma[i] = post_ma[i];
    if (subset.size() >= sizeof(cfg.feature_subset)) {
      std::fprintf(stderr, "error: feature subset string too long\n");
      return false;
    }
    std::memcpy(cfg.feature_subset, subset.c_str(), subset.size() + 1);
    if (kernel == "rbf") {
      cfg.svr_kernel = AVC_KERNEL_RBF;
    } else if (kernel == "linear") {
      cfg.svr_kernel = AVC_KERNEL_LINEAR;
    } else {
      std::fprintf(stderr, "error: unknown kernel '%s'\n", kernel.c_str());
      return false;
    }
    return true;
  }
};

int print_summary(const avc_sweep* sweep) {
  double nauc = 0.0, efp = 0.0, delta = 0.0;
  int i_min = 0;
  if (avc_status s = avc_sweep_nauc(sweep, &nauc)) return fail(s);
  if (avc_status s = avc_sweep_efp(sweep, &efp, &delta, &i_min)) return fail(s);
  double threshold = 0.0, p_tp = 0.0, p_fp = 0.0, p_fn = 0.0;
  long long n_est = 0;
  if (avc_status s = avc_sweep_point(sweep, i_min, &threshold, &p_tp, &p_fp, &p_fn, &n_est))
    return fail(s);
  double rvce = 0.0;
  if (avc_status s = avc_sweep_rvce(sweep, i_min, &rvce)) return fail(s);
  std::printf("nauc %.6g\n", nauc);
  std::printf("efp %.6g%% (delta %.6g%%) at threshold %.6g s (index %d)\n",
              efp * 100.0, delta * 100.0, threshold, i_min);
  std::printf("p_tp %.6g  n_est %lld  rvce %.6g%%\n", p_tp, n_est, rvce);
  return 0;
}

int write_sweep_outputs(avc_sweep* sweep, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const std::string csv = (fs::path(out_dir) / "sweep.csv").string();
  const std::string json = (fs::path(out_dir) / "summary.json").string();
  if (avc_status s = avc_sweep_write(sweep, csv.c_str(), json.c_str())) return fail(s);
  const int rc = print_summary(sweep);
  if (rc == 0) std::printf("wrote %s and %s\n", csv.c_str(), json.c_str());
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acoustic vehicle counting"};
  app.require_subcommand(1);
  app.set_version_flag("--version", avc_version());
  app.set_config("--config", "", "key=value config file; flags take precedence");

  Options o;
  int rc = 0;

  // Shared pipeline parameters; every subcommand falls through to these.
  app.add_option("--n-window", o.cfg.n_window, "STFT window length in samples");
  app.add_option("--n-hop", o.cfg.n_hop, "STFT hop length in samples");
  app.add_option("--context-k", o.cfg.context_k, "context frames on each side");
  app.add_option("--n-mel", o.cfg.n_mel, "mel bands in the log-mel block");
  app.add_option("--hfp-fmin", o.cfg.hfp_fmin_hz, "high-frequency band lower edge [Hz]");
  app.add_option("--hfp-fmax", o.cfg.hfp_fmax_hz, "high-frequency band upper edge [Hz]");
  app.add_option("--trf-percentile", o.cfg.trf_percentile,
                 "spectrogram power percentile for the TRF threshold");
  app.add_option("--feature-ma", o.feature_ma,
                 "moving-average lengths applied to STE/TRF/HFP");
  app.add_option("--t-d", o.cfg.t_d, "distance clipping threshold [s]");
  app.add_option("--svr-c", o.cfg.svr_c, "SVR penalty C");
  app.add_option("--svr-epsilon", o.cfg.svr_epsilon, "SVR tube half-width");
  app.add_option("--svr-gamma", o.cfg.svr_gamma, "RBF gamma; <= 0 = auto");
  app.add_option("--svr-tol", o.cfg.svr_tol, "SMO stopping tolerance");
  app.add_option("--svr-max-iter", o.cfg.svr_max_iter, "SMO iteration cap");
  app.add_option("--svr-kernel", o.kernel, "kernel: rbf or linear");
  app.add_option("--svr-cache-mb", o.cfg.svr_cache_mb, "kernel cache size [MiB]");
  app.add_option("--stride", o.cfg.stride, "training-row subsampling stride");
  app.add_option("--subset", o.subset, "feature blocks, e.g. HFP+LMS (default all)");
  app.add_option("--post-ma", o.post_ma, "moving-average lengths applied to predictions");
  app.add_option("--prominence", o.cfg.prominence, "minimum prominence of a detected dip");
  app.add_option("--n-thresholds", o.cfg.n_thresholds, "sweep grid size");
  app.add_option("--jobs", o.cfg.jobs, "worker threads for per-clip stages");

  // ---- synth ----
  auto* synth = app.add_subcommand("synth", "generate a synthetic labeled corpus");
  synth->fallthrough();
  std::string synth_out;
  int synth_clips = 50;
  double synth_duration = 20.0, synth_mean = 3.0, synth_gap = 2.0, synth_noise = 0.05;
  uint64_t synth_seed = 1;
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--clips", synth_clips, "number of clips");
  synth->add_option("--duration", synth_duration, "clip duration [s]");
  synth->add_option("--mean-passbys", synth_mean, "Poisson mean pass-bys per clip");
  synth->add_option("--min-gap", synth_gap, "minimum gap between pass-bys [s]");
  synth->add_option("--noise", synth_noise, "background noise level");
  synth->add_option("--seed", synth_seed, "random seed");
  synth->callback([&] {
    if (avc_status s = avc_pipeline_synth_corpus(synth_out.c_str(), synth_clips,
                                                 synth_duration, synth_mean, synth_gap,
                                                 synth_noise, synth_seed)) {
      rc = fail(s);
      return;
    }
    std::printf("wrote %d clips under %s\n", synth_clips, synth_out.c_str());
  });

  // ---- extract ----
  auto* extract = app.add_subcommand("extract", "compute feature and target caches");
  extract->fallthrough();
  std::string extract_manifest, extract_out;
  bool extract_force = false;
  extract->add_option("--manifest", extract_manifest, "manifest CSV")->required();
  extract->add_option("--out", extract_out, "cache directory")->required();
  extract->add_flag("--force", extract_force, "recompute even fresh caches");
  extract->callback([&] {
    if (!o.finalize()) {
      rc = 1;
      return;
    }
    avc_manifest* manifest = nullptr;
    if (avc_status s = avc_manifest_load(extract_manifest.c_str(), &manifest)) {
      rc = fail(s);
      return;
    }
    int processed = 0;
    avc_status s = avc_pipeline_extract(manifest, extract_out.c_str(), &o.cfg,
                                        extract_force ? 1 : 0, &processed);
    const int total = avc_manifest_count(manifest);
    avc_manifest_free(manifest);
    if (s) {
      rc = fail(s);
      return;
    }
    std::printf("extracted %d clips (%d cached)\n", processed, total - processed);
  });

  // ---- train ----
  auto* train = app.add_subcommand("train", "train the distance regressor from caches");
  train->fallthrough();
  std::string train_manifest, train_cache, train_out;
  train->add_option("--manifest", train_manifest, "manifest CSV")->required();
  train->add_option("--cache", train_cache, "cache directory")->required();
  train->add_option("--out", train_out, "output directory (writes model.json/.bin)")
      ->required();
  train->callback([&] {
    if (!o.finalize()) {
      rc = 1;
      return;
    }
    avc_manifest* manifest = nullptr;
    if (avc_status s = avc_manifest_load(train_manifest.c_str(), &manifest)) {
      rc = fail(s);
      return;
    }
    fs::create_directories(train_out);
    const std::string stem = (fs::path(train_out) / "model").string();
    avc_model* model = nullptr;
    avc_status s =
        avc_pipeline_train(manifest, train_cache.c_str(), &o.cfg, stem.c_str(), &model);
    avc_manifest_free(manifest);
    if (s) {
      rc = fail(s);
      return;
    }
    std::printf("model: %lld support vectors, bias %.6g, %s\n",
                static_cast<long long>(avc_model_n_support(model)),
                avc_model_bias(model),
                avc_model_converged(model) ? "converged" : "iteration cap hit");
    std::printf("wrote %s.json and %s.bin\n", stem.c_str(), stem.c_str());
    avc_model_free(model);
  });

  // ---- predict ----
  auto* predict = app.add_subcommand("predict", "predict the distance series of a clip");
  predict->fallthrough();
  std::string predict_model, predict_clip, predict_out;
  predict->add_option("--model", predict_model, "model stem (without .json)")->required();
  predict->add_option("--clip", predict_clip, "input WAV file")->required();
  predict->add_option("--out", predict_out, "output directory")->required();
  predict->callback([&] {
    if (!o.finalize()) {
      rc = 1;
      return;
    }
    avc_model* model = nullptr;
    if (avc_status s = avc_model_load(predict_model.c_str(), &model)) {
      rc = fail(s);
      return;
    }
    fs::create_directories(predict_out);
    const std::string csv =
        (fs::path(predict_out) / (fs::path(predict_clip).stem().string() + ".prediction.csv"))
            .string();
    avc_status s = avc_pipeline_predict_clip(model, predict_clip.c_str(), &o.cfg, csv.c_str());
    avc_model_free(model);
    if (s) {
      rc = fail(s);
      return;
    }
    std::printf("wrote %s\n", csv.c_str());
  });

  // ---- count ----
  auto* count = app.add_subcommand("count", "count vehicles in one clip");
  count->fallthrough();
  std::string count_model, count_clip, count_ann, count_out;
  double count_threshold = 0.0;
  count->add_option("--model", count_model, "model stem (without .json)")->required();
  count->add_option("--clip", count_clip, "input WAV file")->required();
  count->add_option("--threshold", count_threshold, "detection threshold [s], in [0, t_d]")
      ->required();
  count->add_option("--annotations", count_ann, "annotation CSV for TP/FP/FN report");
  count->add_option("--out", count_out, "output directory for the detections CSV");
  count->callback([&] {
    if (!o.finalize()) {
      rc = 1;
      return;
    }
    avc_model* model = nullptr;
    if (avc_status s = avc_model_load(count_model.c_str(), &model)) {
      rc = fail(s);
      return;
    }
    std::string csv;
    if (!count_out.empty()) {
      fs::create_directories(count_out);
      csv = (fs::path(count_out) /
             (fs::path(count_clip).stem().string() + ".detections.csv"))
                .string();
    }
    int n = 0, tp = -1, fp = -1, fn = -1;
    avc_status s = avc_pipeline_count_clip(
        model, count_clip.c_str(), count_threshold, &o.cfg,
        count_ann.empty() ? nullptr : count_ann.c_str(),
        csv.empty() ? nullptr : csv.c_str(), &n, &tp, &fp, &fn);
    avc_model_free(model);
    if (s) {
      rc = fail(s);
      return;
    }
    std::printf("count %d\n", n);
    if (tp >= 0) std::printf("tp %d fp %d fn %d\n", tp, fp, fn);
    if (!csv.empty()) std::printf("wrote %s\n", csv.c_str());
  });

  // ---- sweep ----
  auto* sweep = app.add_subcommand("sweep", "threshold sweep of a trained model");
  sweep->fallthrough();
  std::string sweep_model, sweep_manifest, sweep_cache, sweep_out;
  sweep->add_option("--model", sweep_model, "model stem (without .json)")->required();
  sweep->add_option("--manifest", sweep_manifest, "manifest CSV")->required();
  sweep->add_option("--cache", sweep_cache, "cache directory")->required();
  sweep->add_option("--out", sweep_out, "output directory")->required();
  sweep->callback([&] {
    if (!o.finalize()) {
      rc = 1;
      return;
    }
    avc_model* model = nullptr;
    if (avc_status s = avc_model_load(sweep_model.c_str(), &model)) {
      rc = fail(s);
      return;
    }
    avc_manifest* manifest = nullptr;
    if (avc_status s = avc_manifest_load(sweep_manifest.c_str(), &manifest)) {
      avc_model_free(model);
      rc = fail(s);
      return;
    }
    avc_sweep* result = nullptr;
    avc_status s = avc_pipeline_sweep(model, manifest, sweep_cache.c_str(), &o.cfg, &result);
    avc_manifest_free(manifest);
    avc_model_free(model);
    if (s) {
      rc = fail(s);
      return;
    }
    rc = write_sweep_outputs(result, sweep_out);
    avc_sweep_free(result);
  });

  // ---- crossval ----
  auto* crossval = app.add_subcommand("crossval", "pooled k-fold cross validation");
  crossval->fallthrough();
  std::string cv_manifest, cv_cache, cv_out;
  int cv_k = 5;
  uint64_t cv_seed = 1;
  crossval->add_option("--manifest", cv_manifest, "manifest CSV")->required();
  crossval->add_option("--cache", cv_cache, "cache directory")->required();
  crossval->add_option("--out", cv_out, "output directory")->required();
  crossval->add_option("--k", cv_k, "number of folds");
  crossval->add_option("--seed", cv_seed, "fold shuffling seed");
  crossval->callback([&] {
    if (!o.finalize()) {
      rc = 1;
      return;
    }
    avc_manifest* manifest = nullptr;
    if (avc_status s = avc_manifest_load(cv_manifest.c_str(), &manifest)) {
      rc = fail(s);
      return;
    }
    avc_sweep* result = nullptr;
    avc_status s = avc_pipeline_crossval(manifest, cv_k, cv_seed, cv_cache.c_str(),
                                         &o.cfg, &result);
    avc_manifest_free(manifest);
    if (s) {
      rc = fail(s);
      return;
    }
    rc = write_sweep_outputs(result, cv_out);
    avc_sweep_free(result);
  });

  // ---- ablate ----
  auto* ablate = app.add_subcommand("ablate", "cross-validated feature ablation table");
  ablate->fallthrough();
  std::string ab_manifest, ab_cache, ab_out;
  std::string ab_subsets =
      "STE+TRF+HFP+LMS,TRF+HFP+LMS,STE+HFP+LMS,STE+TRF+LMS,STE+TRF+HFP,"
      "STE+LMS,TRF+LMS,HFP+LMS,LMS";
  int ab_k = 5;
  uint64_t ab_seed = 1;
  ablate->add_option("--manifest", ab_manifest, "manifest CSV")->required();
  ablate->add_option("--cache", ab_cache, "cache directory")->required();
  ablate->add_option("--out", ab_out, "output directory")->required();
  ablate->add_option("--subsets", ab_subsets, "comma-separated feature combinations");
  ablate->add_option("--k", ab_k, "number of folds");
  ablate->add_option("--seed", ab_seed, "fold shuffling seed");
  ablate->callback([&] {
    if (!o.finalize()) {
      rc = 1;
      return;
    }
    avc_manifest* manifest = nullptr;
    if (avc_status s = avc_manifest_load(ab_manifest.c_str(), &manifest)) {
      rc = fail(s);
      return;
    }
    fs::create_directories(ab_out);
    const std::string csv = (fs::path(ab_out) / "ablation.csv").string();
    avc_status s = avc_pipeline_ablate(manifest, ab_subsets.c_str(), ab_k, ab_seed,
                                       ab_cache.c_str(), &o.cfg, csv.c_str());
    avc_manifest_free(manifest);
    if (s) {
      rc = fail(s);
      return;
    }
    std::printf("wrote %s\n", csv.c_str());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // usage error
  }
  return rc;
}
