/* avc - acoustic vehicle counting library.
 *
 * C interface over the C++ core. All objects are opaque handles created and
 * released through these functions; every fallible call returns an
 * avc_status and leaves a human-readable message in avc_last_error() (per
 * thread) on failure. Out-parameters are written only on AVC_OK.
 */

#ifndef AVC_H
#define AVC_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum avc_status {
  AVC_OK = 0,
  AVC_E_ARG = 1,         /* invalid argument or precondition violation */
  AVC_E_IO = 2,          /* file not found / unreadable / unwritable */
  AVC_E_FORMAT = 3,      /* malformed container or header */
  AVC_E_CHANNELS = 4,    /* unsupported channel count */
  AVC_E_ENCODING = 5,    /* unsupported sample encoding */
  AVC_E_SAMPLE_RATE = 6, /* sample rate other than 44100 Hz */
  AVC_E_PARSE = 7,       /* text parse error (annotations, manifest) */
  AVC_E_DIM = 8,         /* shape mismatch */
  AVC_E_NUMERIC = 9      /* numerical failure */
} avc_status;

const char* avc_version(void);
const char* avc_status_name(avc_status status);
/* Message for the most recent failure on this thread; empty otherwise. */
const char* avc_last_error(void);

typedef struct avc_clip avc_clip;
typedef struct avc_annotations avc_annotations;
typedef struct avc_manifest avc_manifest;
typedef struct avc_matrix avc_matrix;
typedef struct avc_model avc_model;
typedef struct avc_sweep avc_sweep;

/* ------------------------------------------------------------------ */
/* Configuration                                                       */

enum { AVC_KERNEL_RBF = 0, AVC_KERNEL_LINEAR = 1 };
enum { AVC_MAX_MA = 8 };

typedef struct avc_pipeline_config {
  /* spectrogram framing */
  int n_window;
  int n_hop;
  int centered;
  /* feature families */
  int context_k;
  int n_mel;
  double hfp_fmin_hz;
  double hfp_fmax_hz;
  double trf_percentile;
  int feature_ma[AVC_MAX_MA];
  int n_feature_ma;
  /* regression target */
  double t_d;
  /* epsilon-SVR */
  double svr_c;
  double svr_epsilon;
  double svr_gamma; /* <= 0 selects 1 / (dims * variance) */
  double svr_tol;
  long long svr_max_iter;
  int svr_kernel;
  double svr_cache_mb;
  /* minima detection */
  int post_ma[AVC_MAX_MA];
  int n_post_ma;
  double prominence;
  /* threshold sweep */
  int n_thresholds;
  /* training-row subsampling and worker threads */
  int stride;
  int jobs;
  /* feature blocks to keep, e.g. "HFP+LMS"; empty keeps all */
  char feature_subset[64];
} avc_pipeline_config;

/* Fills every field with the method defaults (4096/1638 Hamming frames,
 * K=10, 64 mel bands, 6 kHz band edge, T_d = 0.75 s, C=1, epsilon=0.05,
 * prominence 0.05, post-filter 7/5/3, 100 thresholds). */
void avc_pipeline_config_defaults(avc_pipeline_config* config);

/* ------------------------------------------------------------------ */
/* Audio clips and annotations                                         */

avc_status avc_clip_load(const char* path, avc_clip** out);
avc_status avc_clip_save(const avc_clip* clip, const char* path);
/* Deterministic synthetic clip; out_annotations may be NULL if not wanted. */
avc_status avc_clip_synth(const char* id, double duration_s,
                          const double* passby_times, int n_passbys,
                          double noise_level, uint64_t seed, avc_clip** out,
                          avc_annotations** out_annotations);
int64_t avc_clip_length(const avc_clip* clip);
int avc_clip_sample_rate(const avc_clip* clip);
double avc_clip_duration_s(const avc_clip* clip);
const char* avc_clip_id(const avc_clip* clip);
const double* avc_clip_samples(const avc_clip* clip);
void avc_clip_free(avc_clip* clip);

/* max_time_s <= 0 disables the range check. */
avc_status avc_annotations_load(const char* path, double max_time_s,
                                avc_annotations** out);
avc_status avc_annotations_save(const avc_annotations* annotations, const char* path);
int avc_annotations_count(const avc_annotations* annotations);
double avc_annotations_time(const avc_annotations* annotations, int index);
/* Vehicle class string, empty when not annotated. */
const char* avc_annotations_class(const avc_annotations* annotations, int index);
void avc_annotations_free(avc_annotations* annotations);

/* ------------------------------------------------------------------ */
/* Features                                                            */

/* Per-clip feature tensor: rows = frames, cols = 3*(2K+1) + n_mel with
 * column blocks [STE | TRF | HFP | LMS]. */
avc_status avc_features_compute(const avc_clip* clip,
                                const avc_pipeline_config* config,
                                avc_matrix** out);
int64_t avc_matrix_rows(const avc_matrix* matrix);
int64_t avc_matrix_cols(const avc_matrix* matrix);
const float* avc_matrix_data(const avc_matrix* matrix);
void avc_matrix_free(avc_matrix* matrix);

/* Clipped vehicle-to-microphone distance sampled at n_frames frame times
 * spaced frame_hop_s apart. out must hold n_frames doubles. */
avc_status avc_cvmd(const avc_annotations* annotations, int64_t n_frames,
                    double frame_hop_s, double t_d, double* out);

/* ------------------------------------------------------------------ */
/* Regression                                                          */

avc_status avc_train(const avc_matrix* x, const double* y,
                     const avc_pipeline_config* config, avc_model** out);
/* out must hold avc_matrix_rows(x) doubles. */
avc_status avc_model_predict(const avc_model* model, const avc_matrix* x,
                             double* out);
/* Writes <stem>.json and <stem>.bin. */
avc_status avc_model_save(const avc_model* model, const char* stem);
avc_status avc_model_load(const char* stem, avc_model** out);
int64_t avc_model_n_support(const avc_model* model);
int64_t avc_model_dims(const avc_model* model);
double avc_model_bias(const avc_model* model);
int avc_model_converged(const avc_model* model);
void avc_model_free(avc_model* model);

/* ------------------------------------------------------------------ */
/* Detection and evaluation                                            */

/* Smooths the predicted series, finds prominent minima, and counts those
 * strictly below threshold_s. When annotations are given, minima are split
 * into true/false positives against the pass-by intervals and out_tp /
 * out_fp / out_fn are written (they may be NULL otherwise). */
avc_status avc_count_series(const double* prediction, int64_t n_frames,
                            double frame_hop_s, double threshold_s,
                            double clip_len_s,
                            const avc_pipeline_config* config,
                            const avc_annotations* annotations,
                            int* out_count, int* out_tp, int* out_fp,
                            int* out_fn);

/* Pooled threshold sweep. Feed one prediction per clip, then query. */
avc_status avc_sweep_new(const avc_pipeline_config* config, avc_sweep** out);
avc_status avc_sweep_add_clip(avc_sweep* sweep, const double* prediction,
                              int64_t n_frames, double frame_hop_s,
                              double clip_len_s,
                              const avc_annotations* annotations);
int avc_sweep_size(const avc_sweep* sweep);
avc_status avc_sweep_point(const avc_sweep* sweep, int index,
                           double* out_threshold_s, double* out_p_tp,
                           double* out_p_fp, double* out_p_fn,
                           long long* out_n_est);
avc_status avc_sweep_nauc(const avc_sweep* sweep, double* out);
avc_status avc_sweep_efp(const avc_sweep* sweep, double* out_efp,
                         double* out_delta_efp, int* out_i_min);
avc_status avc_sweep_rvce(const avc_sweep* sweep, int index, double* out_pct);
avc_status avc_sweep_write(const avc_sweep* sweep, const char* csv_path,
                           const char* json_path);
void avc_sweep_free(avc_sweep* sweep);

/* ------------------------------------------------------------------ */
/* Manifests and pipeline commands                                     */

avc_status avc_manifest_load(const char* path, avc_manifest** out);
avc_status avc_manifest_save(const avc_manifest* manifest, const char* path);
int avc_manifest_count(const avc_manifest* manifest);
const char* avc_manifest_clip_path(const avc_manifest* manifest, int index);
/* Train/test split of fold `fold` out of k, shuffled by seed. */
avc_status avc_manifest_fold(const avc_manifest* manifest, int k, uint64_t seed,
                             int fold, avc_manifest** out_train,
                             avc_manifest** out_test);
void avc_manifest_free(avc_manifest* manifest);

/* Writes clip_###.wav, clip_###.csv and manifest.csv under out_dir. */
avc_status avc_pipeline_synth_corpus(const char* out_dir, int n_clips,
                                     double duration_s, double mean_passbys,
                                     double min_gap_s, double noise_level,
                                     uint64_t seed);

/* Feature + target caches for every manifest entry; skips fresh caches
 * unless force. out_processed (optional) counts recomputed clips. */
avc_status avc_pipeline_extract(const avc_manifest* manifest,
                                const char* cache_dir,
                                const avc_pipeline_config* config, int force,
                                int* out_processed);

/* Trains on the cached features/targets. model_stem (optional) persists the
 * model with the feature configuration embedded; out_model (optional)
 * returns the trained handle. */
avc_status avc_pipeline_train(const avc_manifest* manifest,
                              const char* cache_dir,
                              const avc_pipeline_config* config,
                              const char* model_stem, avc_model** out_model);

avc_status avc_pipeline_sweep(const avc_model* model,
                              const avc_manifest* manifest,
                              const char* cache_dir,
                              const avc_pipeline_config* config,
                              avc_sweep** out);

avc_status avc_pipeline_crossval(const avc_manifest* manifest, int k,
                                 uint64_t seed, const char* cache_dir,
                                 const avc_pipeline_config* config,
                                 avc_sweep** out);

/* subsets: comma-separated feature combinations, e.g.
 * "STE+TRF+HFP+LMS,HFP+LMS,LMS". Writes one CSV row per subset. */
avc_status avc_pipeline_ablate(const avc_manifest* manifest,
                               const char* subsets, int k, uint64_t seed,
                               const char* cache_dir,
                               const avc_pipeline_config* config,
                               const char* out_csv);

/* Predicts the distance series of one WAV file. Uses the feature
 * configuration embedded in the model when present. */
avc_status avc_pipeline_predict_clip(const avc_model* model,
                                     const char* clip_path,
                                     const avc_pipeline_config* config,
                                     const char* out_csv);

/* Counts vehicles in one WAV file at the given detection threshold.
 * annotations_path (optional) enables TP/FP/FN classification; out_csv
 * (optional) receives the per-detection rows. Unlabeled runs write -1 to
 * out_tp/out_fp/out_fn. */
avc_status avc_pipeline_count_clip(const avc_model* model,
                                   const char* clip_path, double threshold_s,
                                   const avc_pipeline_config* config,
                                   const char* annotations_path,
                                   const char* out_csv, int* out_count,
                                   int* out_tp, int* out_fp, int* out_fn);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* AVC_H */
