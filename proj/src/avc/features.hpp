#pragma once

#include <string>
#include <vector>

#include "avc/common.hpp"
#include "avc/dataset.hpp"

namespace avc {

struct StftConfig {
  int n_window = 4096;
  int n_hop = 1638;  // 0.4 * n_window
  bool centered = true;
};

// One-sided power spectrogram, |STFT|^2, no normalization. Row-major
// frames x bins.
struct Spectrogram {
  int64_t n_frames = 0;
  int64_t n_bins = 0;
  int sample_rate = 0;
  std::vector<double> power;
  std::vector<double> bin_freqs;    // Hz, bin_freqs.back() == sample_rate / 2
  std::vector<double> frame_times;  // s, frame m centered at m * n_hop samples

  double* frame(int64_t m) { return power.data() + m * n_bins; }
  const double* frame(int64_t m) const { return power.data() + m * n_bins; }
};

struct FeatureConfig {
  StftConfig stft;
  int context_k = 10;
  int n_mel = 64;
  double hfp_fmin_hz = 6000.0;
  double hfp_fmax_hz = 22050.0;
  double trf_percentile = 90.0;            // spectrogram power percentile for the TRF threshold
  std::vector<int> feature_ma = {11, 5};   // successive moving-average lengths

  int feature_dim() const { return 3 * (2 * context_k + 1) + n_mel; }
};

// Column layout of the assembled tensor: [STE ctx | TRF ctx | HFP ctx | LMS].
struct FeatureLayout {
  struct Block {
    std::string name;
    int begin = 0;
    int end = 0;  // exclusive
  };
  std::vector<Block> blocks;

  static FeatureLayout for_config(const FeatureConfig& cfg);
  int total_cols() const { return blocks.empty() ? 0 : blocks.back().end; }
  // Column indices for a subset of block names (e.g. {"HFP", "LMS"}).
  std::vector<int> columns_for(const std::vector<std::string>& names) const;
};

// Number of frames the configured grid yields for an n-sample signal.
int64_t frame_count(int64_t n_samples, const StftConfig& cfg);

Spectrogram stft_power(const AudioClip& clip, const StftConfig& cfg);

// Windowed mean of squared samples, on the same frame grid as stft_power
// (reflection padding included when centered); no tapering window.
Series short_term_energy(const AudioClip& clip, const StftConfig& cfg);

// Per-frame maximal frequency whose power reaches `threshold`; 0 when no
// bin does. Threshold must be positive.
Series top_right_frequency(const Spectrogram& spec, double threshold);

// Percentile (linear interpolation) over all power values of the clip.
double power_percentile(const Spectrogram& spec, double percentile);

// Rectangle-rule band power: sum of bins with f_min <= freq <= f_max,
// times the bin width.
Series high_frequency_power(const Spectrogram& spec, double f_min_hz, double f_max_hz);

// Log-mel spectrogram: triangular HTK-scale filters with unit peaks spanning
// 0 Hz..Nyquist, log(output + 1e-10). Returns one series per band.
std::vector<Series> log_mel_spectrogram(const Spectrogram& spec, int n_mel);

// Successive centered moving averages; the window shrinks symmetrically at
// the boundaries so length is preserved. Lengths must be odd.
Series ma_smooth(const Series& series, const std::vector<int>& lengths);

// Per-clip z-score (population variance). Degenerate variance gives zeros.
Series standardize(const Series& series);

// Rows hold 2K+1 successive values centered on each frame. Out-of-range
// values come from a least-squares quadratic fitted to the K+1 boundary
// values (degree drops to K when K < 2).
DMatrix context_stack(const Series& series, int k);

// Full per-clip tensor, frames x (3*(2K+1) + n_mel), float32.
Matrix assemble_features(const AudioClip& clip, const FeatureConfig& cfg);

// Copies the selected columns of a feature tensor.
Matrix select_columns(const Matrix& m, const std::vector<int>& cols);

}  // namespace avc
