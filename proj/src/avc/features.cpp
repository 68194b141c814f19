#include "avc/features.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "avc/fft.hpp"

namespace avc {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kLmsFloor = 1e-10;

std::vector<double> hamming_window(int n) {
  std::vector<double> w(static_cast<size_t>(n));
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  for (int i = 0; i < n; ++i)
    w[static_cast<size_t>(i)] = 0.54 - 0.46 * std::cos(kTwoPi * i / (n - 1));
  return w;
}

// Mirror index into [0, n) without repeating the edge sample.
int64_t reflect_index(int64_t i, int64_t n) {
  if (n == 1) return 0;
  const int64_t period = 2 * (n - 1);
  i = i % period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

void validate_stft(const AudioClip& clip, const StftConfig& cfg) {
  require(!clip.samples.empty(), Status::InvalidArgument, "empty signal");
  require(clip.sample_rate > 0, Status::InvalidArgument, "bad sample rate");
  require(cfg.n_window > 0 && cfg.n_hop > 0 && cfg.n_hop <= cfg.n_window,
          Status::InvalidArgument, "require 0 < n_hop <= n_window");
  require(cfg.n_window % 2 == 0, Status::InvalidArgument, "n_window must be even");
  if (!cfg.centered) {
    require(static_cast<int64_t>(clip.samples.size()) >= cfg.n_window,
            Status::InvalidArgument, "signal shorter than the analysis window");
  }
}

// Frame m covers padded[m*hop .. m*hop+win) when centered, signal[m*hop ..)
// otherwise. Returns the sample at offset `j` of frame `m`.
struct FrameGrid {
  const std::vector<double>& x;
  int64_t n;
  int64_t win;
  int64_t hop;
  bool centered;

  double sample(int64_t m, int64_t j) const {
    int64_t idx = m * hop + j;
    if (centered) idx -= win / 2;
    if (idx < 0 || idx >= n) {
      return x[static_cast<size_t>(reflect_index(idx, n))];
    }
    return x[static_cast<size_t>(idx)];
  }
};

// Least-squares polynomial fit of degree <= 2 through (t[i], v[i]); abscissae
// are centered before solving the normal equations.
struct QuadFit {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0, center = 0.0;

  static QuadFit fit(const std::vector<double>& t, const std::vector<double>& v, int degree) {
    QuadFit q;
    const size_t n = t.size();
    double mean_t = 0.0;
    for (double ti : t) mean_t += ti;
    mean_t /= static_cast<double>(n);
    q.center = mean_t;

    if (degree <= 0 || n == 1) {
      double mean_v = 0.0;
      for (double vi : v) mean_v += vi;
      q.c0 = mean_v / static_cast<double>(n);
      return q;
    }

    const int dim = degree >= 2 ? 3 : 2;
    double a[3][3] = {{0}};
    double b[3] = {0};
    for (size_t i = 0; i < n; ++i) {
      double u = t[i] - mean_t;
      double pows[3] = {1.0, u, u * u};
      for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) a[r][c] += pows[r] * pows[c];
        b[r] += pows[r] * v[i];
      }
    }
    // Gaussian elimination with partial pivoting on the tiny system.
    int perm[3] = {0, 1, 2};
    for (int col = 0; col < dim; ++col) {
      int pivot = col;
      for (int r = col + 1; r < dim; ++r)
        if (std::fabs(a[perm[r]][col]) > std::fabs(a[perm[pivot]][col])) pivot = r;
      std::swap(perm[col], perm[pivot]);
      double d = a[perm[col]][col];
      require(std::fabs(d) > 1e-300, Status::NumericFailure, "singular fit system");
      for (int r = col + 1; r < dim; ++r) {
        double f = a[perm[r]][col] / d;
        for (int c = col; c < dim; ++c) a[perm[r]][c] -= f * a[perm[col]][c];
        b[perm[r]] -= f * b[perm[col]];
      }
    }
    double sol[3] = {0, 0, 0};
    for (int r = dim - 1; r >= 0; --r) {
      double acc = b[perm[r]];
      for (int c = r + 1; c < dim; ++c) acc -= a[perm[r]][c] * sol[c];
      sol[r] = acc / a[perm[r]][r];
    }
    q.c0 = sol[0];
    q.c1 = sol[1];
    q.c2 = sol[2];
    return q;
  }

  double eval(double t) const {
    double u = t - center;
    return c0 + c1 * u + c2 * u * u;
  }
};

double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

}  // namespace

FeatureLayout FeatureLayout::for_config(const FeatureConfig& cfg) {
  const int ctx = 2 * cfg.context_k + 1;
  FeatureLayout layout;
  layout.blocks = {{"STE", 0, ctx},
                   {"TRF", ctx, 2 * ctx},
                   {"HFP", 2 * ctx, 3 * ctx},
                   {"LMS", 3 * ctx, 3 * ctx + cfg.n_mel}};
  return layout;
}

std::vector<int> FeatureLayout::columns_for(const std::vector<std::string>& names) const {
  require(!names.empty(), Status::InvalidArgument, "empty feature subset");
  std::vector<int> cols;
  for (const auto& block : blocks) {
    if (std::find(names.begin(), names.end(), block.name) == names.end()) continue;
    for (int c = block.begin; c < block.end; ++c) cols.push_back(c);
  }
  require(cols.size() > 0, Status::InvalidArgument, "feature subset matches no block");
  size_t matched = 0;
  for (const auto& name : names) {
    for (const auto& block : blocks)
      if (block.name == name) ++matched;
  }
  require(matched == names.size(), Status::InvalidArgument,
          "unknown feature name in subset");
  return cols;
}

int64_t frame_count(int64_t n_samples, const StftConfig& cfg) {
  if (cfg.centered) return n_samples / cfg.n_hop + 1;
  return (n_samples - cfg.n_window) / cfg.n_hop + 1;
}

Spectrogram stft_power(const AudioClip& clip, const StftConfig& cfg) {
  validate_stft(clip, cfg);
  const int64_t n = static_cast<int64_t>(clip.samples.size());
  const int64_t win = cfg.n_window;
  const int64_t m_frames = frame_count(n, cfg);
  const int64_t bins = win / 2 + 1;

  Spectrogram spec;
  spec.n_frames = m_frames;
  spec.n_bins = bins;
  spec.sample_rate = clip.sample_rate;
  spec.power.resize(static_cast<size_t>(m_frames * bins));
  spec.bin_freqs.resize(static_cast<size_t>(bins));
  spec.frame_times.resize(static_cast<size_t>(m_frames));
  for (int64_t k = 0; k < bins; ++k)
    spec.bin_freqs[static_cast<size_t>(k)] =
        static_cast<double>(k) * clip.sample_rate / static_cast<double>(win);
  for (int64_t m = 0; m < m_frames; ++m)
    spec.frame_times[static_cast<size_t>(m)] =
        static_cast<double>(m * cfg.n_hop) / clip.sample_rate;

  const std::vector<double> window = hamming_window(static_cast<int>(win));
  FrameGrid grid{clip.samples, n, win, cfg.n_hop, cfg.centered};
  Fft fft(static_cast<size_t>(win));
  std::vector<std::complex<double>> buf(static_cast<size_t>(win));

  for (int64_t m = 0; m < m_frames; ++m) {
    for (int64_t j = 0; j < win; ++j)
      buf[static_cast<size_t>(j)] = {grid.sample(m, j) * window[static_cast<size_t>(j)], 0.0};
    fft.forward(buf.data());
    double* out = spec.frame(m);
    for (int64_t k = 0; k < bins; ++k) {
      const auto& c = buf[static_cast<size_t>(k)];
      out[k] = c.real() * c.real() + c.imag() * c.imag();
    }
  }
  return spec;
}

Series short_term_energy(const AudioClip& clip, const StftConfig& cfg) {
  validate_stft(clip, cfg);
  const int64_t n = static_cast<int64_t>(clip.samples.size());
  const int64_t m_frames = frame_count(n, cfg);
  FrameGrid grid{clip.samples, n, cfg.n_window, cfg.n_hop, cfg.centered};

  Series out(static_cast<size_t>(m_frames));
  for (int64_t m = 0; m < m_frames; ++m) {
    double acc = 0.0;
    for (int64_t j = 0; j < cfg.n_window; ++j) {
      double s = grid.sample(m, j);
      acc += s * s;
    }
    out[static_cast<size_t>(m)] = acc / static_cast<double>(cfg.n_window);
  }
  return out;
}

Series top_right_frequency(const Spectrogram& spec, double threshold) {
  require(threshold > 0.0, Status::InvalidArgument, "threshold must be positive");
  Series out(static_cast<size_t>(spec.n_frames), 0.0);
  for (int64_t m = 0; m < spec.n_frames; ++m) {
    const double* frame = spec.frame(m);
    for (int64_t k = spec.n_bins - 1; k >= 0; --k) {
      if (frame[k] >= threshold) {
        out[static_cast<size_t>(m)] = spec.bin_freqs[static_cast<size_t>(k)];
        break;
      }
    }
  }
  return out;
}

double power_percentile(const Spectrogram& spec, double percentile) {
  require(percentile >= 0.0 && percentile <= 100.0, Status::InvalidArgument,
          "percentile must be in [0, 100]");
  std::vector<double> values(spec.power);
  require(!values.empty(), Status::InvalidArgument, "empty spectrogram");
  const size_t n = values.size();
  const double rank = percentile / 100.0 * static_cast<double>(n - 1);
  const size_t lo = static_cast<size_t>(rank);
  std::nth_element(values.begin(), values.begin() + static_cast<int64_t>(lo), values.end());
  const double v_lo = values[lo];
  if (lo + 1 >= n) return v_lo;
  const double frac = rank - static_cast<double>(lo);
  if (frac == 0.0) return v_lo;
  std::nth_element(values.begin(), values.begin() + static_cast<int64_t>(lo + 1), values.end());
  const double v_hi = values[lo + 1];
  return v_lo + frac * (v_hi - v_lo);
}

Series high_frequency_power(const Spectrogram& spec, double f_min_hz, double f_max_hz) {
  const double nyquist = spec.sample_rate / 2.0;
  require(f_min_hz >= 0.0 && f_min_hz < f_max_hz && f_max_hz <= nyquist,
          Status::InvalidArgument, "require 0 <= f_min < f_max <= Nyquist");
  const double df = spec.bin_freqs.size() > 1 ? spec.bin_freqs[1] - spec.bin_freqs[0] : 1.0;
  Series out(static_cast<size_t>(spec.n_frames), 0.0);
  for (int64_t m = 0; m < spec.n_frames; ++m) {
    const double* frame = spec.frame(m);
    double acc = 0.0;
    for (int64_t k = 0; k < spec.n_bins; ++k) {
      double f = spec.bin_freqs[static_cast<size_t>(k)];
      if (f >= f_min_hz && f <= f_max_hz) acc += frame[k];
    }
    out[static_cast<size_t>(m)] = acc * df;
  }
  return out;
}

std::vector<Series> log_mel_spectrogram(const Spectrogram& spec, int n_mel) {
  require(n_mel >= 1, Status::InvalidArgument, "n_mel must be at least 1");
  require(n_mel <= spec.n_bins, Status::InvalidArgument,
          "n_mel exceeds the number of spectrogram bins");
  const double nyquist = spec.sample_rate / 2.0;
  const double mel_max = hz_to_mel(nyquist);
  std::vector<double> edges(static_cast<size_t>(n_mel) + 2);
  for (size_t i = 0; i < edges.size(); ++i)
    edges[i] = mel_to_hz(mel_max * static_cast<double>(i) / static_cast<double>(n_mel + 1));

  // Triangular weights evaluated at the bin frequencies, unit peak.
  std::vector<std::vector<double>> weights(static_cast<size_t>(n_mel));
  for (int b = 0; b < n_mel; ++b) {
    auto& w = weights[static_cast<size_t>(b)];
    w.resize(static_cast<size_t>(spec.n_bins), 0.0);
    const double left = edges[static_cast<size_t>(b)];
    const double peak = edges[static_cast<size_t>(b) + 1];
    const double right = edges[static_cast<size_t>(b) + 2];
    for (int64_t k = 0; k < spec.n_bins; ++k) {
      const double f = spec.bin_freqs[static_cast<size_t>(k)];
      double rise = (f - left) / std::max(peak - left, 1e-12);
      double fall = (right - f) / std::max(right - peak, 1e-12);
      w[static_cast<size_t>(k)] = std::max(0.0, std::min(rise, fall));
    }
  }

  std::vector<Series> bands(static_cast<size_t>(n_mel),
                            Series(static_cast<size_t>(spec.n_frames), 0.0));
  for (int64_t m = 0; m < spec.n_frames; ++m) {
    const double* frame = spec.frame(m);
    for (int b = 0; b < n_mel; ++b) {
      const auto& w = weights[static_cast<size_t>(b)];
      double acc = 0.0;
      for (int64_t k = 0; k < spec.n_bins; ++k) acc += w[static_cast<size_t>(k)] * frame[k];
      bands[static_cast<size_t>(b)][static_cast<size_t>(m)] = std::log(acc + kLmsFloor);
    }
  }
  return bands;
}

Series ma_smooth(const Series& series, const std::vector<int>& lengths) {
  for (int len : lengths)
    require(len >= 1 && len % 2 == 1, Status::InvalidArgument,
            "moving-average lengths must be odd and positive");
  Series current = series;
  const int64_t n = static_cast<int64_t>(series.size());
  for (int len : lengths) {
    if (len == 1) continue;
    const int64_t half = len / 2;
    Series next(static_cast<size_t>(n));
    for (int64_t i = 0; i < n; ++i) {
      const int64_t h = std::min({half, i, n - 1 - i});
      double acc = 0.0;
      for (int64_t j = i - h; j <= i + h; ++j) acc += current[static_cast<size_t>(j)];
      next[static_cast<size_t>(i)] = acc / static_cast<double>(2 * h + 1);
    }
    current = std::move(next);
  }
  return current;
}

Series standardize(const Series& series) {
  const size_t n = series.size();
  require(n >= 2, Status::InvalidArgument, "series too short to standardize");
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : series) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  Series out(n, 0.0);
  if (var < 1e-12) return out;
  const double inv_sd = 1.0 / std::sqrt(var);
  for (size_t i = 0; i < n; ++i) out[i] = (series[i] - mean) * inv_sd;
  return out;
}

DMatrix context_stack(const Series& series, int k) {
  require(k >= 0, Status::InvalidArgument, "context K must be non-negative");
  const int64_t n = static_cast<int64_t>(series.size());
  require(n >= k + 1, Status::InvalidArgument, "series too short for context K");

  // Extrapolated values shared by all boundary rows.
  std::vector<double> left(static_cast<size_t>(k)), right(static_cast<size_t>(k));
  if (k > 0) {
    const int degree = std::min(2, k);
    std::vector<double> t(static_cast<size_t>(k) + 1), v(static_cast<size_t>(k) + 1);
    for (int i = 0; i <= k; ++i) {
      t[static_cast<size_t>(i)] = static_cast<double>(i);
      v[static_cast<size_t>(i)] = series[static_cast<size_t>(i)];
    }
    QuadFit fit_left = QuadFit::fit(t, v, degree);
    for (int i = 0; i < k; ++i)
      left[static_cast<size_t>(i)] = fit_left.eval(static_cast<double>(i - k));

    for (int i = 0; i <= k; ++i) {
      t[static_cast<size_t>(i)] = static_cast<double>(n - 1 - k + i);
      v[static_cast<size_t>(i)] = series[static_cast<size_t>(n - 1 - k + i)];
    }
    QuadFit fit_right = QuadFit::fit(t, v, degree);
    for (int i = 0; i < k; ++i)
      right[static_cast<size_t>(i)] = fit_right.eval(static_cast<double>(n + i));
  }

  auto value_at = [&](int64_t idx) {
    if (idx < 0) return left[static_cast<size_t>(idx + k)];
    if (idx >= n) return right[static_cast<size_t>(idx - n)];
    return series[static_cast<size_t>(idx)];
  };

  DMatrix out(n, 2 * k + 1);
  for (int64_t m = 0; m < n; ++m) {
    double* row = out.row(m);
    for (int j = -k; j <= k; ++j) row[j + k] = value_at(m + j);
  }
  return out;
}

Matrix assemble_features(const AudioClip& clip, const FeatureConfig& cfg) {
  require(cfg.context_k >= 0 && cfg.n_mel >= 1, Status::InvalidArgument,
          "bad feature configuration");
  Spectrogram spec = stft_power(clip, cfg.stft);
  const int64_t m_frames = spec.n_frames;

  Series energy = short_term_energy(clip, cfg.stft);
  double threshold = power_percentile(spec, cfg.trf_percentile);
  // An all-zero spectrogram yields threshold 0; keep the TRF precondition.
  threshold = std::max(threshold, std::numeric_limits<double>::min());
  Series trf = top_right_frequency(spec, threshold);
  Series hfp = high_frequency_power(spec, cfg.hfp_fmin_hz, cfg.hfp_fmax_hz);

  auto process = [&](const Series& s) {
    return context_stack(standardize(ma_smooth(s, cfg.feature_ma)), cfg.context_k);
  };
  DMatrix ste_ctx = process(energy);
  DMatrix trf_ctx = process(trf);
  DMatrix hfp_ctx = process(hfp);

  std::vector<Series> bands = log_mel_spectrogram(spec, cfg.n_mel);
  for (auto& band : bands) band = standardize(band);

  const int ctx = 2 * cfg.context_k + 1;
  Matrix out(m_frames, cfg.feature_dim());
  for (int64_t m = 0; m < m_frames; ++m) {
    float* row = out.row(m);
    const double* se = ste_ctx.row(m);
    const double* tr = trf_ctx.row(m);
    const double* hf = hfp_ctx.row(m);
    for (int j = 0; j < ctx; ++j) {
      row[j] = static_cast<float>(se[j]);
      row[ctx + j] = static_cast<float>(tr[j]);
      row[2 * ctx + j] = static_cast<float>(hf[j]);
    }
    for (int b = 0; b < cfg.n_mel; ++b)
      row[3 * ctx + b] = static_cast<float>(bands[static_cast<size_t>(b)][static_cast<size_t>(m)]);
  }
  return out;
}

Matrix select_columns(const Matrix& m, const std::vector<int>& cols) {
  for (int c : cols)
    require(c >= 0 && c < m.cols, Status::InvalidArgument, "column index out of range");
  Matrix out(m.rows, static_cast<int64_t>(cols.size()));
  for (int64_t r = 0; r < m.rows; ++r) {
    const float* src = m.row(r);
    float* dst = out.row(r);
    for (size_t i = 0; i < cols.size(); ++i) dst[i] = src[cols[i]];
  }
  return out;
}

}  // namespace avc
