#include <doctest.h>

#include <cmath>
#include <random>

#include "avc/dataset.hpp"
#include "avc/features.hpp"
#include "support/oracles.hpp"

using namespace avc;

namespace {

AudioClip make_clip(std::vector<double> samples, const std::string& id = "test") {
  AudioClip clip;
  clip.id = id;
  clip.sample_rate = kDatasetSampleRate;
  clip.samples = std::move(samples);
  return clip;
}

AudioClip random_clip(size_t n, uint64_t seed, double amp = 0.3) {
  std::mt19937_64 gen(seed);
  std::vector<double> samples(n);
  for (auto& s : samples)
    s = amp * (2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0);
  return make_clip(std::move(samples));
}

Spectrogram make_spectrogram(const std::vector<std::vector<double>>& frames,
                             double df, int sample_rate) {
  Spectrogram spec;
  spec.n_frames = static_cast<int64_t>(frames.size());
  spec.n_bins = static_cast<int64_t>(frames.front().size());
  spec.sample_rate = sample_rate;
  for (int64_t k = 0; k < spec.n_bins; ++k) spec.bin_freqs.push_back(k * df);
  for (int64_t m = 0; m < spec.n_frames; ++m) {
    spec.frame_times.push_back(static_cast<double>(m));
    for (double v : frames[static_cast<size_t>(m)]) spec.power.push_back(v);
  }
  return spec;
}

std::vector<double> hamming_ref(int n) {
  std::vector<double> w(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    w[static_cast<size_t>(i)] = 0.54 - 0.46 * std::cos(2.0 * M_PI * i / (n - 1));
  return w;
}

}  // namespace

TEST_CASE("frame grid matches the dataset geometry") {
  StftConfig cfg;  // defaults: 4096 / 1638, centered
  CHECK(frame_count(882000, cfg) == 539);
  cfg.centered = false;
  CHECK(frame_count(882000, cfg) == 536);
}

TEST_CASE("full-length spectrogram and tensor shapes") {
  AudioClip clip = random_clip(882000, 11, 0.05);
  FeatureConfig cfg;
  Spectrogram spec = stft_power(clip, cfg.stft);
  CHECK(spec.n_frames == 539);
  CHECK(spec.n_bins == 2049);
  CHECK(spec.bin_freqs.back() == doctest::Approx(22050.0));

  std::vector<Series> bands = log_mel_spectrogram(spec, 64);
  CHECK(bands.size() == 64);
  CHECK(bands[0].size() == 539);

  Matrix tensor = assemble_features(clip, cfg);
  CHECK(tensor.rows == 539);
  CHECK(tensor.cols == 127);
}

TEST_CASE("pure sine concentrates power at the nearest bin") {
  StftConfig cfg;
  cfg.n_window = 1024;
  cfg.n_hop = 512;
  const double freq = 1000.0;
  std::vector<double> samples(44100);
  for (size_t i = 0; i < samples.size(); ++i)
    samples[i] = std::sin(2.0 * M_PI * freq * static_cast<double>(i) / 44100.0);
  Spectrogram spec = stft_power(make_clip(std::move(samples)), cfg);

  const double df = 44100.0 / cfg.n_window;
  const auto expected_bin = static_cast<int64_t>(std::llround(freq / df));
  for (int64_t m = 1; m + 1 < spec.n_frames; ++m) {
    const double* frame = spec.frame(m);
    int64_t argmax = 0;
    for (int64_t k = 1; k < spec.n_bins; ++k)
      if (frame[k] > frame[argmax]) argmax = k;
    CHECK(argmax == expected_bin);
  }
}

TEST_CASE("all-zero clip gives an all-zero power matrix") {
  StftConfig cfg;
  cfg.n_window = 256;
  cfg.n_hop = 100;
  Spectrogram spec = stft_power(make_clip(std::vector<double>(2000, 0.0)), cfg);
  for (double v : spec.power) CHECK(v == 0.0);
}

TEST_CASE("one frame of the spectrogram matches a direct DFT") {
  StftConfig cfg;
  cfg.n_window = 256;
  cfg.n_hop = 100;
  AudioClip clip = random_clip(2000, 21);
  Spectrogram spec = stft_power(clip, cfg);

  auto padded = oracle::reflect_pad(clip.samples, cfg.n_window / 2);
  auto window = hamming_ref(cfg.n_window);
  const int64_t m = 7;
  std::vector<double> frame(static_cast<size_t>(cfg.n_window));
  for (int64_t j = 0; j < cfg.n_window; ++j)
    frame[static_cast<size_t>(j)] =
        padded[static_cast<size_t>(m * cfg.n_hop + j)] * window[static_cast<size_t>(j)];
  auto expected = oracle::frame_power_direct(frame, spec.n_bins);

  const double* got = spec.frame(m);
  for (int64_t k = 0; k < spec.n_bins; ++k) {
    const double tol = 1e-6 * std::max(1.0, std::fabs(expected[static_cast<size_t>(k)]));
    CHECK(std::fabs(got[k] - expected[static_cast<size_t>(k)]) <= tol);
  }
}

TEST_CASE("windowed frame energy obeys the DFT power identity") {
  StftConfig cfg;
  cfg.n_window = 512;
  cfg.n_hop = 200;
  AudioClip clip = random_clip(4000, 31);
  Spectrogram spec = stft_power(clip, cfg);

  auto padded = oracle::reflect_pad(clip.samples, cfg.n_window / 2);
  auto window = hamming_ref(cfg.n_window);
  const int64_t m = 3;
  double sum_sq = 0.0;
  for (int64_t j = 0; j < cfg.n_window; ++j) {
    const double v =
        padded[static_cast<size_t>(m * cfg.n_hop + j)] * window[static_cast<size_t>(j)];
    sum_sq += v * v;
  }

  const double* frame = spec.frame(m);
  double onesided = frame[0] + frame[spec.n_bins - 1];
  for (int64_t k = 1; k < spec.n_bins - 1; ++k) onesided += 2.0 * frame[k];
  CHECK(onesided == doctest::Approx(cfg.n_window * sum_sq).epsilon(1e-6));
}

TEST_CASE("short-term energy equals the direct sum") {
  StftConfig cfg;
  cfg.n_window = 256;
  cfg.n_hop = 100;

  SUBCASE("constant signal") {
    Series e = short_term_energy(make_clip(std::vector<double>(1500, 1.0)), cfg);
    for (double v : e) CHECK(v == doctest::Approx(1.0));
  }
  SUBCASE("zero signal") {
    Series e = short_term_energy(make_clip(std::vector<double>(1500, 0.0)), cfg);
    for (double v : e) CHECK(v == 0.0);
  }
  SUBCASE("random clip, every frame") {
    AudioClip clip = random_clip(3000, 41);
    Series e = short_term_energy(clip, cfg);
    auto padded = oracle::reflect_pad(clip.samples, cfg.n_window / 2);
    auto expected = oracle::short_term_energy(
        padded, static_cast<int64_t>(e.size()), cfg.n_window, cfg.n_hop);
    REQUIRE(e.size() == expected.size());
    for (size_t m = 0; m < e.size(); ++m)
      CHECK(std::fabs(e[m] - expected[m]) <= 1e-6 * std::max(1e-12, std::fabs(expected[m])));
  }
  SUBCASE("shares the centered frame grid") {
    AudioClip clip = random_clip(3000, 42);
    CHECK(short_term_energy(clip, cfg).size() ==
          static_cast<size_t>(stft_power(clip, cfg).n_frames));
  }
}

TEST_CASE("top-right frequency scans bins against the threshold") {
  const double df = 10.0;
  Spectrogram spec = make_spectrogram({{9.0, 4.0, 3.0, 1.0}}, df, 60);

  Series t2 = top_right_frequency(spec, 2.0);
  CHECK(t2[0] == doctest::Approx(2 * df));

  Series high = top_right_frequency(spec, 100.0);
  CHECK(high[0] == 0.0);

  Series low = top_right_frequency(spec, 0.5);
  CHECK(low[0] == doctest::Approx(3 * df));  // last bin = f_max

  CHECK_THROWS_AS(top_right_frequency(spec, 0.0), Error);
}

TEST_CASE("top-right frequency is anti-monotone in the threshold") {
  std::mt19937_64 gen(5);
  std::vector<std::vector<double>> frames(20, std::vector<double>(33));
  for (auto& f : frames)
    for (auto& v : f) v = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  Spectrogram spec = make_spectrogram(frames, 5.0, 320);
  Series lo = top_right_frequency(spec, 0.2);
  Series hi = top_right_frequency(spec, 0.7);
  for (size_t m = 0; m < lo.size(); ++m) CHECK(lo[m] >= hi[m]);
}

TEST_CASE("high-frequency power integrates the band") {
  const double df = 10.0;
  const int rate = 640;  // 33 bins up to 320 Hz

  SUBCASE("flat power equals value times width") {
    std::vector<std::vector<double>> frames(1, std::vector<double>(33, 2.0));
    Spectrogram spec = make_spectrogram(frames, df, rate);
    Series h = high_frequency_power(spec, 100.0, 200.0);
    // 11 bins in [100, 200] inclusive; rectangle rule gives c * (W + df).
    CHECK(h[0] == doctest::Approx(2.0 * 11 * df));
  }
  SUBCASE("zero spectrogram") {
    std::vector<std::vector<double>> frames(2, std::vector<double>(33, 0.0));
    Spectrogram spec = make_spectrogram(frames, df, rate);
    for (double v : high_frequency_power(spec, 50.0, 300.0)) CHECK(v == 0.0);
  }
  SUBCASE("random frame matches explicit bin sum") {
    std::mt19937_64 gen(6);
    std::vector<std::vector<double>> frames(4, std::vector<double>(33));
    for (auto& f : frames)
      for (auto& v : f) v = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    Spectrogram spec = make_spectrogram(frames, df, rate);
    Series h = high_frequency_power(spec, 95.0, 235.0);
    for (int64_t m = 0; m < spec.n_frames; ++m) {
      std::vector<double> frame(spec.frame(m), spec.frame(m) + spec.n_bins);
      const double expected = oracle::band_power(frame, spec.bin_freqs, 95.0, 235.0, df);
      CHECK(h[static_cast<size_t>(m)] == doctest::Approx(expected).epsilon(1e-9));
    }
  }
  SUBCASE("additive over disjoint bands split off-bin") {
    std::mt19937_64 gen(7);
    std::vector<std::vector<double>> frames(3, std::vector<double>(33));
    for (auto& f : frames)
      for (auto& v : f) v = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    Spectrogram spec = make_spectrogram(frames, df, rate);
    Series whole = high_frequency_power(spec, 40.0, 280.0);
    Series left = high_frequency_power(spec, 40.0, 144.5);
    Series right = high_frequency_power(spec, 144.5, 280.0);
    for (size_t m = 0; m < whole.size(); ++m)
      CHECK(left[m] + right[m] == doctest::Approx(whole[m]).epsilon(1e-12));
  }
  SUBCASE("inverted band is rejected") {
    std::vector<std::vector<double>> frames(1, std::vector<double>(33, 1.0));
    Spectrogram spec = make_spectrogram(frames, df, rate);
    CHECK_THROWS_AS(high_frequency_power(spec, 200.0, 100.0), Error);
  }
}

TEST_CASE("log-mel bands floor at log(1e-10) and localize impulses") {
  const double df = 100.0;
  const int rate = 6400;  // 33 bins up to 3200 Hz

  std::vector<std::vector<double>> zero(2, std::vector<double>(33, 0.0));
  auto bands = log_mel_spectrogram(make_spectrogram(zero, df, rate), 8);
  for (const auto& band : bands)
    for (double v : band) CHECK(v == doctest::Approx(std::log(1e-10)));

  std::vector<std::vector<double>> impulse(1, std::vector<double>(33, 0.0));
  impulse[0][16] = 5.0;  // 1600 Hz
  auto spec = make_spectrogram(impulse, df, rate);
  auto ibands = log_mel_spectrogram(spec, 8);
  const double floor_value = std::log(1e-10);
  int touched = 0;
  for (const auto& band : ibands)
    if (band[0] > floor_value + 1e-9) ++touched;
  CHECK(touched >= 1);
  CHECK(touched <= 2);  // at most the two filters overlapping that bin

  CHECK_THROWS_AS(log_mel_spectrogram(spec, 64), Error);  // more bands than bins
}

TEST_CASE("moving average smoothing") {
  SUBCASE("constant series is a fixed point") {
    Series s(40, 3.25);
    Series out = ma_smooth(s, {11, 5});
    for (double v : out) CHECK(v == doctest::Approx(3.25));
  }
  SUBCASE("length one is the identity") {
    Series s = {1.0, -2.0, 3.0};
    Series out = ma_smooth(s, {1});
    for (size_t i = 0; i < s.size(); ++i) CHECK(out[i] == s[i]);
  }
  SUBCASE("impulse matches the direct windowed mean") {
    Series s = {0.0, 0.0, 1.0, 0.0, 0.0};
    Series out = ma_smooth(s, {5});
    auto expected = oracle::moving_average(s, 5);
    CHECK(out[2] == doctest::Approx(0.2));
    for (size_t i = 0; i < s.size(); ++i) CHECK(out[i] == doctest::Approx(expected[i]));
  }
  SUBCASE("successive filters compose") {
    std::mt19937_64 gen(8);
    Series s(60);
    for (auto& v : s) v = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    Series out = ma_smooth(s, {11, 5});
    auto expected = oracle::moving_average(oracle::moving_average(s, 11), 5);
    for (size_t i = 0; i < s.size(); ++i)
      CHECK(out[i] == doctest::Approx(expected[i]).epsilon(1e-12));
  }
  SUBCASE("linear in its input") {
    std::mt19937_64 gen(9);
    Series u(30), v(30);
    for (auto& x : u) x = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    for (auto& x : v) x = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    const double a = 2.5, b = -1.25;
    Series combined(30);
    for (size_t i = 0; i < 30; ++i) combined[i] = a * u[i] + b * v[i];
    Series lhs = ma_smooth(combined, {7, 3});
    Series ru = ma_smooth(u, {7, 3});
    Series rv = ma_smooth(v, {7, 3});
    for (size_t i = 0; i < 30; ++i)
      CHECK(lhs[i] == doctest::Approx(a * ru[i] + b * rv[i]).epsilon(1e-12));
  }
  SUBCASE("even lengths are rejected") {
    Series s(10, 1.0);
    CHECK_THROWS_AS(ma_smooth(s, {4}), Error);
  }
}

TEST_CASE("standardization") {
  SUBCASE("two points use the population convention") {
    Series out = standardize({1.0, 3.0});
    CHECK(out[0] == doctest::Approx(-1.0));
    CHECK(out[1] == doctest::Approx(1.0));
  }
  SUBCASE("constant series maps to zeros") {
    Series out = standardize(Series(25, 7.0));
    for (double v : out) CHECK(v == 0.0);
  }
  SUBCASE("random series has zero mean and unit variance") {
    std::mt19937_64 gen(10);
    Series s(200);
    for (auto& v : s) v = 5.0 + 3.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
    Series out = standardize(s);
    double mean = 0.0;
    for (double v : out) mean += v;
    mean /= static_cast<double>(out.size());
    double var = 0.0;
    for (double v : out) var += (v - mean) * (v - mean);
    var /= static_cast<double>(out.size());
    CHECK(std::fabs(mean) <= 1e-9);
    CHECK(std::fabs(var - 1.0) <= 1e-9);
  }
  SUBCASE("too-short input is rejected") {
    CHECK_THROWS_AS(standardize({1.0}), Error);
  }
}

TEST_CASE("context stacking with quadratic boundary extrapolation") {
  SUBCASE("quadratic series continues exactly") {
    const int k = 4;
    Series s(20);
    auto poly = [](double t) { return 0.5 * t * t - 2.0 * t + 3.0; };
    for (size_t i = 0; i < s.size(); ++i) s[i] = poly(static_cast<double>(i));
    DMatrix ctx = context_stack(s, k);
    REQUIRE(ctx.rows == 20);
    REQUIRE(ctx.cols == 2 * k + 1);
    for (int64_t m = 0; m < ctx.rows; ++m)
      for (int j = -k; j <= k; ++j)
        CHECK(ctx.at(m, j + k) ==
              doctest::Approx(poly(static_cast<double>(m + j))).epsilon(1e-9));
  }
  SUBCASE("K = 0 is the series as a column") {
    Series s = {1.0, 2.0, 5.0};
    DMatrix ctx = context_stack(s, 0);
    REQUIRE(ctx.cols == 1);
    for (int64_t m = 0; m < 3; ++m) CHECK(ctx.at(m, 0) == s[static_cast<size_t>(m)]);
  }
  SUBCASE("linear ramp extends linearly at the left edge") {
    const int k = 2;
    Series s = {0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
    DMatrix ctx = context_stack(s, k);
    CHECK(ctx.at(0, 0) == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(ctx.at(0, 1) == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(ctx.at(5, 3) == doctest::Approx(6.0).epsilon(1e-9));
    CHECK(ctx.at(5, 4) == doctest::Approx(7.0).epsilon(1e-9));
  }
  SUBCASE("short series is rejected") {
    CHECK_THROWS_AS(context_stack({1.0, 2.0}, 5), Error);
  }
}

TEST_CASE("assembled tensor wiring") {
  FeatureConfig cfg;
  cfg.stft.n_window = 512;
  cfg.stft.n_hop = 205;
  cfg.context_k = 3;
  cfg.n_mel = 12;
  cfg.hfp_fmin_hz = 3000.0;
  cfg.hfp_fmax_hz = 22050.0;

  SUBCASE("zero clip gives a zero tensor") {
    Matrix t = assemble_features(make_clip(std::vector<double>(8000, 0.0)), cfg);
    CHECK(t.rows == 8000 / 205 + 1);
    CHECK(t.cols == cfg.feature_dim());
    for (float v : t.data) CHECK(v == 0.0f);
  }

  SUBCASE("pass-by frame carries the maximal HFP context center") {
    SynthSpec spec;
    spec.duration_s = 6.0;
    spec.passby_times = {3.0};
    spec.noise_level = 0.002;
    spec.seed = 17;
    auto [clip, ann] = synth_clip(spec);
    Matrix t = assemble_features(clip, cfg);

    // Reference path: band power from the spectrogram, smoothed and
    // standardized with the oracle helpers.
    Spectrogram sg = stft_power(clip, cfg.stft);
    const double df = sg.bin_freqs[1] - sg.bin_freqs[0];
    std::vector<double> hfp(static_cast<size_t>(sg.n_frames));
    for (int64_t m = 0; m < sg.n_frames; ++m) {
      std::vector<double> frame(sg.frame(m), sg.frame(m) + sg.n_bins);
      hfp[static_cast<size_t>(m)] =
          oracle::band_power(frame, sg.bin_freqs, cfg.hfp_fmin_hz, cfg.hfp_fmax_hz, df);
    }
    auto processed = oracle::moving_average(oracle::moving_average(hfp, 11), 5);
    double mean = 0.0;
    for (double v : processed) mean += v;
    mean /= static_cast<double>(processed.size());

    const int ctx = 2 * cfg.context_k + 1;
    const int hfp_center = 2 * ctx + cfg.context_k;
    int64_t argmax_tensor = 0;
    int64_t argmax_ref = 0;
    for (int64_t m = 1; m < t.rows; ++m) {
      if (t.at(m, hfp_center) > t.at(argmax_tensor, hfp_center)) argmax_tensor = m;
      if (processed[static_cast<size_t>(m)] > processed[static_cast<size_t>(argmax_ref)])
        argmax_ref = m;
    }
    CHECK(argmax_tensor == argmax_ref);
    const double hop_s = static_cast<double>(cfg.stft.n_hop) / 44100.0;
    CHECK(std::fabs(static_cast<double>(argmax_tensor) * hop_s - 3.0) <= 0.25);
  }

  SUBCASE("feature series share one length") {
    AudioClip clip = random_clip(6000, 51);
    Spectrogram sg = stft_power(clip, cfg.stft);
    Series e = short_term_energy(clip, cfg.stft);
    Series trf = top_right_frequency(sg, 1e-6);
    Series h = high_frequency_power(sg, 1000.0, 20000.0);
    auto lms = log_mel_spectrogram(sg, cfg.n_mel);
    CHECK(e.size() == static_cast<size_t>(sg.n_frames));
    CHECK(trf.size() == e.size());
    CHECK(h.size() == e.size());
    CHECK(lms[0].size() == e.size());
  }
}

TEST_CASE("column selection by block names") {
  FeatureConfig cfg;
  cfg.context_k = 2;
  cfg.n_mel = 4;
  FeatureLayout layout = FeatureLayout::for_config(cfg);
  CHECK(layout.total_cols() == 3 * 5 + 4);

  auto cols = layout.columns_for({"HFP", "LMS"});
  REQUIRE(cols.size() == 9);
  CHECK(cols.front() == 10);
  CHECK(cols.back() == 18);

  CHECK_THROWS_AS(layout.columns_for({"XYZ"}), Error);
  CHECK_THROWS_AS(layout.columns_for({}), Error);

  Matrix m(2, layout.total_cols());
  for (int64_t c = 0; c < m.cols; ++c) {
    m.at(0, c) = static_cast<float>(c);
    m.at(1, c) = static_cast<float>(10 * c);
  }
  Matrix sliced = select_columns(m, cols);
  CHECK(sliced.cols == 9);
  CHECK(sliced.at(0, 0) == 10.0f);
  CHECK(sliced.at(1, 8) == 180.0f);
}
