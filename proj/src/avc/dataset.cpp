#include "avc/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <filesystem>
#include <random>
#include <sstream>

#include "avc/fft.hpp"
#include "avc/text.hpp"
#include "avc/wav.hpp"

namespace fs = std::filesystem;

namespace avc {

namespace {

const std::array<std::string, 5> kVehicleClasses = {"motorcycle", "car", "van",
                                                    "bus", "truck"};

// Deterministic random source. mt19937_64 has a fully specified sequence and
// the uniform transform below avoids implementation-defined distributions,
// so outputs are reproducible across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Knuth's method; fine for small means.
  int poisson(double mean) {
    const double limit = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform01();
    } while (p > limit);
    return k - 1;
  }

  uint64_t next_index(uint64_t bound) { return gen_() % bound; }

 private:
  std::mt19937_64 gen_;
};

std::string path_stem(const std::string& path) {
  return fs::path(path).stem().string();
}

// Brickwall band-pass via FFT on the next power-of-two length.
void bandpass_inplace(std::vector<double>& x, int sample_rate, double f_lo, double f_hi) {
  size_t n = x.size();
  if (n == 0) return;
  size_t m = 1;
  while (m < n) m <<= 1;
  std::vector<std::complex<double>> buf(m, {0.0, 0.0});
  for (size_t i = 0; i < n; ++i) buf[i] = {x[i], 0.0};
  Fft fft(m);
  fft.forward(buf.data());
  const double df = static_cast<double>(sample_rate) / static_cast<double>(m);
  for (size_t k = 0; k < m; ++k) {
    size_t mirror = k <= m / 2 ? k : m - k;
    double f = static_cast<double>(mirror) * df;
    if (f < f_lo || f > f_hi) buf[k] = {0.0, 0.0};
  }
  fft.inverse(buf.data());
  for (size_t i = 0; i < n; ++i) x[i] = buf[i].real();
}

}  // namespace

std::vector<double> AnnotationSet::times() const {
  std::vector<double> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.time_s);
  return out;
}

AudioClip load_clip(const std::string& path) {
  wav::WavData data = wav::read_mono(path);
  require(data.sample_rate == kDatasetSampleRate, Status::BadSampleRate,
          "expected 44100 Hz, got " + std::to_string(data.sample_rate) + ": " + path);
  require(!data.samples.empty(), Status::BadFormat, "empty sample buffer: " + path);
  AudioClip clip;
  clip.id = path_stem(path);
  clip.sample_rate = data.sample_rate;
  clip.samples = std::move(data.samples);
  return clip;
}

void save_clip(const AudioClip& clip, const std::string& path) {
  wav::write_mono(path, clip.samples, clip.sample_rate, wav::SampleFormat::float32);
}

AnnotationSet load_annotations(const std::string& path, double max_time_s) {
  std::string content = read_text_file(path);
  AnnotationSet set;
  set.clip_id = path_stem(path);

  std::istringstream lines(content);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::string_view body = trim(line);
    if (body.empty()) continue;
    auto fields = split_csv_line(body);
    require(fields.size() <= 2, Status::ParseError,
            path + ":" + std::to_string(line_no) + ": expected `time_s[,class]`");
    auto time = parse_double(fields[0]);
    require(time.has_value(), Status::ParseError,
            path + ":" + std::to_string(line_no) + ": bad time value `" + fields[0] + "`");
    require(*time >= 0.0, Status::ParseError,
            path + ":" + std::to_string(line_no) + ": negative pass-by time");
    if (max_time_s > 0.0) {
      require(*time <= max_time_s, Status::ParseError,
              path + ":" + std::to_string(line_no) + ": time " + fields[0] +
                  " outside [0, " + format_double(max_time_s, 6) + "]");
    }
    Annotation ann;
    ann.time_s = *time;
    if (fields.size() == 2 && !fields[1].empty()) {
      bool known = std::find(kVehicleClasses.begin(), kVehicleClasses.end(), fields[1]) !=
                   kVehicleClasses.end();
      require(known, Status::ParseError,
              path + ":" + std::to_string(line_no) + ": unknown vehicle class `" +
                  fields[1] + "`");
      ann.vehicle_class = fields[1];
    }
    set.entries.push_back(std::move(ann));
  }

  std::stable_sort(set.entries.begin(), set.entries.end(),
                   [](const Annotation& a, const Annotation& b) { return a.time_s < b.time_s; });
  for (size_t i = 1; i < set.entries.size(); ++i) {
    require(set.entries[i].time_s - set.entries[i - 1].time_s >= 0.01, Status::ParseError,
            path + ": duplicate pass-by times at " +
                format_fixed(set.entries[i - 1].time_s, 2) + " s");
  }
  return set;
}

void save_annotations(const AnnotationSet& annotations, const std::string& path) {
  std::string out;
  for (const auto& e : annotations.entries) {
    out += format_fixed(e.time_s, 2);
    if (!e.vehicle_class.empty()) {
      out += ',';
      out += e.vehicle_class;
    }
    out += '\n';
  }
  write_text_file(path, out);
}

std::string Manifest::resolve_clip(size_t i) const {
  fs::path p(entries[i].clip_path);
  if (p.is_absolute() || base_dir.empty()) return p.string();
  return (fs::path(base_dir) / p).string();
}

std::string Manifest::resolve_annotation(size_t i) const {
  if (entries[i].annotation_path.empty()) return {};
  fs::path p(entries[i].annotation_path);
  if (p.is_absolute() || base_dir.empty()) return p.string();
  return (fs::path(base_dir) / p).string();
}

Manifest load_manifest(const std::string& path) {
  std::string content = read_text_file(path);
  Manifest manifest;
  manifest.base_dir = fs::path(path).parent_path().string();

  std::istringstream lines(content);
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(lines, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto fields = split_csv_line(body);
    if (!header_seen) {
      require(fields.size() >= 3 && fields[0] == "clip" && fields[1] == "annotation" &&
                  fields[2] == "location",
              Status::ParseError,
              path + ":" + std::to_string(line_no) +
                  ": expected header `clip,annotation,location[,split]`");
      header_seen = true;
      continue;
    }
    require(fields.size() == 3 || fields.size() == 4, Status::ParseError,
            path + ":" + std::to_string(line_no) + ": expected 3 or 4 columns");
    ManifestEntry entry;
    entry.clip_path = fields[0];
    entry.annotation_path = fields[1];
    auto loc = parse_int(fields[2]);
    require(loc.has_value() && *loc >= 1 && *loc <= 6, Status::ParseError,
            path + ":" + std::to_string(line_no) + ": location must be in 1..6");
    entry.location = static_cast<int>(*loc);
    if (fields.size() == 4) entry.split = fields[3];
    manifest.entries.push_back(std::move(entry));
  }
  require(header_seen, Status::ParseError, path + ": missing manifest header");

  for (size_t i = 0; i < manifest.size(); ++i) {
    require(fs::exists(manifest.resolve_clip(i)), Status::Io,
            path + ": clip file not found: " + manifest.resolve_clip(i));
    std::string ann = manifest.resolve_annotation(i);
    require(ann.empty() || fs::exists(ann), Status::Io,
            path + ": annotation file not found: " + ann);
  }
  return manifest;
}

void save_manifest(const Manifest& manifest, const std::string& path) {
  bool any_split = std::any_of(manifest.entries.begin(), manifest.entries.end(),
                               [](const ManifestEntry& e) { return !e.split.empty(); });
  std::string out = any_split ? "clip,annotation,location,split\n"
                              : "clip,annotation,location\n";
  for (const auto& e : manifest.entries) {
    out += e.clip_path;
    out += ',';
    out += e.annotation_path;
    out += ',';
    out += std::to_string(e.location);
    if (any_split) {
      out += ',';
      out += e.split;
    }
    out += '\n';
  }
  write_text_file(path, out);
}

std::vector<std::pair<Manifest, Manifest>> split_kfold(const Manifest& manifest,
                                                       int k, uint64_t seed) {
  require(k >= 2, Status::InvalidArgument, "k must be at least 2");
  require(static_cast<size_t>(k) <= manifest.size(), Status::InvalidArgument,
          "k exceeds clip count (" + std::to_string(manifest.size()) + ")");

  std::vector<size_t> order(manifest.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  // Fisher-Yates with our own index draw; std::shuffle is not portable.
  Rng rng(seed);
  for (size_t i = order.size() - 1; i > 0; --i) {
    size_t j = static_cast<size_t>(rng.next_index(i + 1));
    std::swap(order[i], order[j]);
  }

  std::vector<std::vector<size_t>> folds(static_cast<size_t>(k));
  for (size_t i = 0; i < order.size(); ++i) folds[i % k].push_back(order[i]);
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());

  std::vector<std::pair<Manifest, Manifest>> result;
  result.reserve(static_cast<size_t>(k));
  for (int f = 0; f < k; ++f) {
    Manifest train, test;
    train.base_dir = manifest.base_dir;
    test.base_dir = manifest.base_dir;
    const auto& test_idx = folds[static_cast<size_t>(f)];
    size_t cursor = 0;
    for (size_t i = 0; i < manifest.size(); ++i) {
      bool in_test = cursor < test_idx.size() && test_idx[cursor] == i;
      ManifestEntry entry = manifest.entries[i];
      if (in_test) {
        ++cursor;
        entry.split = "fold" + std::to_string(f) + "-test";
        test.entries.push_back(std::move(entry));
      } else {
        entry.split = "fold" + std::to_string(f) + "-train";
        train.entries.push_back(std::move(entry));
      }
    }
    result.emplace_back(std::move(train), std::move(test));
  }
  return result;
}

std::pair<AudioClip, AnnotationSet> synth_clip(const SynthSpec& spec) {
  require(spec.duration_s > 0.0, Status::InvalidArgument, "duration must be positive");
  require(spec.noise_level >= 0.0, Status::InvalidArgument, "noise level must be non-negative");
  std::vector<double> passbys = spec.passby_times;
  std::sort(passbys.begin(), passbys.end());
  for (size_t i = 0; i < passbys.size(); ++i) {
    require(passbys[i] >= 0.0 && passbys[i] <= spec.duration_s, Status::InvalidArgument,
            "pass-by time outside clip duration");
    if (i > 0) {
      require(passbys[i] - passbys[i - 1] >= 0.2, Status::InvalidArgument,
              "pass-by times closer than 0.2 s");
    }
  }

  const int sr = kDatasetSampleRate;
  const size_t n = static_cast<size_t>(std::llround(spec.duration_s * sr));
  require(n > 0, Status::InvalidArgument, "duration too short");

  Rng rng(spec.seed);
  std::vector<double> samples(n);
  for (size_t i = 0; i < n; ++i)
    samples[i] = spec.noise_level * (2.0 * rng.uniform01() - 1.0);

  if (!passbys.empty()) {
    // Envelope width constant: amplitude halves at |t - T| = 1/a seconds.
    constexpr double kEnvelopeRate = 2.0;
    constexpr double kBurstAmplitude = 0.5;
    std::vector<double> bursts(n, 0.0);
    for (double t_pass : passbys) {
      for (size_t i = 0; i < n; ++i) {
        double t = static_cast<double>(i) / sr;
        double dt = kEnvelopeRate * (t - t_pass);
        double envelope = 1.0 / (1.0 + dt * dt);
        bursts[i] += kBurstAmplitude * envelope * (2.0 * rng.uniform01() - 1.0);
      }
    }
    bandpass_inplace(bursts, sr, 50.0, 18000.0);
    for (size_t i = 0; i < n; ++i) samples[i] += bursts[i];
  }

  AudioClip clip;
  clip.id = spec.id;
  clip.sample_rate = sr;
  clip.samples = std::move(samples);

  AnnotationSet ann;
  ann.clip_id = spec.id;
  for (double t : passbys) ann.entries.push_back({t, std::string()});
  return {std::move(clip), std::move(ann)};
}

Manifest synth_corpus(const SynthCorpusSpec& spec, const std::string& out_dir) {
  require(spec.n_clips > 0, Status::InvalidArgument, "clip count must be positive");
  require(spec.min_gap_s >= 0.2, Status::InvalidArgument, "minimum gap must be >= 0.2 s");
  fs::create_directories(out_dir);

  Manifest manifest;
  manifest.base_dir = out_dir;
  for (int c = 0; c < spec.n_clips; ++c) {
    Rng rng(spec.seed * 0x9E3779B97F4A7C15ULL + static_cast<uint64_t>(c));
    int n_vehicles = rng.poisson(spec.mean_passbys);
    const double margin = 1.0;
    std::vector<double> times;
    while (n_vehicles > 0) {
      bool placed = false;
      for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
        times.clear();
        for (int v = 0; v < n_vehicles; ++v) {
          double t = rng.uniform(margin, spec.duration_s - margin);
          times.push_back(std::round(t * 100.0) / 100.0);  // annotation precision
        }
        std::sort(times.begin(), times.end());
        placed = true;
        for (size_t i = 1; i < times.size(); ++i) {
          if (times[i] - times[i - 1] < spec.min_gap_s) {
            placed = false;
            break;
          }
        }
      }
      if (placed) break;
      --n_vehicles;  // too crowded to satisfy the gap; relax
      times.clear();
    }

    char name[32];
    std::snprintf(name, sizeof(name), "clip_%03d", c);
    SynthSpec clip_spec;
    clip_spec.id = name;
    clip_spec.duration_s = spec.duration_s;
    clip_spec.passby_times = times;
    clip_spec.noise_level = spec.noise_level;
    clip_spec.seed = spec.seed * 0x2545F4914F6CDD1DULL + static_cast<uint64_t>(c) + 1;
    auto [clip, ann] = synth_clip(clip_spec);

    std::string wav_name = std::string(name) + ".wav";
    std::string csv_name = std::string(name) + ".csv";
    save_clip(clip, (fs::path(out_dir) / wav_name).string());
    save_annotations(ann, (fs::path(out_dir) / csv_name).string());

    ManifestEntry entry;
    entry.clip_path = wav_name;
    entry.annotation_path = csv_name;
    entry.location = 1;
    manifest.entries.push_back(std::move(entry));
  }
  save_manifest(manifest, (fs::path(out_dir) / "manifest.csv").string());
  return manifest;
}

}  // namespace avc
