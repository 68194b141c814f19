#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "avc/common.hpp"

namespace avc {

constexpr int kDatasetSampleRate = 44100;

struct AudioClip {
  std::string id;
  int sample_rate = 0;
  std::vector<double> samples;

  double duration_s() const {
    return static_cast<double>(samples.size()) / static_cast<double>(sample_rate);
  }
};

struct Annotation {
  double time_s = 0.0;
  std::string vehicle_class;  // empty when not annotated
};

struct AnnotationSet {
  std::string clip_id;
  std::vector<Annotation> entries;  // sorted by time

  size_t size() const { return entries.size(); }
  std::vector<double> times() const;
};

// Loads a mono WAV clip. Rejects clips whose sample rate is not 44100 Hz;
// the feature geometry assumes the dataset rate and no resampling is done.
AudioClip load_clip(const std::string& path);

void save_clip(const AudioClip& clip, const std::string& path);

// Annotation files are CSV, one pass-by per line: `time_s[,class]`.
// `#` starts a comment. Times are sorted on load; duplicates closer than
// 0.01 s are rejected. When max_time_s > 0, times outside [0, max_time_s]
// are rejected.
AnnotationSet load_annotations(const std::string& path, double max_time_s = 0.0);

void save_annotations(const AnnotationSet& annotations, const std::string& path);

struct ManifestEntry {
  std::string clip_path;        // relative to the manifest directory, or absolute
  std::string annotation_path;  // may be empty for unannotated clips
  int location = 1;             // recording site tag, 1-6
  std::string split;            // optional train/test/fold label
};

struct Manifest {
  std::string base_dir;  // directory the relative paths resolve against
  std::vector<ManifestEntry> entries;

  size_t size() const { return entries.size(); }
  std::string resolve_clip(size_t i) const;
  std::string resolve_annotation(size_t i) const;
};

// Manifest CSV columns: clip,annotation,location[,split]. Referenced files
// must exist.
Manifest load_manifest(const std::string& path);

void save_manifest(const Manifest& manifest, const std::string& path);

// File-level k-fold partition. Deterministic for a given seed; fold sizes
// differ by at most one. Returns (train, test) manifests per fold, with
// split labels filled in.
std::vector<std::pair<Manifest, Manifest>> split_kfold(const Manifest& manifest,
                                                       int k, uint64_t seed);

struct SynthSpec {
  std::string id = "synth";
  double duration_s = 20.0;
  std::vector<double> passby_times;
  double noise_level = 0.01;
  uint64_t seed = 0;
};

// Deterministic synthetic clip: a white-noise floor plus one broadband
// noise burst per pass-by with amplitude envelope 1/(1 + (a*(t - T))^2),
// band-passed to 50 Hz - 18 kHz. Identical spec and seed give bit-identical
// samples.
std::pair<AudioClip, AnnotationSet> synth_clip(const SynthSpec& spec);

struct SynthCorpusSpec {
  int n_clips = 50;
  double duration_s = 20.0;
  double mean_passbys = 3.0;   // Poisson mean per clip
  double min_gap_s = 2.0;
  double noise_level = 0.05;
  uint64_t seed = 1;
};

// Writes clip_###.wav / clip_###.csv files plus manifest.csv into out_dir.
Manifest synth_corpus(const SynthCorpusSpec& spec, const std::string& out_dir);

}  // namespace avc
