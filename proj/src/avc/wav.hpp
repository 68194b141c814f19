#pragma once

#include <string>
#include <vector>

namespace avc::wav {

enum class SampleFormat { pcm16, pcm24, pcm32, float32 };

struct WavData {
  int sample_rate = 0;
  std::vector<double> samples;  // mono, integer PCM rescaled to [-1, 1]
};

// Reads a mono RIFF/WAVE file. Supported encodings: PCM 16/24/32-bit
// little-endian and IEEE float32. Throws avc::Error with a specific status
// for unsupported channel counts or encodings.
WavData read_mono(const std::string& path);

void write_mono(const std::string& path, const std::vector<double>& samples,
                int sample_rate, SampleFormat format = SampleFormat::float32);

}  // namespace avc::wav
