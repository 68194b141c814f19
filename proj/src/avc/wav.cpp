#include "avc/wav.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "avc/common.hpp"

namespace avc::wav {

namespace {

constexpr uint16_t kFormatPcm = 0x0001;
constexpr uint16_t kFormatFloat = 0x0003;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint32_t read_u32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
         static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

uint16_t read_u16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | p[1] << 8);
}

void append_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v & 0xFF));
  out.push_back(static_cast<uint8_t>((v >> 8) & 0xFF));
  out.push_back(static_cast<uint8_t>((v >> 16) & 0xFF));
  out.push_back(static_cast<uint8_t>((v >> 24) & 0xFF));
}

void append_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v & 0xFF));
  out.push_back(static_cast<uint8_t>((v >> 8) & 0xFF));
}

void append_tag(std::vector<uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

WavData read_mono(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Status::Io, "cannot open wav file: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  require(bytes.size() >= 12, Status::BadFormat, "not a RIFF file: " + path);
  require(std::memcmp(bytes.data(), "RIFF", 4) == 0 &&
              std::memcmp(bytes.data() + 8, "WAVE", 4) == 0,
          Status::BadFormat, "not a RIFF/WAVE container: " + path);

  uint16_t format = 0;
  uint16_t channels = 0;
  uint32_t sample_rate = 0;
  uint16_t bits = 0;
  bool have_fmt = false;
  const uint8_t* data = nullptr;
  size_t data_size = 0;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint8_t* chunk = bytes.data() + pos;
    uint32_t chunk_size = read_u32(chunk + 4);
    size_t body = pos + 8;
    if (body + chunk_size > bytes.size()) chunk_size = static_cast<uint32_t>(bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      require(chunk_size >= 16, Status::BadFormat, "truncated fmt chunk: " + path);
      const uint8_t* f = bytes.data() + body;
      format = read_u16(f);
      channels = read_u16(f + 2);
      sample_rate = read_u32(f + 4);
      bits = read_u16(f + 14);
      if (format == kFormatExtensible) {
        require(chunk_size >= 40, Status::BadFormat, "truncated extensible fmt chunk: " + path);
        format = read_u16(f + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = chunk_size;
    }
    pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }

  require(have_fmt, Status::BadFormat, "missing fmt chunk: " + path);
  require(data != nullptr, Status::BadFormat, "missing data chunk: " + path);
  require(channels == 1, Status::UnsupportedChannels,
          "unsupported channel count " + std::to_string(channels) + ": " + path);

  const bool pcm = format == kFormatPcm && (bits == 16 || bits == 24 || bits == 32);
  const bool flt = format == kFormatFloat && bits == 32;
  require(pcm || flt, Status::UnsupportedEncoding,
          "unsupported encoding (format tag " + std::to_string(format) + ", " +
              std::to_string(bits) + " bits): " + path);

  WavData out;
  out.sample_rate = static_cast<int>(sample_rate);
  const size_t bytes_per_sample = bits / 8;
  const size_t n = data_size / bytes_per_sample;
  out.samples.resize(n);

  if (flt) {
    for (size_t i = 0; i < n; ++i) {
      uint32_t u = read_u32(data + i * 4);
      float v;
      std::memcpy(&v, &u, 4);
      require(std::isfinite(v), Status::BadFormat,
              "non-finite sample at index " + std::to_string(i) + ": " + path);
      out.samples[i] = static_cast<double>(v);
    }
  } else if (bits == 16) {
    for (size_t i = 0; i < n; ++i) {
      int16_t v = static_cast<int16_t>(read_u16(data + i * 2));
      out.samples[i] = static_cast<double>(v) / 32768.0;
    }
  } else if (bits == 24) {
    for (size_t i = 0; i < n; ++i) {
      const uint8_t* p = data + i * 3;
      int32_t v = static_cast<int32_t>(p[0] | p[1] << 8 | p[2] << 16);
      if (v & 0x800000) v |= ~0xFFFFFF;  // sign-extend
      out.samples[i] = static_cast<double>(v) / 8388608.0;
    }
  } else {
    for (size_t i = 0; i < n; ++i) {
      int32_t v = static_cast<int32_t>(read_u32(data + i * 4));
      out.samples[i] = static_cast<double>(v) / 2147483648.0;
    }
  }
  return out;
}

void write_mono(const std::string& path, const std::vector<double>& samples,
                int sample_rate, SampleFormat format) {
  require(sample_rate > 0, Status::InvalidArgument, "sample rate must be positive");
  uint16_t bits = 0;
  uint16_t tag = kFormatPcm;
  switch (format) {
    case SampleFormat::pcm16: bits = 16; break;
    case SampleFormat::pcm24: bits = 24; break;
    case SampleFormat::pcm32: bits = 32; break;
    case SampleFormat::float32: bits = 32; tag = kFormatFloat; break;
  }
  const uint32_t bytes_per_sample = bits / 8;
  const uint32_t data_size = static_cast<uint32_t>(samples.size() * bytes_per_sample);

  std::vector<uint8_t> out;
  out.reserve(44 + data_size);
  append_tag(out, "RIFF");
  append_u32(out, 36 + data_size);
  append_tag(out, "WAVE");
  append_tag(out, "fmt ");
  append_u32(out, 16);
  append_u16(out, tag);
  append_u16(out, 1);  // mono
  append_u32(out, static_cast<uint32_t>(sample_rate));
  append_u32(out, static_cast<uint32_t>(sample_rate) * bytes_per_sample);
  append_u16(out, static_cast<uint16_t>(bytes_per_sample));
  append_u16(out, bits);
  append_tag(out, "data");
  append_u32(out, data_size);

  auto clamp_unit = [](double v) { return v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v); };
  for (double s : samples) {
    switch (format) {
      case SampleFormat::pcm16: {
        double c = clamp_unit(s) * 32767.0;
        append_u16(out, static_cast<uint16_t>(static_cast<int16_t>(std::lrint(c))));
        break;
      }
      case SampleFormat::pcm24: {
        double c = clamp_unit(s) * 8388607.0;
        int32_t v = static_cast<int32_t>(std::lrint(c));
        out.push_back(static_cast<uint8_t>(v & 0xFF));
        out.push_back(static_cast<uint8_t>((v >> 8) & 0xFF));
        out.push_back(static_cast<uint8_t>((v >> 16) & 0xFF));
        break;
      }
      case SampleFormat::pcm32: {
        double c = clamp_unit(s) * 2147483647.0;
        append_u32(out, static_cast<uint32_t>(static_cast<int32_t>(std::llrint(c))));
        break;
      }
      case SampleFormat::float32: {
        float v = static_cast<float>(s);
        uint32_t u;
        std::memcpy(&u, &v, 4);
        append_u32(out, u);
        break;
      }
    }
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  require(f.good(), Status::Io, "cannot open wav file for writing: " + path);
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  require(f.good(), Status::Io, "wav write failed: " + path);
}

}  // namespace avc::wav
