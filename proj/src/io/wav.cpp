// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "streamenh/io/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "streamenh/common.hpp"

namespace streamenh {
namespace {

constexpr int kRate = 16000;

std::uint32_t u32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
         std::uint32_t(p[3]) << 24;
}
std::uint16_t u16(const std::uint8_t* p) { return std::uint16_t(p[0] | p[1] << 8); }

void put32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(std::uint8_t(v >> (8 * i)));
}
void put16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(std::uint8_t(v));
  b.push_back(std::uint8_t(v >> 8));
}

bool tag(const std::uint8_t* p, const char* t) { return std::memcmp(p, t, 4) == 0; }

}  // namespace

WavFile parse_wav(std::span<const std::uint8_t> b) {
  if (b.size() < 12 || !tag(b.data(), "RIFF") || !tag(b.data() + 8, "WAVE"))
    throw Error(ErrorCode::kFormat, "not a RIFF/WAVE file");
  bool have_fmt = false;
  int format_tag = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= b.size()) {
    const std::uint8_t* h = b.data() + pos;
    const std::size_t size = u32(h + 4);
    const std::size_t body = pos + 8;
    if (size > b.size() - body) throw Error(ErrorCode::kFormat, "wav chunk overruns file");
    if (tag(h, "fmt ")) {
      if (size < 16) throw Error(ErrorCode::kFormat, "wav fmt chunk too short");
      format_tag = u16(b.data() + body);
      channels = u16(b.data() + body + 2);
      rate = u32(b.data() + body + 4);
      bits = u16(b.data() + body + 14);
      if (format_tag == 0xFFFE && size >= 26) format_tag = u16(b.data() + body + 24);
      have_fmt = true;
    } else if (tag(h, "data")) {
      if (!have_fmt) throw Error(ErrorCode::kFormat, "wav data chunk before fmt");
      if (channels != 1)
        throw Error(ErrorCode::kFormat, "expected mono, got " + std::to_string(channels) + " channels");
      if (rate != kRate)
        throw Error(ErrorCode::kFormat, "expected 16000 Hz, got " + std::to_string(rate) + " Hz");
      WavFile w;
      w.sample_rate = kRate;
      const std::uint8_t* d = b.data() + body;
      if (format_tag == 1 && bits == 16) {
        w.format = SampleFormat::kPcm16;
        w.samples.resize(size / 2);
        for (std::size_t i = 0; i < w.samples.size(); ++i)
          w.samples[i] = float(std::int16_t(u16(d + 2 * i))) / 32768.0f;
      } else if (format_tag == 3 && bits == 32) {
        w.format = SampleFormat::kFloat32;
        w.samples.resize(size / 4);
        for (std::size_t i = 0; i < w.samples.size(); ++i)
          w.samples[i] = std::bit_cast<float>(u32(d + 4 * i));
      } else {
        throw Error(ErrorCode::kFormat, "expected 16-bit PCM or 32-bit float samples");
      }
      return w;
    }
    pos = body + size + (size & 1);
  }
  throw Error(ErrorCode::kFormat, "wav has no data chunk");
}

std::vector<std::uint8_t> serialize_wav(const WavFile& w) {
  const bool pcm = w.format == SampleFormat::kPcm16;
  const std::uint16_t bytes_per = pcm ? 2 : 4;
  const std::uint32_t data = std::uint32_t(w.samples.size() * bytes_per);
  std::vector<std::uint8_t> b;
  b.reserve(44 + data);
  b.insert(b.end(), {'R', 'I', 'F', 'F'});
  put32(b, 36 + data);
  b.insert(b.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put32(b, 16);
  put16(b, pcm ? 1 : 3);
  put16(b, 1);
  put32(b, std::uint32_t(w.sample_rate));
  put32(b, std::uint32_t(w.sample_rate) * bytes_per);
  put16(b, bytes_per);
  put16(b, bytes_per * 8);
  b.insert(b.end(), {'d', 'a', 't', 'a'});
  put32(b, data);
  for (float v : w.samples) {
    if (pcm) {
      const float c = std::clamp(v, -1.0f, 1.0f);
      put16(b, std::uint16_t(std::int16_t(std::lround(std::min(c * 32768.0f, 32767.0f)))));
    } else {
      put32(b, std::bit_cast<std::uint32_t>(v));
    }
  }
  return b;
}

WavFile read_wav(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), {});
  return parse_wav(bytes);
}

void write_wav(const std::filesystem::path& path, const WavFile& wav) {
  const auto bytes = serialize_wav(wav);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!f) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

}  // namespace streamenh
