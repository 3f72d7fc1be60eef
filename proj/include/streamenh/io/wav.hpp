// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace streamenh {

enum class SampleFormat { kPcm16, kFloat32 };

/// Mono 16 kHz audio, samples in [-1, 1].
struct WavFile {
  int sample_rate = 16000;
  SampleFormat format = SampleFormat::kPcm16;
  std::vector<float> samples;
};

/// RIFF/WAVE reader. Rejects anything but mono 16 kHz 16-bit PCM or 32-bit
/// float with Error(kFormat); unknown chunks are skipped.
WavFile parse_wav(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> serialize_wav(const WavFile& wav);

WavFile read_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const WavFile& wav);

}  // namespace streamenh
