// Copyright 2026 The Binamix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "binamix/audio_buffer.hpp"

namespace binamix::wav {

/// Little-endian RIFF/WAVE encodings accepted on read and produced on write.
enum class SampleFormat { kPcm16, kPcm24, kFloat32 };

SampleFormat parse_sample_format(std::string_view name);

struct WavFile {
  AudioBuffer audio;
  SampleFormat format = SampleFormat::kPcm24;
};

/// Throws kNotFound if the file is missing, kFormat if it is not a
/// supported WAV encoding.
WavFile read(const std::filesystem::path& path);

std::vector<std::uint8_t> encode(const AudioBuffer& audio, SampleFormat format);

/// PCM encodings clamp to full scale; callers that care about clipping
/// should measure the peak beforehand.
void write(const std::filesystem::path& path, const AudioBuffer& audio,
           SampleFormat format);

}  // namespace binamix::wav
