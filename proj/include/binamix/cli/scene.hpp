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

// Mix scene files: JSON documents describing the tracks and configuration
// of one mix.
//
//   {
//     "schema": 1,
//     "subject": "D1", "ir_type": "HRIR", "sample_rate": 48000,
//     "speaker_layout": null, "mode": "auto", "reverb_type": 1,
//     "keep_tail": true, "normalize": "off", "seed": 0,
//     "mixer": "binaural",
//     "tracks": [
//       {"name": "vocals", "audio": "vocals.wav", "level": 0.9, "reverb": 0.2,
//        "azimuth": 0, "elevation": 0}
//     ]
//   }
//
// Track audio paths are relative to the scene file. With "mixer": "stereo"
// each track carries a "pan" in [-1, 1] instead of a direction.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "binamix/mixer.hpp"

namespace binamix::cli {

inline constexpr int kSceneSchema = 1;

enum class MixerKind { kBinaural, kStereo };

struct Scene {
  MixConfig config;
  MixerKind mixer = MixerKind::kBinaural;
  /// Seed of the synthetic stand-in reverbs.
  std::uint64_t seed = 0;
  std::vector<TrackObject> tracks;
  /// Parallel to tracks; used by the stereo mixer only.
  std::vector<double> pans;
};

/// Parses a scene document without touching the file system; track audio
/// is left empty. Throws Error(kFormat) naming the offending field.
Scene parse_scene(std::string_view json_text, std::vector<std::filesystem::path>* audio_paths);

/// Reads the scene and every track's audio. Stereo track files are averaged
/// to mono with a warning; other channel counts are rejected.
Scene load_scene(const std::filesystem::path& scene_file);

/// Mono view of a WAV file for use as a track source.
AudioBuffer load_mono_source(const std::filesystem::path& path);

}  // namespace binamix::cli
