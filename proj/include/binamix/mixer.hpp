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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "binamix/audio_buffer.hpp"
#include "binamix/dsp.hpp"
#include "binamix/interpolation.hpp"
#include "binamix/ir_store.hpp"

namespace binamix {

/// One mono source in a mix. Level and reverb are in [0, 1] (clamped with a
/// warning otherwise); azimuth and elevation accept any real value and are
/// normalized on use.
struct TrackObject {
  std::string name;
  AudioBuffer audio;
  double level = 1.0;
  double reverb = 0.0;
  double azimuth_deg = 0.0;
  double elevation_deg = 0.0;
};

enum class Normalize { kOff, kPeak };

Normalize parse_normalize(std::string_view name);
std::string_view to_string(Normalize n);

/// Peak normalization scales the mix so its largest sample sits at -1 dBFS.
inline constexpr double kPeakNormalizeTarget = 0.8912509381337456;

struct MixConfig {
  std::string subject_id = "D1";
  int sample_rate_hz = 48000;
  IRType ir_type = IRType::kHRIR;
  /// Simulate panning across this layout's speakers; none renders free-field.
  std::optional<std::string> speaker_layout;
  InterpolationMode interpolation_mode = InterpolationMode::kAuto;
  /// 1 = Theatre, 2 = Office, 3 = Small Room, 4 = Meeting Room.
  int reverb_type = 1;
  /// Keep the full convolution tail; otherwise trim to the longest input.
  bool keep_tail = true;
  Normalize normalize = Normalize::kOff;
  PlanOptions plan_options;
};

/// How one track (or surround channel) was rendered.
struct TrackReport {
  std::string name;
  /// Empty for the LFE channel, which is not spatialized.
  std::optional<InterpolationPlan> plan;
};

struct MixResult {
  AudioBuffer audio;  // stereo
  std::vector<TrackReport> tracks;
  /// Peak after normalization.
  double peak = 0.0;
  /// Samples with |x| > 1 in the returned audio.
  std::size_t clipped_samples = 0;
  double normalization_gain = 1.0;
};

/// Per track: level gain, then mono reverb, then binaural rendering at the
/// track's direction (layout-constrained when cfg.speaker_layout is set).
/// Track outputs are summed in track order, aligned at sample 0.
MixResult mix_tracks_binaural(std::span<const TrackObject> tracks, const MixConfig& cfg,
                              const IRSet& set, const ReverbBank& reverbs);

/// Same signal chain with constant-power panning in place of binaural
/// rendering; pans[i] belongs to tracks[i]. Direction fields are ignored.
MixResult mix_tracks_stereo(std::span<const TrackObject> tracks, std::span<const double> pans,
                            const MixConfig& cfg, const ReverbBank& reverbs);

/// Gain applied to the LFE channel in both ears.
inline constexpr double kLfeGain = 0.7071067811865476;

/// Renders a channel-encoded program (channel order per the layout) to
/// binaural. With equal layouts every speaker uses the stored IR at (or
/// within the snap threshold of) its direction; otherwise each input channel
/// is panned across the output layout's speakers. The LFE is routed to both
/// ears without spatialization.
MixResult render_surround_to_binaural(const AudioBuffer& program, std::string_view input_layout,
                                      std::string_view output_layout, const MixConfig& cfg,
                                      const IRSet& set);

}  // namespace binamix
