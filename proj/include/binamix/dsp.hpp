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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "binamix/audio_buffer.hpp"
#include "binamix/interpolation.hpp"
#include "binamix/ir_store.hpp"
#include "binamix/layouts.hpp"

namespace binamix {

/// Filters up to this many taps are applied in the time domain.
inline constexpr std::size_t kDirectConvolutionMaxTaps = 64;

/// Full linear convolution (length |signal| + |ir| - 1). The shorter operand
/// is used as the filter. Short filters are applied directly; longer ones by
/// FFT overlap-add with an FFT size of the next power of two at or above four
/// times the filter length. Throws kInvalidArgument on empty input.
std::vector<double> convolve(std::span<const double> signal, std::span<const double> ir);

/// Mono-by-mono convolution; throws kInvalidArgument when the sample rates
/// differ or either buffer is not mono.
AudioBuffer convolve(const AudioBuffer& signal, const AudioBuffer& ir);

struct PanGains {
  double left = 0.0;
  double right = 0.0;
};

/// Sine/cosine law: pan -1 is hard left, +1 hard right. Out-of-range values
/// are clamped with a warning.
PanGains pan_constant_power(double pan);

// ---------------------------------------------------------------------------
// Reverb

inline constexpr std::array<std::string_view, 4> kReverbNames = {
    "Theatre", "Office", "Small Room", "Meeting Room"};

/// Decay times (seconds) of the bundled synthetic stand-in rooms, by id.
inline constexpr std::array<double, 4> kSyntheticReverbT60 = {2.0, 0.5, 0.3, 0.7};

/// Maps ids 1-4 to names; throws kInvalidArgument otherwise.
std::string_view reverb_name(int id);

struct ReverbModel {
  int id = 1;
  std::string name;
  int sample_rate_hz = 48000;
  /// Mono impulse response with unit energy.
  std::vector<double> ir;
};

/// Validates the id and normalizes the IR to unit energy.
ReverbModel make_reverb_model(int id, std::vector<double> ir, int sample_rate_hz);

/// Exponentially decaying seeded noise with the id's stand-in decay time.
ReverbModel synthetic_reverb(int id, int sample_rate_hz, std::uint64_t seed);

/// The four reverb models at one working sample rate.
class ReverbBank {
 public:
  static ReverbBank synthetic(int sample_rate_hz, std::uint64_t seed = 0);

  /// Reads <root>/reverb/manifest.tsv (lines "id<TAB>path", several rows per
  /// id allowed for different rates; the row whose WAV matches the rate is
  /// used). Ids without a matching row use the synthetic stand-in. A missing
  /// manifest yields the fully synthetic bank.
  static ReverbBank load(const std::filesystem::path& root, int sample_rate_hz,
                         std::uint64_t seed = 0);

  const ReverbModel& get(int id) const;
  int sample_rate_hz() const { return models_[0].sample_rate_hz; }

 private:
  std::array<ReverbModel, 4> models_;
};

/// (1 - amount) * dry + amount * (dry * reverb), both at length
/// |dry| + |ir| - 1. Throws kInvalidArgument if amount is outside [0, 1].
std::vector<double> apply_reverb(std::span<const double> dry, const ReverbModel& model,
                                 double amount);

// ---------------------------------------------------------------------------
// Binaural rendering

/// A layout's speakers as an IR set: one point per non-LFE channel at the
/// nominal speaker direction. Each speaker's IR is the stored point within
/// the snap threshold when there is one, otherwise it is interpolated from
/// the full set with the requested mode.
struct SpeakerSet {
  SpeakerLayout layout;
  IRSet irs;
  /// How each speaker IR was obtained from the full set, in speaker order.
  std::vector<InterpolationPlan> resolution;
};

SpeakerSet make_speaker_set(const IRSet& set, const SpeakerLayout& layout,
                            InterpolationMode mode, const PlanOptions& options = {});

struct SourceRender {
  AudioBuffer audio;  // stereo
  /// Over the full IR set, or over the speaker set when layout-constrained.
  InterpolationPlan plan;
};

/// Convolves a mono source with an IR pair planned at `direction`.
SourceRender render_source_binaural(const AudioBuffer& source, const Direction& direction,
                                    const IRSet& set, InterpolationMode mode,
                                    const PlanOptions& options = {});

/// Layout-constrained rendering: the IR is blended from the layout's speaker
/// IRs only, the way amplitude panning across those speakers would be heard.
SourceRender render_source_binaural(const AudioBuffer& source, const Direction& direction,
                                    const SpeakerSet& speakers, InterpolationMode mode,
                                    const PlanOptions& options = {});

SourceRender render_source_binaural(const AudioBuffer& source, const Direction& direction,
                                    const IRSet& set, InterpolationMode mode,
                                    const SpeakerLayout& layout,
                                    const PlanOptions& options = {});

}  // namespace binamix
