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

#include "binamix/mixer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "binamix/errors.hpp"
#include "binamix/layouts.hpp"

namespace binamix {

namespace {

double clamp_unit(double v, const std::string& what, const std::string& track) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::kInvalidArgument, what + " of track '" + track + "' is not finite");
  }
  if (v < 0.0 || v > 1.0) {
    std::ostringstream os;
    os << what << ' ' << v << " of track '" << track << "' clamped to [0, 1]";
    warn(os.str());
    return std::clamp(v, 0.0, 1.0);
  }
  return v;
}

void check_tracks(std::span<const TrackObject> tracks, int rate) {
  if (tracks.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "mix needs at least one track");
  }
  for (const auto& t : tracks) {
    if (t.audio.num_channels() != 1 || t.audio.num_frames() == 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "track '" + t.name + "' must be non-empty mono audio");
    }
    if (t.audio.sample_rate_hz != rate) {
      throw Error(ErrorCode::kInvalidArgument,
                  "track '" + t.name + "' is " + std::to_string(t.audio.sample_rate_hz) +
                      " Hz, mix runs at " + std::to_string(rate) + " Hz");
    }
  }
}

void check_set(const MixConfig& cfg, const IRSet& set) {
  if (set.subject_id() != cfg.subject_id || set.ir_type() != cfg.ir_type ||
      set.sample_rate_hz() != cfg.sample_rate_hz) {
    throw Error(ErrorCode::kInvalidArgument,
                "IR set (" + set.subject_id() + ", " + std::string(to_string(set.ir_type())) +
                    ", " + std::to_string(set.sample_rate_hz()) +
                    " Hz) does not match the mix configuration (" + cfg.subject_id + ", " +
                    std::string(to_string(cfg.ir_type)) + ", " +
                    std::to_string(cfg.sample_rate_hz) + " Hz)");
  }
}

// Level gain, then reverb when any is requested.
std::vector<double> pre_process(const TrackObject& t, const MixConfig& cfg,
                                const ReverbBank& reverbs) {
  const double level = clamp_unit(t.level, "level", t.name);
  const double amount = clamp_unit(t.reverb, "reverb", t.name);
  std::vector<double> x = t.audio.channels[0];
  for (double& v : x) v *= level;
  if (amount == 0.0) return x;
  if (reverbs.sample_rate_hz() != cfg.sample_rate_hz) {
    throw Error(ErrorCode::kInvalidArgument, "reverb bank sample rate does not match the mix");
  }
  return apply_reverb(x, reverbs.get(cfg.reverb_type), amount);
}

void accumulate(AudioBuffer& sum, const AudioBuffer& part) {
  for (std::size_t c = 0; c < 2; ++c) {
    auto& dst = sum.channels[c];
    const auto& src = part.channels[c];
    if (dst.size() < src.size()) dst.resize(src.size(), 0.0);
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] += src[k];
  }
}

void finish(MixResult& r, const MixConfig& cfg, std::size_t trimmed_length) {
  if (!cfg.keep_tail) {
    for (auto& ch : r.audio.channels) ch.resize(trimmed_length, 0.0);
  }
  double p = peak(r.audio);
  if (cfg.normalize == Normalize::kPeak && p > 0.0) {
    r.normalization_gain = kPeakNormalizeTarget / p;
    for (auto& ch : r.audio.channels)
      for (double& v : ch) v *= r.normalization_gain;
    p = peak(r.audio);
  }
  r.peak = p;
  r.clipped_samples = 0;
  for (const auto& ch : r.audio.channels)
    for (double v : ch)
      if (std::abs(v) > 1.0) ++r.clipped_samples;
  if (r.clipped_samples > 0) {
    warn(std::to_string(r.clipped_samples) + " samples exceed full scale (peak " +
         std::to_string(r.peak) + ")");
  }
}

}  // namespace

Normalize parse_normalize(std::string_view name) {
  if (name == "off") return Normalize::kOff;
  if (name == "peak") return Normalize::kPeak;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown normalize option '" + std::string(name) + "' (expected off or peak)");
}

std::string_view to_string(Normalize n) { return n == Normalize::kOff ? "off" : "peak"; }

MixResult mix_tracks_binaural(std::span<const TrackObject> tracks, const MixConfig& cfg,
                              const IRSet& set, const ReverbBank& reverbs) {
  check_tracks(tracks, cfg.sample_rate_hz);
  check_set(cfg, set);
  reverb_name(cfg.reverb_type);

  std::optional<SpeakerSet> speakers;
  if (cfg.speaker_layout) {
    speakers = make_speaker_set(set, get_layout(*cfg.speaker_layout), cfg.interpolation_mode,
                                cfg.plan_options);
  }

  MixResult r;
  r.audio = AudioBuffer::silent(cfg.sample_rate_hz, 2, 0);
  std::size_t longest_input = 0;
  for (const auto& t : tracks) {
    longest_input = std::max(longest_input, t.audio.num_frames());
    const AudioBuffer processed =
        AudioBuffer::mono(cfg.sample_rate_hz, pre_process(t, cfg, reverbs));
    const Direction dir = normalize_direction(t.azimuth_deg, t.elevation_deg);
    SourceRender rendered =
        speakers ? render_source_binaural(processed, dir, *speakers, cfg.interpolation_mode,
                                          cfg.plan_options)
                 : render_source_binaural(processed, dir, set, cfg.interpolation_mode,
                                          cfg.plan_options);
    accumulate(r.audio, rendered.audio);
    r.tracks.push_back({t.name, std::move(rendered.plan)});
  }
  finish(r, cfg, longest_input);
  return r;
}

MixResult mix_tracks_stereo(std::span<const TrackObject> tracks, std::span<const double> pans,
                            const MixConfig& cfg, const ReverbBank& reverbs) {
  check_tracks(tracks, cfg.sample_rate_hz);
  if (pans.size() != tracks.size()) {
    throw Error(ErrorCode::kInvalidArgument, "stereo mix needs one pan value per track");
  }
  reverb_name(cfg.reverb_type);

  MixResult r;
  r.audio = AudioBuffer::silent(cfg.sample_rate_hz, 2, 0);
  std::size_t longest_input = 0;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    longest_input = std::max(longest_input, tracks[i].audio.num_frames());
    const std::vector<double> x = pre_process(tracks[i], cfg, reverbs);
    const PanGains g = pan_constant_power(pans[i]);
    AudioBuffer part = AudioBuffer::silent(cfg.sample_rate_hz, 2, x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      part.channels[0][k] = g.left * x[k];
      part.channels[1][k] = g.right * x[k];
    }
    accumulate(r.audio, part);
    r.tracks.push_back({tracks[i].name, std::nullopt});
  }
  finish(r, cfg, longest_input);
  return r;
}

MixResult render_surround_to_binaural(const AudioBuffer& program, std::string_view input_layout,
                                      std::string_view output_layout, const MixConfig& cfg,
                                      const IRSet& set) {
  const SpeakerLayout& in = get_layout(input_layout);
  const SpeakerLayout& out = get_layout(output_layout);
  if (program.num_channels() != in.num_channels()) {
    throw Error(ErrorCode::kFormat, "layout " + in.name + " expects " +
                                        std::to_string(in.num_channels()) +
                                        " channels, program has " +
                                        std::to_string(program.num_channels()));
  }
  if (program.sample_rate_hz != cfg.sample_rate_hz) {
    throw Error(ErrorCode::kInvalidArgument,
                "program is " + std::to_string(program.sample_rate_hz) + " Hz, mix runs at " +
                    std::to_string(cfg.sample_rate_hz) + " Hz");
  }
  if (program.num_frames() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "surround program is empty");
  }
  validate(program);
  check_set(cfg, set);

  const std::size_t frames = program.num_frames();
  MixResult r;
  r.audio = AudioBuffer::silent(cfg.sample_rate_hz, 2, frames + set.ir_length() - 1);

  const bool same_layout = in.name == out.name;
  std::optional<SpeakerSet> speakers;
  if (!same_layout) {
    speakers = make_speaker_set(set, out, cfg.interpolation_mode, cfg.plan_options);
  }

  for (std::size_t c = 0; c < in.num_channels(); ++c) {
    const Channel& ch = in.channels[c];
    const std::vector<double>& signal = program.channels[c];
    const bool silent = std::all_of(signal.begin(), signal.end(), [](double v) { return v == 0.0; });

    if (ch.is_lfe()) {
      for (std::size_t k = 0; k < frames; ++k) {
        r.audio.channels[0][k] += kLfeGain * signal[k];
        r.audio.channels[1][k] += kLfeGain * signal[k];
      }
      r.tracks.push_back({ch.label, std::nullopt});
      continue;
    }

    InterpolationPlan p;
    IRPoint ir;
    if (same_layout) {
      const auto [index, distance] = nearest_point(set, *ch.position);
      if (distance > cfg.plan_options.snap_threshold_deg) {
        throw Error(ErrorCode::kNotFound,
                    "speaker " + ch.label + " " + to_string(*ch.position) +
                        " has no IR within " + std::to_string(cfg.plan_options.snap_threshold_deg) +
                        " degrees in subject " + set.subject_id() + " (nearest is " +
                        std::to_string(distance) + " degrees away)");
      }
      p = plan(set, *ch.position, InterpolationMode::kNearest,
               PlanOptions{cfg.plan_options.snap_threshold_deg, cfg.plan_options.weight_law});
      ir = set.point(index);
    } else {
      p = plan(speakers->irs, *ch.position, cfg.interpolation_mode, cfg.plan_options);
      ir = blend(speakers->irs, p);
    }
    if (!silent) {
      const std::vector<double> left = convolve(signal, ir.left);
      const std::vector<double> right = convolve(signal, ir.right);
      for (std::size_t k = 0; k < left.size(); ++k) {
        r.audio.channels[0][k] += left[k];
        r.audio.channels[1][k] += right[k];
      }
    }
    r.tracks.push_back({ch.label, std::move(p)});
  }
  finish(r, cfg, frames);
  return r;
}

}  // namespace binamix
