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
#include <vector>

namespace binamix {

/// Planar (non-interleaved) audio at linear amplitude. Mono and stereo are the
/// common cases; surround programs use one channel per speaker.
struct AudioBuffer {
  int sample_rate_hz = 0;
  std::vector<std::vector<double>> channels;

  std::size_t num_channels() const { return channels.size(); }
  std::size_t num_frames() const {
    return channels.empty() ? 0 : channels.front().size();
  }

  static AudioBuffer silent(int sample_rate_hz, std::size_t num_channels,
                            std::size_t num_frames) {
    return {sample_rate_hz,
            std::vector<std::vector<double>>(num_channels,
                                             std::vector<double>(num_frames, 0.0))};
  }
  static AudioBuffer mono(int sample_rate_hz, std::vector<double> samples) {
    AudioBuffer b{sample_rate_hz, {}};
    b.channels.push_back(std::move(samples));
    return b;
  }
  static AudioBuffer stereo(int sample_rate_hz, std::vector<double> left,
                            std::vector<double> right) {
    AudioBuffer b{sample_rate_hz, {}};
    b.channels.push_back(std::move(left));
    b.channels.push_back(std::move(right));
    return b;
  }
};

/// Throws kInvalidArgument on unequal channel lengths, non-finite samples
/// or a non-positive sample rate.
void validate(const AudioBuffer& buffer);

double peak(const AudioBuffer& buffer);

}  // namespace binamix
