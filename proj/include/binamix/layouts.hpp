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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "binamix/geometry.hpp"

namespace binamix {

struct Channel {
  std::string label;
  /// Empty for the LFE channel.
  std::optional<Direction> position;

  bool is_lfe() const { return !position.has_value(); }
};

/// Channel order is the WAV channel-index contract: L, R, C, LFE, then
/// surrounds front to back (left before right), then heights front to back
/// (left before right).
struct SpeakerLayout {
  std::string name;
  std::vector<Channel> channels;

  std::size_t num_channels() const { return channels.size(); }
  /// Index of the LFE channel.
  std::size_t lfe_index() const;
};

inline constexpr std::array<std::string_view, 9> kSupportedLayouts = {
    "5.1", "5.1.4", "5.1.2", "7.1", "7.1.4", "7.1.2", "9.1.4", "9.1.2", "9.1"};

/// Throws kUnsupportedLayout listing the supported names.
const SpeakerLayout& get_layout(std::string_view name);

/// Speaker directions in channel order with the LFE omitted.
std::vector<Direction> speaker_directions(const SpeakerLayout& layout);

/// Non-LFE channel indices, parallel to speaker_directions().
std::vector<std::size_t> speaker_channel_indices(const SpeakerLayout& layout);

/// "5.1, 5.1.4, ..." for diagnostics.
std::string supported_layouts_list();

}  // namespace binamix
