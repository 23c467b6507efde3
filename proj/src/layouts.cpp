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

#include "binamix/layouts.hpp"

#include <algorithm>
#include <map>

#include "binamix/errors.hpp"

namespace binamix {

namespace {

// Nominal speaker angles (azimuth CCW from front, elevation up). Edit here to
// match an in-house convention; every layout is assembled from this table.
struct Angle {
  std::string_view label;
  double azimuth_deg;
  double elevation_deg;
};

constexpr Angle kLeft{"L", 30.0, 0.0};
constexpr Angle kRight{"R", 330.0, 0.0};
constexpr Angle kCenter{"C", 0.0, 0.0};
constexpr Angle kLeftWide{"Lw", 60.0, 0.0};
constexpr Angle kRightWide{"Rw", 300.0, 0.0};
constexpr Angle kLeftSurround{"Ls", 110.0, 0.0};
constexpr Angle kRightSurround{"Rs", 250.0, 0.0};
constexpr Angle kLeftSideSurround{"Lss", 90.0, 0.0};
constexpr Angle kRightSideSurround{"Rss", 270.0, 0.0};
constexpr Angle kLeftRearSurround{"Lrs", 135.0, 0.0};
constexpr Angle kRightRearSurround{"Rrs", 225.0, 0.0};
constexpr Angle kLeftTopFront{"Ltf", 45.0, 45.0};
constexpr Angle kRightTopFront{"Rtf", 315.0, 45.0};
constexpr Angle kLeftTopMiddle{"Ltm", 90.0, 45.0};
constexpr Angle kRightTopMiddle{"Rtm", 270.0, 45.0};
constexpr Angle kLeftTopRear{"Ltr", 135.0, 45.0};
constexpr Angle kRightTopRear{"Rtr", 225.0, 45.0};

SpeakerLayout assemble(std::string name, std::initializer_list<Angle> surrounds,
                       std::initializer_list<Angle> heights) {
  SpeakerLayout layout{std::move(name), {}};
  const auto add = [&](const Angle& a) {
    layout.channels.push_back({std::string(a.label),
                               normalize_direction(a.azimuth_deg, a.elevation_deg)});
  };
  add(kLeft);
  add(kRight);
  add(kCenter);
  layout.channels.push_back({"LFE", std::nullopt});
  for (const auto& a : surrounds) add(a);
  for (const auto& a : heights) add(a);
  return layout;
}

const std::map<std::string, SpeakerLayout, std::less<>>& registry() {
  static const auto* layouts = [] {
    auto* m = new std::map<std::string, SpeakerLayout, std::less<>>();
    const std::initializer_list<Angle> five = {kLeftSurround, kRightSurround};
    const std::initializer_list<Angle> seven = {kLeftSideSurround, kRightSideSurround,
                                                kLeftRearSurround, kRightRearSurround};
    const std::initializer_list<Angle> nine = {kLeftWide,         kRightWide,
                                               kLeftSideSurround, kRightSideSurround,
                                               kLeftRearSurround, kRightRearSurround};
    const std::initializer_list<Angle> two = {kLeftTopMiddle, kRightTopMiddle};
    const std::initializer_list<Angle> four = {kLeftTopFront, kRightTopFront, kLeftTopRear,
                                               kRightTopRear};
    const auto put = [&](SpeakerLayout l) { m->emplace(l.name, std::move(l)); };
    put(assemble("5.1", five, {}));
    put(assemble("5.1.2", five, two));
    put(assemble("5.1.4", five, four));
    put(assemble("7.1", seven, {}));
    put(assemble("7.1.2", seven, two));
    put(assemble("7.1.4", seven, four));
    put(assemble("9.1", nine, {}));
    put(assemble("9.1.2", nine, two));
    put(assemble("9.1.4", nine, four));
    return m;
  }();
  return *layouts;
}

}  // namespace

std::size_t SpeakerLayout::lfe_index() const {
  for (std::size_t i = 0; i < channels.size(); ++i)
    if (channels[i].is_lfe()) return i;
  throw Error(ErrorCode::kInvalidArgument, "layout " + name + " has no LFE channel");
}

std::string supported_layouts_list() {
  std::string out;
  for (auto name : kSupportedLayouts) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

const SpeakerLayout& get_layout(std::string_view name) {
  const auto& reg = registry();
  const auto it = reg.find(name);
  if (it == reg.end()) {
    throw Error(ErrorCode::kUnsupportedLayout, "unsupported speaker layout '" +
                                                   std::string(name) +
                                                   "'; supported layouts: " +
                                                   supported_layouts_list());
  }
  return it->second;
}

std::vector<Direction> speaker_directions(const SpeakerLayout& layout) {
  std::vector<Direction> out;
  for (const auto& ch : layout.channels)
    if (ch.position) out.push_back(*ch.position);
  return out;
}

std::vector<std::size_t> speaker_channel_indices(const SpeakerLayout& layout) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < layout.channels.size(); ++i)
    if (!layout.channels[i].is_lfe()) out.push_back(i);
  return out;
}

}  // namespace binamix
