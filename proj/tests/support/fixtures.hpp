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

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "binamix/ir_store.hpp"
#include "binamix/wav.hpp"

namespace binamix::testing {

/// Writes one stereo float WAV per point of `set`, named the way SADIE-style
/// releases name them ("<prefix>azi_<az>_ele_<el>.wav"), with the given
/// decimal separator. Returns the file paths in point order.
inline std::vector<std::filesystem::path> write_sadie_fixture(const std::filesystem::path& dir,
                                                              const IRSet& set,
                                                              char decimal = '.',
                                                              const std::string& prefix = "") {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  for (const IRPoint& p : set.points()) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "azi_%.6f_ele_%.6f", p.direction.azimuth_deg,
                  p.direction.elevation_deg);
    std::string name = prefix + buf;
    for (char& c : name)
      if (c == '.') c = decimal;
    const auto path = dir / (name + ".wav");
    wav::write(path, AudioBuffer::stereo(set.sample_rate_hz(), p.left, p.right),
               wav::SampleFormat::kFloat32);
    out.push_back(path);
  }
  return out;
}

}  // namespace binamix::testing
