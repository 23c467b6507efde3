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

// Subcommand implementations behind the binamix tool. Each returns the
// process exit code and reports failures as a single "error: ..." line.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "binamix/ir_store.hpp"
#include "binamix/wav.hpp"

namespace binamix::cli {

/// Values given on the command line win over the scene file.
struct MixArgs {
  std::filesystem::path scene;
  std::filesystem::path data_root;
  std::filesystem::path out_wav;
  std::optional<std::string> mode;
  std::optional<std::string> subject;
  std::optional<std::string> ir_type;
  std::optional<int> rate;
  std::optional<std::string> layout;  // "none" clears the scene's layout
  std::optional<std::string> normalize;
  std::optional<std::uint64_t> seed;
  wav::SampleFormat format = wav::SampleFormat::kPcm24;
};

struct RenderSurroundArgs {
  std::filesystem::path in_wav;
  std::string input_layout;
  std::string output_layout;
  std::string subject = "D1";
  std::string ir_type = "HRIR";
  int rate = 48000;
  std::string mode = "auto";
  std::string normalize = "off";
  std::filesystem::path data_root;
  std::filesystem::path out_wav;
  wav::SampleFormat format = wav::SampleFormat::kPcm24;
};

struct DatasetArgs {
  std::filesystem::path grid;
  std::filesystem::path data_root;
  std::filesystem::path out_dir;
  unsigned jobs = 0;
  bool force = false;
};

/// Exactly one point source: a stored IR set (data_root + subject + IR type
/// + rate), a layout's speakers, or a synthetic distribution.
struct TriangulateArgs {
  std::optional<std::filesystem::path> data_root;
  std::string subject = "D1";
  std::string ir_type = "HRIR";
  int rate = 48000;
  std::optional<std::string> layout;
  std::optional<std::string> distribution;
  double azimuth = 0.0;
  double elevation = 0.0;
  std::string mode = "three_point";
  std::filesystem::path plot;
};

struct ImportArgs {
  std::filesystem::path source_dir;
  std::filesystem::path data_root;
  std::string subject;
  std::string ir_type = "BRIR";
  int rate = 48000;
  std::string pattern = "azi_<az>_ele_<el>";
  bool copy = true;
  double azimuth_offset = 0.0;
  bool inclination = false;
};

struct SynthArgs {
  std::filesystem::path data_root;
  std::string distribution = "lebedev50";
  std::string subject = "SYN";
  std::string ir_type = "HRIR";
  int rate = 48000;
  std::size_t length = 256;
  std::uint64_t seed = 0;
};

struct LayoutsArgs {
  std::optional<std::string> name;
};

int cmd_mix(const MixArgs& args, std::ostream& out, std::ostream& err);
int cmd_render_surround(const RenderSurroundArgs& args, std::ostream& out, std::ostream& err);
int cmd_dataset(const DatasetArgs& args, std::ostream& out, std::ostream& err);
int cmd_triangulate(const TriangulateArgs& args, std::ostream& out, std::ostream& err);
int cmd_import_sadie(const ImportArgs& args, std::ostream& out, std::ostream& err);
int cmd_synth_irs(const SynthArgs& args, std::ostream& out, std::ostream& err);
int cmd_layouts(const LayoutsArgs& args, std::ostream& out, std::ostream& err);

}  // namespace binamix::cli
