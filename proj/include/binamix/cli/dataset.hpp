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

// Dataset grids: JSON documents listing the values of every rendering axis.
// One job is rendered per combination.
//
//   {
//     "schema": 1,
//     "azimuths": [0, 90], "elevations": [0],
//     "subjects": ["D1", "D2"], "ir_types": ["HRIR"], "sample_rates": [48000],
//     "layouts": ["none", "5.1"], "modes": ["auto"],
//     "levels": [1.0], "reverb_amounts": [0.0], "reverb_types": [1],
//     "sources": ["speech.wav"],
//     "seed": 0, "output_format": "pcm24", "normalize": "off", "keep_tail": true
//   }
//
// Source paths are relative to the grid file.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "binamix/interpolation.hpp"
#include "binamix/ir_store.hpp"
#include "binamix/mixer.hpp"
#include "binamix/wav.hpp"

namespace binamix::cli {

inline constexpr int kGridSchema = 1;
inline constexpr std::size_t kDefaultJobCap = 10000;

struct DatasetGrid {
  std::vector<double> azimuths;
  std::vector<double> elevations;
  std::vector<std::string> subjects;
  std::vector<IRType> ir_types;
  std::vector<int> sample_rates;
  /// Empty optional means free-field rendering ("none").
  std::vector<std::optional<std::string>> layouts;
  std::vector<InterpolationMode> modes;
  std::vector<double> levels;
  std::vector<double> reverb_amounts;
  std::vector<int> reverb_types;
  /// As written in the grid file.
  std::vector<std::string> sources;
  /// Directory the source paths are relative to.
  std::filesystem::path base_dir;
  std::uint64_t seed = 0;
  wav::SampleFormat output_format = wav::SampleFormat::kPcm24;
  Normalize normalize = Normalize::kOff;
  bool keep_tail = true;

  std::size_t job_count() const;
};

/// Throws Error(kFormat) naming the offending field; every axis must be
/// non-empty.
DatasetGrid parse_grid(std::string_view json_text, const std::filesystem::path& base_dir);
DatasetGrid load_grid(const std::filesystem::path& grid_file);

struct DatasetJob {
  std::size_t index = 0;
  std::string subject;
  IRType ir_type = IRType::kHRIR;
  int sample_rate_hz = 48000;
  std::optional<std::string> layout;
  InterpolationMode mode = InterpolationMode::kAuto;
  double azimuth_deg = 0.0;
  double elevation_deg = 0.0;
  double level = 1.0;
  double reverb_amount = 0.0;
  int reverb_type = 1;
  std::string source;
};

/// All combinations in a fixed nesting order (subject, IR type, rate,
/// layout, mode, source, azimuth, elevation, level, reverb type, reverb
/// amount; the last varies fastest).
std::vector<DatasetJob> expand_grid(const DatasetGrid& grid);

/// subject_irtype_rate_layout_mode_azXXX_elYYY_<hash>.wav, where the hash
/// covers the parameters not spelled out in the name.
std::string job_filename(const DatasetJob& job, const DatasetGrid& grid);

/// The mix configuration a job is rendered with.
MixConfig job_config(const DatasetJob& job, const DatasetGrid& grid);

struct DatasetOptions {
  std::filesystem::path data_root;
  std::filesystem::path out_dir;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned jobs = 0;
  bool force = false;
  std::size_t job_cap = kDefaultJobCap;
};

struct DatasetSummary {
  std::size_t total = 0;
  std::size_t failed = 0;
  std::filesystem::path manifest;
};

inline constexpr std::string_view kDatasetManifestName = "manifest.tsv";

/// Renders every job and writes one WAV per successful job plus a manifest
/// row per job, in grid order. Failed jobs are recorded, not thrown. Throws
/// Error(kInvalidArgument) up front when the job count exceeds the cap and
/// force is not set.
DatasetSummary run_dataset(const DatasetGrid& grid, const DatasetOptions& options,
                           std::ostream& log);

}  // namespace binamix::cli
