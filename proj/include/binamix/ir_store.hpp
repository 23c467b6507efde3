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
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "binamix/geometry.hpp"

namespace binamix {

enum class IRType { kHRIR, kBRIR };

/// Accepts "HRIR"/"BRIR" in any case.
IRType parse_ir_type(std::string_view name);
std::string_view to_string(IRType type);

inline constexpr std::array<int, 3> kSupportedSampleRates = {44100, 48000, 96000};
bool is_supported_sample_rate(int rate_hz);

/// One measured direction with its left/right ear impulse responses.
struct IRPoint {
  Direction direction;
  std::vector<double> left;
  std::vector<double> right;
};

/// A validated, immutable set of stereo impulse responses sampled over the
/// sphere. Copies are cheap to share across threads; the triangulation cache
/// is shared between copies.
class IRSet {
 public:
  /// Normalizes directions and validates: >= 3 points, equal non-empty
  /// lengths, finite samples, no two directions within 0.01 degrees, a
  /// supported sample rate. Throws kInvalidArgument otherwise.
  IRSet(std::string subject_id, IRType ir_type, int sample_rate_hz,
        std::vector<IRPoint> points);

  const std::string& subject_id() const { return subject_id_; }
  IRType ir_type() const { return ir_type_; }
  int sample_rate_hz() const { return sample_rate_hz_; }
  std::span<const IRPoint> points() const { return points_; }
  const IRPoint& point(std::size_t i) const { return points_.at(i); }
  std::size_t size() const { return points_.size(); }
  std::size_t ir_length() const { return points_.front().left.size(); }

  const DirectionSet& directions() const { return directions_; }

 private:
  std::string subject_id_;
  IRType ir_type_;
  int sample_rate_hz_;
  std::vector<IRPoint> points_;
  DirectionSet directions_;
};

/// (index, great-circle distance in degrees) of the stored point closest to
/// d; ties resolve to the lowest index.
std::pair<std::size_t, double> nearest_point(const IRSet& set, const Direction& d);

// ---------------------------------------------------------------------------
// On-disk layout: <root>/<subject>/<HRIR|BRIR>/<rate>/manifest.tsv

struct ManifestEntry {
  double azimuth_deg = 0.0;
  double elevation_deg = 0.0;
  std::filesystem::path path;  // relative to the manifest's directory
};

struct IRManifest {
  int schema = 1;
  std::string subject_id;
  IRType ir_type = IRType::kHRIR;
  int sample_rate_hz = 48000;
  std::vector<ManifestEntry> entries;
};

inline constexpr std::string_view kManifestFileName = "manifest.tsv";

std::filesystem::path ir_set_directory(const std::filesystem::path& root,
                                       std::string_view subject_id, IRType type,
                                       int sample_rate_hz);

IRManifest read_manifest(const std::filesystem::path& manifest_path);
void write_manifest(const std::filesystem::path& manifest_path,
                    const IRManifest& manifest);

/// Loads and validates the set stored under root. Points keep manifest order.
IRSet load_ir_set(const std::filesystem::path& root, std::string_view subject_id,
                  IRType type, int sample_rate_hz);

/// Writes every point as a 32-bit float stereo WAV plus the manifest, in the
/// layout load_ir_set() reads. Returns the manifest written.
IRManifest write_ir_set(const IRSet& set, const std::filesystem::path& root);

struct ImportOptions {
  /// Filename template; <az> and <el> mark the numeric fields. Either comma
  /// or period is accepted as the decimal separator. Matched anywhere in the
  /// file name, so release-specific prefixes need not be spelled out.
  std::string filename_pattern = "azi_<az>_ele_<el>";
  /// Copy WAVs next to the manifest; otherwise the manifest references them
  /// in place.
  bool copy_files = true;
  double azimuth_offset_deg = 0.0;
  /// Treat the <el> field as inclination from the zenith (elevation = 90 - x).
  bool elevation_is_inclination = false;
};

struct ImportReport {
  IRManifest manifest;
  std::filesystem::path manifest_path;
  std::vector<std::string> warnings;
};

/// Builds a manifest from a directory of per-direction stereo WAVs. Files
/// are visited in lexicographic order; unparsable names, unreadable files
/// and duplicate directions are skipped and reported. Throws kEmptyImport
/// when nothing usable is found.
ImportReport import_sadie(const std::filesystem::path& source_dir,
                          const std::filesystem::path& dest_root,
                          std::string_view subject_id, IRType type,
                          int sample_rate_hz, const ImportOptions& options = {});

// ---------------------------------------------------------------------------
// Synthetic sets

/// The 50-point Lebedev quadrature grid (order 11).
struct Lebedev50 {};

/// Rings of constant elevation sampled every azimuth_step_deg, starting at 0.
struct RingGrid {
  double azimuth_step_deg = 5.0;
  std::vector<double> elevations_deg = {0.0};
  bool include_poles = false;
};

struct CustomPoints {
  std::vector<Direction> points;
};

using Distribution = std::variant<Lebedev50, RingGrid, CustomPoints>;

/// "lebedev50", or "ring:<step>:<el>,<el>,..." with an optional ":poles"
/// suffix. Throws kInvalidArgument for anything else.
Distribution parse_distribution(std::string_view text);

std::vector<Direction> lebedev50_directions();
std::vector<Direction> distribution_points(const Distribution& distribution);

inline constexpr double kHeadRadiusM = 0.0875;
inline constexpr double kSpeedOfSoundMps = 343.0;

/// Deterministic HRIR-like set: per direction an impulse pair whose onsets
/// follow the Woodworth spherical-head ITD, whose levels differ by up to
/// 10 dB with the lateral component, plus an elevation-dependent echo and a
/// seeded decaying noise tail. Samples are float-representable so a
/// write/load round trip is exact.
IRSet synthesize_ir_set(const Distribution& distribution, int sample_rate_hz,
                        std::size_t ir_length_samples, std::uint64_t seed,
                        std::string subject_id = "SYN", IRType type = IRType::kHRIR);

/// Woodworth interaural time difference in seconds; positive when the left
/// ear leads.
double woodworth_itd_seconds(const Direction& d);

}  // namespace binamix
