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
#include <string>
#include <string_view>
#include <vector>

#include "binamix/geometry.hpp"
#include "binamix/ir_store.hpp"

namespace binamix {

/// The CLI/config spellings are exactly "nearest", "planar", "two_point",
/// "three_point" and "auto".
enum class InterpolationMode { kNearest, kPlanar, kTwoPoint, kThreePoint, kAuto };

/// Case-insensitive; throws kInvalidArgument for unknown names.
InterpolationMode parse_interpolation_mode(std::string_view name);
std::string_view to_string(InterpolationMode mode);

enum class WeightLaw {
  /// w_i proportional to 1 / |q - p_i| on the unit sphere (chord length).
  kInverseDistance,
  /// Planar barycentric coordinates in the projection frame; applies to
  /// three-point plans only, other plans keep inverse-distance weights.
  kBarycentric,
};

struct PlanOptions {
  /// A stored point at most this far away is used on its own.
  double snap_threshold_deg = 2.0;
  WeightLaw weight_law = WeightLaw::kInverseDistance;
};

struct PlanEntry {
  std::size_t point_index = 0;
  double weight = 0.0;
};

struct InterpolationPlan {
  /// Never kAuto.
  InterpolationMode mode_used = InterpolationMode::kNearest;
  std::vector<PlanEntry> entries;
  Direction requested;
  /// Weighted cartesian centroid of the entries, projected back onto the
  /// sphere.
  Direction achieved_direction;
  double achieved_error_deg = 0.0;
  /// Set for three-point plans.
  std::optional<EnclosingTriangle> triangle;
  /// Mode fallbacks taken while resolving this plan.
  std::vector<std::string> warnings;
};

/// Resolves `requested` against the point set. A stored point within the
/// snap threshold wins outright (mode_used = nearest) whatever the mode.
/// planar and two_point fall back to three_point when no bracketing pair
/// exists; three_point falls back to two_point, then nearest, when the
/// points cannot enclose the query (for example a horizontal-only speaker
/// layout). Each fallback is recorded in the plan's warnings.
InterpolationPlan plan(const DirectionSet& points, const Direction& requested,
                       InterpolationMode mode, const PlanOptions& options = {});

inline InterpolationPlan plan(const IRSet& set, const Direction& requested,
                              InterpolationMode mode, const PlanOptions& options = {}) {
  return plan(set.directions(), requested, mode, options);
}

/// Sample-wise weighted sum of the plan's impulse responses. The result
/// carries the plan's achieved direction.
IRPoint blend(const IRSet& set, const InterpolationPlan& p);

/// One-line human-readable summary, e.g. for CLI audit logs.
std::string describe(const InterpolationPlan& p, const DirectionSet& points);

}  // namespace binamix
