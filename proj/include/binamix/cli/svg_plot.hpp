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

#include <string>
#include <vector>

#include "binamix/geometry.hpp"
#include "binamix/interpolation.hpp"

namespace binamix::cli {

/// SVG of the equirectangular point cloud, its triangulation, the query and
/// the points the plan uses. The frame drawn is the one the plan's triangle
/// was found in (identity when there is no triangle).
///
/// Element classes: "point" (one per input point, data-index), "tri" (one
/// polygon per mesh triangle, data-vertices), "query", and one highlight:
/// "enclosing" (polygon, data-vertices) for three-point plans, "pair"
/// (line, data-vertices) for two-point plans, or "vertex" (circle,
/// data-index) for single-point plans. Labels, when given, are drawn next
/// to the points.
std::string triangulation_svg(const DirectionSet& points, const InterpolationPlan& plan,
                              const std::string& title,
                              const std::vector<std::string>& labels = {});

}  // namespace binamix::cli
