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

#include "binamix/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "binamix/errors.hpp"

namespace binamix {

namespace {

constexpr double kCoincidentDeg = 1e-9;
constexpr double kPlaneToleranceDeg = 0.01;

bool is_pole(const Direction& d) { return std::abs(d.elevation_deg) == 90.0; }

// Signed-free azimuth gap in [0, 180].
double azimuth_gap(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 360.0);
  return std::min(d, 360.0 - d);
}

struct Candidate {
  InterpolationMode mode;
  std::vector<std::size_t> indices;
  std::optional<EnclosingTriangle> triangle;
};

// Completes a plan from its candidate points: coincident points take all
// the weight, otherwise weights are normalized inverse chord distances.
InterpolationPlan finalize(const DirectionSet& points, const Direction& q,
                           Candidate c, const PlanOptions& options) {
  std::vector<std::size_t> idx;
  for (std::size_t i : c.indices)
    if (std::find(idx.begin(), idx.end(), i) == idx.end()) idx.push_back(i);

  InterpolationPlan p;
  p.mode_used = c.mode;
  p.requested = q;
  p.triangle = c.triangle;

  for (std::size_t i : idx) {
    if (angular_distance(q, points[i]) < kCoincidentDeg) {
      idx = {i};
      break;
    }
  }

  if (idx.size() == 1) {
    p.entries = {{idx.front(), 1.0}};
    p.achieved_direction = points[idx.front()];
    p.achieved_error_deg = angular_distance(q, p.achieved_direction);
    return p;
  }

  std::vector<double> raw(idx.size());
  if (options.weight_law == WeightLaw::kBarycentric && c.triangle && idx.size() == 3) {
    for (std::size_t k = 0; k < 3; ++k) {
      raw[k] = std::max(0.0, c.triangle->barycentric[k]);
    }
  } else {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      raw[k] = 1.0 / chord_distance(q, points[idx[k]]);
    }
  }
  double total = 0.0;
  for (double r : raw) total += r;

  double x = 0, y = 0, z = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double w = raw[k] / total;
    if (w <= 0.0) continue;
    p.entries.push_back({idx[k], w});
    const UnitVector v = to_cartesian(points[idx[k]]);
    x += w * v.x;
    y += w * v.y;
    z += w * v.z;
  }
  if (p.entries.size() == 1) {
    p.entries.front().weight = 1.0;
    p.achieved_direction = points[p.entries.front().point_index];
  } else if (std::hypot(x, y, z) < 1e-12) {
    // Antipodal points average to nothing; report the heaviest point.
    const auto heaviest = std::max_element(
        p.entries.begin(), p.entries.end(),
        [](const PlanEntry& a, const PlanEntry& b) { return a.weight < b.weight; });
    p.achieved_direction = points[heaviest->point_index];
  } else {
    p.achieved_direction = to_direction(x, y, z);
  }
  p.achieved_error_deg = angular_distance(q, p.achieved_direction);
  return p;
}

std::optional<Candidate> nearest_candidate(const DirectionSet& points, const Direction& q) {
  return Candidate{InterpolationMode::kNearest, {points.nearest(q).first}, std::nullopt};
}

// Azimuth-bracketing neighbours on the stored elevation plane closest to q.
std::optional<Candidate> ring_candidate(const DirectionSet& points, const Direction& q,
                                        InterpolationMode mode) {
  double best_gap = 1e300;
  double plane = 0.0;
  for (const auto& d : points.directions()) {
    const double gap = std::abs(d.elevation_deg - q.elevation_deg);
    if (gap < best_gap) {
      best_gap = gap;
      plane = d.elevation_deg;
    }
  }
  if (std::abs(plane) == 90.0) return std::nullopt;

  std::optional<std::size_t> upper, lower;
  double upper_delta = 1e300, lower_delta = -1.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Direction& d = points[i];
    if (std::abs(d.elevation_deg - plane) > kPlaneToleranceDeg) continue;
    double delta = std::fmod(d.azimuth_deg - q.azimuth_deg + 360.0, 360.0);
    if (delta >= 360.0) delta -= 360.0;
    if (delta < upper_delta) {
      upper_delta = delta;
      upper = i;
    }
    if (delta > lower_delta) {
      lower_delta = delta;
      lower = i;
    }
  }
  if (!upper || !lower || *upper == *lower) return std::nullopt;
  return Candidate{mode, {*lower, *upper}, std::nullopt};
}

// Elevation-bracketing neighbours on the stored azimuth column closest to
// q. The poles belong to every column.
std::optional<Candidate> column_candidate(const DirectionSet& points, const Direction& q) {
  double best_gap = 1e300;
  double column = 0.0;
  bool found = false;
  for (const auto& d : points.directions()) {
    if (is_pole(d)) continue;
    const double gap = azimuth_gap(d.azimuth_deg, q.azimuth_deg);
    if (gap < best_gap) {
      best_gap = gap;
      column = d.azimuth_deg;
      found = true;
    }
  }
  if (!found) return std::nullopt;

  std::optional<std::size_t> below, above;
  double below_el = -1e300, above_el = 1e300;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Direction& d = points[i];
    if (!is_pole(d) && azimuth_gap(d.azimuth_deg, column) > kPlaneToleranceDeg) continue;
    if (d.elevation_deg <= q.elevation_deg && d.elevation_deg > below_el) {
      below_el = d.elevation_deg;
      below = i;
    }
    if (d.elevation_deg >= q.elevation_deg && d.elevation_deg < above_el) {
      above_el = d.elevation_deg;
      above = i;
    }
  }
  if (!below || !above) return std::nullopt;
  return Candidate{InterpolationMode::kTwoPoint, {*below, *above}, std::nullopt};
}

std::optional<InterpolationPlan> two_point_plan(const DirectionSet& points, const Direction& q,
                                                const PlanOptions& options) {
  std::optional<InterpolationPlan> best;
  for (auto c : {ring_candidate(points, q, InterpolationMode::kTwoPoint),
                 column_candidate(points, q)}) {
    if (!c) continue;
    InterpolationPlan p = finalize(points, q, std::move(*c), options);
    if (!best || p.achieved_error_deg < best->achieved_error_deg) best = std::move(p);
  }
  return best;
}

std::optional<InterpolationPlan> three_point_plan(const DirectionSet& points,
                                                  const Direction& q,
                                                  const PlanOptions& options,
                                                  std::string* failure) {
  try {
    const EnclosingTriangle t = points.locate(q);
    Candidate c{InterpolationMode::kThreePoint,
                {t.vertex_indices[0], t.vertex_indices[1], t.vertex_indices[2]},
                t};
    return finalize(points, q, std::move(c), options);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInsufficientPoints &&
        e.code() != ErrorCode::kNoEnclosingTriangle)
      throw;
    if (failure) *failure = e.what();
    return std::nullopt;
  }
}

InterpolationPlan concrete_plan(const DirectionSet& points, const Direction& q,
                                InterpolationMode mode, const PlanOptions& options) {
  switch (mode) {
    case InterpolationMode::kNearest:
      return finalize(points, q, *nearest_candidate(points, q), options);

    case InterpolationMode::kPlanar:
    case InterpolationMode::kTwoPoint: {
      std::optional<InterpolationPlan> p =
          mode == InterpolationMode::kPlanar
              ? [&]() -> std::optional<InterpolationPlan> {
                  auto c = ring_candidate(points, q, InterpolationMode::kPlanar);
                  if (!c) return std::nullopt;
                  return finalize(points, q, std::move(*c), options);
                }()
              : two_point_plan(points, q, options);
      if (p) return *p;
      std::string why;
      auto fallback = three_point_plan(points, q, options, &why);
      if (!fallback) {
        throw Error(ErrorCode::kNoEnclosingTriangle,
                    std::string(to_string(mode)) + " found no bracketing pair and " +
                        "three_point failed: " + why);
      }
      fallback->warnings.push_back(std::string(to_string(mode)) +
                                   ": no bracketing pair for " + to_string(q) +
                                   "; fell back to three_point");
      return *fallback;
    }

    case InterpolationMode::kThreePoint: {
      std::string why;
      if (auto p = three_point_plan(points, q, options, &why)) return *p;
      if (auto p = two_point_plan(points, q, options)) {
        p->warnings.push_back("three_point: " + why + "; fell back to two_point");
        return *p;
      }
      InterpolationPlan p = finalize(points, q, *nearest_candidate(points, q), options);
      p.warnings.push_back("three_point: " + why + "; fell back to nearest");
      return p;
    }

    case InterpolationMode::kAuto:
      break;
  }
  throw Error(ErrorCode::kInvalidArgument, "auto is not a concrete mode");
}

int mode_rank(InterpolationMode m) {
  switch (m) {
    case InterpolationMode::kNearest: return 0;
    case InterpolationMode::kTwoPoint: return 1;
    case InterpolationMode::kPlanar: return 2;
    case InterpolationMode::kThreePoint: return 3;
    case InterpolationMode::kAuto: return 4;
  }
  return 4;
}

}  // namespace

InterpolationMode parse_interpolation_mode(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "nearest") return InterpolationMode::kNearest;
  if (lower == "planar") return InterpolationMode::kPlanar;
  if (lower == "two_point") return InterpolationMode::kTwoPoint;
  if (lower == "three_point") return InterpolationMode::kThreePoint;
  if (lower == "auto") return InterpolationMode::kAuto;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown interpolation mode '" + std::string(name) +
                  "' (expected nearest, planar, two_point, three_point or auto)");
}

std::string_view to_string(InterpolationMode mode) {
  switch (mode) {
    case InterpolationMode::kNearest: return "nearest";
    case InterpolationMode::kPlanar: return "planar";
    case InterpolationMode::kTwoPoint: return "two_point";
    case InterpolationMode::kThreePoint: return "three_point";
    case InterpolationMode::kAuto: return "auto";
  }
  return "unknown";
}

InterpolationPlan plan(const DirectionSet& points, const Direction& requested,
                       InterpolationMode mode, const PlanOptions& options) {
  if (!(options.snap_threshold_deg >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "snap threshold must be non-negative");
  }
  if (points.size() == 0) {
    throw Error(ErrorCode::kInsufficientPoints, "cannot plan over an empty point set");
  }
  const Direction q = normalize_direction(requested);

  const auto [nearest, distance] = points.nearest(q);
  if (distance <= options.snap_threshold_deg) {
    return finalize(points, q, {InterpolationMode::kNearest, {nearest}, std::nullopt},
                    options);
  }
  if (mode != InterpolationMode::kAuto) return concrete_plan(points, q, mode, options);

  std::optional<InterpolationPlan> best;
  for (InterpolationMode m : {InterpolationMode::kNearest, InterpolationMode::kTwoPoint,
                              InterpolationMode::kPlanar, InterpolationMode::kThreePoint}) {
    std::optional<InterpolationPlan> p;
    try {
      p = concrete_plan(points, q, m, options);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoEnclosingTriangle &&
          e.code() != ErrorCode::kInsufficientPoints)
        throw;
      continue;
    }
    const auto better = [](const InterpolationPlan& a, const InterpolationPlan& b) {
      if (a.achieved_error_deg != b.achieved_error_deg)
        return a.achieved_error_deg < b.achieved_error_deg;
      if (a.entries.size() != b.entries.size()) return a.entries.size() < b.entries.size();
      return mode_rank(a.mode_used) < mode_rank(b.mode_used);
    };
    if (!best || better(*p, *best)) best = std::move(p);
  }
  // nearest never fails, so best is always set.
  return *best;
}

IRPoint blend(const IRSet& set, const InterpolationPlan& p) {
  if (p.entries.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot blend an empty plan");
  }
  for (const auto& e : p.entries) {
    if (e.point_index >= set.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "plan index " + std::to_string(e.point_index) + " out of range for a " +
                      std::to_string(set.size()) + "-point set");
    }
  }
  IRPoint out;
  out.direction = p.achieved_direction;
  if (p.entries.size() == 1 && p.entries.front().weight == 1.0) {
    const IRPoint& src = set.point(p.entries.front().point_index);
    out.left = src.left;
    out.right = src.right;
    return out;
  }
  const std::size_t n = set.ir_length();
  out.left.assign(n, 0.0);
  out.right.assign(n, 0.0);
  for (const auto& e : p.entries) {
    const IRPoint& src = set.point(e.point_index);
    for (std::size_t k = 0; k < n; ++k) {
      out.left[k] += e.weight * src.left[k];
      out.right[k] += e.weight * src.right[k];
    }
  }
  return out;
}

std::string describe(const InterpolationPlan& p, const DirectionSet& points) {
  std::ostringstream os;
  os << std::setprecision(6) << "mode=" << to_string(p.mode_used) << " requested="
     << to_string(p.requested) << " points=[";
  for (std::size_t i = 0; i < p.entries.size(); ++i) {
    const auto& e = p.entries[i];
    if (i) os << ", ";
    os << '#' << e.point_index;
    if (e.point_index < points.size()) os << ' ' << to_string(points[e.point_index]);
    os << " w=" << e.weight;
  }
  os << "] achieved=" << to_string(p.achieved_direction)
     << " error_deg=" << p.achieved_error_deg;
  if (p.triangle) {
    os << " frame=" << to_string(p.triangle->frame());
  }
  for (const auto& w : p.warnings) os << " [" << w << ']';
  return os.str();
}

}  // namespace binamix
