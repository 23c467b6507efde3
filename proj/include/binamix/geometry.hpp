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
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace binamix {

/// A point on the listener sphere. Azimuth 0 is straight ahead and grows
/// counter-clockwise (towards the listener's left); elevation is positive
/// upwards. Values produced by normalize_direction() satisfy
/// 0 <= azimuth_deg < 360 and -90 <= elevation_deg <= 90, and both poles are
/// stored with azimuth 0.
struct Direction {
  double azimuth_deg = 0.0;
  double elevation_deg = 0.0;

  friend bool operator==(const Direction&, const Direction&) = default;
};

struct UnitVector {
  double x = 1.0;
  double y = 0.0;
  double z = 0.0;

  double dot(const UnitVector& o) const { return x * o.x + y * o.y + z * o.z; }
};

Direction normalize_direction(double azimuth_deg, double elevation_deg);
inline Direction normalize_direction(const Direction& d) {
  return normalize_direction(d.azimuth_deg, d.elevation_deg);
}

UnitVector to_cartesian(const Direction& d);

/// Inverse of to_cartesian(); the input need not be exactly unit length.
Direction to_direction(double x, double y, double z);

/// Great-circle angle in degrees, in [0, 180].
double angular_distance(const Direction& a, const Direction& b);

/// Straight-line distance between the cartesian images of a and b.
double chord_distance(const Direction& a, const Direction& b);

std::string to_string(const Direction& d);

// ---------------------------------------------------------------------------
// Equirectangular triangulation

/// The plane in which points are triangulated. kIdentity maps (azimuth,
/// elevation) straight onto (x, y). kAzimuthShift adds 180 degrees of azimuth,
/// moving the 0/360 seam behind the listener. kPoleTilt rolls the sphere 90
/// degrees about the front axis so the coordinate poles land on the
/// interaural axis, which brings the regions above and below the listener
/// into the interior of the projection. kBoth applies the tilt, then the
/// azimuth shift.
enum class ProjectionFrame : std::uint8_t {
  kIdentity = 0,
  kAzimuthShift = 1,
  kPoleTilt = 2,
  kBoth = 3,
};

inline constexpr std::array<ProjectionFrame, 4> kFrameFallbackOrder = {
    ProjectionFrame::kIdentity, ProjectionFrame::kAzimuthShift,
    ProjectionFrame::kPoleTilt, ProjectionFrame::kBoth};

inline bool rotates_azimuth(ProjectionFrame f) {
  return (static_cast<int>(f) & 1) != 0;
}
inline bool rotates_elevation(ProjectionFrame f) {
  return (static_cast<int>(f) & 2) != 0;
}

std::string to_string(ProjectionFrame f);

/// Planar coordinates in degrees. Values are snapped to a 2^-16 degree grid
/// so that every coordinate is an exact multiple of kPlaneQuantum and the
/// triangulation predicates can be evaluated exactly in integer arithmetic.
struct PlanePoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const PlanePoint&, const PlanePoint&) = default;
};

inline constexpr double kPlaneQuantum = 1.0 / 65536.0;

PlanePoint project(const Direction& d, ProjectionFrame frame);

/// Directions closer than this are treated as the same measurement point.
inline constexpr double kDuplicateToleranceDeg = 0.01;

/// (later, earlier) index pairs of points within kDuplicateToleranceDeg of an
/// earlier point; each later point is paired with the first match.
std::vector<std::pair<std::size_t, std::size_t>> find_duplicate_directions(
    std::span<const Direction> points);

struct Triangulation {
  ProjectionFrame frame = ProjectionFrame::kIdentity;
  /// The normalized input points, in input order.
  std::vector<Direction> vertices;
  /// project(vertices[i], frame).
  std::vector<PlanePoint> projected;
  /// Counter-clockwise vertex-index triples in the projection plane, each
  /// rotated so the smallest index comes first, sorted lexicographically.
  std::vector<std::array<std::size_t, 3>> triangles;
  /// (dropped, kept) pairs for inputs merged as duplicates.
  std::vector<std::pair<std::size_t, std::size_t>> merged;
};

/// Incremental Bowyer-Watson triangulation of the points in the given
/// projection frame. Duplicates within kDuplicateToleranceDeg are merged onto
/// their first occurrence with a warning. Throws kInsufficientPoints when
/// fewer than three non-collinear points remain.
Triangulation build_triangulation(std::span<const Direction> points,
                                  ProjectionFrame frame = ProjectionFrame::kIdentity);

struct EnclosingTriangle {
  std::array<std::size_t, 3> vertex_indices{};
  bool rotated_azimuth = false;
  bool rotated_elevation = false;
  /// Barycentric coordinates of the projected query in the frame used.
  std::array<double, 3> barycentric{};

  ProjectionFrame frame() const {
    return static_cast<ProjectionFrame>((rotated_azimuth ? 1 : 0) |
                                        (rotated_elevation ? 2 : 0));
  }
};

/// Index into t.triangles of the first triangle containing the query
/// (boundary inclusive) in t's own frame, or -1.
std::ptrdiff_t locate_triangle(const Triangulation& t, const Direction& query);

std::array<double, 3> barycentric(const Triangulation& t, std::size_t triangle,
                                  const Direction& query);

/// Finds a triangle containing the query. When the query falls outside the
/// mesh of t's frame, the points are re-triangulated in the remaining frames
/// (azimuth shift, pole tilt, both) until one contains it. Throws
/// kNoEnclosingTriangle naming the query if none does.
EnclosingTriangle find_enclosing_triangle(const Triangulation& t,
                                          const Direction& query);

/// An immutable set of directions with lazily built, per-frame triangulations.
/// Copies share the cache; all members are safe to call concurrently.
class DirectionSet {
 public:
  DirectionSet() = default;
  explicit DirectionSet(std::vector<Direction> directions);

  std::span<const Direction> directions() const { return directions_; }
  std::size_t size() const { return directions_.size(); }
  const Direction& operator[](std::size_t i) const { return directions_[i]; }

  /// Throws kInsufficientPoints if the points are degenerate in that frame.
  const Triangulation& triangulation(ProjectionFrame frame) const;

  /// Same contract as find_enclosing_triangle(), using the cached frames.
  EnclosingTriangle locate(const Direction& query) const;

  /// (index, angular distance) of the closest point; ties go to the lowest
  /// index.
  std::pair<std::size_t, double> nearest(const Direction& query) const;

 private:
  struct Cache;
  std::vector<Direction> directions_;
  std::shared_ptr<Cache> cache_;
};

}  // namespace binamix
