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

#include "binamix/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "binamix/errors.hpp"

namespace binamix {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// sin/cos of an angle in degrees, exact at multiples of 90 and symmetric
// under a -> 360 - a, so mirrored directions produce mirrored vectors.
void sincos_deg(double deg, double& s, double& c) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r -= 360.0;
  int quadrant = 0;
  if (r >= 270.0) {
    quadrant = 3;
    r -= 270.0;
  } else if (r >= 180.0) {
    quadrant = 2;
    r -= 180.0;
  } else if (r >= 90.0) {
    quadrant = 1;
    r -= 90.0;
  }
  double sr = 0.0;
  double cr = 1.0;
  if (r > 45.0) {
    const double t = (90.0 - r) * kDegToRad;
    sr = std::cos(t);
    cr = std::sin(t);
  } else if (r > 0.0) {
    const double t = r * kDegToRad;
    sr = std::sin(t);
    cr = std::cos(t);
  }
  switch (quadrant) {
    case 0: s = sr; c = cr; break;
    case 1: s = cr; c = -sr; break;
    case 2: s = -sr; c = -cr; break;
    default: s = -cr; c = sr; break;
  }
}

// ---------------------------------------------------------------------------
// Exact planar predicates on the quantized grid.

using Int128 = __int128;
using Int256 = boost::multiprecision::int256_t;

struct GridPoint {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

GridPoint to_grid(const PlanePoint& p) {
  return {std::llround(p.x / kPlaneQuantum), std::llround(p.y / kPlaneQuantum)};
}

int sign_of(Int128 v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

int orient(const GridPoint& a, const GridPoint& b, const GridPoint& c) {
  const Int128 det = Int128(b.x - a.x) * Int128(c.y - a.y) -
                     Int128(b.y - a.y) * Int128(c.x - a.x);
  return sign_of(det);
}

template <typename T>
int incircle_sign(const GridPoint& a, const GridPoint& b, const GridPoint& c,
                  const GridPoint& d) {
  const T adx = T(a.x) - T(d.x), ady = T(a.y) - T(d.y);
  const T bdx = T(b.x) - T(d.x), bdy = T(b.y) - T(d.y);
  const T cdx = T(c.x) - T(d.x), cdy = T(c.y) - T(d.y);
  const T det = (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy) +
                (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy) +
                (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady);
  return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

// Positive when d lies strictly inside the circumcircle of the
// counter-clockwise triangle (a, b, c).
int incircle(const GridPoint& a, const GridPoint& b, const GridPoint& c,
             const GridPoint& d, bool wide) {
  return wide ? incircle_sign<Int256>(a, b, c, d)
              : incircle_sign<Int128>(a, b, c, d);
}

// Super-triangle corner scale. Real points lie within 2^25 grid units of the
// origin; 2^40 keeps every incircle term below 2^170.
constexpr std::int64_t kSuperScale = std::int64_t{1} << 40;

class BowyerWatson {
 public:
  explicit BowyerWatson(std::vector<GridPoint> points)
      : points_(std::move(points)), real_count_(points_.size()) {
    points_.push_back({-kSuperScale, -kSuperScale});
    points_.push_back({kSuperScale, -kSuperScale});
    points_.push_back({0, kSuperScale});
    const int n = static_cast<int>(real_count_);
    tris_.push_back({{n, n + 1, n + 2}, {-1, -1, -1}, true});
    marks_.push_back(0);
  }

  void run() {
    for (std::size_t i = 0; i < real_count_; ++i) insert(static_cast<int>(i));
  }

  // Triangles with only real vertices, as indices into the input points.
  std::vector<std::array<std::size_t, 3>> real_triangles() const {
    std::vector<std::array<std::size_t, 3>> out;
    const int n = static_cast<int>(real_count_);
    for (const auto& t : tris_) {
      if (!t.alive || t.v[0] >= n || t.v[1] >= n || t.v[2] >= n) continue;
      out.push_back({static_cast<std::size_t>(t.v[0]),
                     static_cast<std::size_t>(t.v[1]),
                     static_cast<std::size_t>(t.v[2])});
    }
    return out;
  }

 private:
  struct Tri {
    std::array<int, 3> v;
    std::array<int, 3> n;  // neighbour opposite v[i]
    bool alive;
  };

  bool is_super(int v) const { return v >= static_cast<int>(real_count_); }

  bool in_circumcircle(const Tri& t, int p) const {
    const bool wide = is_super(t.v[0]) || is_super(t.v[1]) || is_super(t.v[2]);
    return incircle(points_[t.v[0]], points_[t.v[1]], points_[t.v[2]],
                    points_[p], wide) > 0;
  }

  int locate(int p) const {
    const GridPoint& q = points_[p];
    int t = last_;
    const std::size_t max_steps = 4 * tris_.size() + 16;
    for (std::size_t step = 0; step < max_steps; ++step) {
      const Tri& tri = tris_[t];
      bool moved = false;
      for (int k = 0; k < 3; ++k) {
        const int j = static_cast<int>((k + step) % 3);
        const int a = tri.v[(j + 1) % 3];
        const int b = tri.v[(j + 2) % 3];
        if (orient(points_[a], points_[b], q) < 0 && tri.n[j] >= 0) {
          t = tri.n[j];
          moved = true;
          break;
        }
      }
      if (!moved) return t;
    }
    // The walk cannot cycle on a Delaunay mesh with exact predicates; the
    // linear scan only guards against a broken invariant.
    for (int i = 0; i < static_cast<int>(tris_.size()); ++i) {
      const Tri& tri = tris_[i];
      if (!tri.alive) continue;
      if (orient(points_[tri.v[0]], points_[tri.v[1]], q) >= 0 &&
          orient(points_[tri.v[1]], points_[tri.v[2]], q) >= 0 &&
          orient(points_[tri.v[2]], points_[tri.v[0]], q) >= 0)
        return i;
    }
    throw Error(ErrorCode::kInsufficientPoints,
                "triangulation point location failed");
  }

  void insert(int p) {
    const int start = locate(p);
    ++epoch_;
    std::vector<int> cavity{start};
    marks_[start] = epoch_;
    for (std::size_t k = 0; k < cavity.size(); ++k) {
      const Tri tri = tris_[cavity[k]];
      for (int j = 0; j < 3; ++j) {
        const int nb = tri.n[j];
        if (nb < 0 || marks_[nb] == epoch_) continue;
        if (in_circumcircle(tris_[nb], p)) {
          marks_[nb] = epoch_;
          cavity.push_back(nb);
        }
      }
    }

    struct Edge {
      int a, b, outer;
    };
    std::vector<Edge> boundary;
    for (int t : cavity) {
      const Tri& tri = tris_[t];
      for (int j = 0; j < 3; ++j) {
        const int nb = tri.n[j];
        if (nb >= 0 && marks_[nb] == epoch_) continue;
        boundary.push_back({tri.v[(j + 1) % 3], tri.v[(j + 2) % 3], nb});
      }
    }
    for (int t : cavity) tris_[t].alive = false;

    const int first = static_cast<int>(tris_.size());
    for (const Edge& e : boundary) {
      const int idx = static_cast<int>(tris_.size());
      tris_.push_back({{p, e.a, e.b}, {e.outer, -1, -1}, true});
      marks_.push_back(0);
      if (e.outer >= 0) {
        Tri& outer = tris_[e.outer];
        for (int k = 0; k < 3; ++k) {
          if (outer.v[k] != e.a && outer.v[k] != e.b) {
            outer.n[k] = idx;
            break;
          }
        }
      }
    }
    // New triangles form a fan around p: (p, a, b) meets (p, b, c) along p-b.
    const int last = static_cast<int>(tris_.size());
    for (int i = first; i < last; ++i) {
      Tri& t = tris_[i];
      for (int j = first; j < last; ++j) {
        if (i == j) continue;
        if (tris_[j].v[1] == t.v[2]) t.n[1] = j;
        if (tris_[j].v[2] == t.v[1]) t.n[2] = j;
      }
    }
    last_ = first;
  }

  std::vector<GridPoint> points_;
  std::size_t real_count_;
  std::vector<Tri> tris_;
  std::vector<int> marks_;
  int epoch_ = 0;
  int last_ = 0;
};

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> find_duplicate_directions(
    std::span<const Direction> points) {
  std::vector<std::pair<std::size_t, std::size_t>> merged;
  std::map<long long, std::vector<std::size_t>> bands;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const long long band =
        static_cast<long long>(std::floor(points[i].elevation_deg / kDuplicateToleranceDeg));
    bool duplicate = false;
    for (long long b = band - 1; b <= band + 1 && !duplicate; ++b) {
      auto it = bands.find(b);
      if (it == bands.end()) continue;
      for (std::size_t kept : it->second) {
        if (angular_distance(points[i], points[kept]) < kDuplicateToleranceDeg) {
          merged.emplace_back(i, kept);
          duplicate = true;
          break;
        }
      }
    }
    if (!duplicate) bands[band].push_back(i);
  }
  return merged;
}

namespace {

std::array<std::size_t, 3> canonical(std::array<std::size_t, 3> t) {
  while (t[0] > t[1] || t[0] > t[2]) t = {t[1], t[2], t[0]};
  return t;
}

}  // namespace

// ---------------------------------------------------------------------------

Direction normalize_direction(double azimuth_deg, double elevation_deg) {
  if (!std::isfinite(azimuth_deg) || !std::isfinite(elevation_deg)) {
    throw Error(ErrorCode::kInvalidArgument,
                "direction components must be finite");
  }
  double el = elevation_deg - 360.0 * std::floor((elevation_deg + 180.0) / 360.0);
  double az = azimuth_deg;
  // Elevations past a pole continue down the opposite meridian.
  if (el > 90.0) {
    el = 180.0 - el;
    az += 180.0;
  } else if (el < -90.0) {
    el = -180.0 - el;
    az += 180.0;
  }
  az = std::fmod(az, 360.0);
  if (az < 0.0) az += 360.0;
  if (az >= 360.0) az -= 360.0;
  if (el == 90.0 || el == -90.0) az = 0.0;
  if (az == 0.0) az = 0.0;  // drop negative zero
  if (el == 0.0) el = 0.0;
  return {az, el};
}

UnitVector to_cartesian(const Direction& d) {
  if (d.elevation_deg == 90.0) return {0.0, 0.0, 1.0};
  if (d.elevation_deg == -90.0) return {0.0, 0.0, -1.0};
  double sa, ca, se, ce;
  sincos_deg(d.azimuth_deg, sa, ca);
  sincos_deg(d.elevation_deg, se, ce);
  return {ce * ca, ce * sa, se};
}

Direction to_direction(double x, double y, double z) {
  const double horizontal = std::hypot(x, y);
  if (horizontal == 0.0) {
    if (z == 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "zero vector has no direction");
    }
    return {0.0, z > 0.0 ? 90.0 : -90.0};
  }
  const double el = std::atan2(z, horizontal) * kRadToDeg;
  const double az = std::atan2(y, x) * kRadToDeg;
  return normalize_direction(az, el);
}

double angular_distance(const Direction& a, const Direction& b) {
  const UnitVector u = to_cartesian(a);
  const UnitVector v = to_cartesian(b);
  const double cx = u.y * v.z - u.z * v.y;
  const double cy = u.z * v.x - u.x * v.z;
  const double cz = u.x * v.y - u.y * v.x;
  const double angle = std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), u.dot(v));
  return std::clamp(angle * kRadToDeg, 0.0, 180.0);
}

double chord_distance(const Direction& a, const Direction& b) {
  const UnitVector u = to_cartesian(a);
  const UnitVector v = to_cartesian(b);
  return std::hypot(u.x - v.x, u.y - v.y, u.z - v.z);
}

std::string to_string(const Direction& d) {
  std::ostringstream os;
  os << std::setprecision(10) << "(az " << d.azimuth_deg << ", el "
     << d.elevation_deg << ")";
  return os.str();
}

std::string to_string(ProjectionFrame f) {
  switch (f) {
    case ProjectionFrame::kIdentity: return "identity";
    case ProjectionFrame::kAzimuthShift: return "azimuth-shift";
    case ProjectionFrame::kPoleTilt: return "pole-tilt";
    case ProjectionFrame::kBoth: return "pole-tilt+azimuth-shift";
  }
  return "unknown";
}

PlanePoint project(const Direction& d, ProjectionFrame frame) {
  Direction r = normalize_direction(d);
  if (rotates_elevation(frame)) {
    // Roll by +90 degrees about the front (x) axis: up maps to the right,
    // left maps to up.
    const UnitVector v = to_cartesian(r);
    r = to_direction(v.x, -v.z, v.y);
  }
  if (rotates_azimuth(frame)) {
    r.azimuth_deg += 180.0;
    if (r.azimuth_deg >= 360.0) r.azimuth_deg -= 360.0;
    if (r.elevation_deg == 90.0 || r.elevation_deg == -90.0) r.azimuth_deg = 0.0;
  }
  const auto snap = [](double v) {
    return static_cast<double>(std::llround(v / kPlaneQuantum)) * kPlaneQuantum;
  };
  return {snap(r.azimuth_deg), snap(r.elevation_deg)};
}

Triangulation build_triangulation(std::span<const Direction> points,
                                  ProjectionFrame frame) {
  Triangulation t;
  t.frame = frame;
  t.vertices.reserve(points.size());
  for (const auto& p : points) t.vertices.push_back(normalize_direction(p));
  t.projected.reserve(points.size());
  for (const auto& v : t.vertices) t.projected.push_back(project(v, frame));

  t.merged = find_duplicate_directions(t.vertices);
  std::vector<bool> dropped(points.size(), false);
  for (const auto& [drop, keep] : t.merged) {
    dropped[drop] = true;
    warn("merging duplicate direction #" + std::to_string(drop) + " " +
         to_string(t.vertices[drop]) + " into #" + std::to_string(keep));
  }

  std::vector<std::size_t> kept;
  std::vector<GridPoint> grid;
  for (std::size_t i = 0; i < t.vertices.size(); ++i) {
    if (dropped[i]) continue;
    kept.push_back(i);
    grid.push_back(to_grid(t.projected[i]));
  }
  if (kept.size() < 3) {
    throw Error(ErrorCode::kInsufficientPoints,
                "triangulation needs at least 3 distinct points, got " +
                    std::to_string(kept.size()));
  }

  BowyerWatson bw(std::move(grid));
  bw.run();
  for (auto tri : bw.real_triangles()) {
    t.triangles.push_back(canonical({kept[tri[0]], kept[tri[1]], kept[tri[2]]}));
  }
  if (t.triangles.empty()) {
    throw Error(ErrorCode::kInsufficientPoints,
                "all points are collinear in the " + to_string(frame) +
                    " projection");
  }
  std::sort(t.triangles.begin(), t.triangles.end());
  return t;
}

std::ptrdiff_t locate_triangle(const Triangulation& t, const Direction& query) {
  const GridPoint q = to_grid(project(query, t.frame));
  for (std::size_t i = 0; i < t.triangles.size(); ++i) {
    const auto& tri = t.triangles[i];
    const GridPoint a = to_grid(t.projected[tri[0]]);
    const GridPoint b = to_grid(t.projected[tri[1]]);
    const GridPoint c = to_grid(t.projected[tri[2]]);
    if (q.x < std::min({a.x, b.x, c.x}) || q.x > std::max({a.x, b.x, c.x}) ||
        q.y < std::min({a.y, b.y, c.y}) || q.y > std::max({a.y, b.y, c.y}))
      continue;
    if (orient(a, b, q) >= 0 && orient(b, c, q) >= 0 && orient(c, a, q) >= 0)
      return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

std::array<double, 3> barycentric(const Triangulation& t, std::size_t triangle,
                                  const Direction& query) {
  const auto& tri = t.triangles.at(triangle);
  const GridPoint q = to_grid(project(query, t.frame));
  const GridPoint a = to_grid(t.projected[tri[0]]);
  const GridPoint b = to_grid(t.projected[tri[1]]);
  const GridPoint c = to_grid(t.projected[tri[2]]);
  const auto area2 = [](const GridPoint& p0, const GridPoint& p1,
                        const GridPoint& p2) {
    return static_cast<double>(Int128(p1.x - p0.x) * Int128(p2.y - p0.y) -
                               Int128(p1.y - p0.y) * Int128(p2.x - p0.x));
  };
  const double total = area2(a, b, c);
  return {area2(q, b, c) / total, area2(a, q, c) / total, area2(a, b, q) / total};
}

namespace {

template <typename GetTriangulation>
EnclosingTriangle locate_in_frames(const Direction& query, ProjectionFrame first,
                                   GetTriangulation&& get) {
  std::vector<ProjectionFrame> order{first};
  for (auto f : kFrameFallbackOrder)
    if (f != first) order.push_back(f);

  for (ProjectionFrame frame : order) {
    const Triangulation* t = nullptr;
    try {
      t = &get(frame);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInsufficientPoints) throw;
      continue;
    }
    const std::ptrdiff_t idx = locate_triangle(*t, query);
    if (idx < 0) continue;
    EnclosingTriangle out;
    out.vertex_indices = t->triangles[static_cast<std::size_t>(idx)];
    out.rotated_azimuth = rotates_azimuth(frame);
    out.rotated_elevation = rotates_elevation(frame);
    out.barycentric = barycentric(*t, static_cast<std::size_t>(idx), query);
    return out;
  }
  throw Error(ErrorCode::kNoEnclosingTriangle,
              "no enclosing triangle for query " + to_string(query) +
                  " in any projection frame");
}

}  // namespace

EnclosingTriangle find_enclosing_triangle(const Triangulation& t,
                                          const Direction& query) {
  std::map<ProjectionFrame, Triangulation> rebuilt;
  return locate_in_frames(
      normalize_direction(query), t.frame,
      [&](ProjectionFrame f) -> const Triangulation& {
        if (f == t.frame) return t;
        auto it = rebuilt.find(f);
        if (it == rebuilt.end()) {
          it = rebuilt.emplace(f, build_triangulation(t.vertices, f)).first;
        }
        return it->second;
      });
}

// ---------------------------------------------------------------------------

struct DirectionSet::Cache {
  struct Slot {
    std::once_flag once;
    std::unique_ptr<Triangulation> triangulation;
    std::exception_ptr error;
  };
  std::array<Slot, 4> slots;
};

DirectionSet::DirectionSet(std::vector<Direction> directions)
    : directions_(std::move(directions)), cache_(std::make_shared<Cache>()) {
  for (auto& d : directions_) d = normalize_direction(d);
}

const Triangulation& DirectionSet::triangulation(ProjectionFrame frame) const {
  if (!cache_) {
    throw Error(ErrorCode::kInsufficientPoints, "empty direction set");
  }
  auto& slot = cache_->slots[static_cast<std::size_t>(frame)];
  std::call_once(slot.once, [&] {
    try {
      slot.triangulation =
          std::make_unique<Triangulation>(build_triangulation(directions_, frame));
    } catch (...) {
      slot.error = std::current_exception();
    }
  });
  if (slot.error) std::rethrow_exception(slot.error);
  return *slot.triangulation;
}

EnclosingTriangle DirectionSet::locate(const Direction& query) const {
  return locate_in_frames(
      normalize_direction(query), ProjectionFrame::kIdentity,
      [&](ProjectionFrame f) -> const Triangulation& { return triangulation(f); });
}

std::pair<std::size_t, double> DirectionSet::nearest(const Direction& query) const {
  if (directions_.empty()) {
    throw Error(ErrorCode::kInsufficientPoints, "empty direction set");
  }
  const Direction q = normalize_direction(query);
  std::size_t best = 0;
  double best_dist = angular_distance(q, directions_[0]);
  for (std::size_t i = 1; i < directions_.size(); ++i) {
    const double d = angular_distance(q, directions_[i]);
    // Distances within 1e-12 degrees count as ties.
    if (d < best_dist - 1e-12) {
      best = i;
      best_dist = d;
    }
  }
  return {best, best_dist};
}

}  // namespace binamix
