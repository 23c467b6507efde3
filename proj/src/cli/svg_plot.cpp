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

#include "binamix/cli/svg_plot.hpp"

#include <cstdio>
#include <sstream>

#include "binamix/errors.hpp"

namespace binamix::cli {

namespace {

constexpr double kScale = 2.0;  // pixels per degree
constexpr double kMargin = 40.0;
constexpr double kWidth = 360.0 * kScale + 2 * kMargin;
constexpr double kHeight = 180.0 * kScale + 2 * kMargin + 20.0;

struct Px {
  double x;
  double y;
};

Px to_px(const PlanePoint& p) {
  return {kMargin + p.x * kScale, kMargin + 20.0 + (90.0 - p.y) * kScale};
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string points_attr(const std::array<Px, 3>& p) {
  std::string s;
  for (std::size_t i = 0; i < 3; ++i) {
    if (i) s += ' ';
    s += num(p[i].x) + "," + num(p[i].y);
  }
  return s;
}

}  // namespace

std::string triangulation_svg(const DirectionSet& points, const InterpolationPlan& plan,
                              const std::string& title,
                              const std::vector<std::string>& labels) {
  const ProjectionFrame frame =
      plan.triangle ? plan.triangle->frame() : ProjectionFrame::kIdentity;
  const auto at = [&](std::size_t i) { return to_px(project(points[i], frame)); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
     << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\">\n";
  os << "<title>" << escape(title) << "</title>\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
     << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(kMargin) << "\" y=\"24\" font-family=\"sans-serif\" "
        "font-size=\"14\">"
     << escape(title) << " (frame: " << to_string(frame) << ")</text>\n";

  const Px lo = to_px({0.0, -90.0});
  const Px hi = to_px({360.0, 90.0});
  os << "<rect class=\"plane\" x=\"" << num(lo.x) << "\" y=\"" << num(hi.y) << "\" width=\""
     << num(hi.x - lo.x) << "\" height=\"" << num(lo.y - hi.y)
     << "\" fill=\"none\" stroke=\"#888\"/>\n";
  for (int az = 0; az <= 360; az += 90) {
    const Px p = to_px({double(az), -90.0});
    os << "<text x=\"" << num(p.x) << "\" y=\"" << num(p.y + 16)
       << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">" << az
       << "</text>\n";
  }
  for (int el = -90; el <= 90; el += 45) {
    const Px p = to_px({0.0, double(el)});
    os << "<text x=\"" << num(p.x - 6) << "\" y=\"" << num(p.y + 3)
       << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">" << el
       << "</text>\n";
  }

  // A degenerate point set (fewer than three non-collinear points) has no
  // mesh; the points and the highlight are still drawn.
  try {
    const Triangulation& t = points.triangulation(frame);
    os << "<g class=\"mesh\" fill=\"none\" stroke=\"#9ab\" stroke-width=\"0.8\">\n";
    for (const auto& tri : t.triangles) {
      os << "<polygon class=\"tri\" data-vertices=\"" << tri[0] << ' ' << tri[1] << ' '
         << tri[2] << "\" points=\""
         << points_attr({to_px(t.projected[tri[0]]), to_px(t.projected[tri[1]]),
                         to_px(t.projected[tri[2]])})
         << "\"/>\n";
    }
    os << "</g>\n";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInsufficientPoints) throw;
  }

  if (plan.triangle) {
    const auto& v = plan.triangle->vertex_indices;
    os << "<polygon class=\"enclosing\" data-vertices=\"" << v[0] << ' ' << v[1] << ' ' << v[2]
       << "\" points=\"" << points_attr({at(v[0]), at(v[1]), at(v[2])})
       << "\" fill=\"#f5a623\" fill-opacity=\"0.45\" stroke=\"#d0021b\" stroke-width=\"2\"/>\n";
  } else if (plan.entries.size() == 2) {
    const std::size_t a = plan.entries[0].point_index;
    const std::size_t b = plan.entries[1].point_index;
    const Px pa = at(a);
    const Px pb = at(b);
    os << "<line class=\"pair\" data-vertices=\"" << a << ' ' << b << "\" x1=\"" << num(pa.x)
       << "\" y1=\"" << num(pa.y) << "\" x2=\"" << num(pb.x) << "\" y2=\"" << num(pb.y)
       << "\" stroke=\"#d0021b\" stroke-width=\"2\"/>\n";
  } else if (plan.entries.size() == 1) {
    const std::size_t a = plan.entries[0].point_index;
    const Px pa = at(a);
    os << "<circle class=\"vertex\" data-index=\"" << a << "\" cx=\"" << num(pa.x)
       << "\" cy=\"" << num(pa.y) << "\" r=\"7\" fill=\"none\" stroke=\"#d0021b\" "
          "stroke-width=\"2\"/>\n";
  }

  os << "<g class=\"points\" fill=\"#1f4e79\">\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Px p = at(i);
    os << "<circle class=\"point\" data-index=\"" << i << "\" cx=\"" << num(p.x) << "\" cy=\""
       << num(p.y) << "\" r=\"3\"/>\n";
    if (i < labels.size() && !labels[i].empty()) {
      os << "<text x=\"" << num(p.x + 5) << "\" y=\"" << num(p.y - 5)
         << "\" font-family=\"sans-serif\" font-size=\"10\">" << escape(labels[i])
         << "</text>\n";
    }
  }
  os << "</g>\n";

  const Px q = to_px(project(normalize_direction(plan.requested), frame));
  os << "<g class=\"query\" data-azimuth=\"" << plan.requested.azimuth_deg
     << "\" data-elevation=\"" << plan.requested.elevation_deg << "\" stroke=\"#000\" "
        "stroke-width=\"2\">\n"
     << "<line x1=\"" << num(q.x - 6) << "\" y1=\"" << num(q.y - 6) << "\" x2=\""
     << num(q.x + 6) << "\" y2=\"" << num(q.y + 6) << "\"/>\n"
     << "<line x1=\"" << num(q.x - 6) << "\" y1=\"" << num(q.y + 6) << "\" x2=\""
     << num(q.x + 6) << "\" y2=\"" << num(q.y - 6) << "\"/>\n"
     << "</g>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace binamix::cli
