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

#include "binamix/ir_store.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <regex>
#include <sstream>

#include "binamix/errors.hpp"
#include "binamix/wav.hpp"

namespace binamix {

namespace fs = std::filesystem;

namespace {

std::string format_number(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

bool parse_number(std::string_view s, double& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double uniform_pm1(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-52 - 1.0;
}

double to_float_precision(double v) { return static_cast<double>(static_cast<float>(v)); }

}  // namespace

IRType parse_ir_type(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "HRIR") return IRType::kHRIR;
  if (upper == "BRIR") return IRType::kBRIR;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown IR type '" + std::string(name) + "' (expected HRIR or BRIR)");
}

std::string_view to_string(IRType type) {
  return type == IRType::kHRIR ? "HRIR" : "BRIR";
}

bool is_supported_sample_rate(int rate_hz) {
  return std::find(kSupportedSampleRates.begin(), kSupportedSampleRates.end(),
                   rate_hz) != kSupportedSampleRates.end();
}

IRSet::IRSet(std::string subject_id, IRType ir_type, int sample_rate_hz,
             std::vector<IRPoint> points)
    : subject_id_(std::move(subject_id)),
      ir_type_(ir_type),
      sample_rate_hz_(sample_rate_hz),
      points_(std::move(points)) {
  const auto fail = [](const std::string& why) {
    return Error(ErrorCode::kInvalidArgument, "invalid IR set: " + why);
  };
  if (!is_supported_sample_rate(sample_rate_hz_)) {
    throw fail("unsupported sample rate " + std::to_string(sample_rate_hz_));
  }
  if (points_.size() < 3) {
    throw fail("needs at least 3 points, got " + std::to_string(points_.size()));
  }
  const std::size_t length = points_.front().left.size();
  std::vector<Direction> dirs;
  dirs.reserve(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    auto& p = points_[i];
    p.direction = normalize_direction(p.direction);
    if (p.left.empty() || p.left.size() != p.right.size() || p.left.size() != length) {
      throw fail("point #" + std::to_string(i) + " has mismatched IR lengths");
    }
    for (std::size_t k = 0; k < length; ++k) {
      if (!std::isfinite(p.left[k]) || !std::isfinite(p.right[k])) {
        throw fail("point #" + std::to_string(i) + " has non-finite samples");
      }
    }
    dirs.push_back(p.direction);
  }
  const auto dups = find_duplicate_directions(dirs);
  if (!dups.empty()) {
    throw fail("point #" + std::to_string(dups.front().first) + " " +
               to_string(dirs[dups.front().first]) + " duplicates point #" +
               std::to_string(dups.front().second));
  }
  directions_ = DirectionSet(std::move(dirs));
}

std::pair<std::size_t, double> nearest_point(const IRSet& set, const Direction& d) {
  return set.directions().nearest(d);
}

// ---------------------------------------------------------------------------

fs::path ir_set_directory(const fs::path& root, std::string_view subject_id,
                          IRType type, int sample_rate_hz) {
  return root / std::string(subject_id) / std::string(to_string(type)) /
         std::to_string(sample_rate_hz);
}

IRManifest read_manifest(const fs::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) {
    throw Error(ErrorCode::kNotFound, "manifest not found: " + manifest_path.string());
  }
  const auto fail = [&](std::size_t line, const std::string& why) {
    return Error(ErrorCode::kFormat, manifest_path.string() + ":" +
                                         std::to_string(line) + ": " + why);
  };

  IRManifest m;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, '\t');
    if (!have_header) {
      bool have_schema = false, have_subject = false, have_type = false, have_rate = false;
      for (auto f : fields) {
        const auto eq = f.find('=');
        if (eq == std::string_view::npos) throw fail(line_no, "malformed header field");
        const auto key = f.substr(0, eq);
        const auto value = f.substr(eq + 1);
        if (key == "schema") {
          if (value != "1") throw fail(line_no, "unsupported schema " + std::string(value));
          have_schema = true;
        } else if (key == "subject") {
          m.subject_id = std::string(value);
          have_subject = true;
        } else if (key == "ir_type") {
          m.ir_type = parse_ir_type(value);
          have_type = true;
        } else if (key == "rate") {
          double r = 0;
          if (!parse_number(value, r)) throw fail(line_no, "bad rate");
          m.sample_rate_hz = static_cast<int>(r);
          have_rate = true;
        }
      }
      if (!(have_schema && have_subject && have_type && have_rate)) {
        throw fail(line_no, "header must carry schema, subject, ir_type and rate");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != 3) throw fail(line_no, "expected azimuth<TAB>elevation<TAB>path");
    ManifestEntry e;
    if (!parse_number(fields[0], e.azimuth_deg) || !parse_number(fields[1], e.elevation_deg)) {
      throw fail(line_no, "bad direction");
    }
    e.path = fs::path(std::string(fields[2]));
    m.entries.push_back(std::move(e));
  }
  if (!have_header) throw fail(line_no, "missing header line");
  return m;
}

void write_manifest(const fs::path& manifest_path, const IRManifest& m) {
  std::ofstream out(manifest_path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + manifest_path.string());
  out << "schema=" << m.schema << "\tsubject=" << m.subject_id
      << "\tir_type=" << to_string(m.ir_type) << "\trate=" << m.sample_rate_hz << '\n';
  for (const auto& e : m.entries) {
    out << format_number(e.azimuth_deg) << '\t' << format_number(e.elevation_deg)
        << '\t' << e.path.generic_string() << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "short write to " + manifest_path.string());
}

IRSet load_ir_set(const fs::path& root, std::string_view subject_id, IRType type,
                  int sample_rate_hz) {
  const fs::path dir = ir_set_directory(root, subject_id, type, sample_rate_hz);
  const fs::path manifest_path = dir / kManifestFileName;
  if (!fs::exists(manifest_path)) {
    throw Error(ErrorCode::kNotFound,
                "no IR set for subject " + std::string(subject_id) + ", " +
                    std::string(to_string(type)) + ", " +
                    std::to_string(sample_rate_hz) + " Hz (looked for " +
                    manifest_path.string() + ")");
  }
  const IRManifest m = read_manifest(manifest_path);
  if (m.subject_id != subject_id || m.ir_type != type || m.sample_rate_hz != sample_rate_hz) {
    throw Error(ErrorCode::kFormat, manifest_path.string() +
                                        ": header does not match the requested set");
  }

  std::vector<IRPoint> points;
  points.reserve(m.entries.size());
  for (const auto& e : m.entries) {
    const fs::path wav_path = dir / e.path;
    if (!fs::exists(wav_path)) {
      throw Error(ErrorCode::kFormat, "manifest references missing file " + wav_path.string());
    }
    wav::WavFile f;
    try {
      f = wav::read(wav_path);
    } catch (const Error& err) {
      throw Error(ErrorCode::kFormat, err.what());
    }
    if (f.audio.sample_rate_hz != sample_rate_hz) {
      throw Error(ErrorCode::kFormat,
                  wav_path.string() + ": sample rate " +
                      std::to_string(f.audio.sample_rate_hz) + " does not match " +
                      std::to_string(sample_rate_hz));
    }
    if (f.audio.num_channels() != 2) {
      throw Error(ErrorCode::kFormat, wav_path.string() + ": expected 2 channels, found " +
                                          std::to_string(f.audio.num_channels()));
    }
    if (!points.empty() && f.audio.num_frames() != points.front().left.size()) {
      throw Error(ErrorCode::kFormat, wav_path.string() + ": IR length " +
                                          std::to_string(f.audio.num_frames()) +
                                          " differs from the rest of the set");
    }
    points.push_back({normalize_direction(e.azimuth_deg, e.elevation_deg),
                      std::move(f.audio.channels[0]), std::move(f.audio.channels[1])});
  }
  try {
    return IRSet(m.subject_id, m.ir_type, m.sample_rate_hz, std::move(points));
  } catch (const Error& err) {
    throw Error(ErrorCode::kFormat, manifest_path.string() + ": " + err.what());
  }
}

IRManifest write_ir_set(const IRSet& set, const fs::path& root) {
  const fs::path dir = ir_set_directory(root, set.subject_id(), set.ir_type(),
                                        set.sample_rate_hz());
  fs::create_directories(dir);
  IRManifest m;
  m.subject_id = set.subject_id();
  m.ir_type = set.ir_type();
  m.sample_rate_hz = set.sample_rate_hz();
  for (std::size_t i = 0; i < set.size(); ++i) {
    const IRPoint& p = set.point(i);
    std::ostringstream name;
    name << "ir_" << std::setw(5) << std::setfill('0') << i << ".wav";
    wav::write(dir / name.str(), AudioBuffer::stereo(set.sample_rate_hz(), p.left, p.right),
               wav::SampleFormat::kFloat32);
    m.entries.push_back({p.direction.azimuth_deg, p.direction.elevation_deg, name.str()});
  }
  write_manifest(dir / kManifestFileName, m);
  return m;
}

// ---------------------------------------------------------------------------

namespace {

std::regex compile_pattern(const std::string& pattern) {
  static const std::string kNumber = "([-+]?[0-9]+(?:[.,][0-9]+)?)";
  const auto az = pattern.find("<az>");
  const auto el = pattern.find("<el>");
  if (az == std::string::npos || el == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "filename pattern must contain <az> and <el>: " + pattern);
  }
  std::string re;
  for (std::size_t i = 0; i < pattern.size();) {
    if (pattern.compare(i, 4, "<az>") == 0 || pattern.compare(i, 4, "<el>") == 0) {
      re += kNumber;
      i += 4;
      continue;
    }
    const char c = pattern[i++];
    if (std::string_view(".^$|()[]{}*+?\\").find(c) != std::string_view::npos) re += '\\';
    re += c;
  }
  return std::regex(re);
}

}  // namespace

ImportReport import_sadie(const fs::path& source_dir, const fs::path& dest_root,
                          std::string_view subject_id, IRType type, int sample_rate_hz,
                          const ImportOptions& options) {
  if (!fs::is_directory(source_dir)) {
    throw Error(ErrorCode::kNotFound, "import source is not a directory: " + source_dir.string());
  }
  const std::regex re = compile_pattern(options.filename_pattern);
  const bool az_first =
      options.filename_pattern.find("<az>") < options.filename_pattern.find("<el>");

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(source_dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".wav") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  ImportReport report;
  IRManifest& m = report.manifest;
  m.subject_id = std::string(subject_id);
  m.ir_type = type;
  m.sample_rate_hz = sample_rate_hz;
  const fs::path dest_dir = ir_set_directory(dest_root, subject_id, type, sample_rate_hz);

  const auto note = [&](std::string msg) {
    warn(msg);
    report.warnings.push_back(std::move(msg));
  };

  std::vector<Direction> accepted;
  std::vector<fs::path> sources;
  for (const auto& file : files) {
    const std::string stem = file.stem().string();
    std::smatch match;
    if (!std::regex_search(stem, match, re)) {
      note("skipping " + file.filename().string() + ": name does not match '" +
           options.filename_pattern + "'");
      continue;
    }
    std::string az_text = match[az_first ? 1 : 2].str();
    std::string el_text = match[az_first ? 2 : 1].str();
    std::replace(az_text.begin(), az_text.end(), ',', '.');
    std::replace(el_text.begin(), el_text.end(), ',', '.');
    if (!az_text.empty() && az_text.front() == '+') az_text.erase(0, 1);
    if (!el_text.empty() && el_text.front() == '+') el_text.erase(0, 1);
    double az = 0, el = 0;
    if (!parse_number(az_text, az) || !parse_number(el_text, el)) {
      note("skipping " + file.filename().string() + ": unparsable angles");
      continue;
    }
    if (options.elevation_is_inclination) el = 90.0 - el;
    const Direction d = normalize_direction(az + options.azimuth_offset_deg, el);

    try {
      const wav::WavFile f = wav::read(file);
      if (f.audio.num_channels() != 2 || f.audio.sample_rate_hz != sample_rate_hz) {
        note("skipping " + file.filename().string() + ": expected 2 channels at " +
             std::to_string(sample_rate_hz) + " Hz");
        continue;
      }
    } catch (const Error& err) {
      note(std::string("skipping ") + err.what());
      continue;
    }

    auto dup = std::find_if(accepted.begin(), accepted.end(), [&](const Direction& a) {
      return angular_distance(a, d) < kDuplicateToleranceDeg;
    });
    if (dup != accepted.end()) {
      note("skipping " + file.filename().string() + ": direction " + to_string(d) +
           " already provided by " +
           sources[static_cast<std::size_t>(dup - accepted.begin())].filename().string());
      continue;
    }
    accepted.push_back(d);
    sources.push_back(file);
  }

  if (accepted.empty()) {
    throw Error(ErrorCode::kEmptyImport,
                "no importable WAV files in " + source_dir.string() + " for pattern '" +
                    options.filename_pattern + "'");
  }

  fs::create_directories(dest_dir);
  for (std::size_t i = 0; i < accepted.size(); ++i) {
    fs::path rel;
    if (options.copy_files) {
      rel = sources[i].filename();
      fs::copy_file(sources[i], dest_dir / rel, fs::copy_options::overwrite_existing);
    } else {
      rel = fs::relative(fs::absolute(sources[i]), fs::absolute(dest_dir));
    }
    m.entries.push_back({accepted[i].azimuth_deg, accepted[i].elevation_deg, rel});
  }
  report.manifest_path = dest_dir / kManifestFileName;
  write_manifest(report.manifest_path, m);
  return report;
}

// ---------------------------------------------------------------------------

std::vector<Direction> lebedev50_directions() {
  std::vector<std::array<double, 3>> v;
  // a1: octahedron vertices
  for (int axis = 0; axis < 3; ++axis)
    for (double s : {1.0, -1.0}) {
      std::array<double, 3> p{0, 0, 0};
      p[axis] = s;
      v.push_back(p);
    }
  // a2: edge midpoints
  const double r = 1.0 / std::numbers::sqrt2;
  for (int zero = 0; zero < 3; ++zero)
    for (double s1 : {1.0, -1.0})
      for (double s2 : {1.0, -1.0}) {
        std::array<double, 3> p{};
        int k = 0;
        for (int axis = 0; axis < 3; ++axis) {
          if (axis == zero) continue;
          p[axis] = (k++ == 0 ? s1 : s2) * r;
        }
        v.push_back(p);
      }
  // a3: cube vertices
  const double c = 1.0 / std::numbers::sqrt3;
  for (double sx : {1.0, -1.0})
    for (double sy : {1.0, -1.0})
      for (double sz : {1.0, -1.0}) v.push_back({sx * c, sy * c, sz * c});
  // b1: (l, l, m) and permutations
  const double l = 1.0 / std::sqrt(11.0);
  const double m = 3.0 / std::sqrt(11.0);
  for (int big = 0; big < 3; ++big)
    for (double sx : {1.0, -1.0})
      for (double sy : {1.0, -1.0})
        for (double sz : {1.0, -1.0}) {
          std::array<double, 3> p{sx * l, sy * l, sz * l};
          p[big] = (big == 0 ? sx : big == 1 ? sy : sz) * m;
          v.push_back(p);
        }

  std::vector<Direction> out;
  out.reserve(v.size());
  for (const auto& p : v) out.push_back(to_direction(p[0], p[1], p[2]));
  return out;
}

Distribution parse_distribution(std::string_view text) {
  if (text == "lebedev50") return Lebedev50{};
  if (text.substr(0, 5) == "ring:") {
    const auto parts = split(text.substr(5), ':');
    RingGrid g;
    g.elevations_deg.clear();
    bool ok = parts.size() == 2 || (parts.size() == 3 && parts[2] == "poles");
    ok = ok && parse_number(parts[0], g.azimuth_step_deg) && g.azimuth_step_deg > 0.0;
    if (ok) {
      for (auto e : split(parts[1], ',')) {
        double el = 0;
        if (!parse_number(e, el)) {
          ok = false;
          break;
        }
        g.elevations_deg.push_back(el);
      }
    }
    if (ok) {
      g.include_poles = parts.size() == 3;
      return g;
    }
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown distribution '" + std::string(text) +
                  "' (expected lebedev50 or ring:<step>:<el>,...[:poles])");
}

std::vector<Direction> distribution_points(const Distribution& distribution) {
  struct Visitor {
    std::vector<Direction> operator()(const Lebedev50&) const { return lebedev50_directions(); }
    std::vector<Direction> operator()(const RingGrid& g) const {
      if (!(g.azimuth_step_deg > 0.0) || g.elevations_deg.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "ring grid needs a positive step and elevations");
      }
      std::vector<Direction> out;
      const int count = static_cast<int>(std::llround(360.0 / g.azimuth_step_deg));
      for (double el : g.elevations_deg) {
        for (int i = 0; i < count; ++i) {
          const double az = i * g.azimuth_step_deg;
          if (az >= 360.0 - 1e-9) break;
          out.push_back(normalize_direction(az, el));
        }
      }
      if (g.include_poles) {
        out.push_back({0.0, 90.0});
        out.push_back({0.0, -90.0});
      }
      return out;
    }
    std::vector<Direction> operator()(const CustomPoints& c) const { return c.points; }
  };
  return std::visit(Visitor{}, distribution);
}

double woodworth_itd_seconds(const Direction& d) {
  const UnitVector v = to_cartesian(normalize_direction(d));
  const double lateral = std::asin(std::clamp(v.y, -1.0, 1.0));
  return kHeadRadiusM / kSpeedOfSoundMps * (lateral + std::sin(lateral));
}

IRSet synthesize_ir_set(const Distribution& distribution, int sample_rate_hz,
                        std::size_t ir_length_samples, std::uint64_t seed,
                        std::string subject_id, IRType type) {
  if (ir_length_samples < 32) {
    throw Error(ErrorCode::kInvalidArgument, "synthetic IRs need at least 32 samples");
  }
  if (!is_supported_sample_rate(sample_rate_hz)) {
    throw Error(ErrorCode::kInvalidArgument,
                "unsupported sample rate " + std::to_string(sample_rate_hz));
  }
  const std::vector<Direction> dirs = distribution_points(distribution);
  const double fs_hz = sample_rate_hz;
  const double max_itd = kHeadRadiusM / kSpeedOfSoundMps * (std::numbers::pi / 2 + 1.0);
  const double offset = 2.0;
  // Keep both onsets and the echo inside the first half of the response.
  const double budget = static_cast<double>(ir_length_samples) / 2.0 - offset - 12.0;
  const double delay_scale = std::min(1.0, budget / (max_itd * fs_hz));
  const double tail_decay = static_cast<double>(ir_length_samples) / 8.0;

  std::vector<IRPoint> points;
  points.reserve(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const Direction d = normalize_direction(dirs[i]);
    const UnitVector v = to_cartesian(d);
    const double itd = woodworth_itd_seconds(d);
    const auto onset_left = static_cast<std::size_t>(
        std::llround(offset + (max_itd - itd) / 2.0 * fs_hz * delay_scale));
    const auto onset_right = static_cast<std::size_t>(
        std::llround(offset + (max_itd + itd) / 2.0 * fs_hz * delay_scale));
    const double gain_left = std::pow(10.0, 5.0 * v.y / 20.0);
    const double gain_right = std::pow(10.0, -5.0 * v.y / 20.0);
    const auto echo = static_cast<std::size_t>(3 + std::llround(3.0 * (1.0 - v.z)));

    std::uint64_t state = seed ^ (0xD1B54A32D192ED03ull * (i + 1));
    const auto make_ear = [&](std::size_t onset, double gain) {
      std::vector<double> ir(ir_length_samples, 0.0);
      ir[onset] += gain;
      ir[onset + echo] -= 0.25 * gain;
      for (std::size_t k = onset + 1; k < ir_length_samples; ++k) {
        const double env = std::exp(-static_cast<double>(k - onset) / tail_decay);
        ir[k] += 0.02 * gain * env * uniform_pm1(state);
      }
      for (double& s : ir) s = to_float_precision(s);
      return ir;
    };
    IRPoint p;
    p.direction = d;
    p.left = make_ear(onset_left, gain_left);
    p.right = make_ear(onset_right, gain_right);
    points.push_back(std::move(p));
  }
  return IRSet(std::move(subject_id), type, sample_rate_hz, std::move(points));
}

}  // namespace binamix
