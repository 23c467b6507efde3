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

#include "binamix/cli/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <thread>
#include <variant>

#include "binamix/cli/scene.hpp"
#include "binamix/dsp.hpp"
#include "binamix/errors.hpp"
#include "binamix/layouts.hpp"
#include "json_fields.hpp"

namespace binamix::cli {

namespace fs = std::filesystem;
using detail::find;
using detail::Json;

namespace {

std::string shortest(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string_view format_name(wav::SampleFormat f) {
  switch (f) {
    case wav::SampleFormat::kPcm16: return "pcm16";
    case wav::SampleFormat::kPcm24: return "pcm24";
    case wav::SampleFormat::kFloat32: return "float32";
  }
  return "pcm24";
}

// "12.5" with at least `width` integer digits and 'p' for the point.
std::string angle_token(double v, int width) {
  std::string s = shortest(std::abs(v));
  const auto dot = s.find('.');
  std::string whole = s.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : "p" + s.substr(dot + 1);
  while (static_cast<int>(whole.size()) < width) whole.insert(0, "0");
  return whole + frac;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

template <typename T, typename F>
std::vector<T> read_axis(const Json& doc, const char* key, F&& convert) {
  const std::string where = std::string("grid.") + key;
  const Json* v = find(doc, key);
  if (!v) detail::bad_field(where, "missing axis");
  if (!v->is_array() || v->empty()) detail::bad_field(where, "expected a non-empty array");
  std::vector<T> out;
  for (std::size_t i = 0; i < v->size(); ++i) {
    out.push_back(convert((*v)[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

template <typename T, typename Key>
void require_distinct(const std::vector<T>& axis, const char* key, Key&& key_of) {
  std::set<std::string> seen;
  for (const auto& v : axis) {
    if (!seen.insert(key_of(v)).second) {
      detail::bad_field(std::string("grid.") + key, "duplicate value " + key_of(v));
    }
  }
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  return s;
}

struct JobResult {
  bool ok = false;
  std::string error;
  std::string output;
  std::string mode_used;
  double peak = 0.0;
  bool clipped = false;
};

template <typename T>
using Loaded = std::variant<std::shared_ptr<const T>, std::string>;

template <typename T, typename F>
Loaded<T> try_load(F&& f) {
  try {
    return std::make_shared<const T>(f());
  } catch (const std::exception& e) {
    return std::string(e.what());
  }
}

std::string set_key(const std::string& subject, IRType type, int rate) {
  return subject + "/" + std::string(to_string(type)) + "/" + std::to_string(rate);
}

}  // namespace

std::size_t DatasetGrid::job_count() const {
  return azimuths.size() * elevations.size() * subjects.size() * ir_types.size() *
         sample_rates.size() * layouts.size() * modes.size() * levels.size() *
         reverb_amounts.size() * reverb_types.size() * sources.size();
}

DatasetGrid parse_grid(std::string_view json_text, const fs::path& base_dir) {
  const Json doc = detail::parse_json(json_text, "grid");
  detail::check_schema(doc, kGridSchema, "grid");
  DatasetGrid g;
  g.base_dir = base_dir;
  const auto number = [](const Json& v, const std::string& w) { return detail::get_number(v, w); };
  const auto string = [](const Json& v, const std::string& w) { return detail::get_string(v, w); };

  g.azimuths = read_axis<double>(doc, "azimuths", number);
  g.elevations = read_axis<double>(doc, "elevations", number);
  for (double a : g.azimuths)
    if (!std::isfinite(a)) detail::bad_field("grid.azimuths", "non-finite value");
  for (double e : g.elevations)
    if (!std::isfinite(e)) detail::bad_field("grid.elevations", "non-finite value");
  g.subjects = read_axis<std::string>(doc, "subjects", string);
  g.ir_types = read_axis<IRType>(doc, "ir_types", [](const Json& v, const std::string& w) {
    const std::string s = detail::get_string(v, w);
    return detail::with_field(w, [&] { return parse_ir_type(s); });
  });
  g.sample_rates = read_axis<int>(doc, "sample_rates", [](const Json& v, const std::string& w) {
    const auto r = detail::get_integer(v, w);
    if (!is_supported_sample_rate(static_cast<int>(r))) {
      detail::bad_field(w, "unsupported sample rate " + std::to_string(r));
    }
    return static_cast<int>(r);
  });
  g.layouts = read_axis<std::optional<std::string>>(
      doc, "layouts", [](const Json& v, const std::string& w) -> std::optional<std::string> {
        if (v.is_null()) return std::nullopt;
        const std::string s = detail::get_string(v, w);
        if (s == "none") return std::nullopt;
        get_layout(s);
        return s;
      });
  g.modes = read_axis<InterpolationMode>(doc, "modes", [](const Json& v, const std::string& w) {
    const std::string s = detail::get_string(v, w);
    return detail::with_field(w, [&] { return parse_interpolation_mode(s); });
  });
  const auto unit = [](const Json& v, const std::string& w) {
    const double x = detail::get_number(v, w);
    if (!(x >= 0.0 && x <= 1.0)) detail::bad_field(w, "must be in [0, 1]");
    return x;
  };
  g.levels = read_axis<double>(doc, "levels", unit);
  g.reverb_amounts = read_axis<double>(doc, "reverb_amounts", unit);
  g.reverb_types = read_axis<int>(doc, "reverb_types", [](const Json& v, const std::string& w) {
    const int id = static_cast<int>(detail::get_integer(v, w));
    detail::with_field(w, [&] { return reverb_name(id); });
    return id;
  });
  g.sources = read_axis<std::string>(doc, "sources", string);

  require_distinct(g.azimuths, "azimuths", shortest);
  require_distinct(g.elevations, "elevations", shortest);
  require_distinct(g.subjects, "subjects", [](const std::string& s) { return s; });
  require_distinct(g.ir_types, "ir_types", [](IRType t) { return std::string(to_string(t)); });
  require_distinct(g.sample_rates, "sample_rates", [](int r) { return std::to_string(r); });
  require_distinct(g.layouts, "layouts",
                   [](const std::optional<std::string>& l) { return l.value_or("none"); });
  require_distinct(g.modes, "modes",
                   [](InterpolationMode m) { return std::string(to_string(m)); });
  require_distinct(g.levels, "levels", shortest);
  require_distinct(g.reverb_amounts, "reverb_amounts", shortest);
  require_distinct(g.reverb_types, "reverb_types", [](int r) { return std::to_string(r); });
  require_distinct(g.sources, "sources", [](const std::string& s) { return s; });

  if (const Json* v = find(doc, "seed")) {
    const auto seed = detail::get_integer(*v, "grid.seed");
    if (seed < 0) detail::bad_field("grid.seed", "must not be negative");
    g.seed = static_cast<std::uint64_t>(seed);
  }
  if (const Json* v = find(doc, "output_format")) {
    const std::string f = detail::get_string(*v, "grid.output_format");
    g.output_format = detail::with_field("grid.output_format",
                                         [&] { return wav::parse_sample_format(f); });
  }
  if (const Json* v = find(doc, "normalize")) {
    const std::string n = detail::get_string(*v, "grid.normalize");
    g.normalize = detail::with_field("grid.normalize", [&] { return parse_normalize(n); });
  }
  if (const Json* v = find(doc, "keep_tail")) g.keep_tail = detail::get_bool(*v, "grid.keep_tail");
  return g;
}

DatasetGrid load_grid(const fs::path& grid_file) {
  std::ifstream in(grid_file, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "grid file not found: " + grid_file.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_grid(text.str(), grid_file.parent_path());
}

std::vector<DatasetJob> expand_grid(const DatasetGrid& g) {
  std::vector<DatasetJob> jobs;
  jobs.reserve(g.job_count());
  for (const auto& subject : g.subjects)
    for (IRType type : g.ir_types)
      for (int rate : g.sample_rates)
        for (const auto& layout : g.layouts)
          for (InterpolationMode mode : g.modes)
            for (const auto& source : g.sources)
              for (double az : g.azimuths)
                for (double el : g.elevations)
                  for (double level : g.levels)
                    for (int rtype : g.reverb_types)
                      for (double amount : g.reverb_amounts) {
                        DatasetJob j;
                        j.index = jobs.size();
                        j.subject = subject;
                        j.ir_type = type;
                        j.sample_rate_hz = rate;
                        j.layout = layout;
                        j.mode = mode;
                        j.source = source;
                        j.azimuth_deg = az;
                        j.elevation_deg = el;
                        j.level = level;
                        j.reverb_type = rtype;
                        j.reverb_amount = amount;
                        jobs.push_back(std::move(j));
                      }
  return jobs;
}

std::string job_filename(const DatasetJob& j, const DatasetGrid& g) {
  const Direction d = normalize_direction(j.azimuth_deg, j.elevation_deg);
  std::string rest = "az=" + shortest(j.azimuth_deg) + ";el=" + shortest(j.elevation_deg) +
                     ";level=" + shortest(j.level) + ";reverb=" + shortest(j.reverb_amount) +
                     ";reverb_type=" + std::to_string(j.reverb_type) + ";source=" + j.source +
                     ";seed=" + std::to_string(g.seed) +
                     ";normalize=" + std::string(to_string(g.normalize)) +
                     ";keep_tail=" + (g.keep_tail ? "1" : "0") +
                     ";format=" + std::string(format_name(g.output_format));
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(rest)));
  std::string name = j.subject;
  name += "_" + std::string(to_string(j.ir_type));
  name += "_" + std::to_string(j.sample_rate_hz);
  name += "_" + j.layout.value_or("none");
  name += "_" + std::string(to_string(j.mode));
  name += "_az" + angle_token(d.azimuth_deg, 3);
  name += std::string("_el") + (d.elevation_deg < 0 ? "-" : "+") + angle_token(d.elevation_deg, 2);
  name += "_" + std::string(hash) + ".wav";
  return name;
}

MixConfig job_config(const DatasetJob& j, const DatasetGrid& g) {
  MixConfig c;
  c.subject_id = j.subject;
  c.sample_rate_hz = j.sample_rate_hz;
  c.ir_type = j.ir_type;
  c.speaker_layout = j.layout;
  c.interpolation_mode = j.mode;
  c.reverb_type = j.reverb_type;
  c.keep_tail = g.keep_tail;
  c.normalize = g.normalize;
  return c;
}

DatasetSummary run_dataset(const DatasetGrid& grid, const DatasetOptions& options,
                           std::ostream& log) {
  const std::size_t total = grid.job_count();
  log << "dataset: " << total << " jobs = " << grid.subjects.size() << " subjects x "
      << grid.ir_types.size() << " IR types x " << grid.sample_rates.size() << " rates x "
      << grid.layouts.size() << " layouts x " << grid.modes.size() << " modes x "
      << grid.sources.size() << " sources x " << grid.azimuths.size() << " azimuths x "
      << grid.elevations.size() << " elevations x " << grid.levels.size() << " levels x "
      << grid.reverb_types.size() << " reverb types x " << grid.reverb_amounts.size()
      << " reverb amounts\n";
  if (total > options.job_cap && !options.force) {
    throw Error(ErrorCode::kInvalidArgument,
                std::to_string(total) + " jobs exceed the cap of " +
                    std::to_string(options.job_cap) + "; pass --force to render anyway");
  }

  const std::vector<DatasetJob> jobs = expand_grid(grid);
  fs::create_directories(options.out_dir);

  // Shared inputs are loaded once, up front; failures are kept as messages
  // and attached to every job that needs them.
  std::map<std::string, Loaded<IRSet>> sets;
  for (const auto& s : grid.subjects)
    for (IRType t : grid.ir_types)
      for (int r : grid.sample_rates)
        sets.emplace(set_key(s, t, r),
                     try_load<IRSet>([&] { return load_ir_set(options.data_root, s, t, r); }));
  std::map<int, Loaded<ReverbBank>> banks;
  for (int r : grid.sample_rates)
    banks.emplace(r, try_load<ReverbBank>(
                         [&] { return ReverbBank::load(options.data_root, r, grid.seed); }));
  std::map<std::string, Loaded<AudioBuffer>> sources;
  for (const auto& src : grid.sources)
    sources.emplace(src, try_load<AudioBuffer>(
                             [&] { return load_mono_source(grid.base_dir / src); }));

  std::vector<JobResult> results(jobs.size());
  const auto run_one = [&](const DatasetJob& j) {
    JobResult& r = results[j.index];
    r.output = job_filename(j, grid);
    try {
      const auto& set = sets.at(set_key(j.subject, j.ir_type, j.sample_rate_hz));
      if (auto* e = std::get_if<std::string>(&set)) throw std::runtime_error(*e);
      const auto& bank = banks.at(j.sample_rate_hz);
      if (auto* e = std::get_if<std::string>(&bank)) throw std::runtime_error(*e);
      const auto& src = sources.at(j.source);
      if (auto* e = std::get_if<std::string>(&src)) throw std::runtime_error(*e);

      TrackObject t;
      t.name = fs::path(j.source).stem().string();
      t.audio = *std::get<0>(src);
      t.level = j.level;
      t.reverb = j.reverb_amount;
      t.azimuth_deg = j.azimuth_deg;
      t.elevation_deg = j.elevation_deg;
      const MixResult m = mix_tracks_binaural(std::span(&t, 1), job_config(j, grid),
                                              *std::get<0>(set), *std::get<0>(bank));
      wav::write(options.out_dir / r.output, m.audio, grid.output_format);
      r.peak = m.peak;
      r.clipped = m.clipped_samples > 0;
      r.mode_used = std::string(to_string(m.tracks.front().plan->mode_used));
      r.ok = true;
    } catch (const std::exception& e) {
      r.ok = false;
      r.error = sanitize(e.what());
      r.output.clear();
    }
  };

  unsigned width = options.jobs != 0 ? options.jobs : std::thread::hardware_concurrency();
  width = std::max(1u, std::min<unsigned>(width, static_cast<unsigned>(jobs.size())));
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) run_one(jobs[i]);
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < width; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  DatasetSummary summary;
  summary.total = jobs.size();
  summary.manifest = options.out_dir / kDatasetManifestName;
  std::ofstream out(summary.manifest, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + summary.manifest.string());
  out << "index\tstatus\tsubject\tir_type\tsample_rate\tlayout\tmode\tmode_used\tazimuth\t"
         "elevation\tlevel\treverb_amount\treverb_type\tsource\tseed\tnormalize\tkeep_tail\t"
         "output_format\toutput\tpeak\tclipped\tcondition\terror\n";
  for (const auto& j : jobs) {
    const JobResult& r = results[j.index];
    if (!r.ok) {
      ++summary.failed;
      log << "job " << j.index << " failed: " << r.error << '\n';
    }
    out << j.index << '\t' << (r.ok ? "ok" : "failed") << '\t' << j.subject << '\t'
        << to_string(j.ir_type) << '\t' << j.sample_rate_hz << '\t' << j.layout.value_or("none")
        << '\t' << to_string(j.mode) << '\t' << r.mode_used << '\t' << shortest(j.azimuth_deg)
        << '\t' << shortest(j.elevation_deg) << '\t' << shortest(j.level) << '\t'
        << shortest(j.reverb_amount) << '\t' << j.reverb_type << '\t' << j.source << '\t'
        << grid.seed << '\t' << to_string(grid.normalize) << '\t'
        << (grid.keep_tail ? "true" : "false") << '\t' << format_name(grid.output_format)
        << '\t' << r.output << '\t' << (r.ok ? shortest(r.peak) : "") << '\t'
        << (r.ok ? (r.clipped ? "1" : "0") : "") << '\t' << "" << '\t' << r.error << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "short write to " + summary.manifest.string());
  log << "dataset: " << (summary.total - summary.failed) << "/" << summary.total
      << " jobs rendered, manifest " << summary.manifest.string() << '\n';
  return summary;
}

}  // namespace binamix::cli
