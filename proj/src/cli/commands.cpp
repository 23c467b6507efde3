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

#include "binamix/cli/commands.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "binamix/cli/dataset.hpp"
#include "binamix/cli/scene.hpp"
#include "binamix/cli/svg_plot.hpp"
#include "binamix/dsp.hpp"
#include "binamix/errors.hpp"
#include "binamix/layouts.hpp"
#include "binamix/mixer.hpp"

namespace binamix::cli {

namespace fs = std::filesystem;

namespace {

// Routes library warnings to err and turns any escaping exception into a
// single diagnostic line and exit code 1.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  ScopedWarningSink sink([&err](std::string_view msg) { err << "warning: " << msg << '\n'; });
  try {
    return body();
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (char& c : msg)
      if (c == '\n') c = ' ';
    err << "error: " << msg << '\n';
    return 1;
  }
}

void ensure_parent(const fs::path& file) {
  const fs::path parent = file.parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) {
    throw Error(ErrorCode::kIo,
                "cannot create directory " + parent.string() + ": " + ec.message());
  }
}

void write_output(const fs::path& path, const AudioBuffer& audio, wav::SampleFormat format) {
  ensure_parent(path);
  wav::write(path, audio, format);
}

void report_result(std::ostream& out, const MixResult& r, const fs::path& path) {
  out << "wrote " << path.string() << ": " << r.audio.num_frames() << " frames at "
      << r.audio.sample_rate_hz << " Hz, peak " << r.peak;
  if (r.normalization_gain != 1.0) out << " (gain " << r.normalization_gain << ')';
  out << ", " << r.clipped_samples << " clipped samples\n";
}

// Plans over a layout index its speakers (LFE omitted), not the full set.
DirectionSet speaker_points(const std::string& layout) {
  return DirectionSet(speaker_directions(get_layout(layout)));
}

}  // namespace

int cmd_mix(const MixArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Scene scene = load_scene(args.scene);
    MixConfig& cfg = scene.config;
    if (args.mode) cfg.interpolation_mode = parse_interpolation_mode(*args.mode);
    if (args.subject) cfg.subject_id = *args.subject;
    if (args.ir_type) cfg.ir_type = parse_ir_type(*args.ir_type);
    if (args.rate) cfg.sample_rate_hz = *args.rate;
    if (args.layout) {
      if (*args.layout == "none") {
        cfg.speaker_layout.reset();
      } else {
        get_layout(*args.layout);
        cfg.speaker_layout = *args.layout;
      }
    }
    if (args.normalize) cfg.normalize = parse_normalize(*args.normalize);
    if (args.seed) scene.seed = *args.seed;

    const ReverbBank reverbs = ReverbBank::load(args.data_root, cfg.sample_rate_hz, scene.seed);
    MixResult r;
    if (scene.mixer == MixerKind::kStereo) {
      r = mix_tracks_stereo(scene.tracks, scene.pans, cfg, reverbs);
      for (std::size_t i = 0; i < scene.tracks.size(); ++i) {
        const PanGains g = pan_constant_power(scene.pans[i]);
        out << "track " << scene.tracks[i].name << ": pan=" << scene.pans[i]
            << " left=" << g.left << " right=" << g.right << '\n';
      }
    } else {
      const IRSet set =
          load_ir_set(args.data_root, cfg.subject_id, cfg.ir_type, cfg.sample_rate_hz);
      r = mix_tracks_binaural(scene.tracks, cfg, set, reverbs);
      const DirectionSet points =
          cfg.speaker_layout ? speaker_points(*cfg.speaker_layout) : set.directions();
      for (const auto& t : r.tracks) {
        out << "track " << t.name << ": " << (t.plan ? describe(*t.plan, points) : "unspatialized")
            << '\n';
      }
    }
    write_output(args.out_wav, r.audio, args.format);
    report_result(out, r, args.out_wav);
    return 0;
  });
}

int cmd_render_surround(const RenderSurroundArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SpeakerLayout& in = get_layout(args.input_layout);
    get_layout(args.output_layout);
    const AudioBuffer program = wav::read(args.in_wav).audio;
    if (program.num_channels() != in.num_channels()) {
      throw Error(ErrorCode::kFormat, args.in_wav.string() + " has " +
                                          std::to_string(program.num_channels()) +
                                          " channels; layout " + in.name + " expects " +
                                          std::to_string(in.num_channels()));
    }
    MixConfig cfg;
    cfg.subject_id = args.subject;
    cfg.ir_type = parse_ir_type(args.ir_type);
    cfg.sample_rate_hz = args.rate;
    cfg.interpolation_mode = parse_interpolation_mode(args.mode);
    cfg.normalize = parse_normalize(args.normalize);
    const IRSet set = load_ir_set(args.data_root, cfg.subject_id, cfg.ir_type, cfg.sample_rate_hz);
    const MixResult r =
        render_surround_to_binaural(program, args.input_layout, args.output_layout, cfg, set);
    const bool same = args.input_layout == args.output_layout;
    const DirectionSet points = same ? set.directions() : speaker_points(args.output_layout);
    for (const auto& t : r.tracks) {
      out << "channel " << t.name << ": "
          << (t.plan ? describe(*t.plan, points) : "LFE to both ears") << '\n';
    }
    write_output(args.out_wav, r.audio, args.format);
    report_result(out, r, args.out_wav);
    return 0;
  });
}

int cmd_dataset(const DatasetArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const DatasetGrid grid = load_grid(args.grid);
    DatasetOptions options;
    options.data_root = args.data_root;
    options.out_dir = args.out_dir;
    options.jobs = args.jobs;
    options.force = args.force;
    const DatasetSummary s = run_dataset(grid, options, out);
    if (s.failed > 0) {
      err << "error: " << s.failed << " of " << s.total << " jobs failed; see "
          << s.manifest.string() << '\n';
      return 1;
    }
    return 0;
  });
}

int cmd_triangulate(const TriangulateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const int sources = (args.data_root ? 1 : 0) + (args.layout ? 1 : 0) +
                        (args.distribution ? 1 : 0);
    if (sources != 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "give exactly one point source: --data-root, --layout or --distribution");
    }
    DirectionSet points;
    std::vector<std::string> labels;
    std::string title;
    if (args.layout) {
      const SpeakerLayout& layout = get_layout(*args.layout);
      points = speaker_points(*args.layout);
      for (const auto& ch : layout.channels)
        if (!ch.is_lfe()) labels.push_back(ch.label);
      title = layout.name + " layout";
    } else if (args.distribution) {
      points = DirectionSet(distribution_points(parse_distribution(*args.distribution)));
      title = *args.distribution;
    } else {
      const IRSet set = load_ir_set(*args.data_root, args.subject, parse_ir_type(args.ir_type),
                                    args.rate);
      points = set.directions();
      title = args.subject + " " + args.ir_type + " " + std::to_string(args.rate) + " Hz";
    }

    const Direction query = normalize_direction(args.azimuth, args.elevation);
    const InterpolationPlan p = plan(points, query, parse_interpolation_mode(args.mode));

    out << std::setprecision(10);
    out << "points: " << points.size() << '\n';
    out << "query: " << to_string(query) << '\n';
    out << "mode: " << to_string(p.mode_used) << '\n';
    if (p.triangle) {
      out << "frame: " << to_string(p.triangle->frame())
          << " (azimuth rotation: " << (p.triangle->rotated_azimuth ? "yes" : "no")
          << ", elevation rotation: " << (p.triangle->rotated_elevation ? "yes" : "no") << ")\n";
    } else {
      out << "frame: none\n";
    }
    double sum = 0.0;
    for (const auto& e : p.entries) {
      out << "vertex " << e.point_index;
      if (e.point_index < labels.size()) out << " (" << labels[e.point_index] << ')';
      out << ": " << to_string(points[e.point_index]) << " weight " << e.weight << '\n';
      sum += e.weight;
    }
    out << "weight sum: " << sum << '\n';
    out << "achieved: " << to_string(p.achieved_direction) << " error " << p.achieved_error_deg
        << " deg\n";
    for (const auto& w : p.warnings) out << "note: " << w << '\n';

    ensure_parent(args.plot);
    std::ofstream svg(args.plot, std::ios::binary);
    if (!svg) throw Error(ErrorCode::kIo, "cannot write " + args.plot.string());
    svg << triangulation_svg(points, p, title, labels);
    svg.close();
    if (!svg) throw Error(ErrorCode::kIo, "short write to " + args.plot.string());
    out << "plot: " << args.plot.string() << '\n';
    return 0;
  });
}

int cmd_import_sadie(const ImportArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ImportOptions options;
    options.filename_pattern = args.pattern;
    options.copy_files = args.copy;
    options.azimuth_offset_deg = args.azimuth_offset;
    options.elevation_is_inclination = args.inclination;
    const ImportReport report = import_sadie(args.source_dir, args.data_root, args.subject,
                                             parse_ir_type(args.ir_type), args.rate, options);
    for (const auto& w : report.warnings) err << "warning: " << w << '\n';
    out << "imported " << report.manifest.entries.size() << " directions into "
        << report.manifest_path.string() << '\n';
    return 0;
  });
}

int cmd_synth_irs(const SynthArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const IRSet set = synthesize_ir_set(parse_distribution(args.distribution), args.rate,
                                        args.length, args.seed, args.subject,
                                        parse_ir_type(args.ir_type));
    const IRManifest m = write_ir_set(set, args.data_root);
    out << "wrote " << m.entries.size() << " directions to "
        << (ir_set_directory(args.data_root, args.subject, set.ir_type(), args.rate) /
            kManifestFileName)
               .string()
        << '\n';
    return 0;
  });
}

int cmd_layouts(const LayoutsArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<std::string_view> names;
    if (args.name) {
      get_layout(*args.name);
      names.push_back(*args.name);
    } else {
      names.assign(kSupportedLayouts.begin(), kSupportedLayouts.end());
    }
    for (std::size_t n = 0; n < names.size(); ++n) {
      const SpeakerLayout& layout = get_layout(names[n]);
      if (n) out << '\n';
      out << "# " << layout.name << '\n';
      out << "channel\tlabel\tazimuth\televation\n";
      for (std::size_t c = 0; c < layout.channels.size(); ++c) {
        const Channel& ch = layout.channels[c];
        out << c << '\t' << ch.label << '\t';
        if (ch.is_lfe()) {
          out << "-\t-\n";
        } else {
          out << ch.position->azimuth_deg << '\t' << ch.position->elevation_deg << '\n';
        }
      }
    }
    return 0;
  });
}

}  // namespace binamix::cli
