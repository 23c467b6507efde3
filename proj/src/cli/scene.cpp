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

#include "binamix/cli/scene.hpp"

#include <fstream>
#include <sstream>

#include "binamix/dsp.hpp"
#include "binamix/errors.hpp"
#include "binamix/layouts.hpp"
#include "binamix/wav.hpp"
#include "json_fields.hpp"

namespace binamix::cli {

namespace fs = std::filesystem;
using detail::find;
using detail::Json;

Scene parse_scene(std::string_view json_text, std::vector<fs::path>* audio_paths) {
  const Json doc = detail::parse_json(json_text, "scene");
  detail::check_schema(doc, kSceneSchema, "scene");

  Scene s;
  MixConfig& c = s.config;
  if (const Json* v = find(doc, "subject")) c.subject_id = detail::get_string(*v, "scene.subject");
  if (const Json* v = find(doc, "ir_type")) {
    const std::string t = detail::get_string(*v, "scene.ir_type");
    c.ir_type = detail::with_field("scene.ir_type", [&] { return parse_ir_type(t); });
  }
  if (const Json* v = find(doc, "sample_rate")) {
    c.sample_rate_hz = static_cast<int>(detail::get_integer(*v, "scene.sample_rate"));
  }
  if (const Json* v = find(doc, "speaker_layout"); v && !v->is_null()) {
    const std::string name = detail::get_string(*v, "scene.speaker_layout");
    if (name != "none") {
      get_layout(name);
      c.speaker_layout = name;
    }
  }
  if (const Json* v = find(doc, "mode")) {
    const std::string m = detail::get_string(*v, "scene.mode");
    c.interpolation_mode =
        detail::with_field("scene.mode", [&] { return parse_interpolation_mode(m); });
  }
  if (const Json* v = find(doc, "reverb_type")) {
    c.reverb_type = static_cast<int>(detail::get_integer(*v, "scene.reverb_type"));
    detail::with_field("scene.reverb_type", [&] { return reverb_name(c.reverb_type); });
  }
  if (const Json* v = find(doc, "keep_tail")) c.keep_tail = detail::get_bool(*v, "scene.keep_tail");
  if (const Json* v = find(doc, "normalize")) {
    const std::string n = detail::get_string(*v, "scene.normalize");
    c.normalize = detail::with_field("scene.normalize", [&] { return parse_normalize(n); });
  }
  if (const Json* v = find(doc, "seed")) {
    const auto seed = detail::get_integer(*v, "scene.seed");
    if (seed < 0) detail::bad_field("scene.seed", "must not be negative");
    s.seed = static_cast<std::uint64_t>(seed);
  }
  if (const Json* v = find(doc, "mixer")) {
    const std::string m = detail::get_string(*v, "scene.mixer");
    if (m == "binaural") s.mixer = MixerKind::kBinaural;
    else if (m == "stereo") s.mixer = MixerKind::kStereo;
    else detail::bad_field("scene.mixer", "expected \"binaural\" or \"stereo\"");
  }

  const Json* tracks = find(doc, "tracks");
  if (!tracks || !tracks->is_array() || tracks->empty()) {
    detail::bad_field("scene.tracks", "expected a non-empty array");
  }
  for (std::size_t i = 0; i < tracks->size(); ++i) {
    const Json& t = (*tracks)[i];
    const std::string where = "scene.tracks[" + std::to_string(i) + "]";
    if (!t.is_object()) detail::bad_field(where, "expected an object");
    TrackObject obj;
    obj.name = "track" + std::to_string(i + 1);
    if (const Json* v = find(t, "name")) obj.name = detail::get_string(*v, where + ".name");
    const Json* audio = find(t, "audio");
    if (!audio) detail::bad_field(where, "missing \"audio\"");
    if (audio_paths) audio_paths->emplace_back(detail::get_string(*audio, where + ".audio"));
    if (const Json* v = find(t, "level")) obj.level = detail::get_number(*v, where + ".level");
    if (const Json* v = find(t, "reverb")) obj.reverb = detail::get_number(*v, where + ".reverb");
    if (const Json* v = find(t, "azimuth")) obj.azimuth_deg = detail::get_number(*v, where + ".azimuth");
    if (const Json* v = find(t, "elevation")) {
      obj.elevation_deg = detail::get_number(*v, where + ".elevation");
    }
    double pan = 0.0;
    if (const Json* v = find(t, "pan")) pan = detail::get_number(*v, where + ".pan");
    s.tracks.push_back(std::move(obj));
    s.pans.push_back(pan);
  }
  return s;
}

AudioBuffer load_mono_source(const fs::path& path) {
  AudioBuffer a = wav::read(path).audio;
  if (a.num_channels() == 1) return a;
  if (a.num_channels() == 2) {
    warn(path.string() + " is stereo; averaging to mono");
    std::vector<double> mono(a.num_frames());
    for (std::size_t k = 0; k < mono.size(); ++k) {
      mono[k] = 0.5 * (a.channels[0][k] + a.channels[1][k]);
    }
    return AudioBuffer::mono(a.sample_rate_hz, std::move(mono));
  }
  throw Error(ErrorCode::kFormat, path.string() + ": expected a mono or stereo source, found " +
                                      std::to_string(a.num_channels()) + " channels");
}

Scene load_scene(const fs::path& scene_file) {
  std::ifstream in(scene_file, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "scene file not found: " + scene_file.string());
  std::ostringstream text;
  text << in.rdbuf();
  std::vector<fs::path> paths;
  Scene s = parse_scene(text.str(), &paths);
  const fs::path base = scene_file.parent_path();
  for (std::size_t i = 0; i < s.tracks.size(); ++i) {
    s.tracks[i].audio = load_mono_source(base / paths[i]);
  }
  return s;
}

}  // namespace binamix::cli
