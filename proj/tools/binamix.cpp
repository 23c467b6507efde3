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

// binamix: command-line front end for mixing, surround rendering, dataset
// generation and triangulation plots.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "binamix/cli/commands.hpp"
#include "binamix/errors.hpp"

namespace {

using binamix::wav::SampleFormat;

// --format as a string validated here, so a bad value is a usage error.
void add_format(CLI::App* app, std::string& format) {
  app->add_option("--format", format, "Output sample format")
      ->check(CLI::IsMember({"pcm16", "pcm24", "float32"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = binamix::cli;

  CLI::App app{"Binaural mixing, surround rendering and dataset generation"};
  app.require_subcommand(1);

  cli::MixArgs mix;
  std::string mix_format = "pcm24";
  auto* mix_cmd = app.add_subcommand("mix", "Render a scene file to a binaural stereo WAV");
  mix_cmd->add_option("scene", mix.scene, "Scene file (JSON)")->required();
  mix_cmd->add_option("out", mix.out_wav, "Output WAV")->required();
  mix_cmd->add_option("--data-root", mix.data_root, "IR data root")->required();
  mix_cmd->add_option("--mode", mix.mode, "Interpolation mode");
  mix_cmd->add_option("--subject", mix.subject, "Subject id");
  mix_cmd->add_option("--ir-type", mix.ir_type, "HRIR or BRIR");
  mix_cmd->add_option("--rate", mix.rate, "Sample rate in Hz");
  mix_cmd->add_option("--layout", mix.layout, "Speaker layout to simulate, or none");
  mix_cmd->add_option("--normalize", mix.normalize, "off or peak");
  mix_cmd->add_option("--seed", mix.seed, "Seed of the synthetic reverbs");
  add_format(mix_cmd, mix_format);

  cli::RenderSurroundArgs rs;
  std::string rs_format = "pcm24";
  auto* rs_cmd = app.add_subcommand("render-surround",
                                    "Render a channel-encoded surround WAV to binaural");
  rs_cmd->add_option("in", rs.in_wav, "Input surround WAV")->required();
  rs_cmd->add_option("out", rs.out_wav, "Output WAV")->required();
  rs_cmd->add_option("--input-layout", rs.input_layout, "Layout of the input channels")
      ->required();
  rs_cmd->add_option("--output-layout", rs.output_layout,
                     "Layout to render through (defaults to the input layout)");
  rs_cmd->add_option("--data-root", rs.data_root, "IR data root")->required();
  rs_cmd->add_option("--subject", rs.subject)->capture_default_str();
  rs_cmd->add_option("--ir-type", rs.ir_type)->capture_default_str();
  rs_cmd->add_option("--rate", rs.rate)->capture_default_str();
  rs_cmd->add_option("--mode", rs.mode)->capture_default_str();
  rs_cmd->add_option("--normalize", rs.normalize)->capture_default_str();
  add_format(rs_cmd, rs_format);

  cli::DatasetArgs ds;
  auto* ds_cmd = app.add_subcommand("dataset", "Render every combination of a dataset grid");
  ds_cmd->add_option("grid", ds.grid, "Grid file (JSON)")->required();
  ds_cmd->add_option("out_dir", ds.out_dir, "Output directory")->required();
  ds_cmd->add_option("--data-root", ds.data_root, "IR data root")->required();
  ds_cmd->add_option("--jobs", ds.jobs, "Worker threads (0 = all cores)")
      ->capture_default_str();
  ds_cmd->add_flag("--force", ds.force, "Render grids above the job cap");

  cli::TriangulateArgs tri;
  auto* tri_cmd = app.add_subcommand("triangulate",
                                     "Plan one query and plot the triangulation as SVG");
  tri_cmd->add_option("plot", tri.plot, "Output SVG")->required();
  tri_cmd->add_option("--azimuth", tri.azimuth)->capture_default_str();
  tri_cmd->add_option("--elevation", tri.elevation)->capture_default_str();
  tri_cmd->add_option("--mode", tri.mode)->capture_default_str();
  tri_cmd->add_option("--data-root", tri.data_root, "Use a stored IR set");
  tri_cmd->add_option("--subject", tri.subject)->capture_default_str();
  tri_cmd->add_option("--ir-type", tri.ir_type)->capture_default_str();
  tri_cmd->add_option("--rate", tri.rate)->capture_default_str();
  tri_cmd->add_option("--layout", tri.layout, "Use a layout's speaker directions");
  tri_cmd->add_option("--distribution", tri.distribution,
                      "Use a synthetic distribution (lebedev50 or ring:<step>:<el>,...)");

  cli::LayoutsArgs lay;
  auto* lay_cmd = app.add_subcommand("layouts", "Print speaker layout tables");
  lay_cmd->add_option("name", lay.name, "Layout name (all when omitted)");

  cli::ImportArgs imp;
  bool reference_only = false;
  auto* imp_cmd = app.add_subcommand("import-sadie",
                                     "Build an IR set from per-direction stereo WAVs");
  imp_cmd->add_option("source_dir", imp.source_dir)->required();
  imp_cmd->add_option("--data-root", imp.data_root, "Destination IR data root")->required();
  imp_cmd->add_option("--subject", imp.subject)->required();
  imp_cmd->add_option("--ir-type", imp.ir_type)->capture_default_str();
  imp_cmd->add_option("--rate", imp.rate)->capture_default_str();
  imp_cmd->add_option("--pattern", imp.pattern, "File name template with <az> and <el>")
      ->capture_default_str();
  imp_cmd->add_flag("--reference", reference_only, "Reference the WAVs in place");
  imp_cmd->add_option("--azimuth-offset", imp.azimuth_offset)->capture_default_str();
  imp_cmd->add_flag("--inclination", imp.inclination, "Treat <el> as inclination from zenith");

  cli::SynthArgs syn;
  auto* syn_cmd = app.add_subcommand("synth-irs", "Write a synthetic HRIR-like set");
  syn_cmd->add_option("--data-root", syn.data_root)->required();
  syn_cmd->add_option("--distribution", syn.distribution)->capture_default_str();
  syn_cmd->add_option("--subject", syn.subject)->capture_default_str();
  syn_cmd->add_option("--ir-type", syn.ir_type)->capture_default_str();
  syn_cmd->add_option("--rate", syn.rate)->capture_default_str();
  syn_cmd->add_option("--length", syn.length, "IR length in samples")->capture_default_str();
  syn_cmd->add_option("--seed", syn.seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  auto& out = std::cout;
  auto& err = std::cerr;
  if (*mix_cmd) {
    mix.format = binamix::wav::parse_sample_format(mix_format);
    return cli::cmd_mix(mix, out, err);
  }
  if (*rs_cmd) {
    rs.format = binamix::wav::parse_sample_format(rs_format);
    if (rs.output_layout.empty()) rs.output_layout = rs.input_layout;
    return cli::cmd_render_surround(rs, out, err);
  }
  if (*ds_cmd) return cli::cmd_dataset(ds, out, err);
  if (*tri_cmd) return cli::cmd_triangulate(tri, out, err);
  if (*lay_cmd) return cli::cmd_layouts(lay, out, err);
  if (*imp_cmd) {
    imp.copy = !reference_only;
    return cli::cmd_import_sadie(imp, out, err);
  }
  if (*syn_cmd) return cli::cmd_synth_irs(syn, out, err);
  return 1;
}
