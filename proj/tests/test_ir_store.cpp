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

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "binamix/errors.hpp"
#include "binamix/ir_store.hpp"
#include "binamix/wav.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace binamix;
using namespace binamix::testing;
namespace fs = std::filesystem;

namespace {

IRPoint impulse_point(Direction d, std::size_t len = 8) {
  IRPoint p{d, std::vector<double>(len, 0.0), std::vector<double>(len, 0.0)};
  p.left[0] = 1.0;
  p.right[1] = 0.5;
  return p;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIo;
}

std::size_t first_nonzero(const std::vector<double>& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) return i;
  return v.size();
}

void check_same_buffers(const IRSet& a, const IRSet& b) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.point(i).left == b.point(i).left);
    CHECK(a.point(i).right == b.point(i).right);
  }
}

}  // namespace

TEST_CASE("IR type names") {
  CHECK(parse_ir_type("hrir") == IRType::kHRIR);
  CHECK(parse_ir_type("BRIR") == IRType::kBRIR);
  CHECK(to_string(IRType::kBRIR) == "BRIR");
  CHECK_THROWS_AS(parse_ir_type("SOFA"), Error);
}

TEST_CASE("IRSet validation") {
  const std::vector<IRPoint> ok = {impulse_point({0, 0}), impulse_point({120, 0}),
                                   impulse_point({240, 0})};
  CHECK_NOTHROW(IRSet("S", IRType::kHRIR, 48000, ok));
  CHECK(code_of([&] { IRSet("S", IRType::kHRIR, 22050, ok); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] {
          IRSet("S", IRType::kHRIR, 48000, {ok[0], ok[1]});
        }) == ErrorCode::kInvalidArgument);
  auto uneven = ok;
  uneven[1].right.push_back(0.0);
  CHECK_THROWS_AS(IRSet("S", IRType::kHRIR, 48000, uneven), Error);
  auto short_one = ok;
  short_one[2] = impulse_point({240, 0}, 4);
  CHECK_THROWS_AS(IRSet("S", IRType::kHRIR, 48000, short_one), Error);
  auto nonfinite = ok;
  nonfinite[0].left[3] = INFINITY;
  CHECK_THROWS_AS(IRSet("S", IRType::kHRIR, 48000, nonfinite), Error);
  auto dup = ok;
  dup.push_back(impulse_point({0.005, 0.0}));
  CHECK_THROWS_AS(IRSet("S", IRType::kHRIR, 48000, dup), Error);
}

TEST_CASE("IRSet normalizes directions and keeps order") {
  const IRSet s("S", IRType::kBRIR, 44100,
                {impulse_point({-30, 0}), impulse_point({30, 0}), impulse_point({0, 100})});
  CHECK(s.point(0).direction == Direction{330, 0});
  CHECK(s.point(1).direction == Direction{30, 0});
  CHECK(s.point(2).direction.azimuth_deg == doctest::Approx(180));
}

TEST_CASE("nearest_point examples") {
  const IRSet s = synthesize_ir_set(Lebedev50{}, 48000, 32, 1);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto [idx, dist] = nearest_point(s, s.point(i).direction);
    CHECK(idx == i);
    CHECK(dist == 0.0);
  }
  // One degree off a stored point, along the meridian.
  const Direction base = s.point(0).direction;
  const Direction q = normalize_direction(base.azimuth_deg, base.elevation_deg + 1.0);
  const auto [idx, dist] = nearest_point(s, q);
  CHECK(idx == scan_nearest(s.directions().directions(), q).first);
  CHECK(std::abs(dist - 1.0) < 1e-6);
  // Equidistant pair: the lower index wins.
  const IRSet pair("S", IRType::kHRIR, 48000,
                   {impulse_point({350, 0}), impulse_point({10, 0}), impulse_point({0, 80})});
  CHECK(nearest_point(pair, {0, 0}).first == 0);
  const IRSet swapped("S", IRType::kHRIR, 48000,
                      {impulse_point({10, 0}), impulse_point({350, 0}), impulse_point({0, 80})});
  CHECK(nearest_point(swapped, {0, 0}).first == 0);
}

TEST_CASE("property: nearest_point agrees with a linear scan") {
  const IRSet s = synthesize_ir_set(RingGrid{15.0, {-40, 0, 40}, true}, 48000, 32, 2);
  std::mt19937_64 rng(12);
  std::vector<Direction> queries;
  for (const auto& p : s.points()) queries.push_back(p.direction);
  for (int i = 0; i < 1000; ++i) queries.push_back(random_direction(rng));
  for (const Direction& q : queries) {
    const auto [idx, dist] = nearest_point(s, q);
    const auto [want, want_dist] = scan_nearest(s.directions().directions(), q);
    CHECK(std::abs(dist - want_dist) < 1e-9);
    if (idx != want) CHECK(std::abs(oracle_angle_deg(s.point(idx).direction, q) - want_dist) < 1e-9);
  }
}

TEST_CASE("synthesis is deterministic and seed-dependent") {
  const IRSet a = synthesize_ir_set(Lebedev50{}, 48000, 256, 7);
  const IRSet b = synthesize_ir_set(Lebedev50{}, 48000, 256, 7);
  check_same_buffers(a, b);
  const IRSet c = synthesize_ir_set(Lebedev50{}, 48000, 256, 8);
  CHECK(a.point(3).left != c.point(3).left);
  CHECK_THROWS_AS(synthesize_ir_set(Lebedev50{}, 48000, 16, 7), Error);
}

TEST_CASE("synthetic ITD follows the spherical-head model") {
  const IRSet s = synthesize_ir_set(RingGrid{30.0, {0.0}, true}, 48000, 256, 1);
  // (0, 0): equal onsets.
  CHECK(first_nonzero(s.point(0).left) == first_nonzero(s.point(0).right));
  // (90, 0): the source is on the left, so the left ear leads. Woodworth:
  // itd = r/c * (theta + sin theta) with theta = asin(y) = pi/2.
  const double expected = kHeadRadiusM / kSpeedOfSoundMps * (kPi / 2 + 1.0);
  CHECK(woodworth_itd_seconds({90, 0}) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(woodworth_itd_seconds({270, 0}) == doctest::Approx(-expected).epsilon(1e-12));
  CHECK(first_nonzero(s.point(3).left) < first_nonzero(s.point(3).right));
  CHECK(first_nonzero(s.point(9).left) > first_nonzero(s.point(9).right));
  // The lateral ear is also louder.
  const auto l = first_nonzero(s.point(3).left);
  const auto r = first_nonzero(s.point(3).right);
  CHECK(std::abs(s.point(3).left[l]) > std::abs(s.point(3).right[r]));
}

TEST_CASE("property: synthetic sets satisfy the IR set invariants") {
  for (const Distribution& d :
       {Distribution{Lebedev50{}}, Distribution{RingGrid{10.0, {-30, 0, 30, 60}, true}},
        Distribution{CustomPoints{{{0, 0}, {90, 0}, {180, 0}, {270, 0}, {0, 90}}}}}) {
    for (int rate : kSupportedSampleRates) {
      const IRSet s = synthesize_ir_set(d, rate, 64, 3);
      CHECK(s.size() >= 3);
      CHECK(s.sample_rate_hz() == rate);
      CHECK(find_duplicate_directions(s.directions().directions()).empty());
      for (const auto& p : s.points()) {
        CHECK(p.left.size() == 64);
        CHECK(p.right.size() == 64);
        for (std::size_t k = 0; k < 64; ++k) {
          CHECK(std::isfinite(p.left[k]));
          CHECK(static_cast<double>(static_cast<float>(p.left[k])) == p.left[k]);
        }
      }
    }
  }
}

TEST_CASE("distribution parsing") {
  CHECK(distribution_points(parse_distribution("lebedev50")).size() == 50);
  CHECK(distribution_points(parse_distribution("ring:30:0,45")).size() == 24);
  CHECK(distribution_points(parse_distribution("ring:30:0:poles")).size() == 14);
  CHECK_THROWS_AS(parse_distribution("fibonacci:100"), Error);
  CHECK_THROWS_AS(parse_distribution("ring:0:0"), Error);
}

TEST_CASE("write then load is sample-exact and keeps order") {
  TempDir dir;
  const IRSet s = synthesize_ir_set(Lebedev50{}, 96000, 128, 5, "H3", IRType::kBRIR);
  const IRManifest m = write_ir_set(s, dir.path());
  CHECK(m.entries.size() == 50);
  CHECK(fs::exists(ir_set_directory(dir.path(), "H3", IRType::kBRIR, 96000) / "manifest.tsv"));
  const IRSet back = load_ir_set(dir.path(), "H3", IRType::kBRIR, 96000);
  CHECK(back.size() == 50);
  CHECK(back.subject_id() == "H3");
  CHECK(back.ir_type() == IRType::kBRIR);
  check_same_buffers(s, back);
  for (std::size_t i = 0; i < s.size(); ++i)
    CHECK(angular_distance(s.point(i).direction, back.point(i).direction) < 1e-9);
}

TEST_CASE("dense dummy-head scale: 8802 points load") {
  TempDir dir;
  // 55 rings of 160 points plus both poles.
  std::vector<double> els;
  for (int i = 0; i < 55; ++i) els.push_back(-81.0 + 3.0 * i);
  const IRSet s = synthesize_ir_set(RingGrid{2.25, els, true}, 48000, 32, 1, "D1");
  REQUIRE(s.size() == 8802);
  write_ir_set(s, dir.path());
  const IRSet back = load_ir_set(dir.path(), "D1", IRType::kHRIR, 48000);
  CHECK(back.size() == 8802);
}

TEST_CASE("manifest round trip") {
  TempDir dir;
  IRManifest m;
  m.subject_id = "H20";
  m.ir_type = IRType::kBRIR;
  m.sample_rate_hz = 44100;
  m.entries = {{12.5, -3.25, "a.wav"}, {359.999, 90, "sub/b.wav"}};
  write_manifest(dir / "manifest.tsv", m);
  const IRManifest back = read_manifest(dir / "manifest.tsv");
  CHECK(back.subject_id == "H20");
  CHECK(back.ir_type == IRType::kBRIR);
  CHECK(back.sample_rate_hz == 44100);
  REQUIRE(back.entries.size() == 2);
  CHECK(back.entries[0].azimuth_deg == 12.5);
  CHECK(back.entries[1].path == fs::path("sub/b.wav"));
}

TEST_CASE("load errors name the failing entity") {
  TempDir dir;
  try {
    load_ir_set(dir.path(), "H7", IRType::kBRIR, 48000);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotFound);
    const std::string msg = e.what();
    CHECK(msg.find("H7") != std::string::npos);
    CHECK(msg.find("BRIR") != std::string::npos);
    CHECK(msg.find("48000") != std::string::npos);
  }

  const IRSet s = synthesize_ir_set(RingGrid{90.0, {0.0}, false}, 48000, 32, 1, "X");
  const auto set_dir = ir_set_directory(dir.path(), "X", IRType::kHRIR, 48000);

  write_ir_set(s, dir.path());
  fs::remove(set_dir / "ir_00002.wav");
  try {
    load_ir_set(dir.path(), "X", IRType::kHRIR, 48000);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kFormat);
    CHECK(std::string(e.what()).find("ir_00002.wav") != std::string::npos);
  }

  write_ir_set(s, dir.path());
  wav::write(set_dir / "ir_00001.wav", AudioBuffer::stereo(44100, s.point(1).left, s.point(1).right),
             wav::SampleFormat::kFloat32);
  try {
    load_ir_set(dir.path(), "X", IRType::kHRIR, 48000);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kFormat);
    CHECK(std::string(e.what()).find("ir_00001.wav") != std::string::npos);
  }

  write_ir_set(s, dir.path());
  wav::write(set_dir / "ir_00000.wav", AudioBuffer::mono(48000, s.point(0).left),
             wav::SampleFormat::kFloat32);
  CHECK(code_of([&] { load_ir_set(dir.path(), "X", IRType::kHRIR, 48000); }) ==
        ErrorCode::kFormat);
}

TEST_CASE("import_sadie: 50 BRIR files give a 50-entry manifest, loadable and exact") {
  TempDir src("src");
  TempDir dst("dst");
  const IRSet s = synthesize_ir_set(Lebedev50{}, 48000, 64, 9, "H3", IRType::kBRIR);
  write_sadie_fixture(src.path(), s, ',', "H3_BRIR_");
  const ImportReport r = import_sadie(src.path(), dst.path(), "H3", IRType::kBRIR, 48000);
  CHECK(r.manifest.entries.size() == 50);
  CHECK(r.warnings.empty());
  const IRSet back = load_ir_set(dst.path(), "H3", IRType::kBRIR, 48000);
  REQUIRE(back.size() == 50);
  // Files are visited in name order, so match points by direction.
  for (const auto& p : s.points()) {
    const auto [idx, dist] = nearest_point(back, p.direction);
    CHECK(dist < 1e-5);
    CHECK(back.point(idx).left == p.left);
    CHECK(back.point(idx).right == p.right);
  }
}

TEST_CASE("import_sadie without copying references the source files") {
  TempDir src("src");
  TempDir dst("dst");
  const IRSet s = synthesize_ir_set(RingGrid{60.0, {0.0}, false}, 44100, 32, 1);
  write_sadie_fixture(src.path(), s);
  ImportOptions opt;
  opt.copy_files = false;
  import_sadie(src.path(), dst.path(), "S", IRType::kHRIR, 44100, opt);
  CHECK(load_ir_set(dst.path(), "S", IRType::kHRIR, 44100).size() == 6);
}

TEST_CASE("import_sadie skips unparsable names, duplicates and bad files") {
  TempDir src("src");
  TempDir dst("dst");
  const IRSet s = synthesize_ir_set(RingGrid{36.0, {0.0}, false}, 48000, 32, 1);
  const auto files = write_sadie_fixture(src.path(), s);
  fs::rename(files[4], src / "readme_take2.wav");
  std::vector<std::string> seen;
  ScopedWarningSink sink([&](std::string_view w) { seen.emplace_back(w); });
  const ImportReport r = import_sadie(src.path(), dst.path(), "S", IRType::kHRIR, 48000);
  CHECK(r.manifest.entries.size() == 9);
  CHECK(r.warnings.size() == 1);
  CHECK(seen.size() == 1);

  // A second spelling of an existing direction: first (by name) wins.
  fs::copy_file(files[0], src / "azi_0.000_ele_0.000000.wav");
  const ImportReport r2 = import_sadie(src.path(), dst.path(), "S", IRType::kHRIR, 48000);
  CHECK(r2.manifest.entries.size() == 9);
  CHECK(r2.warnings.size() == 2);
}

TEST_CASE("import_sadie options: offset and inclination") {
  TempDir src("src");
  TempDir dst("dst");
  const IRSet s = synthesize_ir_set(RingGrid{90.0, {0.0}, false}, 48000, 32, 1);
  // Elevation 0 written as inclination 90.
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto name = "az" + std::to_string(static_cast<int>(s.point(i).direction.azimuth_deg)) +
                      "_inc90.wav";
    wav::write(src / name, AudioBuffer::stereo(48000, s.point(i).left, s.point(i).right),
               wav::SampleFormat::kFloat32);
  }
  ImportOptions opt;
  opt.filename_pattern = "az<az>_inc<el>";
  opt.elevation_is_inclination = true;
  opt.azimuth_offset_deg = -90.0;
  const ImportReport r = import_sadie(src.path(), dst.path(), "S", IRType::kHRIR, 48000, opt);
  REQUIRE(r.manifest.entries.size() == 4);
  for (const auto& e : r.manifest.entries) CHECK(e.elevation_deg == 0.0);
  // Files sort as az0, az180, az270, az90.
  CHECK(r.manifest.entries[0].azimuth_deg == 270.0);
}

TEST_CASE("import_sadie with nothing to import") {
  TempDir src("src");
  TempDir dst("dst");
  const IRSet s = synthesize_ir_set(RingGrid{90.0, {0.0}, false}, 48000, 32, 1);
  write_sadie_fixture(src.path(), s);
  ImportOptions opt;
  opt.filename_pattern = "theta<az>phi<el>";
  CHECK(code_of([&] {
          import_sadie(src.path(), dst.path(), "S", IRType::kHRIR, 48000, opt);
        }) == ErrorCode::kEmptyImport);
}
