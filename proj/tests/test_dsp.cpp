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
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "binamix/dsp.hpp"
#include "binamix/errors.hpp"
#include "binamix/interpolation.hpp"
#include "binamix/ir_store.hpp"
#include "binamix/layouts.hpp"
#include "binamix/wav.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace binamix;
using namespace binamix::testing;

namespace {

std::vector<double> random_signal(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double energy(const std::vector<double>& v) {
  return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
}

}  // namespace

TEST_CASE("convolution examples") {
  const std::vector<double> a = {1, 2, 3};
  const std::vector<double> b = {1, 1};
  const auto y = convolve(a, b);
  REQUIRE(y.size() == 4);
  const std::vector<double> want = {1, 3, 5, 3};
  CHECK(max_abs_diff(y, want) <= 1e-12);

  std::mt19937_64 rng(1);
  const auto x = random_signal(rng, 1000);
  const std::vector<double> unit = {1.0};
  CHECK(max_abs_diff(convolve(x, unit), x) <= 1e-12);
  CHECK(max_abs_diff(convolve(unit, x), x) <= 1e-12);
}

TEST_CASE("convolution matches the direct oracle") {
  std::mt19937_64 rng(2);
  const auto x = random_signal(rng, 4096);
  const auto h = random_signal(rng, 256);
  CHECK(max_abs_diff(convolve(x, h), direct_convolve(x, h)) <= 1e-9);
  // Assorted shapes, including filters longer than the signal.
  for (auto [n, m] : {std::pair<std::size_t, std::size_t>{1, 1}, {1, 300}, {300, 1},
                      {5, 7}, {17, 1024}, {3000, 999}, {64, 64}}) {
    const auto s = random_signal(rng, n);
    const auto f = random_signal(rng, m);
    CHECK(max_abs_diff(convolve(s, f), direct_convolve(s, f)) <= 1e-9);
  }
}

TEST_CASE("both engines agree at the crossover") {
  std::mt19937_64 rng(21);
  const auto x = random_signal(rng, 5000);
  for (std::size_t m : {kDirectConvolutionMaxTaps - 1, kDirectConvolutionMaxTaps,
                        kDirectConvolutionMaxTaps + 1, 4 * kDirectConvolutionMaxTaps}) {
    const auto h = random_signal(rng, m);
    CHECK(max_abs_diff(convolve(x, h), direct_convolve(x, h)) <= 1e-9);
  }
}

TEST_CASE("a delayed unit impulse reproduces the other operand exactly") {
  std::mt19937_64 rng(22);
  const auto h = random_signal(rng, 512);
  std::vector<double> impulse(kDirectConvolutionMaxTaps, 0.0);
  impulse[5] = 1.0;
  const auto y = convolve(impulse, h);
  for (std::size_t k = 0; k < y.size(); ++k)
    CHECK(y[k] == (k >= 5 && k - 5 < h.size() ? h[k - 5] : 0.0));
}

TEST_CASE("convolution rejects empty input and mismatched rates") {
  const std::vector<double> empty;
  const std::vector<double> one = {1.0};
  CHECK_THROWS_AS(convolve(empty, one), Error);
  CHECK_THROWS_AS(convolve(one, empty), Error);
  try {
    convolve(AudioBuffer::mono(48000, {1.0}), AudioBuffer::mono(44100, {1.0}));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
  }
  const AudioBuffer y = convolve(AudioBuffer::mono(48000, {1, 2}), AudioBuffer::mono(48000, {3}));
  CHECK(y.sample_rate_hz == 48000);
  CHECK(y.num_frames() == 2);
}

TEST_CASE("property: convolution is linear in a scalar gain and commutative") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> gain(-4.0, 4.0);
  for (int i = 0; i < 20; ++i) {
    const auto x = random_signal(rng, 500 + 37 * i);
    const auto h = random_signal(rng, 1 + 13 * i);
    const double a = gain(rng);
    std::vector<double> ax = x;
    for (double& v : ax) v *= a;
    const auto lhs = convolve(ax, h);
    auto rhs = convolve(x, h);
    double scale = 0;
    for (double& v : rhs) {
      v *= a;
      scale = std::max(scale, std::abs(v));
    }
    CHECK(max_abs_diff(lhs, rhs) <= 1e-12 * scale * 10);
    CHECK(max_abs_diff(convolve(x, h), convolve(h, x)) <= 1e-9);
  }
}

TEST_CASE("convolution is deterministic") {
  std::mt19937_64 rng(4);
  const auto x = random_signal(rng, 10000);
  const auto h = random_signal(rng, 300);
  CHECK(convolve(x, h) == convolve(x, h));
}

TEST_CASE("constant-power panning examples") {
  const PanGains c = pan_constant_power(0.0);
  CHECK(c.left == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
  CHECK(c.left == c.right);
  const PanGains l = pan_constant_power(-1.0);
  CHECK(l.left == 1.0);
  CHECK(l.right == 0.0);
  const PanGains r = pan_constant_power(1.0);
  CHECK(r.left == 0.0);
  CHECK(r.right == 1.0);
  const PanGains h = pan_constant_power(0.5);
  CHECK(std::abs(h.left * h.left + h.right * h.right - 1.0) <= 1e-12);
  // Oracle: the sine/cosine law written directly.
  CHECK(h.left == doctest::Approx(std::cos(1.5 * kPi / 4)).epsilon(1e-14));
  CHECK(h.right == doctest::Approx(std::sin(1.5 * kPi / 4)).epsilon(1e-14));
}

TEST_CASE("property: constant power for 1001 pan values and mirror symmetry") {
  int bad = 0;
  for (int i = 0; i <= 1000; ++i) {
    const double pan = -1.0 + i / 500.0;
    const PanGains g = pan_constant_power(pan);
    if (std::abs(g.left * g.left + g.right * g.right - 1.0) > 1e-12) ++bad;
    const PanGains m = pan_constant_power(-pan);
    if (m.left != g.right || m.right != g.left) ++bad;
  }
  CHECK(bad == 0);
}

TEST_CASE("out-of-range pans are clamped with a warning") {
  std::vector<std::string> w;
  ScopedWarningSink sink([&](std::string_view s) { w.emplace_back(s); });
  const PanGains g = pan_constant_power(-3.0);
  CHECK(g.left == 1.0);
  CHECK(w.size() == 1);
  CHECK_THROWS_AS(pan_constant_power(NAN), Error);
}

TEST_CASE("reverb ids and names") {
  CHECK(reverb_name(1) == "Theatre");
  CHECK(reverb_name(2) == "Office");
  CHECK(reverb_name(3) == "Small Room");
  CHECK(reverb_name(4) == "Meeting Room");
  CHECK_THROWS_AS(reverb_name(0), Error);
  CHECK_THROWS_AS(reverb_name(5), Error);
}

TEST_CASE("synthetic reverbs: unit energy, decay time, determinism") {
  for (int id = 1; id <= 4; ++id) {
    const ReverbModel m = synthetic_reverb(id, 48000, 0);
    CHECK(m.name == reverb_name(id));
    CHECK(std::abs(energy(m.ir) - 1.0) < 1e-12);
    const double t60 = kSyntheticReverbT60[static_cast<std::size_t>(id - 1)];
    CHECK(m.ir.size() == static_cast<std::size_t>(std::llround(t60 * 48000)));
    // Energy in the last tenth sits far below the first tenth.
    const std::size_t tenth = m.ir.size() / 10;
    const std::vector<double> head(m.ir.begin(), m.ir.begin() + static_cast<long>(tenth));
    const std::vector<double> tail(m.ir.end() - static_cast<long>(tenth), m.ir.end());
    CHECK(10 * std::log10(energy(tail) / energy(head)) < -40.0);
    CHECK(synthetic_reverb(id, 48000, 0).ir == m.ir);
  }
  CHECK(synthetic_reverb(1, 48000, 1).ir != synthetic_reverb(1, 48000, 0).ir);
}

TEST_CASE("make_reverb_model normalizes and validates") {
  const ReverbModel m = make_reverb_model(2, {3.0, 4.0}, 44100);
  CHECK(m.ir[0] == doctest::Approx(0.6));
  CHECK(m.ir[1] == doctest::Approx(0.8));
  CHECK_THROWS_AS(make_reverb_model(2, {0.0, 0.0}, 44100), Error);
  CHECK_THROWS_AS(make_reverb_model(9, {1.0}, 44100), Error);
}

TEST_CASE("apply_reverb crossfade") {
  std::mt19937_64 rng(5);
  const auto dry = random_signal(rng, 2000);
  const ReverbModel m = synthetic_reverb(3, 44100, 0);
  const std::size_t len = dry.size() + m.ir.size() - 1;

  const auto none = apply_reverb(dry, m, 0.0);
  REQUIRE(none.size() == len);
  for (std::size_t k = 0; k < len; ++k) CHECK(none[k] == (k < dry.size() ? dry[k] : 0.0));

  const auto full = apply_reverb(dry, m, 1.0);
  CHECK(max_abs_diff(full, convolve(dry, m.ir)) == 0.0);
  CHECK(max_abs_diff(full, direct_convolve(dry, m.ir)) <= 1e-9);

  const auto half = apply_reverb(dry, m, 0.5);
  std::vector<double> mean(len);
  for (std::size_t k = 0; k < len; ++k) mean[k] = 0.5 * (none[k] + full[k]);
  CHECK(max_abs_diff(half, mean) <= 1e-12);

  CHECK_THROWS_AS(apply_reverb(dry, m, 1.5), Error);
  CHECK_THROWS_AS(apply_reverb(dry, m, -0.1), Error);
}

TEST_CASE("reverb bank loads user IRs by rate and falls back to synthetic") {
  TempDir dir;
  const ReverbBank plain = ReverbBank::load(dir.path(), 48000);
  CHECK(plain.get(1).ir == synthetic_reverb(1, 48000, 0).ir);

  std::filesystem::create_directories(dir / "reverb");
  wav::write(dir / "reverb/office48.wav", AudioBuffer::mono(48000, {0.5, 0.25, 0.0, -0.25}),
             wav::SampleFormat::kFloat32);
  wav::write(dir / "reverb/office44.wav", AudioBuffer::mono(44100, {1.0, 1.0}),
             wav::SampleFormat::kFloat32);
  {
    std::ofstream m(dir / "reverb/manifest.tsv");
    m << "# id\tpath\n2\toffice44.wav\n2\toffice48.wav\n";
  }
  const ReverbBank bank = ReverbBank::load(dir.path(), 48000);
  REQUIRE(bank.get(2).ir.size() == 4);
  CHECK(std::abs(energy(bank.get(2).ir) - 1.0) < 1e-12);
  CHECK(bank.get(2).ir[0] > 0);
  CHECK(bank.get(1).ir == plain.get(1).ir);
  CHECK(ReverbBank::load(dir.path(), 44100).get(2).ir.size() == 2);

  {
    std::ofstream m(dir / "reverb/manifest.tsv");
    m << "7\toffice48.wav\n";
  }
  CHECK_THROWS_AS(ReverbBank::load(dir.path(), 48000), Error);
}

TEST_CASE("render at a stored point is the plain convolution") {
  const IRSet s = synthesize_ir_set(Lebedev50{}, 48000, 128, 3);
  std::mt19937_64 rng(6);
  const AudioBuffer src = AudioBuffer::mono(48000, random_signal(rng, 700));
  const SourceRender r =
      render_source_binaural(src, s.point(4).direction, s, InterpolationMode::kAuto);
  REQUIRE(r.audio.num_channels() == 2);
  CHECK(r.audio.channels[0] == convolve(src.channels[0], s.point(4).left));
  CHECK(r.audio.channels[1] == convolve(src.channels[0], s.point(4).right));
  CHECK(r.plan.entries.size() == 1);
}

TEST_CASE("render rejects mismatched rates and empty sources") {
  const IRSet s = synthesize_ir_set(Lebedev50{}, 48000, 64, 3);
  CHECK_THROWS_AS(render_source_binaural(AudioBuffer::mono(44100, {1.0}), {0, 0}, s,
                                         InterpolationMode::kNearest),
                  Error);
  CHECK_THROWS_AS(render_source_binaural(AudioBuffer::mono(48000, {}), {0, 0}, s,
                                         InterpolationMode::kNearest),
                  Error);
}

TEST_CASE("speaker sets resolve each speaker from the full set") {
  const IRSet s = synthesize_ir_set(RingGrid{5.0, {0.0, 45.0}, true}, 48000, 64, 3);
  const SpeakerSet sp = make_speaker_set(s, get_layout("7.1.4"), InterpolationMode::kAuto);
  CHECK(sp.irs.size() == 11);
  for (std::size_t i = 0; i < sp.irs.size(); ++i) {
    REQUIRE(sp.resolution[i].entries.size() == 1);
    const auto& stored = s.point(sp.resolution[i].entries[0].point_index);
    CHECK(sp.irs.point(i).left == stored.left);
  }
  // Lebedev-50 has no point at 30 degrees, so L is interpolated.
  const IRSet leb = synthesize_ir_set(Lebedev50{}, 48000, 64, 3);
  const SpeakerSet sl = make_speaker_set(leb, get_layout("5.1"), InterpolationMode::kThreePoint);
  CHECK(sl.resolution[0].entries.size() == 3);
  CHECK(sl.irs.point(0).direction == Direction{30, 0});
}

TEST_CASE("layout render at a speaker uses that speaker alone") {
  const IRSet s = synthesize_ir_set(RingGrid{5.0, {0.0}, true}, 48000, 64, 3);
  const AudioBuffer src = AudioBuffer::mono(48000, {1.0, 0.5, -0.25});
  const SourceRender r = render_source_binaural(src, {30, 0}, s, InterpolationMode::kThreePoint,
                                                get_layout("5.1"));
  REQUIRE(r.plan.entries.size() == 1);
  CHECK(r.plan.entries[0].point_index == 0);
  CHECK(r.plan.entries[0].weight == 1.0);
}

TEST_CASE("property: layout rendering equals the sum of per-speaker renders") {
  const IRSet s = synthesize_ir_set(Lebedev50{}, 48000, 128, 4);
  std::mt19937_64 rng(7);
  for (const char* name : {"5.1", "7.1.4"}) {
    const SpeakerSet sp = make_speaker_set(s, get_layout(name), InterpolationMode::kAuto);
    for (int i = 0; i < 20; ++i) {
      const Direction d = random_direction(rng);
      const AudioBuffer src = AudioBuffer::mono(48000, random_signal(rng, 300));
      const SourceRender r = render_source_binaural(src, d, sp, InterpolationMode::kThreePoint);
      double worst = 0;
      for (int ear = 0; ear < 2; ++ear) {
        std::vector<double> sum(r.audio.num_frames(), 0.0);
        for (const auto& e : r.plan.entries) {
          const auto& p = sp.irs.point(e.point_index);
          const auto y = direct_convolve(src.channels[0], ear == 0 ? p.left : p.right);
          for (std::size_t k = 0; k < y.size(); ++k) sum[k] += e.weight * y[k];
        }
        worst = std::max(worst, max_abs_diff(r.audio.channels[static_cast<std::size_t>(ear)], sum));
      }
      CHECK(worst <= 1e-9);
      for (const auto& ch : r.audio.channels)
        for (double v : ch) CHECK(std::isfinite(v));
    }
  }
}

TEST_CASE("the 5.1 midpoint of L and C blends exactly those two speakers") {
  const IRSet s = synthesize_ir_set(RingGrid{5.0, {0.0}, true}, 48000, 64, 3);
  const AudioBuffer src = AudioBuffer::mono(48000, {1.0});
  const SourceRender r =
      render_source_binaural(src, {15, 0}, s, InterpolationMode::kTwoPoint, get_layout("5.1"));
  REQUIRE(r.plan.entries.size() == 2);
  std::vector<std::size_t> idx = {r.plan.entries[0].point_index, r.plan.entries[1].point_index};
  std::sort(idx.begin(), idx.end());
  CHECK(idx == std::vector<std::size_t>{0, 2});
}
