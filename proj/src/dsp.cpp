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

#include "binamix/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include <fftw3.h>

#include "binamix/errors.hpp"
#include "binamix/wav.hpp"

namespace binamix {

namespace {

// FFTW's planner is not thread-safe, execution with the new-array interface
// is. Plans are created once per size and kept for the process lifetime.
struct FftPlan {
  int size = 0;
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

const FftPlan& plan_for(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<FftPlan>> plans;
  std::lock_guard lock(mutex);
  auto& slot = plans[n];
  if (!slot) {
    slot = std::make_unique<FftPlan>();
    slot->size = n;
    double* real = fftw_alloc_real(static_cast<std::size_t>(n));
    fftw_complex* freq = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    slot->forward = fftw_plan_dft_r2c_1d(n, real, freq, flags);
    slot->inverse = fftw_plan_dft_c2r_1d(n, freq, real, flags);
    fftw_free(real);
    fftw_free(freq);
  }
  return *slot;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

fftw_complex* as_fftw(std::vector<std::complex<double>>& v) {
  return reinterpret_cast<fftw_complex*>(v.data());
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

void require_mono_source(const AudioBuffer& source, int rate) {
  if (source.num_channels() != 1) {
    throw Error(ErrorCode::kInvalidArgument, "binaural rendering expects a mono source");
  }
  if (source.num_frames() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "source is empty");
  }
  if (source.sample_rate_hz != rate) {
    throw Error(ErrorCode::kInvalidArgument,
                "source sample rate " + std::to_string(source.sample_rate_hz) +
                    " Hz does not match the IR set's " + std::to_string(rate) + " Hz");
  }
}

AudioBuffer convolve_pair(const AudioBuffer& source, const IRPoint& ir) {
  return AudioBuffer::stereo(source.sample_rate_hz, convolve(source.channels[0], ir.left),
                             convolve(source.channels[0], ir.right));
}

}  // namespace

std::vector<double> convolve(std::span<const double> signal, std::span<const double> ir) {
  if (signal.empty() || ir.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "convolution operands must be non-empty");
  }
  if (signal.size() < ir.size()) std::swap(signal, ir);

  const std::size_t m = ir.size();
  if (m <= kDirectConvolutionMaxTaps) {
    std::vector<double> out(signal.size() + m - 1, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const double h = ir[j];
      for (std::size_t i = 0; i < signal.size(); ++i) out[i + j] += signal[i] * h;
    }
    return out;
  }
  const std::size_t n = next_pow2(std::max<std::size_t>(4 * m, 16));
  const std::size_t block = n - m + 1;
  const std::size_t bins = n / 2 + 1;
  const FftPlan& fft = plan_for(static_cast<int>(n));

  std::vector<double> time(n, 0.0);
  std::vector<std::complex<double>> filter(bins), spectrum(bins);
  std::copy(ir.begin(), ir.end(), time.begin());
  fftw_execute_dft_r2c(fft.forward, time.data(), as_fftw(filter));

  const double scale = 1.0 / static_cast<double>(n);
  std::vector<double> out(signal.size() + m - 1, 0.0);
  for (std::size_t start = 0; start < signal.size(); start += block) {
    const std::size_t len = std::min(block, signal.size() - start);
    std::fill(time.begin(), time.end(), 0.0);
    std::copy_n(signal.begin() + static_cast<std::ptrdiff_t>(start), len, time.begin());
    fftw_execute_dft_r2c(fft.forward, time.data(), as_fftw(spectrum));
    for (std::size_t k = 0; k < bins; ++k) spectrum[k] *= filter[k];
    fftw_execute_dft_c2r(fft.inverse, as_fftw(spectrum), time.data());
    const std::size_t valid = std::min(len + m - 1, out.size() - start);
    for (std::size_t k = 0; k < valid; ++k) out[start + k] += time[k] * scale;
  }
  return out;
}

AudioBuffer convolve(const AudioBuffer& signal, const AudioBuffer& ir) {
  if (signal.num_channels() != 1 || ir.num_channels() != 1) {
    throw Error(ErrorCode::kInvalidArgument, "convolve expects mono buffers");
  }
  if (signal.sample_rate_hz != ir.sample_rate_hz) {
    throw Error(ErrorCode::kInvalidArgument,
                "sample rate mismatch: " + std::to_string(signal.sample_rate_hz) + " vs " +
                    std::to_string(ir.sample_rate_hz));
  }
  return AudioBuffer::mono(signal.sample_rate_hz, convolve(signal.channels[0], ir.channels[0]));
}

PanGains pan_constant_power(double pan) {
  if (!std::isfinite(pan)) {
    throw Error(ErrorCode::kInvalidArgument, "pan must be finite");
  }
  if (pan < -1.0 || pan > 1.0) {
    std::ostringstream os;
    os << "pan " << pan << " clamped to [-1, 1]";
    warn(os.str());
    pan = std::clamp(pan, -1.0, 1.0);
  }
  if (pan == -1.0) return {1.0, 0.0};
  if (pan == 1.0) return {0.0, 1.0};
  // sin(x) written as cos(pi/2 - x) so that mirrored pans give mirrored gains
  // bit for bit.
  return {std::cos((1.0 + pan) * std::numbers::pi / 4.0),
          std::cos((1.0 - pan) * std::numbers::pi / 4.0)};
}

// ---------------------------------------------------------------------------

std::string_view reverb_name(int id) {
  if (id < 1 || id > 4) {
    throw Error(ErrorCode::kInvalidArgument,
                "reverb type must be 1-4 (1=Theatre, 2=Office, 3=Small Room, "
                "4=Meeting Room), got " + std::to_string(id));
  }
  return kReverbNames[static_cast<std::size_t>(id - 1)];
}

ReverbModel make_reverb_model(int id, std::vector<double> ir, int sample_rate_hz) {
  ReverbModel m;
  m.id = id;
  m.name = std::string(reverb_name(id));
  m.sample_rate_hz = sample_rate_hz;
  double energy = 0.0;
  for (double v : ir) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "reverb IR has non-finite samples");
    }
    energy += v * v;
  }
  if (ir.empty() || energy <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "reverb IR for " + m.name + " is silent");
  }
  const double g = 1.0 / std::sqrt(energy);
  for (double& v : ir) v *= g;
  m.ir = std::move(ir);
  return m;
}

ReverbModel synthetic_reverb(int id, int sample_rate_hz, std::uint64_t seed) {
  reverb_name(id);
  if (sample_rate_hz <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  }
  const double t60 = kSyntheticReverbT60[static_cast<std::size_t>(id - 1)];
  const auto length = static_cast<std::size_t>(std::llround(t60 * sample_rate_hz));
  std::vector<double> ir(length);
  std::uint64_t state = seed ^ (0xA0761D6478BD642Full * static_cast<std::uint64_t>(id));
  // 60 dB of amplitude decay over t60.
  const double rate = std::log(1000.0) / (t60 * sample_rate_hz);
  for (std::size_t k = 0; k < length; ++k) {
    const double noise = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-52 - 1.0;
    ir[k] = noise * std::exp(-rate * static_cast<double>(k));
  }
  return make_reverb_model(id, std::move(ir), sample_rate_hz);
}

ReverbBank ReverbBank::synthetic(int sample_rate_hz, std::uint64_t seed) {
  ReverbBank bank;
  for (int id = 1; id <= 4; ++id) {
    bank.models_[static_cast<std::size_t>(id - 1)] = synthetic_reverb(id, sample_rate_hz, seed);
  }
  return bank;
}

ReverbBank ReverbBank::load(const std::filesystem::path& root, int sample_rate_hz,
                            std::uint64_t seed) {
  ReverbBank bank = synthetic(sample_rate_hz, seed);
  const auto manifest = root / "reverb" / "manifest.tsv";
  std::ifstream in(manifest);
  if (!in) return bank;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    int id = 0;
    try {
      id = std::stoi(line.substr(0, tab));
    } catch (const std::exception&) {
      id = 0;
    }
    if (tab == std::string::npos || id < 1 || id > 4) {
      throw Error(ErrorCode::kFormat, manifest.string() + ":" + std::to_string(line_no) +
                                          ": expected id (1-4)<TAB>path");
    }
    const auto path = manifest.parent_path() / line.substr(tab + 1);
    const wav::WavFile f = wav::read(path);
    if (f.audio.sample_rate_hz != sample_rate_hz) continue;
    if (f.audio.num_channels() != 1) {
      throw Error(ErrorCode::kFormat, path.string() + ": reverb IRs must be mono");
    }
    bank.models_[static_cast<std::size_t>(id - 1)] =
        make_reverb_model(id, f.audio.channels[0], sample_rate_hz);
  }
  return bank;
}

const ReverbModel& ReverbBank::get(int id) const {
  reverb_name(id);
  return models_[static_cast<std::size_t>(id - 1)];
}

std::vector<double> apply_reverb(std::span<const double> dry, const ReverbModel& model,
                                 double amount) {
  if (!(amount >= 0.0 && amount <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "reverb amount must be in [0, 1]");
  }
  if (dry.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot apply reverb to an empty signal");
  }
  const std::size_t length = dry.size() + model.ir.size() - 1;
  std::vector<double> out(length, 0.0);
  if (amount == 0.0) {
    std::copy(dry.begin(), dry.end(), out.begin());
    return out;
  }
  std::vector<double> wet = convolve(dry, model.ir);
  if (amount == 1.0) return wet;
  const double dry_gain = 1.0 - amount;
  for (std::size_t k = 0; k < dry.size(); ++k) out[k] = dry_gain * dry[k];
  for (std::size_t k = 0; k < length; ++k) out[k] += amount * wet[k];
  return out;
}

// ---------------------------------------------------------------------------

SpeakerSet make_speaker_set(const IRSet& set, const SpeakerLayout& layout,
                            InterpolationMode mode, const PlanOptions& options) {
  std::vector<IRPoint> points;
  std::vector<InterpolationPlan> resolution;
  for (const Direction& d : speaker_directions(layout)) {
    // plan() returns the stored point whenever one lies within the snap
    // threshold, so only uncovered speakers are interpolated.
    InterpolationPlan p = plan(set, d, mode, options);
    IRPoint ir = blend(set, p);
    ir.direction = d;
    points.push_back(std::move(ir));
    resolution.push_back(std::move(p));
  }
  return {layout, IRSet(set.subject_id(), set.ir_type(), set.sample_rate_hz(), std::move(points)),
          std::move(resolution)};
}

SourceRender render_source_binaural(const AudioBuffer& source, const Direction& direction,
                                    const IRSet& set, InterpolationMode mode,
                                    const PlanOptions& options) {
  require_mono_source(source, set.sample_rate_hz());
  SourceRender r;
  r.plan = plan(set, direction, mode, options);
  r.audio = convolve_pair(source, blend(set, r.plan));
  return r;
}

SourceRender render_source_binaural(const AudioBuffer& source, const Direction& direction,
                                    const SpeakerSet& speakers, InterpolationMode mode,
                                    const PlanOptions& options) {
  return render_source_binaural(source, direction, speakers.irs, mode, options);
}

SourceRender render_source_binaural(const AudioBuffer& source, const Direction& direction,
                                    const IRSet& set, InterpolationMode mode,
                                    const SpeakerLayout& layout, const PlanOptions& options) {
  require_mono_source(source, set.sample_rate_hz());
  return render_source_binaural(source, direction, make_speaker_set(set, layout, mode, options),
                                mode, options);
}

}  // namespace binamix
