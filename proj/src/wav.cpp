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

#include "binamix/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "binamix/errors.hpp"

namespace binamix {

void validate(const AudioBuffer& buffer) {
  if (buffer.sample_rate_hz <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  }
  const std::size_t frames = buffer.num_frames();
  for (const auto& ch : buffer.channels) {
    if (ch.size() != frames) {
      throw Error(ErrorCode::kInvalidArgument, "channel lengths differ");
    }
    for (double v : ch) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kInvalidArgument, "non-finite sample");
      }
    }
  }
}

double peak(const AudioBuffer& buffer) {
  double p = 0.0;
  for (const auto& ch : buffer.channels)
    for (double v : ch) p = std::max(p, std::abs(v));
  return p;
}

namespace wav {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t read_u32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
         (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}
std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

int bits_of(SampleFormat f) {
  switch (f) {
    case SampleFormat::kPcm16: return 16;
    case SampleFormat::kPcm24: return 24;
    case SampleFormat::kFloat32: return 32;
  }
  return 0;
}

}  // namespace

SampleFormat parse_sample_format(std::string_view name) {
  if (name == "pcm16") return SampleFormat::kPcm16;
  if (name == "pcm24") return SampleFormat::kPcm24;
  if (name == "float32") return SampleFormat::kFloat32;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown sample format '" + std::string(name) +
                  "' (expected pcm16, pcm24 or float32)");
}

WavFile read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kNotFound, "cannot open WAV file " + path.string());
  }
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                        std::istreambuf_iterator<char>()};
  const auto fail = [&](const std::string& why) {
    return Error(ErrorCode::kFormat, path.string() + ": " + why);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw fail("not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t format_tag = 0, channels = 0, bits = 0, block_align = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::size_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = std::min(size, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (available < 16) throw fail("truncated fmt chunk");
      const std::uint8_t* f = bytes.data() + body;
      format_tag = read_u16(f);
      channels = read_u16(f + 2);
      rate = read_u32(f + 4);
      block_align = read_u16(f + 12);
      bits = read_u16(f + 14);
      if (format_tag == kFormatExtensible) {
        if (available < 26) throw fail("truncated extensible fmt chunk");
        format_tag = read_u16(f + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = available;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt) throw fail("missing fmt chunk");
  if (data == nullptr) throw fail("missing data chunk");
  if (channels == 0) throw fail("zero channels");

  WavFile out;
  if (format_tag == kFormatPcm && bits == 16) {
    out.format = SampleFormat::kPcm16;
  } else if (format_tag == kFormatPcm && bits == 24) {
    out.format = SampleFormat::kPcm24;
  } else if (format_tag == kFormatFloat && bits == 32) {
    out.format = SampleFormat::kFloat32;
  } else {
    throw fail("unsupported encoding (format tag " + std::to_string(format_tag) +
               ", " + std::to_string(bits) + " bits); expected 16/24-bit PCM "
               "or 32-bit float");
  }
  const std::size_t bytes_per_sample = bits / 8;
  if (block_align != channels * bytes_per_sample) throw fail("inconsistent block alignment");

  const std::size_t frames = data_size / block_align;
  out.audio = AudioBuffer::silent(static_cast<int>(rate), channels, frames);
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      const std::uint8_t* s = data + i * block_align + c * bytes_per_sample;
      double v = 0.0;
      switch (out.format) {
        case SampleFormat::kPcm16:
          v = static_cast<std::int16_t>(read_u16(s)) / 32768.0;
          break;
        case SampleFormat::kPcm24: {
          std::int32_t raw = s[0] | (s[1] << 8) | (s[2] << 16);
          if (raw & 0x800000) raw |= ~0xFFFFFF;
          v = raw / 8388608.0;
          break;
        }
        case SampleFormat::kFloat32: {
          const std::uint32_t u = read_u32(s);
          float f;
          std::memcpy(&f, &u, sizeof f);
          if (!std::isfinite(f)) throw fail("non-finite float sample");
          v = f;
          break;
        }
      }
      out.audio.channels[c][i] = v;
    }
  }
  return out;
}

std::vector<std::uint8_t> encode(const AudioBuffer& audio, SampleFormat format) {
  validate(audio);
  const std::uint16_t channels = static_cast<std::uint16_t>(audio.num_channels());
  if (channels == 0) {
    throw Error(ErrorCode::kInvalidArgument, "cannot write a WAV with no channels");
  }
  const int bits = bits_of(format);
  const std::uint16_t block_align = static_cast<std::uint16_t>(channels * bits / 8);
  const std::size_t frames = audio.num_frames();
  const std::uint32_t data_size = static_cast<std::uint32_t>(frames * block_align);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size + 1);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_size + (data_size & 1));
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, format == SampleFormat::kFloat32 ? kFormatFloat : kFormatPcm);
  put_u16(out, channels);
  put_u32(out, static_cast<std::uint32_t>(audio.sample_rate_hz));
  put_u32(out, static_cast<std::uint32_t>(audio.sample_rate_hz) * block_align);
  put_u16(out, block_align);
  put_u16(out, static_cast<std::uint16_t>(bits));
  put_tag(out, "data");
  put_u32(out, data_size);

  const auto quantize = [](double x, double scale, long lo, long hi) {
    const long v = std::lround(std::clamp(x, -1.0, 1.0) * scale);
    return std::clamp(v, lo, hi);
  };
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      const double x = audio.channels[c][i];
      switch (format) {
        case SampleFormat::kPcm16:
          put_u16(out, static_cast<std::uint16_t>(quantize(x, 32768.0, -32768, 32767)));
          break;
        case SampleFormat::kPcm24: {
          const long v = quantize(x, 8388608.0, -8388608, 8388607);
          out.push_back(static_cast<std::uint8_t>(v));
          out.push_back(static_cast<std::uint8_t>(v >> 8));
          out.push_back(static_cast<std::uint8_t>(v >> 16));
          break;
        }
        case SampleFormat::kFloat32: {
          const float f = static_cast<float>(x);
          std::uint32_t u;
          std::memcpy(&u, &f, sizeof u);
          put_u32(out, u);
          break;
        }
      }
    }
  }
  if (data_size & 1) out.push_back(0);
  return out;
}

void write(const std::filesystem::path& path, const AudioBuffer& audio,
           SampleFormat format) {
  const auto bytes = encode(audio, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write WAV file " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

}  // namespace wav
}  // namespace binamix
