// Copyright 2026 The liveredact Authors.
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

// Two-channel call audio: G.711 mu-law companding, RIFF/WAVE I/O and
// destructive beep masking of time spans.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "liveredact/common.hpp"

namespace liveredact::audio {

inline constexpr int kSampleRate = 8000;
inline constexpr int kSamplesPerMs = kSampleRate / 1000;

inline constexpr std::int64_t ms_to_samples(Millis ms) {
  return ms * kSamplesPerMs;
}
inline constexpr Millis samples_to_ms(std::int64_t n) {
  return n / kSamplesPerMs;
}

// ---------------------------------------------------------------------------
// G.711 mu-law

namespace detail {
inline constexpr int kMulawBias = 0x84;
inline constexpr int kMulawClip = 32635;
}  // namespace detail

inline constexpr std::uint8_t mulaw_encode(std::int16_t sample) {
  int v = sample;
  int sign = 0;
  if (v < 0) {
    v = -v;
    sign = 0x80;
  }
  if (v > detail::kMulawClip) v = detail::kMulawClip;
  v += detail::kMulawBias;
  const int exponent =
      static_cast<int>(std::bit_width(static_cast<unsigned>(v >> 7))) - 1;
  const int mantissa = (v >> (exponent + 3)) & 0x0F;
  return static_cast<std::uint8_t>(~(sign | (exponent << 4) | mantissa));
}

// 0x7F is G.711's "negative zero". It decodes to -1 (a member of its own
// quantization cell) so that every code point survives encode(decode(b)).
inline constexpr std::int16_t mulaw_decode(std::uint8_t byte) {
  if (byte == 0x7F) return -1;
  const int u = static_cast<std::uint8_t>(~byte);
  const int exponent = (u >> 4) & 0x07;
  const int mantissa = u & 0x0F;
  const int magnitude =
      (((mantissa << 3) + detail::kMulawBias) << exponent) - detail::kMulawBias;
  return static_cast<std::int16_t>((u & 0x80) ? -magnitude : magnitude);
}

/// Width of the quantization cell (in linear units) that code `byte` covers.
inline constexpr int mulaw_step(std::uint8_t byte) {
  const int exponent = (static_cast<std::uint8_t>(~byte) >> 4) & 0x07;
  return 8 << exponent;
}

// ---------------------------------------------------------------------------
// Buffers

/// Stereo 8 kHz PCM16. Channel 0 is the agent, channel 1 the caller.
struct PcmBuffer {
  std::array<std::vector<std::int16_t>, kNumChannels> channels;
  int sample_rate = kSampleRate;

  PcmBuffer() = default;
  explicit PcmBuffer(std::size_t frames) {
    for (auto& c : channels) c.assign(frames, 0);
  }

  std::size_t frames() const { return channels[0].size(); }
  Millis duration_ms() const {
    return samples_to_ms(static_cast<std::int64_t>(frames()));
  }

  std::vector<std::int16_t>& channel(Channel c) { return channels[index_of(c)]; }
  const std::vector<std::int16_t>& channel(Channel c) const {
    return channels[index_of(c)];
  }

  void validate() const {
    if (sample_rate != kSampleRate)
      throw UnsupportedFormatError("sample_rate", "PcmBuffer must be 8000 Hz");
    if (channels[0].size() != channels[1].size())
      throw FormatError("PcmBuffer channels differ in length");
  }

  friend bool operator==(const PcmBuffer&, const PcmBuffer&) = default;
};

// ---------------------------------------------------------------------------
// RIFF/WAVE

namespace detail {

inline std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
inline std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}
inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}
inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}
inline void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

inline constexpr std::uint16_t kFormatPcm = 1;
inline constexpr std::uint16_t kFormatMulaw = 7;
inline constexpr std::uint16_t kFormatExtensible = 0xFFFE;

}  // namespace detail

/// Note written into every output file's INFO/ICMT chunk.
inline constexpr std::string_view kChannelNote =
    "channel 0 = agent, channel 1 = caller";

/// Parses an in-memory RIFF/WAVE image. Mono input is duplicated to both
/// channels; a warning is appended to `warnings` when given.
inline PcmBuffer decode_wav(std::span<const std::uint8_t> bytes,
                            std::vector<std::string>* warnings = nullptr) {
  using detail::read_u16;
  using detail::read_u32;
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw FormatError("not a RIFF/WAVE file");

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::span<const std::uint8_t> data;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* hdr = bytes.data() + pos;
    const std::uint32_t size = read_u32(hdr + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size())
      throw FormatError("chunk '" + std::string(hdr, hdr + 4) +
                        "' runs past end of file");
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (size < 16) throw FormatError("fmt chunk shorter than 16 bytes");
      const std::uint8_t* f = bytes.data() + body;
      format = read_u16(f);
      channels = read_u16(f + 2);
      rate = read_u32(f + 4);
      bits = read_u16(f + 14);
      if (format == detail::kFormatExtensible) {
        if (size < 40) throw FormatError("extensible fmt chunk too short");
        format = read_u16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data = bytes.subspan(body, size);
      have_data = true;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw FormatError("missing fmt chunk");
  if (!have_data) throw FormatError("missing data chunk");

  if (format != detail::kFormatPcm && format != detail::kFormatMulaw)
    throw UnsupportedFormatError(
        "format_tag", "unsupported format_tag " + std::to_string(format) +
                          " (need 1 = PCM or 7 = mu-law)");
  if (rate != kSampleRate)
    throw UnsupportedFormatError(
        "sample_rate",
        "unsupported sample_rate " + std::to_string(rate) + " (need 8000)");
  if (channels != 1 && channels != 2)
    throw UnsupportedFormatError(
        "channels", "unsupported channels " + std::to_string(channels));
  const std::uint16_t want_bits = format == detail::kFormatPcm ? 16 : 8;
  if (bits != want_bits)
    throw UnsupportedFormatError(
        "bits_per_sample", "unsupported bits_per_sample " +
                               std::to_string(bits) + " for format_tag " +
                               std::to_string(format));

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t frames = data.size() / frame_bytes;
  PcmBuffer pcm(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      const std::uint8_t* p = data.data() + i * frame_bytes + c * bytes_per_sample;
      pcm.channels[c][i] = format == detail::kFormatPcm
                               ? static_cast<std::int16_t>(read_u16(p))
                               : mulaw_decode(*p);
    }
  }
  if (channels == 1) {
    pcm.channels[1] = pcm.channels[0];
    if (warnings)
      warnings->push_back("mono input duplicated to agent and caller channels");
  }
  return pcm;
}

/// Serializes as stereo PCM16 8 kHz with the channel convention in INFO/ICMT.
inline std::vector<std::uint8_t> encode_wav(const PcmBuffer& pcm) {
  using namespace detail;
  pcm.validate();
  std::string note(kChannelNote);
  note.push_back('\0');
  if (note.size() & 1u) note.push_back('\0');
  const auto note_size = static_cast<std::uint32_t>(note.size());
  const std::uint32_t list_size = 4 + 8 + note_size;
  const auto data_size = static_cast<std::uint32_t>(pcm.frames() * 4);

  std::vector<std::uint8_t> out;
  out.reserve(44 + 8 + list_size + data_size);
  put_tag(out, "RIFF");
  put_u32(out, 4 + (8 + 16) + (8 + list_size) + (8 + data_size));
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 2);
  put_u32(out, kSampleRate);
  put_u32(out, kSampleRate * 4);
  put_u16(out, 4);
  put_u16(out, 16);
  put_tag(out, "LIST");
  put_u32(out, list_size);
  put_tag(out, "INFO");
  put_tag(out, "ICMT");
  put_u32(out, note_size);
  out.insert(out.end(), note.begin(), note.end());
  put_tag(out, "data");
  put_u32(out, data_size);
  for (std::size_t i = 0; i < pcm.frames(); ++i) {
    for (const auto& ch : pcm.channels)
      put_u16(out, static_cast<std::uint16_t>(ch[i]));
  }
  return out;
}

inline PcmBuffer read_wav(const std::string& path,
                          std::vector<std::string>* warnings = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_wav(bytes, warnings);
  } catch (const UnsupportedFormatError& e) {
    throw UnsupportedFormatError(e.field(), path + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

inline void write_wav(const std::string& path, const PcmBuffer& pcm) {
  const auto bytes = encode_wav(pcm);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

// ---------------------------------------------------------------------------
// Masking

struct MaskSpan {
  Channel channel = Channel::kCaller;
  Millis start_ms = 0;
  Millis end_ms = 0;
  EntityType cause = EntityType::kOther;

  friend bool operator==(const MaskSpan&, const MaskSpan&) = default;
};

struct BeepConfig {
  double frequency_hz = 1000.0;
  double amplitude_dbfs = -12.0;
  Millis ramp_ms = 10;

  void validate() const {
    if (!(frequency_hz > 0.0 && frequency_hz < kSampleRate / 2.0))
      throw ArgumentError("beep frequency must lie in (0, 4000) Hz");
    if (ramp_ms < 0) throw ArgumentError("beep ramp_ms must be >= 0");
  }

  double peak() const { return 32767.0 * std::pow(10.0, amplitude_dbfs / 20.0); }
};

struct SampleInterval {
  std::int64_t begin = 0;
  std::int64_t end = 0;
};

/// Union of one channel's spans in sample indices, clipped to [0, frames).
inline std::vector<SampleInterval> merged_intervals(
    std::span<const MaskSpan> spans, Channel channel, std::int64_t frames) {
  std::vector<SampleInterval> v;
  for (const auto& s : spans) {
    if (s.channel != channel) continue;
    const std::int64_t b = std::clamp<std::int64_t>(ms_to_samples(s.start_ms), 0, frames);
    const std::int64_t e = std::clamp<std::int64_t>(ms_to_samples(s.end_ms), 0, frames);
    if (b < e) v.push_back({b, e});
  }
  std::sort(v.begin(), v.end(),
            [](const auto& a, const auto& b) { return a.begin < b.begin; });
  std::vector<SampleInterval> out;
  for (const auto& iv : v) {
    if (!out.empty() && iv.begin <= out.back().end) {
      out.back().end = std::max(out.back().end, iv.end);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

/// Writes a beep over samples [begin, end); phase starts at `begin`.
inline void render_beep(std::span<std::int16_t> samples, const BeepConfig& beep) {
  const auto n = static_cast<std::int64_t>(samples.size());
  const std::int64_t ramp =
      std::min<std::int64_t>(ms_to_samples(beep.ramp_ms), n / 2);
  const double peak = beep.peak();
  const double w = 2.0 * M_PI * beep.frequency_hz / kSampleRate;
  for (std::int64_t i = 0; i < n; ++i) {
    double env = 1.0;
    const std::int64_t edge = std::min(i, n - 1 - i);
    if (edge < ramp)
      env = 0.5 - 0.5 * std::cos(M_PI * static_cast<double>(edge) /
                                 static_cast<double>(ramp));
    samples[static_cast<std::size_t>(i)] = static_cast<std::int16_t>(
        std::lround(peak * env * std::sin(w * static_cast<double>(i))));
  }
}

/// Replaces every span (per channel, as a union) with the beep tone. Samples
/// outside the union are copied bit-exactly.
inline PcmBuffer apply_masks(const PcmBuffer& pcm, std::span<const MaskSpan> spans,
                             const BeepConfig& beep = {}) {
  beep.validate();
  PcmBuffer out = pcm;
  const auto frames = static_cast<std::int64_t>(pcm.frames());
  for (int c = 0; c < kNumChannels; ++c) {
    auto& samples = out.channels[c];
    for (const auto& iv : merged_intervals(spans, channel_from_index(c), frames)) {
      render_beep(std::span<std::int16_t>(samples).subspan(
                      static_cast<std::size_t>(iv.begin),
                      static_cast<std::size_t>(iv.end - iv.begin)),
                  beep);
    }
  }
  return out;
}

}  // namespace liveredact::audio
