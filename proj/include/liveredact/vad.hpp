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

// Energy-adaptive voice activity detection. Stage one labels each frame
// against a noise floor that tracks silence; stage two smooths labels into
// speech segments with an onset run and a hangover run.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "liveredact/audio.hpp"
#include "liveredact/common.hpp"

namespace liveredact::vad {

struct VadConfig {
  Millis frame_ms = 20;
  Millis hop_ms = 10;
  double threshold_factor = 3.0;
  double floor_adapt_rate = 0.05;
  int onset_frames = 3;
  int hangover_frames = 20;
  double floor_min = 1.0;
  Millis calibration_ms = 100;

  void validate() const {
    if (!(hop_ms > 0 && frame_ms >= hop_ms))
      throw ConfigError("vad: need frame_ms >= hop_ms > 0");
    if (!(threshold_factor > 1.0)) throw ConfigError("vad: threshold_factor must be > 1");
    if (!(floor_adapt_rate > 0.0 && floor_adapt_rate < 1.0))
      throw ConfigError("vad: floor_adapt_rate must lie in (0, 1)");
    if (onset_frames < 1 || hangover_frames < 1)
      throw ConfigError("vad: onset_frames and hangover_frames must be >= 1");
    if (!(floor_min > 0.0)) throw ConfigError("vad: floor_min must be > 0");
  }
};

enum class FrameLabel : std::uint8_t { kSilence, kSpeech };

struct VadState {
  double noise_floor = 1.0;
  bool in_speech = false;
  int onset_count = 0;
  int hangover_count = 0;
  Millis last_speech_end_ms = 0;
};

struct SpeechSegment {
  Channel channel = Channel::kCaller;
  Millis start_ms = 0;
  Millis end_ms = 0;

  friend bool operator==(const SpeechSegment&, const SpeechSegment&) = default;
};

inline double frame_energy(std::span<const std::int16_t> frame) {
  if (frame.empty()) return 0.0;
  double acc = 0.0;
  for (std::int16_t s : frame) acc += static_cast<double>(s) * s;
  return acc / static_cast<double>(frame.size());
}

/// Stage one. The floor only moves on silence-labeled frames.
inline std::pair<FrameLabel, VadState> classify_frame(double energy, VadState state,
                                                      const VadConfig& cfg) {
  if (energy > state.noise_floor * cfg.threshold_factor)
    return {FrameLabel::kSpeech, state};
  const double a = cfg.floor_adapt_rate;
  state.noise_floor = std::max(cfg.floor_min, (1.0 - a) * state.noise_floor + a * energy);
  return {FrameLabel::kSilence, state};
}

/// Milliseconds since the last speech-to-silence transition; 0 inside speech.
inline Millis silence_duration(const VadState& state, Millis now_ms) {
  if (state.in_speech) return 0;
  return std::max<Millis>(0, now_ms - state.last_speech_end_ms);
}

/// Incremental two-stage detector for one channel.
class VadStream {
 public:
  explicit VadStream(VadConfig cfg, Channel channel = Channel::kCaller,
                     std::optional<double> initial_floor = std::nullopt)
      : cfg_(cfg), channel_(channel) {
    cfg_.validate();
    frame_len_ = audio::ms_to_samples(cfg_.frame_ms);
    hop_len_ = audio::ms_to_samples(cfg_.hop_ms);
    if (initial_floor) {
      state_.noise_floor = std::max(cfg_.floor_min, *initial_floor);
      calibrated_ = true;
    }
  }

  void push(std::span<const std::int16_t> samples) {
    buffer_.insert(buffer_.end(), samples.begin(), samples.end());
    if (!calibrated_) {
      const std::int64_t need = audio::ms_to_samples(cfg_.calibration_ms);
      if (static_cast<std::int64_t>(buffer_.size()) < need) return;
      calibrate(static_cast<std::size_t>(need));
    }
    drain();
  }

  /// Flushes a pending calibration and closes an open segment at the last
  /// speech frame.
  void finish() {
    if (!calibrated_) {
      calibrate(buffer_.size());
      drain();
    }
    if (state_.in_speech) close_segment();
  }

  const VadState& state() const { return state_; }
  const std::vector<FrameLabel>& labels() const { return labels_; }
  const std::vector<SpeechSegment>& segments() const { return segments_; }

  /// Audio time up to which frames have been classified.
  Millis processed_ms() const {
    return audio::samples_to_ms(frame_index_ * hop_len_);
  }

 private:
  void calibrate(std::size_t n) {
    const double e = frame_energy(std::span<const std::int16_t>(buffer_.data(), n));
    state_.noise_floor = std::max(cfg_.floor_min, e);
    calibrated_ = true;
  }

  void drain() {
    while (true) {
      const std::int64_t begin = frame_index_ * hop_len_ - consumed_;
      if (begin + frame_len_ > static_cast<std::int64_t>(buffer_.size())) break;
      const double e = frame_energy(std::span<const std::int16_t>(
          buffer_.data() + begin, static_cast<std::size_t>(frame_len_)));
      step(e);
      ++frame_index_;
    }
    const std::int64_t keep_from = frame_index_ * hop_len_ - consumed_;
    if (keep_from > 4096) {
      buffer_.erase(buffer_.begin(), buffer_.begin() + keep_from);
      consumed_ += keep_from;
    }
  }

  void step(double energy) {
    auto [label, next] = classify_frame(energy, state_, cfg_);
    state_ = next;
    labels_.push_back(label);
    const Millis frame_start = frame_index_ * cfg_.hop_ms;
    const Millis frame_end = frame_start + cfg_.frame_ms;
    if (!state_.in_speech) {
      if (label == FrameLabel::kSpeech) {
        if (state_.onset_count == 0) candidate_start_ = frame_start;
        ++state_.onset_count;
        last_speech_frame_end_ = frame_end;
        if (state_.onset_count >= cfg_.onset_frames) {
          state_.in_speech = true;
          state_.onset_count = 0;
          state_.hangover_count = 0;
          segment_start_ = candidate_start_;
        }
      } else {
        state_.onset_count = 0;
      }
      return;
    }
    if (label == FrameLabel::kSpeech) {
      state_.hangover_count = 0;
      last_speech_frame_end_ = frame_end;
    } else if (++state_.hangover_count >= cfg_.hangover_frames) {
      close_segment();
    }
  }

  void close_segment() {
    segments_.push_back({channel_, segment_start_, last_speech_frame_end_});
    state_.in_speech = false;
    state_.hangover_count = 0;
    state_.onset_count = 0;
    state_.last_speech_end_ms = last_speech_frame_end_;
  }

  VadConfig cfg_;
  Channel channel_;
  std::int64_t frame_len_ = 0;
  std::int64_t hop_len_ = 0;
  bool calibrated_ = false;
  VadState state_;
  std::vector<std::int16_t> buffer_;
  std::int64_t consumed_ = 0;
  std::int64_t frame_index_ = 0;
  Millis candidate_start_ = 0;
  Millis segment_start_ = 0;
  Millis last_speech_frame_end_ = 0;
  std::vector<FrameLabel> labels_;
  std::vector<SpeechSegment> segments_;
};

/// Batch segmentation of one channel.
inline std::vector<SpeechSegment> segment(std::span<const std::int16_t> samples,
                                          const VadConfig& cfg = {},
                                          Channel channel = Channel::kCaller) {
  VadStream stream(cfg, channel);
  stream.push(samples);
  stream.finish();
  return stream.segments();
}

}  // namespace liveredact::vad
