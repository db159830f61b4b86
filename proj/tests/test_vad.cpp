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

#include <gtest/gtest.h>

#include <cmath>

#include "liveredact/vad.hpp"

namespace liveredact::vad {
namespace {

std::vector<std::int16_t> tone(std::vector<std::int16_t> buf, Millis from, Millis to, double dbfs) {
  const double amp = 32767.0 * std::pow(10.0, dbfs / 20.0);
  for (auto i = audio::ms_to_samples(from); i < audio::ms_to_samples(to); ++i)
    buf[static_cast<std::size_t>(i)] = static_cast<std::int16_t>(std::lround(amp * std::sin(0.7 * static_cast<double>(i))));
  return buf;
}

TEST(ClassifyFrame, ZeroEnergyIsSilenceAndFloorDecays) {
  VadConfig cfg;
  VadState s;
  s.noise_floor = 50.0;
  auto [label, next] = classify_frame(0.0, s, cfg);
  EXPECT_EQ(label, FrameLabel::kSilence);
  EXPECT_DOUBLE_EQ(next.noise_floor, 0.95 * 50.0);
  for (int i = 0; i < 1000; ++i) next = classify_frame(0.0, next, cfg).second;
  EXPECT_DOUBLE_EQ(next.noise_floor, cfg.floor_min);
}

TEST(ClassifyFrame, ThresholdIsStrictProduct) {
  VadConfig cfg;
  VadState s;
  s.noise_floor = 100.0;
  auto [label, next] = classify_frame(301.0, s, cfg);
  EXPECT_EQ(label, FrameLabel::kSpeech);
  EXPECT_DOUBLE_EQ(next.noise_floor, 100.0);
  EXPECT_EQ(classify_frame(300.0, s, cfg).first, FrameLabel::kSilence);
}

TEST(ClassifyFrame, ConstantEnergyAtFloorIsAFixedPoint) {
  VadConfig cfg;
  VadState s;
  s.noise_floor = 500.0;
  for (int i = 0; i < 500; ++i) {
    auto [label, next] = classify_frame(500.0, s, cfg);
    ASSERT_EQ(label, FrameLabel::kSilence);
    ASSERT_DOUBLE_EQ(next.noise_floor, 500.0);
    s = next;
  }
}

TEST(Segment, DigitalSilenceHasNoSpeech) {
  EXPECT_TRUE(segment(std::vector<std::int16_t>(3 * 8000)).empty());
}

TEST(Segment, SingleBurstGivesOneSegment) {
  const auto x = tone(std::vector<std::int16_t>(3 * 8000), 1200, 1700, -6.0);
  const VadConfig cfg;
  const auto segs = segment(x, cfg);
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_LE(std::abs(segs[0].start_ms - 1200), 40);
  // The end is the last speech-labelled frame, which overlaps the burst.
  EXPECT_GE(segs[0].end_ms, 1700 - cfg.frame_ms);
  EXPECT_LE(segs[0].end_ms, 1700 + cfg.hangover_frames * cfg.hop_ms);
}

TEST(Segment, ShortBlipsNeverReachOnset) {
  std::vector<std::int16_t> x(5 * 8000);
  for (Millis t = 500; t < 5000; t += 1000) x = tone(std::move(x), t, t + 10, -6.0);
  // A 10 ms blip touches at most two 20 ms frames at a 10 ms hop; onset
  // needs three.
  EXPECT_TRUE(segment(x).empty());
}

TEST(Segment, StreamingMatchesBatch) {
  std::vector<std::int16_t> x(6 * 8000);
  x = tone(std::move(x), 700, 1500, -10.0);
  x = tone(std::move(x), 2600, 2900, -20.0);
  x = tone(std::move(x), 4000, 5200, -3.0);
  const auto batch = segment(x);
  VadStream s(VadConfig{});
  const std::size_t chunks[] = {1, 17, 333, 800, 4001};
  for (std::size_t pos = 0, k = 0; pos < x.size(); ++k) {
    const std::size_t n = std::min(chunks[k % 5], x.size() - pos);
    s.push(std::span<const std::int16_t>(x).subspan(pos, n));
    pos += n;
  }
  s.finish();
  EXPECT_EQ(s.segments(), batch);
  ASSERT_EQ(batch.size(), 3u);
  for (std::size_t i = 1; i < batch.size(); ++i) EXPECT_LT(batch[i - 1].end_ms, batch[i].start_ms);
}

TEST(Segment, LabelsInvariantToGainWithProportionalFloor) {
  std::vector<std::int16_t> x(4 * 8000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<std::int16_t>((static_cast<int>(i * 2654435761u % 41)) - 20);
  x = tone(std::move(x), 1000, 1800, -20.0);
  std::vector<std::int16_t> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = static_cast<std::int16_t>(4 * x[i]);
  VadConfig cfg;
  cfg.floor_min = 1e-6;
  VadStream a(cfg, Channel::kCaller, 100.0), b(cfg, Channel::kCaller, 1600.0);
  a.push(x);
  b.push(y);
  a.finish();
  b.finish();
  EXPECT_EQ(a.labels(), b.labels());
  EXPECT_EQ(a.segments(), b.segments());
}

TEST(SilenceDuration, Definition) {
  VadState s;
  s.in_speech = true;
  EXPECT_EQ(silence_duration(s, 9999), 0);
  s.in_speech = false;
  s.last_speech_end_ms = 1000;
  EXPECT_EQ(silence_duration(s, 4500), 3500);
}

TEST(SilenceDuration, ResetsOnSpeechReentry) {
  auto x = tone(std::vector<std::int16_t>(4 * 8000), 500, 1000, -6.0);
  x = tone(std::move(x), 2500, 3000, -6.0);
  VadStream s(VadConfig{});
  Millis before = -1;
  for (Millis t = 100; t <= 4000; t += 100) {
    s.push(std::span<const std::int16_t>(x).subspan(static_cast<std::size_t>(audio::ms_to_samples(t - 100)), 800));
    const Millis d = silence_duration(s.state(), t);
    if (t == 2400) before = d;
    if (t == 2700) {
      EXPECT_EQ(d, 0);
    }
  }
  EXPECT_GT(before, 1000);
}

TEST(VadConfig, RejectsBadValues) {
  VadConfig c;
  c.threshold_factor = 1.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.hop_ms = 30;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.floor_adapt_rate = 1.0;
  EXPECT_THROW(c.validate(), ConfigError);
}

}  // namespace
}  // namespace liveredact::vad
