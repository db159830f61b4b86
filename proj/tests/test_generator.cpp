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

#include "liveredact/generator.hpp"
#include "test_support.hpp"

namespace liveredact::harness {
namespace {

bool luhn_ok(const std::string& d) {
  int total = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    int v = d[d.size() - 1 - i] - '0';
    if (i % 2 == 1) v = v * 2 > 9 ? v * 2 - 9 : v * 2;
    total += v;
  }
  return total % 10 == 0;
}

bool aba_ok(const std::string& d) {
  const int sum = 3 * (d[0] + d[3] + d[6] - 3 * '0') + 7 * (d[1] + d[4] + d[7] - 3 * '0') +
                  (d[2] + d[5] + d[8] - 3 * '0');
  return sum % 10 == 0;
}

TEST(Generator, CallsAreDeterministicPerIndex) {
  GenConfig cfg;
  cfg.seed = 5;
  EXPECT_EQ(generate_call(cfg, 3), generate_call(cfg, 3));
  EXPECT_NE(generate_call(cfg, 3).words, generate_call(cfg, 4).words);
  const auto corpus = generate_corpus([] { GenConfig c; c.seed = 5; c.n_calls = 5; return c; }());
  EXPECT_EQ(corpus[3], generate_call(cfg, 3));
}

TEST(Generator, EveryCallIsAValidBundle) {
  GenConfig cfg;
  cfg.seed = 12;
  cfg.n_calls = 150;
  cfg.correction_rate = 0.3;
  cfg.filler_rate = 0.3;
  cfg.agent_interrupt_rate = 0.2;
  cfg.long_pause_rate = 0.2;
  for (const auto& b : generate_corpus(cfg)) {
    EXPECT_NO_THROW(validate_bundle(b)) << b.call_id;
    EXPECT_FALSE(b.entities.empty());
    EXPECT_EQ(bundle_from_json(bundle_to_json(b)), b);
  }
}

TEST(Generator, ValuesHaveValidCheckDigits) {
  Rng rng(4);
  for (int i = 0; i < 2000; ++i) {
    const auto cc = random_value(EntityType::kCcNum, rng, 1.0);
    EXPECT_TRUE(cc.size() >= 13 && cc.size() <= 19);
    EXPECT_TRUE(luhn_ok(cc)) << cc;
    const auto aba = random_value(EntityType::kRouting, rng, 1.0);
    ASSERT_EQ(aba.size(), 9u);
    EXPECT_TRUE(aba_ok(aba)) << aba;
  }
  int bad = 0;
  for (int i = 0; i < 500; ++i) bad += !luhn_ok(random_value(EntityType::kCcNum, rng, 0.0));
  EXPECT_EQ(bad, 500);
}

TEST(Generator, ExplicitMixRestrictsTypes) {
  GenConfig cfg;
  cfg.n_calls = 40;
  cfg.entity_mix.fill(0.0);
  cfg.entity_mix[static_cast<std::size_t>(index_of(EntityType::kExpDate))] = 1.0;
  for (const auto& b : generate_corpus(cfg))
    for (const auto& e : b.entities) EXPECT_EQ(e.type, EntityType::kExpDate);
}

TEST(Generator, EntitiesAreSpokenByTheCaller) {
  GenConfig cfg;
  cfg.n_calls = 30;
  for (const auto& b : generate_corpus(cfg))
    for (const auto& e : b.entities) EXPECT_EQ(e.channel, Channel::kCaller);
}

double rms(const std::vector<std::int16_t>& x, std::size_t a, std::size_t b) {
  double s = 0;
  for (std::size_t i = a; i < b; ++i) s += static_cast<double>(x[i]) * x[i];
  return std::sqrt(s / static_cast<double>(b - a));
}

TEST(Generator, RenderedAudioFollowsTheWordTimes) {
  GenConfig cfg;
  const auto b = generate_call(cfg, 0);
  const auto pcm = render_call_audio(b);
  EXPECT_EQ(pcm.frames(), static_cast<std::size_t>(audio::ms_to_samples(b.duration_ms)));
  EXPECT_EQ(render_call_audio(b).channels, pcm.channels);
  const auto& caller = b.channel(Channel::kCaller);
  const auto& x = pcm.channels[static_cast<std::size_t>(index_of(Channel::kCaller))];
  const auto& w = caller.front();
  const double speech = rms(x, static_cast<std::size_t>(audio::ms_to_samples(w.start_ms + 20)),
                            static_cast<std::size_t>(audio::ms_to_samples(w.end_ms - 20)));
  const double quiet = rms(x, 0, static_cast<std::size_t>(audio::ms_to_samples(std::min<Millis>(caller.front().start_ms, 500))));
  EXPECT_GT(speech, 1000.0);
  EXPECT_LT(quiet, 60.0);
}

TEST(GenConfig, Validation) {
  GenConfig c;
  c.repeater_rate = 0.7;
  c.grouped_rate = 0.7;
  EXPECT_THROW(c.validate(), ConfigError);
  c = GenConfig{};
  c.entity_mix.fill(0.0);
  EXPECT_THROW(c.validate(), ConfigError);
}

}  // namespace
}  // namespace liveredact::harness
