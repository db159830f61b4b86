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

#include <thread>

#include "liveredact/eval.hpp"
#include "liveredact/generator.hpp"
#include "liveredact/pipeline.hpp"
#include "test_support.hpp"

namespace liveredact::pipeline {
namespace {

using harness::CallBundle;
using testing::lay_out;
using testing::of_kind;

constexpr auto kCallerIdx = static_cast<std::size_t>(index_of(Channel::kCaller));

CallBundle card_call() {
  CallBundle b;
  b.call_id = "card";
  b.seed = 21;
  b.words[0] = lay_out(Channel::kAgent, {"what", "is", "the", "card", "number"}, 200);
  std::vector<asr::TimedWord> caller = lay_out(Channel::kCaller, {"sure", "it", "is", "four"}, 3000);
  Millis t = caller.back().end_ms + 200;
  for (int i = 0; i < 15; ++i, t += 500) caller.push_back({"one", t, t + 300, Channel::kCaller});
  testing::extend(caller, lay_out(Channel::kCaller, {"thank", "you", "very", "much"}, t));
  b.words[kCallerIdx] = caller;
  b.duration_ms = caller.back().end_ms + 2000;
  b.entities.push_back({EntityType::kCcNum, Channel::kCaller, 3, 18, "4111111111111111"});
  harness::validate_bundle(b);
  return b;
}

CallBundle chat_call() {
  CallBundle b;
  b.call_id = "chat";
  b.seed = 2;
  b.words[0] = lay_out(Channel::kAgent, {"hello", "how", "can", "i", "help"}, 200);
  b.words[kCallerIdx] = lay_out(Channel::kCaller, {"i", "would", "like", "to", "close", "my", "account"}, 3000);
  b.duration_ms = 8000;
  return b;
}

SessionConfig quiet_decoder() {
  SessionConfig cfg;
  cfg.decoder.revision_prob = 0.0;
  cfg.nlu.classifier = "oracle";
  return cfg;
}

TEST(Session, CallWithoutDigitsIsUntouched) {
  const auto b = chat_call();
  const auto pcm = harness::render_call_audio(b);
  harness::OracleClassifier oracle(b);
  SessionInputs in;
  in.audio = &pcm;
  const auto out = run_session(b, quiet_decoder(), oracle, in);
  EXPECT_TRUE(out.events.empty());
  EXPECT_TRUE(out.mask_spans.empty());
  ASSERT_TRUE(out.masked_audio);
  EXPECT_EQ(out.masked_audio->channels, pcm.channels);
  EXPECT_EQ(out.nlu_queries, 0u);
}

TEST(Session, OneCardNumberIsFullyCovered) {
  const auto b = card_call();
  const auto pcm = harness::render_call_audio(b);
  harness::OracleClassifier oracle(b);
  SessionInputs in;
  in.audio = &pcm;
  const auto out = run_session(b, quiet_decoder(), oracle, in);
  const auto starts = of_kind(out.events, lar::EventKind::kMaskStart);
  const auto ends = of_kind(out.events, lar::EventKind::kMaskEnd);
  ASSERT_EQ(starts.size(), 1u);
  ASSERT_EQ(ends.size(), 1u);
  EXPECT_EQ(starts[0].channel, Channel::kCaller);
  EXPECT_TRUE(of_kind(out.events, lar::EventKind::kLeakRecorded).empty());
  const auto [gs, ge] = harness::entity_interval(b, b.entities[0]);
  const auto cov = harness::mask_coverage(harness::mask_intervals(out.events, Channel::kCaller), {{gs, ge}});
  EXPECT_DOUBLE_EQ(cov.coverage, 1.0);
  ASSERT_EQ(out.captures.size(), 1u);
  EXPECT_EQ(out.captures[0].canonical.value, "4111111111111111");
  EXPECT_TRUE(out.captures[0].canonical.valid);
  // The masked samples no longer carry the original speech.
  const auto& orig = pcm.channels[kCallerIdx];
  const auto& masked = out.masked_audio->channels[kCallerIdx];
  std::size_t same = 0;
  for (auto i = audio::ms_to_samples(gs); i < audio::ms_to_samples(ge); ++i)
    same += orig[static_cast<std::size_t>(i)] == masked[static_cast<std::size_t>(i)];
  EXPECT_LT(same, static_cast<std::size_t>(audio::ms_to_samples(ge - gs) / 50));
  EXPECT_EQ(out.masked_audio->channels[0], pcm.channels[0]);
}

TEST(Session, NoHoldbackLeaksTheTriggerOnset) {
  const auto b = card_call();
  harness::OracleClassifier oracle(b);
  auto cfg = quiet_decoder();
  cfg.holdback_ms = 0;
  const auto out = run_session(b, cfg, oracle);
  EXPECT_GT(out.metrics.leak_duration_ms, 0);
  const auto leaks = of_kind(out.events, lar::EventKind::kLeakRecorded);
  ASSERT_EQ(leaks.size(), 1u);
  EXPECT_EQ(leaks[0].cause, lar::LeakCause::kLatency);
  EXPECT_EQ(leaks[0].time_ms, b.channel(Channel::kCaller)[3].start_ms);
  EXPECT_EQ(leaks[0].leak_ms, out.metrics.leak_duration_ms);
}

TEST(Session, TranscriptTagsTheCardNumber) {
  const auto b = card_call();
  harness::OracleClassifier oracle(b);
  const auto out = run_session(b, quiet_decoder(), oracle);
  std::vector<std::string> texts;
  for (const auto& t : out.transcript[kCallerIdx]) texts.push_back(t.text);
  EXPECT_EQ(texts, testing::split("sure it is <CCNUM> thank you very much"));
}

TEST(Session, RepeatedRunsAgree) {
  const auto b = card_call();
  const auto pcm = harness::render_call_audio(b);
  harness::OracleClassifier oracle(b);
  SessionConfig cfg;
  cfg.nlu.classifier = "oracle";
  cfg.decoder.errors.digit.substitution = 0.1;
  SessionInputs in;
  in.audio = &pcm;
  const auto a = run_session(b, cfg, oracle, in);
  const auto c = run_session(b, cfg, oracle, in);
  EXPECT_EQ(a.events, c.events);
  EXPECT_EQ(a.masked_audio->channels, c.masked_audio->channels);
  EXPECT_EQ(a.transcript, c.transcript);
}

TEST(Session, ConcurrentSessionsMatchSequentialOnes) {
  harness::GenConfig g;
  g.n_calls = 6;
  g.seed = 31;
  const auto corpus = harness::generate_corpus(g);
  std::vector<audio::PcmBuffer> pcm;
  for (const auto& b : corpus) pcm.push_back(harness::render_call_audio(b));
  SessionConfig cfg;
  cfg.nlu.classifier = "oracle";
  auto run_one = [&](std::size_t i) {
    harness::OracleClassifier oracle(corpus[i]);
    SessionInputs in;
    in.audio = &pcm[i];
    return run_session(corpus[i], cfg, oracle, in);
  };
  std::vector<SessionOutput> seq, par(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) seq.push_back(run_one(i));
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < corpus.size(); ++i) threads.emplace_back([&, i] { par[i] = run_one(i); });
  for (auto& t : threads) t.join();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    EXPECT_EQ(seq[i].events, par[i].events) << corpus[i].call_id;
    EXPECT_EQ(seq[i].masked_audio->channels, par[i].masked_audio->channels) << corpus[i].call_id;
  }
}

TEST(Session, WordClockAndVadClockAgreeOnACleanCall) {
  const auto b = card_call();
  const auto pcm = harness::render_call_audio(b);
  harness::OracleClassifier oracle(b);
  auto cfg = quiet_decoder();
  SessionInputs in;
  in.audio = &pcm;
  const auto with_vad = run_session(b, cfg, oracle, in);
  cfg.silence = SilenceSource::kWords;
  const auto with_words = run_session(b, cfg, oracle, in);
  EXPECT_EQ(with_vad.mask_spans.size(), with_words.mask_spans.size());
  EXPECT_EQ(with_vad.captures.size(), with_words.captures.size());
}

TEST(Session, WritesItsArtefacts) {
  const auto b = card_call();
  const auto pcm = harness::render_call_audio(b);
  harness::OracleClassifier oracle(b);
  const auto root = testing::temp_dir("session_out");
  const auto dir = root + "/card";
  std::filesystem::create_directories(dir);
  lar::JsonlCaptureLog log(dir + "/captures.jsonl", true);
  SessionInputs in;
  in.audio = &pcm;
  in.sink = &log;
  const auto cfg = quiet_decoder();
  const auto out = run_session(b, cfg, oracle, in);
  write_session_outputs(out, cfg, dir);
  for (const char* f : {"masked.wav", "events.jsonl", "transcript.tsv", "decoded.json", "report.json", "metrics.json"})
    EXPECT_TRUE(std::filesystem::exists(dir + "/" + f)) << f;
  const auto back = audio::read_wav(dir + "/masked.wav");
  EXPECT_EQ(back.channels, out.masked_audio->channels);
  const auto pred = harness::load_prediction(root, "card");
  EXPECT_EQ(pred.events, out.events);
  ASSERT_EQ(pred.captures.size(), 1u);
  EXPECT_EQ(pred.captures[0].canonical.value, "4111111111111111");
}

lar::EntityCapture cap(int id, EntityType t, int first, int last) {
  lar::EntityCapture c;
  c.id = id;
  c.entity_type = t;
  c.span.first = first;
  c.span.last = last;
  return c;
}

TEST(RedactTranscript, SensitiveSpansBecomeTags) {
  const auto words = lay_out(Channel::kCaller, {"code", "one", "two", "three", "zip", "nine", "nine"}, 0);
  const auto caps = std::vector{cap(0, EntityType::kCvv, 1, 3), cap(1, EntityType::kZip, 5, 6)};
  const auto once = redact_transcript(tokens_from_words(words), caps, default_sensitive_set());
  ASSERT_EQ(once.size(), 5u);
  EXPECT_EQ(once[1].text, "<CVV>");
  EXPECT_EQ(once[1].start_ms, words[1].start_ms);
  EXPECT_EQ(once[1].end_ms, words[3].end_ms);
  EXPECT_EQ(once[3].text, "nine");
  EXPECT_EQ(once[3].annotation, EntityType::kZip);
  EXPECT_FALSE(once[0].annotation);
  EXPECT_EQ(redact_transcript(once, caps, default_sensitive_set()), once);
}

TEST(RedactTranscript, OverlappingCapturesAreInconsistent) {
  const auto words = lay_out(Channel::kCaller, {"one", "two", "three"}, 0);
  EXPECT_THROW(redact_transcript(tokens_from_words(words),
                                 {cap(0, EntityType::kCvv, 0, 1), cap(1, EntityType::kCvv, 1, 2)},
                                 default_sensitive_set()),
               ConsistencyError);
}

TEST(Metrics, CpuVersusAudio) {
  EXPECT_DOUBLE_EQ(measure_rtf(2.0, 4.0), 0.5);
  EXPECT_THROW(measure_rtf(1.0, 0.0), ArgumentError);
  const auto b = card_call();
  harness::OracleClassifier oracle(b);
  const auto out = run_session(b, quiet_decoder(), oracle);
  EXPECT_GT(out.metrics.cpu_seconds, 0.0);
  EXPECT_DOUBLE_EQ(out.metrics.audio_seconds, static_cast<double>(b.duration_ms) / 1000.0);
  EXPECT_LT(out.metrics.cpu_vs_audio, 0.05);
}

}  // namespace
}  // namespace liveredact::pipeline
