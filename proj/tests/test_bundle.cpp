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

#include <fstream>

#include "liveredact/bundle.hpp"
#include "test_support.hpp"

namespace liveredact::harness {
namespace {

using testing::lay_out;

CallBundle sample_bundle() {
  CallBundle b;
  b.call_id = "c1";
  b.duration_ms = 10'000;
  b.seed = 3;
  b.audio = "audio/c1.wav";
  b.words[static_cast<std::size_t>(index_of(Channel::kAgent))] =
      lay_out(Channel::kAgent, {"what", "is", "the", "code"}, 0);
  b.words[static_cast<std::size_t>(index_of(Channel::kCaller))] =
      lay_out(Channel::kCaller, {"it", "is", "one", "two", "three"}, 2500);
  b.entities.push_back({EntityType::kCvv, Channel::kCaller, 2, 4, "123"});
  return b;
}

TEST(Bundle, JsonRoundTrip) {
  const auto b = sample_bundle();
  const auto j = bundle_to_json(b);
  EXPECT_EQ(j.at("version"), kBundleVersion);
  EXPECT_EQ(j.at("channels").at(0).at("name"), "agent");
  EXPECT_EQ(bundle_from_json(j), b);
  auto no_audio = b;
  no_audio.audio.reset();
  EXPECT_EQ(bundle_from_json(bundle_to_json(no_audio)), no_audio);
}

TEST(Bundle, FileRoundTrip) {
  const auto dir = testing::temp_dir("bundle_rt");
  auto b2 = sample_bundle();
  b2.call_id = "c2";
  write_bundle_file(dir + "/x.jsonl", {sample_bundle(), b2});
  const auto back = read_bundle_file(dir + "/x.jsonl");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0], sample_bundle());
  EXPECT_EQ(back[1], b2);
}

TEST(Bundle, DirectoriesLoadInNameOrder) {
  const auto dir = testing::temp_dir("bundle_dir");
  auto a = sample_bundle();
  auto b = sample_bundle();
  a.call_id = "from_a";
  b.call_id = "from_b";
  write_bundle_file(dir + "/b.jsonl", {b});
  write_bundle_file(dir + "/a.jsonl", {a});
  std::ofstream(dir + "/notes.txt") << "ignored";
  const auto all = load_corpus(dir);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].call_id, "from_a");
  EXPECT_EQ(all[1].call_id, "from_b");
  EXPECT_THROW(load_corpus(testing::temp_dir("bundle_empty")), FormatError);
}

TEST(Bundle, CanonicalMustMatchTheNormalizer) {
  auto b = sample_bundle();
  b.entities[0].canonical = "124";
  EXPECT_THROW(validate_bundle(b), FormatError);
  const auto dir = testing::temp_dir("bundle_bad");
  {
    std::ofstream out(dir + "/bad.jsonl");
    out << bundle_to_json(sample_bundle()).dump() << "\n" << bundle_to_json(b).dump() << "\n";
  }
  try {
    read_bundle_file(dir + "/bad.jsonl");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.jsonl:2"), std::string::npos) << e.what();
  }
}

TEST(Bundle, StructuralErrors) {
  auto b = sample_bundle();
  b.entities[0].last = 9;
  EXPECT_THROW(validate_bundle(b), FormatError);
  b = sample_bundle();
  b.duration_ms = 3000;
  EXPECT_THROW(validate_bundle(b), FormatError);
  b = sample_bundle();
  b.words[1][1].start_ms = b.words[1][0].start_ms;
  EXPECT_THROW(validate_bundle(b), ScriptFormatError);
  b = sample_bundle();
  b.entities[0] = {EntityType::kCvv, Channel::kCaller, 0, 1, ""};
  EXPECT_THROW(validate_bundle(b), FormatError);
  b = sample_bundle();
  b.entities[0] = {EntityType::kOther, Channel::kCaller, 0, 1, ""};
  EXPECT_NO_THROW(validate_bundle(b));

  auto j = bundle_to_json(sample_bundle());
  j["version"] = kBundleVersion + 1;
  EXPECT_THROW(bundle_from_json(j), FormatError);
  j = bundle_to_json(sample_bundle());
  j["entities"][0]["type"] = "PIN";
  EXPECT_THROW(bundle_from_json(j), FormatError);
}

TEST(Bundle, AudioResolvesNextToTheBundleFile) {
  const auto b = sample_bundle();
  EXPECT_EQ(*resolve_audio(b, "/data/set/calls.jsonl"), "/data/set/audio/c1.wav");
  auto abs = b;
  abs.audio = "/elsewhere/x.wav";
  EXPECT_EQ(*resolve_audio(abs, "/data/set/calls.jsonl"), "/elsewhere/x.wav");
  abs.audio.reset();
  EXPECT_FALSE(resolve_audio(abs, "calls.jsonl"));
}

TEST(Oracle, LabelsTriggersInsideAnnotatedSpans) {
  const auto b = sample_bundle();
  OracleClassifier oracle(b);
  const auto& w = b.channel(Channel::kCaller);
  nlu::NluContext ctx;
  ctx.channel = Channel::kCaller;
  ctx.trigger_start_ms = w[3].start_ms;
  ctx.trigger_end_ms = w[3].end_ms;
  EXPECT_EQ(oracle.classify(ctx).type, EntityType::kCvv);
  ctx.trigger_start_ms = w[0].start_ms;
  ctx.trigger_end_ms = w[0].end_ms;
  EXPECT_EQ(oracle.classify(ctx).type, EntityType::kOther);
  EXPECT_FALSE(oracle.gold_type(ctx));
  ctx.channel = Channel::kAgent;
  ctx.trigger_start_ms = w[3].start_ms;
  ctx.trigger_end_ms = w[3].end_ms;
  EXPECT_FALSE(oracle.gold_type(ctx));
}

TEST(Oracle, RecordingClassifierKeepsContexts) {
  const auto b = sample_bundle();
  OracleClassifier oracle(b);
  testing::FixedClassifier fixed(EntityType::kZip);
  RecordingClassifier rec(fixed, &oracle);
  nlu::NluContext ctx;
  ctx.channel = Channel::kCaller;
  ctx.trigger_start_ms = b.channel(Channel::kCaller)[2].start_ms;
  ctx.trigger_end_ms = ctx.trigger_start_ms + 10;
  EXPECT_EQ(rec.classify(ctx).type, EntityType::kZip);
  ASSERT_EQ(rec.entries.size(), 1u);
  EXPECT_EQ(rec.entries[0].predicted, EntityType::kZip);
  EXPECT_EQ(rec.entries[0].gold, EntityType::kCvv);
}

}  // namespace
}  // namespace liveredact::harness
