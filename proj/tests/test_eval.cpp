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

#include <functional>

#include "liveredact/eval.hpp"
#include "liveredact/rng.hpp"
#include "test_support.hpp"

namespace liveredact::harness {
namespace {

using testing::split;

// Plain recursive edit distance with memoisation, independent of the
// alignment code under test.
std::size_t edit_distance(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    auto key = std::pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t best = go(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
    best = std::min(best, go(i + 1, j) + 1);
    best = std::min(best, go(i, j + 1) + 1);
    return memo[key] = best;
  };
  return go(0, 0);
}

TEST(Wer, Examples) {
  EXPECT_NEAR(wer(split("a b c"), split("a x c")), 1.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(wer({}, split("a")), 1.0);
  EXPECT_DOUBLE_EQ(wer(split("a b"), split("a b")), 0.0);
  const auto r = align(split("a b c d"), split("a c d e"));
  EXPECT_EQ(r.deletions, 1u);
  EXPECT_EQ(r.insertions, 1u);
  EXPECT_EQ(r.substitutions, 0u);
  EXPECT_EQ(r.ref_len, 4u);
}

TEST(Wer, MatchesBruteForceEditDistance) {
  Rng rng(17);
  const std::vector<std::string> vocab = {"a", "b", "c", "d"};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> x, y;
    for (auto n = rng.uniform_int(0, 8); n > 0; --n) x.push_back(rng.pick(vocab));
    for (auto n = rng.uniform_int(0, 8); n > 0; --n) y.push_back(rng.pick(vocab));
    const auto r = align(x, y);
    ASSERT_EQ(r.errors(), edit_distance(x, y)) << trial;
    std::size_t refs = 0, hyps = 0;
    for (auto op : r.alignment) {
      refs += op != AlignOp::kInsertion;
      hyps += op != AlignOp::kDeletion;
    }
    EXPECT_EQ(refs, x.size());
    EXPECT_EQ(hyps, y.size());
  }
}

TEST(Ser, OneOfFourSegmentsWrong) {
  const std::vector<std::pair<Segment, Segment>> pairs = {
      {split("one two"), split("one two")},
      {split("three"), split("tree")},
      {split("four"), split("four")},
      {split("five six"), split("five six")}};
  EXPECT_DOUBLE_EQ(ser(pairs), 0.25);
  EXPECT_DOUBLE_EQ(ser({}), 0.0);
}

LabeledSpan span(int first, int last, EntityType t) { return {"c", Channel::kCaller, first, last, t}; }

TEST(EntityPrf, ExactMatchingRules) {
  const std::vector<LabeledSpan> gold = {span(3, 5, EntityType::kCvv), span(10, 20, EntityType::kCcNum)};
  auto prf = entity_prf(gold, gold);
  EXPECT_DOUBLE_EQ(prf[EntityType::kCvv].f1(), 1.0);
  EXPECT_DOUBLE_EQ(prf[EntityType::kCcNum].f1(), 1.0);

  prf = entity_prf({span(3, 5, EntityType::kZip), span(10, 19, EntityType::kCcNum)}, gold);
  EXPECT_EQ(prf[EntityType::kZip].fp, 1u);
  EXPECT_EQ(prf[EntityType::kCvv].fn, 1u);
  EXPECT_EQ(prf[EntityType::kCcNum].fp, 1u);
  EXPECT_EQ(prf[EntityType::kCcNum].fn, 1u);
  EXPECT_DOUBLE_EQ(prf[EntityType::kCcNum].precision(), 0.0);

  prf = entity_prf({}, gold);
  EXPECT_DOUBLE_EQ(prf[EntityType::kCvv].precision(), 1.0);
  EXPECT_DOUBLE_EQ(prf[EntityType::kCvv].recall(), 0.0);
  EXPECT_DOUBLE_EQ(prf[EntityType::kCvv].f1(), 0.0);

  // Duplicates match at most once.
  prf = entity_prf({span(3, 5, EntityType::kCvv), span(3, 5, EntityType::kCvv)}, {span(3, 5, EntityType::kCvv)});
  EXPECT_EQ(prf[EntityType::kCvv].tp, 1u);
  EXPECT_EQ(prf[EntityType::kCvv].fp, 1u);
}

TEST(Coverage, LateMaskLeavesOneGap) {
  const auto c = mask_coverage({{10'500, 14'000}}, {{10'000, 14'000}});
  EXPECT_DOUBLE_EQ(c.coverage, 0.875);
  ASSERT_EQ(c.uncovered.size(), 1u);
  EXPECT_EQ(c.uncovered[0], (Interval{10'000, 10'500}));
  EXPECT_EQ(c.over_mask_ms, 0);
  const auto none = mask_coverage({{0, 100}}, {});
  EXPECT_DOUBLE_EQ(none.coverage, 1.0);
  EXPECT_EQ(none.over_mask_ms, 100);
}

TEST(Coverage, UnionsAndSubtraction) {
  EXPECT_EQ(union_of({{5, 8}, {0, 3}, {2, 4}, {9, 9}}), (std::vector<Interval>{{0, 4}, {5, 8}}));
  EXPECT_EQ(subtract({{0, 10}}, {{2, 3}, {5, 12}}), (std::vector<Interval>{{0, 2}, {3, 5}}));
  EXPECT_EQ(total_ms({{0, 4}, {5, 8}}), 7);
}

lar::RedactionEvent event(lar::EventKind k, Millis t, Channel ch = Channel::kCaller) {
  lar::RedactionEvent e;
  e.kind = k;
  e.time_ms = t;
  e.channel = ch;
  e.entity_type = EntityType::kCvv;
  return e;
}

constexpr auto kCaller = static_cast<std::size_t>(index_of(Channel::kCaller));

// Caller: "the code is one two three" with the digits at 10.0, 10.5, 11.0 s.
CallBundle cvv_call(Millis third_start = 11'000) {
  CallBundle b;
  b.call_id = "c";
  b.duration_ms = 20'000;
  b.words[kCaller] = {{"the", 8000, 8200, Channel::kCaller},   {"code", 8300, 8600, Channel::kCaller},
                      {"is", 8700, 8900, Channel::kCaller},    {"one", 10'000, 10'300, Channel::kCaller},
                      {"two", 10'500, 10'800, Channel::kCaller}, {"three", third_start, third_start + 300, Channel::kCaller}};
  b.entities.push_back({EntityType::kCvv, Channel::kCaller, 3, 5, "123"});
  return b;
}

PredictedCall masked_from(Millis start, Millis end) {
  PredictedCall p;
  p.events = {event(lar::EventKind::kMaskStart, start), event(lar::EventKind::kMaskEnd, end)};
  return p;
}

lar::LeakCause only_cause(const CallEval& ev) {
  EXPECT_EQ(ev.leaks.size(), 1u);
  return ev.leaks.empty() ? lar::LeakCause::kUnknown : ev.leaks[0].cause;
}

TEST(Evaluate, PerfectPrediction) {
  const auto b = cvv_call();
  auto p = masked_from(10'000, 12'000);
  p.decoded = b.words;
  lar::EntityCapture cap;
  cap.entity_type = EntityType::kCvv;
  cap.span = {3, 5, 10'000, 11'300};
  cap.canonical.valid = true;
  p.captures.push_back(cap);
  const auto ev = evaluate_call(b, p, default_sensitive_set());
  EXPECT_TRUE(ev.leaks.empty());
  EXPECT_DOUBLE_EQ(ev.coverage.coverage, 1.0);
  EXPECT_EQ(ev.coverage.gold_ms, 900);
  EXPECT_EQ(ev.wer[kCaller].errors(), 0u);
  const auto r = aggregate({ev});
  EXPECT_DOUBLE_EQ(r.prf.at(EntityType::kCvv).f1(), 1.0);
  EXPECT_DOUBLE_EQ(r.ser, 0.0);
  const auto j = report_json(r);
  EXPECT_EQ(j.at("leak_table").size(), 0u);
  EXPECT_NE(report_table(r).find("CVV"), std::string::npos);
}

TEST(Evaluate, UnexplainedLateMaskIsUnknown) {
  const auto ev = evaluate_call(cvv_call(), masked_from(10'200, 12'000), default_sensitive_set());
  EXPECT_EQ(only_cause(ev), lar::LeakCause::kUnknown);
  EXPECT_EQ(ev.leaks[0].interval, (Interval{10'000, 10'200}));
  EXPECT_EQ(ev.leaks[0].type, EntityType::kCvv);
}

TEST(Evaluate, RecordedLatencyExplainsTheLeak) {
  auto p = masked_from(10'200, 12'000);
  auto leak = event(lar::EventKind::kLeakRecorded, 10'000);
  leak.cause = lar::LeakCause::kLatency;
  leak.leak_ms = 200;
  p.events.push_back(leak);
  EXPECT_EQ(only_cause(evaluate_call(cvv_call(), p, default_sensitive_set())), lar::LeakCause::kLatency);
}

TEST(Evaluate, MisrecognisedDigitTakesPrecedence) {
  const auto b = cvv_call();
  auto p = masked_from(10'200, 12'000);
  auto leak = event(lar::EventKind::kLeakRecorded, 10'000);
  leak.cause = lar::LeakCause::kLatency;
  leak.leak_ms = 200;
  p.events.push_back(leak);
  p.decoded = b.words;
  p.decoded[kCaller][3].text = "won";
  for (int i = 0; i < 6; ++i) {
    asr::CorruptionEntry e;
    e.gold_index = e.decoded_index = i;
    e.gold_text = b.words[kCaller][static_cast<std::size_t>(i)].text;
    e.decoded_text = p.decoded[kCaller][static_cast<std::size_t>(i)].text;
    e.op = i == 3 ? asr::EditOp::kSubstitution : asr::EditOp::kOk;
    p.corruption[kCaller].push_back(e);
  }
  const auto ev = evaluate_call(b, p, default_sensitive_set());
  EXPECT_EQ(only_cause(ev), lar::LeakCause::kAsrError);
  ASSERT_EQ(ev.segments.size(), 1u);
  EXPECT_EQ(ev.segments[0].second, split("won two three"));
  EXPECT_EQ(ev.wer[kCaller].substitutions, 1u);
}

TEST(Evaluate, LongPauseInsideTheEntityIsHesitation) {
  const auto b = cvv_call(14'900);
  const auto ev = evaluate_call(b, masked_from(10'000, 14'000), default_sensitive_set());
  EXPECT_EQ(only_cause(ev), lar::LeakCause::kHesitation);
  EXPECT_EQ(ev.leaks[0].interval, (Interval{14'900, 15'200}));
}

TEST(Evaluate, InvalidCaptureIsNormalization) {
  auto p = masked_from(10'200, 12'000);
  lar::EntityCapture cap;
  cap.entity_type = EntityType::kCvv;
  cap.span = {3, 5, 10'000, 11'300};
  cap.canonical.valid = false;
  p.captures.push_back(cap);
  const auto ev = evaluate_call(cvv_call(), p, default_sensitive_set());
  EXPECT_EQ(only_cause(ev), lar::LeakCause::kNormalization);
  EXPECT_EQ(ev.invalid_captures, 1u);
}

TEST(Evaluate, OverlappingAgentSpeechIsInterruption) {
  auto b = cvv_call();
  b.words[0] = {{"sorry", 10'400, 10'700, Channel::kAgent}};
  EXPECT_EQ(only_cause(evaluate_call(b, masked_from(10'200, 12'000), default_sensitive_set())),
            lar::LeakCause::kAgentInterruption);
}

TEST(Evaluate, NonSensitiveEntitiesDoNotCount) {
  auto b = cvv_call();
  b.entities[0].type = EntityType::kZip;
  const auto ev = evaluate_call(b, PredictedCall{}, default_sensitive_set());
  EXPECT_TRUE(ev.leaks.empty());
  EXPECT_EQ(ev.coverage.gold_ms, 0);
  ASSERT_EQ(ev.gold.size(), 1u);
}

TEST(Report, BaselineComparisonIsRelative) {
  EvalReport r;
  r.prf[EntityType::kCvv] = {8, 2, 2};  // P = R = 0.8
  r.baseline_prf = std::map<EntityType, Prf>{{EntityType::kCvv, {10, 0, 0}}};
  const auto j = report_json(r);
  EXPECT_NEAR(j.at("baseline_comparison").at("CVV").at("relative_precision_drop").get<double>(), 0.2, 1e-12);
  EXPECT_NEAR(j.at("baseline_comparison").at("CVV").at("relative_recall_drop").get<double>(), 0.2, 1e-12);
}

}  // namespace
}  // namespace liveredact::harness
