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

// Decoder contract and the deterministic replay decoder. The replay decoder
// turns a time-aligned script into the stream of partial hypotheses an online
// decoder would produce: words surface after a latency on a fixed emission
// grid, the trailing words stay unstable and may first show up misrecognized,
// and recognition errors are sampled once per word up front.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "liveredact/common.hpp"
#include "liveredact/normalizer.hpp"
#include "liveredact/rng.hpp"

namespace liveredact::asr {

struct TimedWord {
  std::string text;
  Millis start_ms = 0;
  Millis end_ms = 0;
  Channel channel = Channel::kCaller;

  friend bool operator==(const TimedWord&, const TimedWord&) = default;
};

using ChannelWords = std::vector<TimedWord>;
using Script = std::array<ChannelWords, kNumChannels>;

struct PartialHypothesis {
  Channel channel = Channel::kCaller;
  Millis emission_time_ms = 0;
  std::vector<TimedWord> words;
  std::size_t stable_prefix_len = 0;
  bool is_final = false;

  friend bool operator==(const PartialHypothesis&, const PartialHypothesis&) = default;
};

/// Anything that produces an ordered stream of partial hypotheses.
class Decoder {
 public:
  virtual ~Decoder() = default;
  /// Hypotheses with emission time <= now_ms not yet returned, in order.
  virtual std::vector<PartialHypothesis> poll(Millis now_ms) = 0;
  virtual bool done() const = 0;
};

struct ClassRates {
  double substitution = 0.0;
  double deletion = 0.0;
  double insertion = 0.0;
};

struct ErrorModel {
  ClassRates digit;
  ClassRates word;
  std::map<std::string, std::vector<std::string>> confusions = default_confusions();
  std::vector<std::string> insertion_vocab = {"uh", "um", "the", "a", "and", "it", "so"};

  // Every digit has a non-digit confusable so the start detector can miss.
  static std::map<std::string, std::vector<std::string>> default_confusions() {
    return {
        {"zero", {"hero", "oh"}},   {"oh", {"owe", "zero"}},   {"one", {"won", "nine"}},
        {"two", {"to", "three"}},   {"three", {"tree", "two"}}, {"four", {"for", "five"}},
        {"five", {"fine", "nine"}}, {"six", {"sex", "sixty"}},  {"seven", {"heaven", "eleven"}},
        {"eight", {"ate", "eighty"}}, {"nine", {"night", "five"}},
        {"twenty", {"plenty"}},     {"thirty", {"dirty"}},     {"forty", {"fort"}},
        {"fifty", {"fifth"}},       {"sixty", {"six"}},        {"seventy", {"seven"}},
        {"eighty", {"eight"}},      {"ninety", {"nineteen"}},  {"double", {"bubble"}},
        {"triple", {"trouble"}},    {"card", {"car"}},         {"number", {"lumber"}},
        {"code", {"coat"}},         {"account", {"count"}},
    };
  }

  void validate() const {
    for (const ClassRates* r : {&digit, &word}) {
      for (double p : {r->substitution, r->deletion, r->insertion})
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("error model rates must lie in [0,1]");
      if (r->substitution + r->deletion > 1.0)
        throw ConfigError("substitution + deletion rate must not exceed 1");
    }
  }
};

struct DecoderSimConfig {
  Millis cadence_ms = 300;
  // Lag between a word's onset and its first possible appearance.
  Millis latency_ms = 200;
  std::size_t instability_tail = 2;
  double revision_prob = 0.1;
  ErrorModel errors;
  std::uint64_t seed = 0;

  void validate() const {
    if (cadence_ms <= 0) throw ConfigError("decoder cadence_ms must be > 0");
    if (latency_ms < 0) throw ConfigError("decoder latency_ms must be >= 0");
    if (!(revision_prob >= 0.0 && revision_prob <= 1.0))
      throw ConfigError("decoder revision_prob must lie in [0,1]");
    errors.validate();
  }
};

enum class EditOp : std::uint8_t { kOk, kSubstitution, kDeletion, kInsertion };

inline std::string_view edit_op_name(EditOp op) {
  switch (op) {
    case EditOp::kOk: return "ok";
    case EditOp::kSubstitution: return "sub";
    case EditOp::kDeletion: return "del";
    case EditOp::kInsertion: return "ins";
  }
  return "ok";
}

/// How one script word (or one inserted word) ended up in the decoded truth.
struct CorruptionEntry {
  EditOp op = EditOp::kOk;
  int gold_index = -1;     // -1 for insertions
  int decoded_index = -1;  // -1 for deletions
  std::string gold_text;
  std::string decoded_text;

  friend bool operator==(const CorruptionEntry&, const CorruptionEntry&) = default;
};

using CorruptionRecord = std::array<std::vector<CorruptionEntry>, kNumChannels>;

struct ReplayResult {
  std::vector<PartialHypothesis> stream;  // merged, ordered by emission time
  Script decoded;                         // the corrupted "decoded truth"
  CorruptionRecord record;
};

inline void validate_script(const Script& script) {
  for (int c = 0; c < kNumChannels; ++c) {
    const auto& words = script[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < words.size(); ++i) {
      const auto& w = words[i];
      if (!(w.start_ms < w.end_ms))
        throw ScriptFormatError("channel " + std::to_string(c) + " word " + std::to_string(i) +
                                " '" + w.text + "': start_ms must precede end_ms");
      if (i > 0 && w.start_ms < words[i - 1].end_ms)
        throw ScriptFormatError("channel " + std::to_string(c) + " word " + std::to_string(i) +
                                " '" + w.text + "' overlaps the previous word");
    }
  }
}

namespace detail {

inline std::string pick_confusion(const std::string& word, const ErrorModel& em, Rng& rng) {
  std::vector<std::string> options;
  if (auto it = em.confusions.find(word); it != em.confusions.end())
    for (const auto& o : it->second)
      if (o != word) options.push_back(o);
  if (options.empty())
    for (const auto& o : em.insertion_vocab)
      if (o != word) options.push_back(o);
  if (options.empty()) return word + "'";
  return rng.pick(options);
}

inline void corrupt_channel(const ChannelWords& gold, Channel channel, const ErrorModel& em,
                            const norm::Lexicon& lx, Rng& rng, ChannelWords& decoded,
                            std::vector<CorruptionEntry>& record) {
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const TimedWord& w = gold[i];
    const bool numeric = lx.is_number_word(w.text) || lx.is_ambiguous_zero(w.text);
    const ClassRates& r = numeric ? em.digit : em.word;
    const double u = rng.uniform();
    CorruptionEntry e;
    e.gold_index = static_cast<int>(i);
    e.gold_text = w.text;
    if (u < r.deletion) {
      e.op = EditOp::kDeletion;
    } else {
      TimedWord out = w;
      out.channel = channel;
      if (u < r.deletion + r.substitution) {
        out.text = pick_confusion(w.text, em, rng);
        e.op = EditOp::kSubstitution;
      }
      e.decoded_index = static_cast<int>(decoded.size());
      e.decoded_text = out.text;
      decoded.push_back(std::move(out));
    }
    record.push_back(e);
    if (rng.bernoulli(r.insertion)) {
      const Millis next_start = i + 1 < gold.size() ? gold[i + 1].start_ms : w.end_ms + 400;
      const Millis gap = next_start - w.end_ms;
      if (gap >= 100) {
        TimedWord ins{rng.pick(em.insertion_vocab), w.end_ms + gap / 4, w.end_ms + 3 * gap / 4, channel};
        CorruptionEntry ie;
        ie.op = EditOp::kInsertion;
        ie.decoded_index = static_cast<int>(decoded.size());
        ie.decoded_text = ins.text;
        record.push_back(ie);
        decoded.push_back(std::move(ins));
      }
    }
  }
}

inline std::vector<PartialHypothesis> emit_channel(const ChannelWords& words, Channel channel,
                                                   const DecoderSimConfig& cfg,
                                                   const ErrorModel& em, Rng& rng) {
  std::vector<PartialHypothesis> out;
  const std::size_t n_total = words.size();
  if (n_total == 0) return out;
  std::vector<bool> shown(n_total, false);
  std::vector<std::string> first_text(n_total);
  std::size_t prev_visible = 0;
  for (Millis t = cfg.cadence_ms;; t += cfg.cadence_ms) {
    std::size_t visible = prev_visible;
    while (visible < n_total && words[visible].start_ms + cfg.latency_ms <= t) ++visible;
    if (visible == 0) continue;
    const std::size_t k_tail = visible > cfg.instability_tail ? visible - cfg.instability_tail : 0;

    std::size_t k_time = 0;
    while (k_time < visible && shown[k_time] && t >= words[k_time].end_ms + cfg.latency_ms) ++k_time;

    PartialHypothesis h;
    h.channel = channel;
    h.emission_time_ms = t;
    h.words.reserve(visible);
    for (std::size_t i = 0; i < visible; ++i) {
      TimedWord w = words[i];
      if (!shown[i] && i >= prev_visible) {
        first_text[i] = w.text;
        if (i >= k_tail && rng.bernoulli(cfg.revision_prob)) first_text[i] = pick_confusion(w.text, em, rng);
        w.text = first_text[i];
      }
      h.words.push_back(std::move(w));
    }
    for (std::size_t i = prev_visible; i < visible; ++i) shown[i] = true;
    prev_visible = visible;

    h.stable_prefix_len = std::max(k_tail, k_time);
    h.is_final = visible == n_total && k_time == n_total;
    if (h.is_final) h.stable_prefix_len = n_total;
    if (out.empty() || out.back().words != h.words ||
        out.back().stable_prefix_len != h.stable_prefix_len || h.is_final) {
      out.push_back(std::move(h));
    }
    if (out.back().is_final) break;
  }
  return out;
}

}  // namespace detail

/// Replays a script as two independent channel decoders merged by emission
/// time, agent first on ties.
inline ReplayResult replay_decode(const Script& script, const DecoderSimConfig& cfg,
                                  const norm::Lexicon& lx = norm::Lexicon::defaults()) {
  cfg.validate();
  validate_script(script);
  ReplayResult result;
  std::array<std::vector<PartialHypothesis>, kNumChannels> per_channel;
  for (int c = 0; c < kNumChannels; ++c) {
    const auto ch = channel_from_index(c);
    const auto idx = static_cast<std::size_t>(c);
    Rng corrupt_rng(mix_seed(cfg.seed, 2 * idx));
    Rng revise_rng(mix_seed(cfg.seed, 2 * idx + 1));
    detail::corrupt_channel(script[idx], ch, cfg.errors, lx, corrupt_rng, result.decoded[idx],
                            result.record[idx]);
    per_channel[idx] = detail::emit_channel(result.decoded[idx], ch, cfg, cfg.errors, revise_rng);
  }
  auto& a = per_channel[0];
  auto& b = per_channel[1];
  result.stream.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].emission_time_ms <= b[j].emission_time_ms)) {
      result.stream.push_back(std::move(a[i++]));
    } else {
      result.stream.push_back(std::move(b[j++]));
    }
  }
  return result;
}

/// Pull-style adapter over a precomputed replay.
class ReplayDecoder : public Decoder {
 public:
  explicit ReplayDecoder(std::vector<PartialHypothesis> stream) : stream_(std::move(stream)) {}

  std::vector<PartialHypothesis> poll(Millis now_ms) override {
    std::vector<PartialHypothesis> out;
    while (next_ < stream_.size() && stream_[next_].emission_time_ms <= now_ms)
      out.push_back(stream_[next_++]);
    return out;
  }
  bool done() const override { return next_ >= stream_.size(); }

 private:
  std::vector<PartialHypothesis> stream_;
  std::size_t next_ = 0;
};

struct HypDiff {
  std::vector<TimedWord> newly_stable;
  std::vector<TimedWord> retracted;
  std::vector<TimedWord> new_tail;
  std::size_t agreement = 0;  // length of the common prefix
};

/// Describes the transition between two consecutive hypotheses of a channel.
inline HypDiff hyp_diff(const PartialHypothesis& prev, const PartialHypothesis& next) {
  if (prev.channel != next.channel) throw ContractViolation("hyp_diff: channels differ");
  if (next.emission_time_ms < prev.emission_time_ms)
    throw ContractViolation("hyp_diff: hypotheses out of emission order");
  if (next.stable_prefix_len < prev.stable_prefix_len || next.words.size() < prev.stable_prefix_len)
    throw ContractViolation("hyp_diff: stable prefix shrank");
  for (std::size_t i = 0; i < prev.stable_prefix_len; ++i) {
    if (!(prev.words[i] == next.words[i]))
      throw ContractViolation("hyp_diff: stable word " + std::to_string(i) + " changed from '" +
                              prev.words[i].text + "' to '" + next.words[i].text + "'");
  }
  HypDiff d;
  const std::size_t common = std::min(prev.words.size(), next.words.size());
  while (d.agreement < common && prev.words[d.agreement] == next.words[d.agreement]) ++d.agreement;
  d.retracted.assign(prev.words.begin() + static_cast<std::ptrdiff_t>(d.agreement), prev.words.end());
  d.new_tail.assign(next.words.begin() + static_cast<std::ptrdiff_t>(d.agreement), next.words.end());
  d.newly_stable.assign(next.words.begin() + static_cast<std::ptrdiff_t>(prev.stable_prefix_len),
                        next.words.begin() + static_cast<std::ptrdiff_t>(next.stable_prefix_len));
  return d;
}

}  // namespace liveredact::asr
