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

// Live audio redactor: watches caller partial hypotheses, asks the entity
// classifier about each new digit, opens and closes mask spans and turns the
// finished span into a canonical capture.

#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "liveredact/asr_stream.hpp"
#include "liveredact/common.hpp"
#include "liveredact/nlu.hpp"
#include "liveredact/normalizer.hpp"

namespace liveredact::lar {

using asr::PartialHypothesis;
using asr::TimedWord;

enum class Phase : std::uint8_t { kIdle, kMasking, kTracking };

inline std::string_view phase_name(Phase p) {
  switch (p) {
    case Phase::kIdle: return "IDLE";
    case Phase::kMasking: return "MASKING";
    case Phase::kTracking: return "TRACKING";
  }
  return "IDLE";
}

enum class EventKind : std::uint8_t { kMaskStart, kMaskEnd, kCaptureEmitted, kLeakRecorded };

inline std::string_view event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::kMaskStart: return "MaskStart";
    case EventKind::kMaskEnd: return "MaskEnd";
    case EventKind::kCaptureEmitted: return "CaptureEmitted";
    case EventKind::kLeakRecorded: return "LeakRecorded";
  }
  return "";
}

enum class LeakCause : std::uint8_t {
  kAsrError,
  kNormalization,
  kHesitation,
  kAgentInterruption,
  kLatency,
  kUnknown,
};

inline constexpr std::array<LeakCause, 6> kAllLeakCauses = {
    LeakCause::kAsrError,          LeakCause::kNormalization, LeakCause::kHesitation,
    LeakCause::kAgentInterruption, LeakCause::kLatency,       LeakCause::kUnknown};

inline std::string_view leak_cause_name(LeakCause c) {
  switch (c) {
    case LeakCause::kAsrError: return "asr_error";
    case LeakCause::kNormalization: return "normalization";
    case LeakCause::kHesitation: return "hesitation";
    case LeakCause::kAgentInterruption: return "agent_interruption";
    case LeakCause::kLatency: return "latency";
    case LeakCause::kUnknown: return "unknown";
  }
  return "unknown";
}

inline std::optional<LeakCause> parse_leak_cause(std::string_view s) {
  for (LeakCause c : kAllLeakCauses)
    if (leak_cause_name(c) == s) return c;
  return std::nullopt;
}

enum class EndReason : std::uint8_t { kNone, kNonDigitRun, kSilence, kEndOfCall };

inline std::string_view end_reason_name(EndReason r) {
  switch (r) {
    case EndReason::kNone: return "none";
    case EndReason::kNonDigitRun: return "nondigit_run";
    case EndReason::kSilence: return "silence";
    case EndReason::kEndOfCall: return "end_of_call";
  }
  return "none";
}

struct RedactionEvent {
  EventKind kind = EventKind::kMaskStart;
  Millis time_ms = 0;
  Channel channel = Channel::kCaller;
  EntityType entity_type = EntityType::kOther;
  int capture_id = -1;                  // CaptureEmitted
  LeakCause cause = LeakCause::kUnknown;  // LeakRecorded
  Millis leak_ms = 0;                   // LeakRecorded: leaked audio starts at time_ms
  std::string detail;

  friend bool operator==(const RedactionEvent&, const RedactionEvent&) = default;
};

struct WordSpan {
  int first = -1;
  int last = -1;
  Millis start_ms = 0;
  Millis end_ms = 0;
  friend bool operator==(const WordSpan&, const WordSpan&) = default;
};

struct EntityCapture {
  int id = 0;
  EntityType entity_type = EntityType::kOther;
  norm::CanonicalValue canonical;
  WordSpan span;  // indices into the channel's decoded word sequence
  Channel channel = Channel::kCaller;
  Millis emitted_ms = 0;
  std::vector<std::string> words;
};

struct LarConfig {
  EntitySet sensitive = default_sensitive_set();
  int end_nondigit_words = 3;
  Millis end_silence_ms = 3000;
  Millis oh_adjacency_ms = 1000;
  Millis capture_timeout_ms = 2000;
  bool mask_agent_repeats = true;

  void validate() const {
    if (end_nondigit_words < 1) throw ConfigError("lar.end_nondigit_words must be >= 1");
    if (end_silence_ms < 0) throw ConfigError("lar.end_silence_ms must be >= 0");
    if (oh_adjacency_ms < 0) throw ConfigError("lar.oh_adjacency_ms must be >= 0");
    if (capture_timeout_ms < 0) throw ConfigError("lar.capture_timeout_ms must be >= 0");
  }
};

/// Per-session redactor state. An OTHER prediction leaves the phase IDLE but
/// sets `holding_other`, which blocks re-querying until the same end rule
/// that closes an entity fires.
struct LarState {
  Phase phase = Phase::kIdle;
  EntityType entity_type = EntityType::kOther;
  std::vector<TimedWord> entity_words;
  int nondigit_run = 0;
  Millis last_digit_end_ms = 0;
  std::optional<Millis> mask_open_ms;

  bool holding_other = false;
  std::size_t first_index = 0;  // caller index of the trigger
  std::optional<Millis> agent_mask_open_ms;

  bool entity_open() const { return phase != Phase::kIdle || holding_other; }
};

/// The end-of-entity rule: the n-th consecutive caller non-digit word, or
/// caller silence strictly longer than the limit.
inline EndReason check_entity_end(const LarState& s, Millis silence_ms, const LarConfig& cfg) {
  if (!s.entity_open()) return EndReason::kNone;
  if (s.nondigit_run >= cfg.end_nondigit_words) return EndReason::kNonDigitRun;
  if (silence_ms > cfg.end_silence_ms) return EndReason::kSilence;
  return EndReason::kNone;
}

inline RedactionEvent record_leak(LeakCause cause, Channel channel, Millis leak_start_ms, Millis leak_ms,
                                  EntityType type, std::string detail = {}) {
  RedactionEvent e;
  e.kind = EventKind::kLeakRecorded;
  e.time_ms = leak_start_ms;
  e.channel = channel;
  e.entity_type = type;
  e.cause = cause;
  e.leak_ms = leak_ms;
  e.detail = std::move(detail);
  return e;
}

/// Which words of a hypothesis act as number words. A trailing ambiguous
/// zero with no numeric neighbour yet counts as numeric until the next word
/// settles it, unless the hypothesis is final.
inline std::vector<bool> numeric_flags(const std::vector<TimedWord>& words, const norm::Lexicon& lx,
                                       Millis adjacency_ms, bool provisional_tail) {
  auto flags = norm::resolve_numeric(
      words.size(), [&](std::size_t i) { return lx.classify(words[i].text).kind; },
      [&](std::size_t a, std::size_t b) { return words[b].start_ms - words[a].end_ms < adjacency_ms; });
  if (provisional_tail && !words.empty() && !flags.back() && lx.is_ambiguous_zero(words.back().text))
    flags.back() = true;
  return flags;
}

/// Canonical value for the numeric run inside words[first, end). Correction
/// markers and fillers between number words are kept.
inline EntityCapture capture_entity(EntityType type, const std::vector<TimedWord>& words, std::size_t first,
                                    std::size_t end, const norm::Lexicon& lx, Millis adjacency_ms) {
  EntityCapture cap;
  cap.entity_type = type;
  cap.canonical.entity_type = type;
  end = std::min(end, words.size());
  const auto flags = numeric_flags(words, lx, adjacency_ms, false);
  std::optional<std::size_t> lo, hi;
  for (std::size_t i = first; i < end; ++i)
    if (flags[i]) {
      if (!lo) lo = i;
      hi = i;
    }
  if (!lo) {
    cap.canonical.diagnostics.push_back("no digit words left in the entity span");
    if (first < end) {
      cap.span = {static_cast<int>(first), static_cast<int>(end - 1), words[first].start_ms, words[end - 1].end_ms};
      for (std::size_t i = first; i < end; ++i) cap.words.push_back(words[i].text);
    }
    return cap;
  }
  cap.span = {static_cast<int>(*lo), static_cast<int>(*hi), words[*lo].start_ms, words[*hi].end_ms};
  for (std::size_t i = *lo; i <= *hi; ++i) cap.words.push_back(words[i].text);
  try {
    cap.canonical = norm::words_to_digits(cap.words, type, lx);
  } catch (const EmptyValueError& e) {
    cap.canonical.diagnostics.push_back(e.what());
  }
  return cap;
}

// ---------------------------------------------------------------------------
// Capture sinks

class CaptureSink {
 public:
  virtual ~CaptureSink() = default;
  virtual void accept(const EntityCapture& capture) = 0;
};

inline std::string mask_value(const std::string& v) {
  std::string out = v;
  for (char& c : out)
    if (c >= '0' && c <= '9') c = '*';
  return out;
}

inline nlohmann::json capture_to_json(const EntityCapture& c, bool reveal) {
  nlohmann::json alts = nlohmann::json::array();
  for (const auto& a : c.canonical.alternatives) alts.push_back(reveal ? a : mask_value(a));
  nlohmann::json j = {
      {"id", c.id},
      {"entity_type", entity_name(c.entity_type)},
      {"channel", index_of(c.channel)},
      {"first", c.span.first},
      {"last", c.span.last},
      {"start_ms", c.span.start_ms},
      {"end_ms", c.span.end_ms},
      {"emitted_ms", c.emitted_ms},
      {"value", reveal ? c.canonical.value : mask_value(c.canonical.value)},
      {"valid", c.canonical.valid},
      {"alternatives", alts},
      {"diagnostics", c.canonical.diagnostics},
      {"revealed", reveal},
  };
  if (reveal) j["words"] = c.words;
  return j;
}

inline EntityCapture capture_from_json(const nlohmann::json& j) {
  EntityCapture c;
  c.id = j.at("id").get<int>();
  const auto t = parse_entity(j.at("entity_type").get<std::string>());
  if (!t) throw FormatError("capture has unknown entity type");
  c.entity_type = *t;
  c.channel = channel_from_index(j.at("channel").get<int>());
  c.span = {j.at("first").get<int>(), j.at("last").get<int>(), j.at("start_ms").get<Millis>(),
            j.at("end_ms").get<Millis>()};
  c.emitted_ms = j.value("emitted_ms", Millis{0});
  c.canonical.entity_type = c.entity_type;
  c.canonical.value = j.at("value").get<std::string>();
  c.canonical.valid = j.at("valid").get<bool>();
  c.canonical.alternatives = j.value("alternatives", std::vector<std::string>{});
  c.canonical.diagnostics = j.value("diagnostics", std::vector<std::string>{});
  c.words = j.value("words", std::vector<std::string>{});
  return c;
}

/// Append-only JSONL log. Digits in values are starred unless `reveal`.
class JsonlCaptureLog : public CaptureSink {
 public:
  JsonlCaptureLog(const std::string& path, bool reveal) : out_(path, std::ios::app), reveal_(reveal) {
    if (!out_) throw FormatError("cannot open capture log " + path);
  }
  void accept(const EntityCapture& capture) override {
    out_ << capture_to_json(capture, reveal_).dump() << "\n";
    out_.flush();
  }

 private:
  std::ofstream out_;
  bool reveal_;
};

class CaptureCollector : public CaptureSink {
 public:
  void accept(const EntityCapture& capture) override { captures.push_back(capture); }
  std::vector<EntityCapture> captures;
};

// ---------------------------------------------------------------------------
// The redactor

class Redactor {
 public:
  Redactor(LarConfig cfg, const nlu::EntityClassifier& classifier,
           const norm::Lexicon& lexicon = norm::Lexicon::defaults(), CaptureSink* sink = nullptr)
      : cfg_(std::move(cfg)), nlu_(classifier), lx_(lexicon), sink_(sink) {
    cfg_.validate();
  }

  /// Feeds one partial hypothesis. Caller words drive the entity logic;
  /// agent words only extend the classifier history (and may be masked as
  /// repeat-backs while the caller is masked).
  std::vector<RedactionEvent> on_partial(const PartialHypothesis& hyp, Millis now_ms) {
    std::vector<RedactionEvent> ev;
    auto& prev = hyp_[static_cast<std::size_t>(index_of(hyp.channel))];
    if (prev) (void)asr::hyp_diff(*prev, hyp);  // throws on contract violations
    const std::size_t agree = prev ? agreement(*prev, hyp) : 0;
    prev = hyp;
    if (hyp.channel == Channel::kAgent) {
      agent_cursor_ = std::min(agent_cursor_, agree);
      process_agent(now_ms, ev);
    } else {
      if (agree < cursor_) rewind(agree);
      process_caller(now_ms, ev);
    }
    flush_captures(now_ms, ev);
    return ev;
  }

  /// Clock tick: applies the silence rule and releases captures whose words
  /// have settled.
  std::vector<RedactionEvent> on_tick(Millis now_ms, Millis caller_silence_ms) {
    std::vector<RedactionEvent> ev;
    if (check_entity_end(state_, caller_silence_ms, cfg_) != EndReason::kNone) {
      const auto& words = caller_words();
      end_entity(now_ms, words.size(), check_entity_end(state_, caller_silence_ms, cfg_), ev);
      cursor_ = std::max(cursor_, words.size());
    }
    flush_captures(now_ms, ev);
    return ev;
  }

  /// End of call: closes any open entity and releases all pending captures.
  std::vector<RedactionEvent> finish(Millis now_ms) {
    std::vector<RedactionEvent> ev;
    if (state_.entity_open()) end_entity(now_ms, caller_words().size(), EndReason::kEndOfCall, ev);
    flush_captures(now_ms, ev, true);
    return ev;
  }

  const LarState& state() const { return state_; }
  const nlu::DialogState& dialog() const { return dialog_; }
  const std::vector<EntityCapture>& captures() const { return captures_; }
  const LarConfig& config() const { return cfg_; }
  std::size_t nlu_queries() const { return queries_; }

 private:
  struct Pending {
    EntityType type;
    std::size_t first;
    std::size_t end;
    Millis deadline_ms;
  };

  static std::size_t agreement(const PartialHypothesis& a, const PartialHypothesis& b) {
    std::size_t k = 0;
    while (k < a.words.size() && k < b.words.size() && a.words[k].text == b.words[k].text) ++k;
    return k;
  }

  const std::vector<TimedWord>& caller_words() const {
    static const std::vector<TimedWord> empty;
    const auto& h = hyp_[static_cast<std::size_t>(index_of(Channel::kCaller))];
    return h ? h->words : empty;
  }

  bool caller_final() const {
    const auto& h = hyp_[static_cast<std::size_t>(index_of(Channel::kCaller))];
    return h && h->is_final;
  }

  // A caller word we already consumed changed. Inside an entity, replay from
  // its trigger (extending it backwards over digits the revision uncovered);
  // otherwise rescan from the change.
  void rewind(std::size_t agree) {
    cursor_ = std::max(agree, floor_);
    if (!state_.entity_open()) return;
    const auto& words = caller_words();
    const auto flags = numeric_flags(words, lx_, cfg_.oh_adjacency_ms, !caller_final());
    std::size_t first = std::min(state_.first_index, words.size());
    while (first > floor_ && first - 1 < flags.size() && flags[first - 1]) --first;
    state_.first_index = first;
    cursor_ = std::max(first, std::min(cursor_, words.size()));
    state_.entity_words.clear();
    state_.nondigit_run = 0;
    for (std::size_t i = first; i < cursor_; ++i) account(words[i], flags[i]);
  }

  void account(const TimedWord& w, bool numeric) {
    if (state_.phase != Phase::kIdle) state_.entity_words.push_back(w);
    if (numeric) {
      state_.nondigit_run = 0;
      state_.last_digit_end_ms = w.end_ms;
    } else {
      ++state_.nondigit_run;
    }
  }

  void process_caller(Millis now_ms, std::vector<RedactionEvent>& ev) {
    const auto& words = caller_words();
    const auto flags = numeric_flags(words, lx_, cfg_.oh_adjacency_ms, !caller_final());
    while (cursor_ < words.size()) {
      const std::size_t i = cursor_++;
      if (state_.entity_open()) {
        account(words[i], flags[i]);
        if (check_entity_end(state_, 0, cfg_) == EndReason::kNonDigitRun) {
          end_entity(now_ms, i + 1, EndReason::kNonDigitRun, ev);
        }
        continue;
      }
      if (flags[i]) trigger(i, now_ms, ev);
    }
  }

  void trigger(std::size_t i, Millis now_ms, std::vector<RedactionEvent>& ev) {
    const auto& words = caller_words();
    dialog_.advance_time(now_ms);
    nlu::NluContext ctx;
    ctx.trigger = words[i].text;
    ctx.history = history_before(i);
    ctx.dialog = dialog_;
    ctx.channel = Channel::kCaller;
    ctx.trigger_start_ms = words[i].start_ms;
    ctx.trigger_end_ms = words[i].end_ms;
    ctx.call_time_ms = now_ms;
    ++queries_;
    const EntityType type = nlu_.classify(ctx).type;

    state_ = LarState{};
    state_.first_index = i;
    state_.entity_type = type;
    if (type == EntityType::kOther) {
      state_.holding_other = true;
    } else if (cfg_.sensitive.contains(type)) {
      state_.phase = Phase::kMasking;
      state_.mask_open_ms = words[i].start_ms;
      RedactionEvent e;
      e.kind = EventKind::kMaskStart;
      e.time_ms = words[i].start_ms;
      e.channel = Channel::kCaller;
      e.entity_type = type;
      e.detail = "trigger '" + words[i].text + "'";
      ev.push_back(std::move(e));
    } else {
      state_.phase = Phase::kTracking;
    }
    account(words[i], true);
  }

  // Up to kHistoryLen tokens from both channels that precede the trigger in
  // end-time order (agent first on ties).
  std::vector<std::string> history_before(std::size_t trigger_index) const {
    struct Tok { Millis end; int ch; std::size_t idx; const std::string* text; };
    std::vector<Tok> toks;
    const auto& caller = caller_words();
    const Millis trigger_end = caller[trigger_index].end_ms;
    for (std::size_t j = 0; j < trigger_index; ++j)
      toks.push_back({caller[j].end_ms, 1, j, &caller[j].text});
    if (const auto& a = hyp_[static_cast<std::size_t>(index_of(Channel::kAgent))])
      for (std::size_t j = 0; j < a->words.size(); ++j)
        if (a->words[j].end_ms <= trigger_end) toks.push_back({a->words[j].end_ms, 0, j, &a->words[j].text});
    std::sort(toks.begin(), toks.end(), [](const Tok& x, const Tok& y) {
      if (x.end != y.end) return x.end < y.end;
      if (x.ch != y.ch) return x.ch < y.ch;
      return x.idx < y.idx;
    });
    std::vector<std::string> out;
    const std::size_t skip = toks.size() > nlu::kHistoryLen ? toks.size() - nlu::kHistoryLen : 0;
    for (std::size_t k = skip; k < toks.size(); ++k) out.push_back(*toks[k].text);
    return out;
  }

  void process_agent(Millis now_ms, std::vector<RedactionEvent>& ev) {
    (void)now_ms;
    const auto& h = hyp_[static_cast<std::size_t>(index_of(Channel::kAgent))];
    const auto& words = h->words;
    const auto flags = numeric_flags(words, lx_, cfg_.oh_adjacency_ms, !h->is_final);
    for (; agent_cursor_ < words.size(); ++agent_cursor_) {
      const auto& w = words[agent_cursor_];
      if (!cfg_.mask_agent_repeats || state_.phase != Phase::kMasking || state_.agent_mask_open_ms) continue;
      if (!flags[agent_cursor_] || w.start_ms < *state_.mask_open_ms) continue;
      state_.agent_mask_open_ms = w.start_ms;
      RedactionEvent e;
      e.kind = EventKind::kMaskStart;
      e.time_ms = w.start_ms;
      e.channel = Channel::kAgent;
      e.entity_type = state_.entity_type;
      e.detail = "agent repeat-back";
      ev.push_back(std::move(e));
    }
  }

  void end_entity(Millis now_ms, std::size_t end_index, EndReason why, std::vector<RedactionEvent>& ev) {
    const EntityType type = state_.entity_type;
    auto close = [&](Channel ch) {
      RedactionEvent e;
      e.kind = EventKind::kMaskEnd;
      e.time_ms = now_ms;
      e.channel = ch;
      e.entity_type = type;
      e.detail = std::string(end_reason_name(why));
      ev.push_back(std::move(e));
    };
    if (state_.agent_mask_open_ms) close(Channel::kAgent);
    if (state_.phase == Phase::kMasking) close(Channel::kCaller);
    if (state_.phase != Phase::kIdle) {
      dialog_.record_capture(type);
      pending_.push_back({type, state_.first_index, end_index, now_ms + cfg_.capture_timeout_ms});
    }
    floor_ = std::max(floor_, end_index);
    state_ = LarState{};
  }

  void flush_captures(Millis now_ms, std::vector<RedactionEvent>& ev, bool force = false) {
    const auto& h = hyp_[static_cast<std::size_t>(index_of(Channel::kCaller))];
    std::size_t kept = 0;
    for (std::size_t k = 0; k < pending_.size(); ++k) {
      const Pending& p = pending_[k];
      const bool settled = h && (h->is_final || h->stable_prefix_len >= p.end);
      if (!(force || settled || now_ms >= p.deadline_ms)) {
        pending_[kept++] = p;
        continue;
      }
      EntityCapture cap = capture_entity(p.type, caller_words(), p.first, p.end, lx_, cfg_.oh_adjacency_ms);
      cap.id = next_capture_id_++;
      cap.emitted_ms = now_ms;
      cap.channel = Channel::kCaller;
      if (!settled) cap.canonical.diagnostics.push_back("captured before the span stabilized");
      RedactionEvent e;
      e.kind = EventKind::kCaptureEmitted;
      e.time_ms = now_ms;
      e.channel = Channel::kCaller;
      e.entity_type = p.type;
      e.capture_id = cap.id;
      e.detail = cap.canonical.valid ? "valid" : "invalid";
      ev.push_back(std::move(e));
      if (sink_) sink_->accept(cap);
      captures_.push_back(std::move(cap));
    }
    pending_.resize(kept);
  }

  LarConfig cfg_;
  const nlu::EntityClassifier& nlu_;
  const norm::Lexicon& lx_;
  CaptureSink* sink_;

  LarState state_;
  nlu::DialogState dialog_;
  std::array<std::optional<PartialHypothesis>, kNumChannels> hyp_;
  std::size_t cursor_ = 0;        // caller words consumed
  std::size_t floor_ = 0;         // caller words owned by finished entities
  std::size_t agent_cursor_ = 0;
  std::vector<Pending> pending_;
  std::vector<EntityCapture> captures_;
  int next_capture_id_ = 0;
  std::size_t queries_ = 0;
};

inline nlohmann::json event_to_json(const RedactionEvent& e) {
  nlohmann::json j = {{"kind", event_kind_name(e.kind)},
                      {"time_ms", e.time_ms},
                      {"channel", index_of(e.channel)},
                      {"entity_type", entity_name(e.entity_type)}};
  if (e.kind == EventKind::kCaptureEmitted) j["capture_id"] = e.capture_id;
  if (e.kind == EventKind::kLeakRecorded) {
    j["cause"] = leak_cause_name(e.cause);
    j["leak_ms"] = e.leak_ms;
  }
  if (!e.detail.empty()) j["detail"] = e.detail;
  return j;
}

inline RedactionEvent event_from_json(const nlohmann::json& j) {
  RedactionEvent e;
  const auto kind = j.at("kind").get<std::string>();
  bool found = false;
  for (EventKind k : {EventKind::kMaskStart, EventKind::kMaskEnd, EventKind::kCaptureEmitted,
                      EventKind::kLeakRecorded})
    if (event_kind_name(k) == kind) e.kind = k, found = true;
  if (!found) throw FormatError("unknown event kind '" + kind + "'");
  e.time_ms = j.at("time_ms").get<Millis>();
  e.channel = channel_from_index(j.at("channel").get<int>());
  const auto t = parse_entity(j.at("entity_type").get<std::string>());
  if (!t) throw FormatError("event has unknown entity type");
  e.entity_type = *t;
  e.capture_id = j.value("capture_id", -1);
  if (j.contains("cause")) {
    const auto c = parse_leak_cause(j.at("cause").get<std::string>());
    if (!c) throw FormatError("event has unknown leak cause");
    e.cause = *c;
  }
  e.leak_ms = j.value("leak_ms", Millis{0});
  e.detail = j.value("detail", std::string());
  return e;
}

}  // namespace liveredact::lar
