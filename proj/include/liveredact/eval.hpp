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

// Evaluation: word and segment error rates, exact-span entity scoring, mask
// coverage over gold sensitive audio and cause tagging for every leak.

#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "liveredact/asr_stream.hpp"
#include "liveredact/bundle.hpp"
#include "liveredact/common.hpp"
#include "liveredact/lar.hpp"
#include "liveredact/normalizer.hpp"

namespace liveredact::harness {

// ---------------------------------------------------------------------------
// WER

enum class AlignOp : std::uint8_t { kMatch, kSubstitution, kInsertion, kDeletion };

struct WerResult {
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t ref_len = 0;
  std::vector<AlignOp> alignment;

  std::size_t errors() const { return substitutions + insertions + deletions; }
  double rate() const { return static_cast<double>(errors()) / static_cast<double>(std::max<std::size_t>(1, ref_len)); }
};

/// Unit-cost edit alignment. On equal cost the backtrace prefers a
/// substitution, then an insertion, then a deletion.
inline WerResult align(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<std::size_t> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      at(i, j) = std::min({at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0u : 1u), at(i, j - 1) + 1, at(i - 1, j) + 1});
  WerResult r;
  r.ref_len = n;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && at(i, j) == at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0u : 1u)) {
      const bool same = ref[i - 1] == hyp[j - 1];
      r.alignment.push_back(same ? AlignOp::kMatch : AlignOp::kSubstitution);
      if (!same) ++r.substitutions;
      --i, --j;
    } else if (j > 0 && at(i, j) == at(i, j - 1) + 1) {
      r.alignment.push_back(AlignOp::kInsertion);
      ++r.insertions;
      --j;
    } else {
      r.alignment.push_back(AlignOp::kDeletion);
      ++r.deletions;
      --i;
    }
  }
  std::reverse(r.alignment.begin(), r.alignment.end());
  return r;
}

inline double wer(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  return align(ref, hyp).rate();
}

// ---------------------------------------------------------------------------
// SER

using Segment = std::vector<std::string>;

/// Fraction of (reference, hypothesis) segment pairs that differ at all.
inline double ser(const std::vector<std::pair<Segment, Segment>>& pairs) {
  if (pairs.empty()) return 0.0;
  std::size_t bad = 0;
  for (const auto& [r, h] : pairs) bad += r != h ? 1 : 0;
  return static_cast<double>(bad) / static_cast<double>(pairs.size());
}

// ---------------------------------------------------------------------------
// Entity precision / recall

struct LabeledSpan {
  std::string call_id;
  Channel channel = Channel::kCaller;
  int first = 0;
  int last = 0;
  EntityType type = EntityType::kOther;

  auto key() const { return std::tuple(call_id, index_of(channel), first, last, index_of(type)); }
};

struct Prf {
  std::size_t tp = 0, fp = 0, fn = 0;
  double precision() const { return tp + fp == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fp); }
  double recall() const { return tp + fn == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fn); }
  double f1() const {
    const double p = precision(), r = recall();
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
  }
};

/// Exact begin/end/type matching. A span with the right boundaries but the
/// wrong type is a false positive for its type and a miss for the gold type.
inline std::map<EntityType, Prf> entity_prf(const std::vector<LabeledSpan>& predicted,
                                            const std::vector<LabeledSpan>& gold) {
  std::map<EntityType, Prf> out;
  std::multiset<decltype(gold.front().key())> pool;
  for (const auto& g : gold) pool.insert(g.key());
  for (const auto& p : predicted) {
    auto it = pool.find(p.key());
    if (it != pool.end()) {
      ++out[p.type].tp;
      pool.erase(it);
    } else {
      ++out[p.type].fp;
    }
  }
  for (const auto& g : gold)
    if (pool.count(g.key())) {
      ++out[g.type].fn;
      pool.erase(pool.find(g.key()));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Coverage

struct Interval {
  Millis start = 0;
  Millis end = 0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

inline std::vector<Interval> union_of(std::vector<Interval> v) {
  std::erase_if(v, [](const Interval& i) { return i.end <= i.start; });
  std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.start < b.start; });
  std::vector<Interval> out;
  for (const auto& i : v) {
    if (!out.empty() && i.start <= out.back().end) out.back().end = std::max(out.back().end, i.end);
    else out.push_back(i);
  }
  return out;
}

inline Millis total_ms(const std::vector<Interval>& u) {
  Millis t = 0;
  for (const auto& i : u) t += i.end - i.start;
  return t;
}

/// Parts of union(a) not covered by union(b).
inline std::vector<Interval> subtract(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  std::vector<Interval> out;
  const auto ub = union_of(b);
  for (const auto& x : union_of(a)) {
    Millis cur = x.start;
    for (const auto& y : ub) {
      if (y.end <= cur || y.start >= x.end) continue;
      if (y.start > cur) out.push_back({cur, y.start});
      cur = std::max(cur, y.end);
    }
    if (cur < x.end) out.push_back({cur, x.end});
  }
  return out;
}

struct Coverage {
  double coverage = 1.0;
  Millis gold_ms = 0;
  Millis covered_ms = 0;
  Millis over_mask_ms = 0;
  std::vector<Interval> uncovered;
};

/// Share of gold time inside the masks (1 when there is no gold), masked
/// time outside gold, and the maximal uncovered gold intervals.
inline Coverage mask_coverage(const std::vector<Interval>& masks, const std::vector<Interval>& gold) {
  Coverage c;
  const auto g = union_of(gold);
  c.gold_ms = total_ms(g);
  c.uncovered = subtract(g, masks);
  c.covered_ms = c.gold_ms - total_ms(c.uncovered);
  c.over_mask_ms = total_ms(subtract(masks, g));
  c.coverage = c.gold_ms == 0 ? 1.0 : static_cast<double>(c.covered_ms) / static_cast<double>(c.gold_ms);
  return c;
}

// ---------------------------------------------------------------------------
// Per-call evaluation

struct PredictedCall {
  std::vector<lar::EntityCapture> captures;
  std::vector<lar::RedactionEvent> events;
  asr::Script decoded;
  asr::CorruptionRecord corruption;
};

struct LeakEvent {
  std::string call_id;
  int entity = -1;
  EntityType type = EntityType::kOther;
  Interval interval;
  lar::LeakCause cause = lar::LeakCause::kUnknown;
};

struct CallEval {
  std::array<WerResult, kNumChannels> wer;
  std::vector<std::pair<Segment, Segment>> segments;
  std::vector<LabeledSpan> predicted, gold;
  Coverage coverage;
  Millis agent_mask_ms = 0;
  std::vector<LeakEvent> leaks;
  std::size_t invalid_captures = 0;
};

inline std::vector<Interval> mask_intervals(const std::vector<lar::RedactionEvent>& events, Channel ch) {
  std::vector<Interval> out;
  bool open = false;
  Millis start = 0;
  for (const auto& e : events) {
    if (e.channel != ch) continue;
    if (e.kind == lar::EventKind::kMaskStart) {
      open = true;
      start = e.time_ms;
    } else if (e.kind == lar::EventKind::kMaskEnd && open) {
      out.push_back({start, e.time_ms});
      open = false;
    }
  }
  return out;
}

/// Digit-bearing word intervals of a gold entity (correction groups included).
inline std::vector<Interval> gold_digit_intervals(const CallBundle& b, const GoldEntity& e, const norm::Lexicon& lx,
                                                  Millis adjacency_ms = 1000) {
  const auto& ws = b.channel(e.channel);
  std::vector<asr::TimedWord> span(ws.begin() + e.first, ws.begin() + e.last + 1);
  const auto flags = lar::numeric_flags(span, lx, adjacency_ms, false);
  std::vector<Interval> out;
  for (std::size_t i = 0; i < span.size(); ++i)
    if (flags[i]) out.push_back({span[i].start_ms, span[i].end_ms});
  return out;
}

inline CallEval evaluate_call(const CallBundle& gold, const PredictedCall& pred, EntitySet sensitive,
                              const norm::Lexicon& lx = norm::Lexicon::defaults()) {
  CallEval ev;
  for (int c = 0; c < kNumChannels; ++c) {
    const auto ci = static_cast<std::size_t>(c);
    std::vector<std::string> ref, hyp;
    for (const auto& w : gold.words[ci]) ref.push_back(w.text);
    for (const auto& w : pred.decoded[ci]) hyp.push_back(w.text);
    ev.wer[ci] = align(ref, hyp);
  }

  const auto& rec = pred.corruption[static_cast<std::size_t>(index_of(Channel::kCaller))];
  std::map<int, int> decoded_to_gold;
  std::map<int, const asr::CorruptionEntry*> gold_entry;
  for (const auto& e : rec) {
    if (e.decoded_index >= 0) decoded_to_gold[e.decoded_index] = e.gold_index;
    if (e.gold_index >= 0) gold_entry[e.gold_index] = &e;
  }
  auto to_gold = [&](int d) {
    if (rec.empty()) return d;  // no record: decoded indices are gold indices
    auto it = decoded_to_gold.find(d);
    return it == decoded_to_gold.end() ? -1 : it->second;
  };

  // Segments and spans.
  for (std::size_t k = 0; k < gold.entities.size(); ++k) {
    const auto& e = gold.entities[k];
    if (e.type == EntityType::kOther) continue;
    ev.gold.push_back({gold.call_id, e.channel, e.first, e.last, e.type});
    if (e.channel != Channel::kCaller) continue;
    Segment ref = gold.entity_tokens(e), hyp;
    if (rec.empty()) {
      hyp = ref;
    } else {
      std::optional<std::size_t> lo, hi;
      for (std::size_t p = 0; p < rec.size(); ++p)
        if (rec[p].gold_index >= e.first && rec[p].gold_index <= e.last) {
          if (!lo) lo = p;
          hi = p;
        }
      if (lo)
        for (std::size_t p = *lo; p <= *hi; ++p)
          if (rec[p].op != asr::EditOp::kDeletion) hyp.push_back(rec[p].decoded_text);
    }
    ev.segments.emplace_back(std::move(ref), std::move(hyp));
  }
  for (const auto& c : pred.captures) {
    if (c.entity_type == EntityType::kOther || c.span.first < 0) continue;
    if (!c.canonical.valid) ++ev.invalid_captures;
    ev.predicted.push_back({gold.call_id, c.channel, to_gold(c.span.first), to_gold(c.span.last), c.entity_type});
  }

  // Coverage over gold sensitive caller audio.
  std::vector<Interval> gold_iv;
  std::vector<int> owner;  // entity index per gold interval
  for (std::size_t k = 0; k < gold.entities.size(); ++k) {
    const auto& e = gold.entities[k];
    if (e.channel != Channel::kCaller || !sensitive.contains(e.type)) continue;
    for (const auto& iv : gold_digit_intervals(gold, e, lx)) {
      gold_iv.push_back(iv);
      owner.push_back(static_cast<int>(k));
    }
  }
  const auto masks = mask_intervals(pred.events, Channel::kCaller);
  ev.coverage = mask_coverage(masks, gold_iv);
  ev.agent_mask_ms = total_ms(union_of(mask_intervals(pred.events, Channel::kAgent)));

  std::vector<Interval> latency;
  for (const auto& e : pred.events)
    if (e.kind == lar::EventKind::kLeakRecorded && e.cause == lar::LeakCause::kLatency && e.channel == Channel::kCaller)
      latency.push_back({e.time_ms, e.time_ms + e.leak_ms});

  const auto& caller = gold.channel(Channel::kCaller);
  const auto& agent = gold.channel(Channel::kAgent);
  for (const auto& u : ev.coverage.uncovered) {
    LeakEvent leak;
    leak.call_id = gold.call_id;
    leak.interval = u;
    for (std::size_t g = 0; g < gold_iv.size(); ++g)
      if (gold_iv[g].start < u.end && u.start < gold_iv[g].end) {
        leak.entity = owner[g];
        break;
      }
    if (leak.entity < 0) {
      ev.leaks.push_back(leak);
      continue;
    }
    const auto& e = gold.entities[static_cast<std::size_t>(leak.entity)];
    leak.type = e.type;
    auto overlaps = [&](Millis s, Millis t) { return s < u.end && u.start < t; };
    bool asr = false;
    for (int i = e.first; i <= e.last && !asr; ++i) {
      const auto& w = caller[static_cast<std::size_t>(i)];
      if (!overlaps(w.start_ms, w.end_ms)) continue;
      auto it = gold_entry.find(i);
      asr = it != gold_entry.end() && it->second->op != asr::EditOp::kOk;
    }
    bool lat = std::any_of(latency.begin(), latency.end(), [&](const Interval& l) { return overlaps(l.start, l.end); });
    bool hes = false;
    for (int i = e.first + 1; i <= e.last; ++i) {
      const auto& a = caller[static_cast<std::size_t>(i - 1)];
      const auto& b = caller[static_cast<std::size_t>(i)];
      if (b.start_ms - a.end_ms > 3000 && b.start_ms <= u.start) hes = true;
    }
    const auto [es, et] = entity_interval(gold, e);
    bool norm_bad = std::any_of(pred.captures.begin(), pred.captures.end(), [&](const lar::EntityCapture& c) {
      return !c.canonical.valid && c.span.start_ms < et && es < c.span.end_ms;
    });
    bool agent_talk = std::any_of(agent.begin(), agent.end(), [&](const asr::TimedWord& w) {
      return w.start_ms < et && es < w.end_ms;
    });
    leak.cause = asr ? lar::LeakCause::kAsrError
                 : lat ? lar::LeakCause::kLatency
                 : hes ? lar::LeakCause::kHesitation
                 : norm_bad ? lar::LeakCause::kNormalization
                 : agent_talk ? lar::LeakCause::kAgentInterruption
                              : lar::LeakCause::kUnknown;
    ev.leaks.push_back(leak);
  }
  return ev;
}

// ---------------------------------------------------------------------------
// Report

struct EvalReport {
  std::size_t calls = 0;
  std::array<double, kNumChannels> wer{};
  double wer_overall = 0.0;
  double ser = 0.0;
  std::size_t segments = 0;
  std::map<EntityType, Prf> prf;
  double mask_coverage = 1.0;
  Millis gold_sensitive_ms = 0;
  Millis covered_ms = 0;
  Millis over_mask_ms = 0;
  Millis agent_mask_ms = 0;
  std::size_t invalid_captures = 0;
  std::map<lar::LeakCause, std::pair<std::size_t, Millis>> leak_table;
  std::vector<LeakEvent> leaks;
  std::optional<std::map<EntityType, Prf>> baseline_prf;
};

inline EvalReport aggregate(const std::vector<CallEval>& calls) {
  EvalReport r;
  r.calls = calls.size();
  std::array<std::size_t, kNumChannels> err{}, ref{};
  std::vector<std::pair<Segment, Segment>> segs;
  std::vector<LabeledSpan> pred, gold;
  for (const auto& c : calls) {
    for (int k = 0; k < kNumChannels; ++k) {
      err[static_cast<std::size_t>(k)] += c.wer[static_cast<std::size_t>(k)].errors();
      ref[static_cast<std::size_t>(k)] += c.wer[static_cast<std::size_t>(k)].ref_len;
    }
    segs.insert(segs.end(), c.segments.begin(), c.segments.end());
    pred.insert(pred.end(), c.predicted.begin(), c.predicted.end());
    gold.insert(gold.end(), c.gold.begin(), c.gold.end());
    r.gold_sensitive_ms += c.coverage.gold_ms;
    r.covered_ms += c.coverage.covered_ms;
    r.over_mask_ms += c.coverage.over_mask_ms;
    r.agent_mask_ms += c.agent_mask_ms;
    r.invalid_captures += c.invalid_captures;
    for (const auto& l : c.leaks) {
      auto& row = r.leak_table[l.cause];
      ++row.first;
      row.second += l.interval.end - l.interval.start;
      r.leaks.push_back(l);
    }
  }
  for (int k = 0; k < kNumChannels; ++k)
    r.wer[static_cast<std::size_t>(k)] = static_cast<double>(err[static_cast<std::size_t>(k)]) /
                                         static_cast<double>(std::max<std::size_t>(1, ref[static_cast<std::size_t>(k)]));
  r.wer_overall = static_cast<double>(err[0] + err[1]) / static_cast<double>(std::max<std::size_t>(1, ref[0] + ref[1]));
  r.ser = harness::ser(segs);
  r.segments = segs.size();
  r.prf = entity_prf(pred, gold);
  r.mask_coverage = r.gold_sensitive_ms == 0 ? 1.0
                                             : static_cast<double>(r.covered_ms) / static_cast<double>(r.gold_sensitive_ms);
  return r;
}

inline nlohmann::json prf_json(const std::map<EntityType, Prf>& prf) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [t, p] : prf)
    j[std::string(entity_name(t))] = {{"tp", p.tp}, {"fp", p.fp}, {"fn", p.fn}, {"precision", p.precision()},
                                      {"recall", p.recall()}, {"f1", p.f1()}};
  return j;
}

inline nlohmann::json report_json(const EvalReport& r) {
  nlohmann::json leaks = nlohmann::json::object();
  for (const auto& [cause, row] : r.leak_table)
    leaks[std::string(lar::leak_cause_name(cause))] = {{"count", row.first}, {"ms", row.second}};
  nlohmann::json list = nlohmann::json::array();
  for (const auto& l : r.leaks)
    list.push_back({{"call_id", l.call_id}, {"entity", l.entity}, {"type", entity_name(l.type)},
                    {"start_ms", l.interval.start}, {"end_ms", l.interval.end},
                    {"cause", lar::leak_cause_name(l.cause)}});
  nlohmann::json j = {{"calls", r.calls},
                      {"wer", {{"agent", r.wer[0]}, {"caller", r.wer[1]}, {"overall", r.wer_overall}}},
                      {"ser", r.ser},
                      {"segments", r.segments},
                      {"entities", prf_json(r.prf)},
                      {"mask_coverage", r.mask_coverage},
                      {"gold_sensitive_ms", r.gold_sensitive_ms},
                      {"covered_ms", r.covered_ms},
                      {"over_mask_ms", r.over_mask_ms},
                      {"agent_mask_ms", r.agent_mask_ms},
                      {"invalid_captures", r.invalid_captures},
                      {"leak_table", leaks},
                      {"leaks", list}};
  if (r.baseline_prf) {
    nlohmann::json cmp = nlohmann::json::object();
    for (const auto& [t, b] : *r.baseline_prf) {
      const Prf s = r.prf.count(t) ? r.prf.at(t) : Prf{};
      auto rel = [](double sys, double base) { return base == 0.0 ? 0.0 : (base - sys) / base; };
      cmp[std::string(entity_name(t))] = {{"baseline_precision", b.precision()},
                                          {"baseline_recall", b.recall()},
                                          {"relative_precision_drop", rel(s.precision(), b.precision())},
                                          {"relative_recall_drop", rel(s.recall(), b.recall())}};
    }
    j["baseline_comparison"] = cmp;
  }
  return j;
}

inline std::string report_table(const EvalReport& r) {
  std::ostringstream os;
  char buf[160];
  os << "calls: " << r.calls << "\n";
  std::snprintf(buf, sizeof buf, "WER agent %.4f  caller %.4f  overall %.4f   SER %.4f over %zu segments\n", r.wer[0],
                r.wer[1], r.wer_overall, r.ser, r.segments);
  os << buf << "\n";
  std::snprintf(buf, sizeof buf, "%-8s %6s %6s %6s %9s %9s %9s\n", "type", "tp", "fp", "fn", "precision", "recall", "f1");
  os << buf;
  for (const auto& [t, p] : r.prf) {
    std::snprintf(buf, sizeof buf, "%-8s %6zu %6zu %6zu %9.4f %9.4f %9.4f\n", std::string(entity_name(t)).c_str(), p.tp,
                  p.fp, p.fn, p.precision(), p.recall(), p.f1());
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "\nmask coverage %.4f (%lld of %lld ms)  over-mask %lld ms  agent mask %lld ms\n",
                r.mask_coverage, static_cast<long long>(r.covered_ms), static_cast<long long>(r.gold_sensitive_ms),
                static_cast<long long>(r.over_mask_ms), static_cast<long long>(r.agent_mask_ms));
  os << buf;
  os << "leaks by cause:\n";
  if (r.leak_table.empty()) os << "  (none)\n";
  for (const auto& [cause, row] : r.leak_table) {
    std::snprintf(buf, sizeof buf, "  %-20s %5zu  %8lld ms\n", std::string(lar::leak_cause_name(cause)).c_str(), row.first,
                  static_cast<long long>(row.second));
    os << buf;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Loading redact outputs

inline asr::CorruptionRecord corruption_from_json(const nlohmann::json& j, asr::Script& decoded) {
  asr::CorruptionRecord rec;
  for (const auto& ch : j.at("channels")) {
    const int c = ch.at("channel").get<int>();
    if (c != 0 && c != 1) throw FormatError("decoded channel must be 0 or 1");
    const auto ci = static_cast<std::size_t>(c);
    for (const auto& w : ch.at("words"))
      decoded[ci].push_back({w.at("w").get<std::string>(), w.at("s").get<Millis>(), w.at("e").get<Millis>(),
                             channel_from_index(c)});
    for (const auto& e : ch.at("corruption")) {
      asr::CorruptionEntry ce;
      const auto op = e.at("op").get<std::string>();
      for (auto k : {asr::EditOp::kOk, asr::EditOp::kSubstitution, asr::EditOp::kDeletion, asr::EditOp::kInsertion})
        if (asr::edit_op_name(k) == op) ce.op = k;
      ce.gold_index = e.at("gold").get<int>();
      ce.decoded_index = e.at("decoded").get<int>();
      ce.gold_text = e.at("gold_text").get<std::string>();
      ce.decoded_text = e.at("decoded_text").get<std::string>();
      rec[ci].push_back(std::move(ce));
    }
  }
  return rec;
}

template <typename F>
inline void for_each_jsonl(const std::filesystem::path& p, F&& f) {
  std::ifstream in(p);
  if (!in) throw FormatError("cannot open " + p.string());
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      f(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(p.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
}

/// Reads <dir>/<call_id>/{events.jsonl, captures.jsonl, decoded.json}.
inline PredictedCall load_prediction(const std::string& dir, const std::string& call_id) {
  namespace fs = std::filesystem;
  const fs::path base = fs::path(dir) / call_id;
  if (!fs::is_directory(base)) throw FormatError("no redact output for call " + call_id + " in " + dir);
  PredictedCall p;
  for_each_jsonl(base / "events.jsonl", [&](const nlohmann::json& j) { p.events.push_back(lar::event_from_json(j)); });
  for_each_jsonl(base / "captures.jsonl",
                 [&](const nlohmann::json& j) { p.captures.push_back(lar::capture_from_json(j)); });
  std::ifstream in(base / "decoded.json");
  if (!in) throw FormatError("cannot open " + (base / "decoded.json").string());
  try {
    p.corruption = corruption_from_json(nlohmann::json::parse(in), p.decoded);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError((base / "decoded.json").string() + ": " + e.what());
  }
  return p;
}

}  // namespace liveredact::harness
