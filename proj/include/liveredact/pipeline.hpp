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

// Session orchestration. A simulated clock advances in fixed ticks; each tick
// delivers decoder partials to the redactor, updates the caller silence clock
// and releases audio older than the hold-back window. Masks that arrive after
// their audio has been released are clipped to the release frontier and
// logged as latency leaks.

#pragma once

#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "liveredact/asr_stream.hpp"
#include "liveredact/audio.hpp"
#include "liveredact/bundle.hpp"
#include "liveredact/common.hpp"
#include "liveredact/config.hpp"
#include "liveredact/lar.hpp"
#include "liveredact/nlu.hpp"
#include "liveredact/normalizer.hpp"
#include "liveredact/vad.hpp"

namespace liveredact::pipeline {

enum class SilenceSource : std::uint8_t { kVad, kWords };

struct NluSettings {
  std::string classifier = "logreg";  // "logreg" or "oracle"
  std::string model_path;
  std::vector<int> ngram_orders = {1, 2, 3};
  std::size_t min_freq = 2;
  nlu::TrainOptions train;
  nlu::SelfTrainOptions self_train;
};

struct SessionConfig {
  Millis holdback_ms = 500;
  Millis clock_tick_ms = 100;
  SilenceSource silence = SilenceSource::kVad;
  bool synthesize_audio = true;
  asr::DecoderSimConfig decoder;
  vad::VadConfig vad;
  lar::LarConfig lar;
  audio::BeepConfig beep;
  NluSettings nlu;
  std::string lexicon_path;

  void validate() const {
    if (holdback_ms < 0) throw ConfigError("pipeline.holdback_ms must be >= 0");
    if (clock_tick_ms <= 0) throw ConfigError("pipeline.tick_ms must be > 0");
    decoder.validate();
    if (decoder.cadence_ms % clock_tick_ms != 0)
      throw ConfigError("pipeline.tick_ms must divide decoder.cadence_ms");
    vad.validate();
    lar.validate();
    beep.validate();
    if (nlu.classifier != "logreg" && nlu.classifier != "oracle")
      throw ConfigError("nlu.classifier must be 'logreg' or 'oracle'");
  }

  /// Overlays values from `m`. Unknown keys in the namespaces this config
  /// owns are errors; other namespaces are left for other consumers.
  void apply(const ConfigMap& m) {
    static const std::map<std::string, std::set<std::string>> known = {
        {"pipeline", {"pipeline.holdback_ms", "pipeline.tick_ms", "pipeline.silence_source",
                      "pipeline.synthesize_audio"}},
        {"decoder", {"decoder.cadence_ms", "decoder.latency_ms", "decoder.instability_tail",
                     "decoder.revision_prob", "decoder.seed", "decoder.digit_substitution",
                     "decoder.digit_deletion", "decoder.digit_insertion", "decoder.word_substitution",
                     "decoder.word_deletion", "decoder.word_insertion"}},
        {"vad", {"vad.frame_ms", "vad.hop_ms", "vad.threshold_factor", "vad.floor_adapt_rate",
                 "vad.onset_frames", "vad.hangover_frames", "vad.floor_min", "vad.calibration_ms"}},
        {"lar", {"lar.sensitive", "lar.end_nondigit_words", "lar.end_silence_ms", "lar.oh_adjacency_ms",
                 "lar.capture_timeout_ms", "lar.mask_agent_repeats"}},
        {"nlu", {"nlu.classifier", "nlu.model", "nlu.ngram_orders", "nlu.min_freq", "nlu.lambda", "nlu.tol",
                 "nlu.max_iterations", "nlu.easy_conf", "nlu.hard_entropy", "nlu.hard_fraction"}},
        {"beep", {"beep.frequency_hz", "beep.amplitude_dbfs", "beep.ramp_ms"}},
        {"normalizer", {"normalizer.lexicon"}},
    };
    for (const auto& [ns, keys] : known)
      if (auto bad = m.unknown_in(ns, keys); !bad.empty()) throw ConfigError("unknown config key " + bad.front());

    m.get("pipeline.holdback_ms", holdback_ms);
    m.get("pipeline.tick_ms", clock_tick_ms);
    if (m.has("pipeline.silence_source")) {
      std::string s;
      m.get("pipeline.silence_source", s);
      if (s == "vad") silence = SilenceSource::kVad;
      else if (s == "words") silence = SilenceSource::kWords;
      else throw ConfigError("pipeline.silence_source must be 'vad' or 'words'");
    }
    m.get("pipeline.synthesize_audio", synthesize_audio);

    m.get("decoder.cadence_ms", decoder.cadence_ms);
    m.get("decoder.latency_ms", decoder.latency_ms);
    m.get("decoder.instability_tail", decoder.instability_tail);
    m.get("decoder.revision_prob", decoder.revision_prob);
    m.get("decoder.seed", decoder.seed);
    m.get("decoder.digit_substitution", decoder.errors.digit.substitution);
    m.get("decoder.digit_deletion", decoder.errors.digit.deletion);
    m.get("decoder.digit_insertion", decoder.errors.digit.insertion);
    m.get("decoder.word_substitution", decoder.errors.word.substitution);
    m.get("decoder.word_deletion", decoder.errors.word.deletion);
    m.get("decoder.word_insertion", decoder.errors.word.insertion);

    m.get("vad.frame_ms", vad.frame_ms);
    m.get("vad.hop_ms", vad.hop_ms);
    m.get("vad.threshold_factor", vad.threshold_factor);
    m.get("vad.floor_adapt_rate", vad.floor_adapt_rate);
    m.get("vad.onset_frames", vad.onset_frames);
    m.get("vad.hangover_frames", vad.hangover_frames);
    m.get("vad.floor_min", vad.floor_min);
    m.get("vad.calibration_ms", vad.calibration_ms);

    if (m.has("lar.sensitive")) lar.sensitive = parse_entity_set("lar.sensitive", m.values().at("lar.sensitive"));
    m.get("lar.end_nondigit_words", lar.end_nondigit_words);
    m.get("lar.end_silence_ms", lar.end_silence_ms);
    m.get("lar.oh_adjacency_ms", lar.oh_adjacency_ms);
    m.get("lar.capture_timeout_ms", lar.capture_timeout_ms);
    m.get("lar.mask_agent_repeats", lar.mask_agent_repeats);

    m.get("nlu.classifier", nlu.classifier);
    m.get("nlu.model", nlu.model_path);
    if (m.has("nlu.ngram_orders")) {
      nlu.ngram_orders.clear();
      for (const auto& s : ConfigMap::split_list(m.values().at("nlu.ngram_orders"))) {
        const int n = ConfigMap::convert<int>("nlu.ngram_orders", s);
        if (n < 1 || n > nlu::kMaxOrder) throw ConfigError("nlu.ngram_orders entries must lie in 1..3");
        nlu.ngram_orders.push_back(n);
      }
    }
    m.get("nlu.min_freq", nlu.min_freq);
    m.get("nlu.lambda", nlu.train.lambda);
    m.get("nlu.tol", nlu.train.tol);
    m.get("nlu.max_iterations", nlu.train.max_iterations);
    m.get("nlu.easy_conf", nlu.self_train.easy_conf);
    m.get("nlu.hard_entropy", nlu.self_train.hard_entropy);
    m.get("nlu.hard_fraction", nlu.self_train.hard_fraction);

    m.get("beep.frequency_hz", beep.frequency_hz);
    m.get("beep.amplitude_dbfs", beep.amplitude_dbfs);
    m.get("beep.ramp_ms", beep.ramp_ms);
    m.get("normalizer.lexicon", lexicon_path);
    validate();
  }

  /// Every effective setting, for the run report.
  std::map<std::string, std::string> echo() const {
    auto d = [](double v) { nlohmann::json j = v; return j.dump(); };
    std::string orders;
    for (int n : nlu.ngram_orders) orders += (orders.empty() ? "" : ",") + std::to_string(n);
    return {
        {"pipeline.holdback_ms", std::to_string(holdback_ms)},
        {"pipeline.tick_ms", std::to_string(clock_tick_ms)},
        {"pipeline.silence_source", silence == SilenceSource::kVad ? "vad" : "words"},
        {"pipeline.synthesize_audio", synthesize_audio ? "true" : "false"},
        {"decoder.cadence_ms", std::to_string(decoder.cadence_ms)},
        {"decoder.latency_ms", std::to_string(decoder.latency_ms)},
        {"decoder.instability_tail", std::to_string(decoder.instability_tail)},
        {"decoder.revision_prob", d(decoder.revision_prob)},
        {"decoder.seed", std::to_string(decoder.seed)},
        {"decoder.digit_substitution", d(decoder.errors.digit.substitution)},
        {"decoder.digit_deletion", d(decoder.errors.digit.deletion)},
        {"decoder.digit_insertion", d(decoder.errors.digit.insertion)},
        {"decoder.word_substitution", d(decoder.errors.word.substitution)},
        {"decoder.word_deletion", d(decoder.errors.word.deletion)},
        {"decoder.word_insertion", d(decoder.errors.word.insertion)},
        {"vad.frame_ms", std::to_string(vad.frame_ms)},
        {"vad.hop_ms", std::to_string(vad.hop_ms)},
        {"vad.threshold_factor", d(vad.threshold_factor)},
        {"vad.floor_adapt_rate", d(vad.floor_adapt_rate)},
        {"vad.onset_frames", std::to_string(vad.onset_frames)},
        {"vad.hangover_frames", std::to_string(vad.hangover_frames)},
        {"vad.floor_min", d(vad.floor_min)},
        {"vad.calibration_ms", std::to_string(vad.calibration_ms)},
        {"lar.sensitive", entity_set_string(lar.sensitive)},
        {"lar.end_nondigit_words", std::to_string(lar.end_nondigit_words)},
        {"lar.end_silence_ms", std::to_string(lar.end_silence_ms)},
        {"lar.oh_adjacency_ms", std::to_string(lar.oh_adjacency_ms)},
        {"lar.capture_timeout_ms", std::to_string(lar.capture_timeout_ms)},
        {"lar.mask_agent_repeats", lar.mask_agent_repeats ? "true" : "false"},
        {"nlu.classifier", nlu.classifier},
        {"nlu.ngram_orders", orders},
        {"beep.frequency_hz", d(beep.frequency_hz)},
        {"beep.amplitude_dbfs", d(beep.amplitude_dbfs)},
        {"beep.ramp_ms", std::to_string(beep.ramp_ms)},
    };
  }
};

// ---------------------------------------------------------------------------
// Transcript redaction

struct TranscriptToken {
  std::string text;
  Millis start_ms = 0;
  Millis end_ms = 0;
  int first = 0;  // original word indices covered
  int last = 0;
  std::optional<EntityType> tag;         // replaced by a type tag
  std::optional<EntityType> annotation;  // kept, marked as an entity

  friend bool operator==(const TranscriptToken&, const TranscriptToken&) = default;
};

inline std::vector<TranscriptToken> tokens_from_words(const std::vector<asr::TimedWord>& words) {
  std::vector<TranscriptToken> out;
  out.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i)
    out.push_back({words[i].text, words[i].start_ms, words[i].end_ms, static_cast<int>(i), static_cast<int>(i),
                   std::nullopt, std::nullopt});
  return out;
}

inline std::string tag_text(EntityType t) { return "<" + std::string(entity_name(t)) + ">"; }

/// Replaces each sensitive capture's word span by one tag token and marks
/// non-sensitive spans. Applying it again with the same captures is a no-op.
inline std::vector<TranscriptToken> redact_transcript(std::vector<TranscriptToken> tokens,
                                                      std::vector<lar::EntityCapture> captures,
                                                      EntitySet sensitive) {
  std::erase_if(captures, [](const lar::EntityCapture& c) { return c.span.first < 0; });
  std::sort(captures.begin(), captures.end(),
            [](const auto& a, const auto& b) { return a.span.first < b.span.first; });
  for (std::size_t k = 1; k < captures.size(); ++k)
    if (captures[k].span.first <= captures[k - 1].span.last)
      throw ConsistencyError("capture spans " + std::to_string(captures[k - 1].id) + " and " +
                             std::to_string(captures[k].id) + " overlap");
  for (const auto& cap : captures) {
    const bool mask = sensitive.contains(cap.entity_type);
    std::size_t lo = tokens.size(), hi = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const auto& t = tokens[i];
      const bool inside = t.first >= cap.span.first && t.last <= cap.span.last;
      const bool outside = t.last < cap.span.first || t.first > cap.span.last;
      if (!inside && !outside)
        throw ConsistencyError("capture " + std::to_string(cap.id) + " cuts through a transcript token");
      if (inside) lo = std::min(lo, i), hi = i;
    }
    if (lo == tokens.size()) continue;
    if (!mask) {
      for (std::size_t i = lo; i <= hi; ++i)
        if (!tokens[i].tag) tokens[i].annotation = cap.entity_type;
      continue;
    }
    TranscriptToken tag{tag_text(cap.entity_type), tokens[lo].start_ms, tokens[hi].end_ms, cap.span.first,
                        cap.span.last, cap.entity_type, std::nullopt};
    tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(lo), tokens.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(lo), std::move(tag));
  }
  return tokens;
}

// ---------------------------------------------------------------------------
// Metrics

inline double measure_rtf(double cpu_time_s, double audio_duration_s) {
  if (!(audio_duration_s > 0.0)) throw ArgumentError("audio duration must be positive");
  return cpu_time_s / audio_duration_s;
}

inline double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + static_cast<double>(ts.tv_nsec) * 1e-9;
}

class StageTimer {
 public:
  explicit StageTimer(double& acc) : acc_(acc), t0_(thread_cpu_seconds()) {}
  ~StageTimer() { acc_ += thread_cpu_seconds() - t0_; }
  StageTimer(const StageTimer&) = delete;
  StageTimer& operator=(const StageTimer&) = delete;

 private:
  double& acc_;
  double t0_;
};

struct RuntimeMetrics {
  double cpu_seconds = 0.0;
  double audio_seconds = 0.0;
  double cpu_vs_audio = 0.0;
  std::map<std::string, double> stage_cpu_seconds;
  Millis leak_duration_ms = 0;
};

// ---------------------------------------------------------------------------
// Session

struct SessionOutput {
  std::string call_id;
  Millis duration_ms = 0;
  std::optional<audio::PcmBuffer> masked_audio;
  std::array<std::vector<TranscriptToken>, kNumChannels> transcript;
  std::vector<lar::EntityCapture> captures;
  std::vector<lar::RedactionEvent> events;
  std::vector<audio::MaskSpan> mask_spans;
  std::array<std::vector<vad::SpeechSegment>, kNumChannels> speech;
  asr::Script decoded;
  asr::CorruptionRecord corruption;
  std::size_t nlu_queries = 0;
  std::size_t partials = 0;
  RuntimeMetrics metrics;
};

struct SessionInputs {
  const audio::PcmBuffer* audio = nullptr;  // null: transcript-only run
  lar::CaptureSink* sink = nullptr;
  const norm::Lexicon* lexicon = nullptr;
};

namespace detail {

// Applies the release frontier to mask events and pairs them into spans.
class MaskLedger {
 public:
  MaskLedger(SessionOutput& out, Millis duration) : out_(out), duration_(duration) {}

  void take(std::vector<lar::RedactionEvent> events, Millis frontier) {
    for (auto& e : events) {
      const auto ch = static_cast<std::size_t>(index_of(e.channel));
      if (e.kind == lar::EventKind::kMaskStart) {
        const Millis requested = e.time_ms;
        e.time_ms = std::max(requested, frontier);
        open_[ch] = e.time_ms;
        out_.events.push_back(e);
        if (e.time_ms > requested) {
          out_.events.push_back(lar::record_leak(lar::LeakCause::kLatency, e.channel, requested,
                                                 e.time_ms - requested, e.entity_type,
                                                 "mask requested after audio release"));
          out_.metrics.leak_duration_ms += e.time_ms - requested;
        }
      } else if (e.kind == lar::EventKind::kMaskEnd) {
        if (!open_[ch]) continue;
        e.time_ms = std::min(std::max(e.time_ms, frontier), duration_);
        if (e.time_ms <= *open_[ch]) {
          // Zero-length after clipping: drop the pair.
          for (auto it = out_.events.rbegin(); it != out_.events.rend(); ++it)
            if (it->kind == lar::EventKind::kMaskStart && it->channel == e.channel) {
              out_.events.erase(std::next(it).base());
              break;
            }
        } else {
          out_.mask_spans.push_back({e.channel, *open_[ch], e.time_ms, e.entity_type});
          out_.events.push_back(e);
        }
        open_[ch].reset();
      } else {
        out_.events.push_back(e);
      }
    }
  }

 private:
  SessionOutput& out_;
  Millis duration_;
  std::array<std::optional<Millis>, kNumChannels> open_;
};

}  // namespace detail

inline SessionOutput run_session(const harness::CallBundle& bundle, const SessionConfig& cfg,
                                 const nlu::EntityClassifier& classifier, const SessionInputs& in = {}) {
  cfg.validate();
  const double cpu0 = thread_cpu_seconds();
  const norm::Lexicon& lx = in.lexicon ? *in.lexicon : norm::Lexicon::defaults();
  SessionOutput out;
  out.call_id = bundle.call_id;
  if (in.audio) in.audio->validate();
  out.duration_ms = in.audio ? in.audio->duration_ms() : bundle.duration_ms;
  auto& stage = out.metrics.stage_cpu_seconds;
  double& t_decode = stage["decode"];
  double& t_vad = stage["vad"];
  double& t_lar = stage["lar"];
  double& t_mask = stage["mask"];

  asr::DecoderSimConfig dcfg = cfg.decoder;
  dcfg.seed = mix_seed(cfg.decoder.seed, bundle.seed);
  asr::ReplayResult replay;
  {
    StageTimer timer(t_decode);
    replay = asr::replay_decode(bundle.words, dcfg, lx);
  }
  asr::ReplayDecoder decoder(std::move(replay.stream));

  lar::Redactor redactor(cfg.lar, classifier, lx, in.sink);
  std::array<std::optional<vad::VadStream>, kNumChannels> vads;
  std::array<std::int64_t, kNumChannels> vad_pos{};
  const bool use_vad = in.audio && cfg.silence == SilenceSource::kVad;
  if (in.audio)
    for (int c = 0; c < kNumChannels; ++c) vads[static_cast<std::size_t>(c)].emplace(cfg.vad, channel_from_index(c));

  detail::MaskLedger ledger(out, out.duration_ms);
  Millis frontier = 0;
  Millis caller_last_end = 0;
  Millis now = 0;
  for (now = cfg.clock_tick_ms;; now += cfg.clock_tick_ms) {
    std::vector<asr::PartialHypothesis> batch;
    {
      StageTimer timer(t_decode);
      batch = decoder.poll(now);
    }
    for (const auto& hyp : batch) {
      ++out.partials;
      if (hyp.channel == Channel::kCaller && !hyp.words.empty()) caller_last_end = hyp.words.back().end_ms;
      std::vector<lar::RedactionEvent> ev;
      {
        StageTimer timer(t_lar);
        ev = redactor.on_partial(hyp, now);
      }
      ledger.take(std::move(ev), frontier);
    }
    if (in.audio) {
      StageTimer timer(t_vad);
      const std::int64_t upto = std::min<std::int64_t>(audio::ms_to_samples(now), static_cast<std::int64_t>(in.audio->frames()));
      for (int c = 0; c < kNumChannels; ++c) {
        const auto ci = static_cast<std::size_t>(c);
        if (upto > vad_pos[ci]) {
          const auto& samples = in.audio->channels[ci];
          vads[ci]->push(std::span<const std::int16_t>(samples).subspan(static_cast<std::size_t>(vad_pos[ci]),
                                                                         static_cast<std::size_t>(upto - vad_pos[ci])));
          vad_pos[ci] = upto;
        }
      }
    }
    const Millis silence = use_vad ? vad::silence_duration(vads[1]->state(), now)
                                   : std::max<Millis>(0, now - caller_last_end);
    {
      std::vector<lar::RedactionEvent> ev;
      {
        StageTimer timer(t_lar);
        ev = redactor.on_tick(now, silence);
      }
      ledger.take(std::move(ev), frontier);
    }
    frontier = std::clamp<Millis>(now - cfg.holdback_ms, 0, out.duration_ms);
    if (now >= out.duration_ms && decoder.done()) break;
  }
  ledger.take(redactor.finish(now), frontier);

  if (in.audio) {
    for (auto& v : vads) v->finish();
    for (int c = 0; c < kNumChannels; ++c)
      out.speech[static_cast<std::size_t>(c)] = vads[static_cast<std::size_t>(c)]->segments();
    StageTimer timer(t_mask);
    out.masked_audio = audio::apply_masks(*in.audio, out.mask_spans, cfg.beep);
  }

  out.captures = redactor.captures();
  out.nlu_queries = redactor.nlu_queries();
  out.decoded = replay.decoded;
  out.corruption = replay.record;
  for (int c = 0; c < kNumChannels; ++c) {
    const auto ci = static_cast<std::size_t>(c);
    std::vector<lar::EntityCapture> mine;
    for (const auto& cap : out.captures)
      if (cap.channel == channel_from_index(c)) mine.push_back(cap);
    out.transcript[ci] = redact_transcript(tokens_from_words(out.decoded[ci]), mine, cfg.lar.sensitive);
  }

  out.metrics.cpu_seconds = thread_cpu_seconds() - cpu0;
  out.metrics.audio_seconds = static_cast<double>(out.duration_ms) / 1000.0;
  out.metrics.cpu_vs_audio =
      out.duration_ms > 0 ? measure_rtf(out.metrics.cpu_seconds, out.metrics.audio_seconds) : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Output files

inline nlohmann::json session_report(const SessionOutput& out, const SessionConfig& cfg) {
  std::map<std::string, int> kinds;
  for (const auto& e : out.events) ++kinds[std::string(lar::event_kind_name(e.kind))];
  std::array<Millis, kNumChannels> masked{};
  for (int c = 0; c < kNumChannels; ++c) {
    for (const auto& iv : audio::merged_intervals(out.mask_spans, channel_from_index(c),
                                                  audio::ms_to_samples(out.duration_ms)))
      masked[static_cast<std::size_t>(c)] += audio::samples_to_ms(iv.end - iv.begin);
  }
  nlohmann::json spans = nlohmann::json::array();
  for (const auto& s : out.mask_spans)
    spans.push_back({{"channel", index_of(s.channel)}, {"start_ms", s.start_ms}, {"end_ms", s.end_ms},
                     {"cause", entity_name(s.cause)}});
  nlohmann::json caps = nlohmann::json::array();
  for (const auto& c : out.captures)
    caps.push_back({{"id", c.id}, {"entity_type", entity_name(c.entity_type)}, {"first", c.span.first},
                    {"last", c.span.last}, {"valid", c.canonical.valid}});
  return {{"call_id", out.call_id},
          {"duration_ms", out.duration_ms},
          {"events", kinds},
          {"mask_spans", spans},
          {"masked_ms", {{"agent", masked[0]}, {"caller", masked[1]}}},
          {"captures", caps},
          {"leak_duration_ms", out.metrics.leak_duration_ms},
          {"nlu_queries", out.nlu_queries},
          {"partials", out.partials},
          {"speech_segments", {{"agent", out.speech[0].size()}, {"caller", out.speech[1].size()}}},
          {"config", cfg.echo()}};
}

inline nlohmann::json metrics_json(const RuntimeMetrics& m) {
  return {{"cpu_seconds", m.cpu_seconds},
          {"audio_seconds", m.audio_seconds},
          {"cpu_vs_audio", m.cpu_vs_audio},
          {"stage_cpu_seconds", m.stage_cpu_seconds},
          {"leak_duration_ms", m.leak_duration_ms}};
}

inline nlohmann::json decoded_json(const SessionOutput& out) {
  nlohmann::json channels = nlohmann::json::array();
  for (int c = 0; c < kNumChannels; ++c) {
    const auto ci = static_cast<std::size_t>(c);
    nlohmann::json ws = nlohmann::json::array();
    for (const auto& w : out.decoded[ci]) ws.push_back({{"w", w.text}, {"s", w.start_ms}, {"e", w.end_ms}});
    nlohmann::json rec = nlohmann::json::array();
    for (const auto& e : out.corruption[ci])
      rec.push_back({{"op", asr::edit_op_name(e.op)}, {"gold", e.gold_index}, {"decoded", e.decoded_index},
                     {"gold_text", e.gold_text}, {"decoded_text", e.decoded_text}});
    channels.push_back({{"channel", c}, {"words", ws}, {"corruption", rec}});
  }
  return {{"call_id", out.call_id}, {"channels", channels}};
}

/// Writes the per-call artefacts into `dir`. Captures are written by the
/// session's sink; this writes everything else.
inline void write_session_outputs(const SessionOutput& out, const SessionConfig& cfg, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(fs::path(dir) / name, std::ios::trunc);
    if (!f) throw FormatError("cannot write " + (fs::path(dir) / name).string());
    return f;
  };
  if (out.masked_audio) audio::write_wav((fs::path(dir) / "masked.wav").string(), *out.masked_audio);
  {
    auto f = open("events.jsonl");
    for (const auto& e : out.events) f << lar::event_to_json(e).dump() << "\n";
  }
  {
    auto f = open("transcript.tsv");
    f << "channel\tstart_ms\tend_ms\ttext\tentity\n";
    for (int c = 0; c < kNumChannels; ++c)
      for (const auto& t : out.transcript[static_cast<std::size_t>(c)])
        f << channel_name(channel_from_index(c)) << "\t" << t.start_ms << "\t" << t.end_ms << "\t" << t.text << "\t"
          << (t.tag ? entity_name(*t.tag) : t.annotation ? entity_name(*t.annotation) : std::string_view("-"))
          << "\n";
  }
  open("decoded.json") << decoded_json(out).dump() << "\n";
  open("report.json") << session_report(out, cfg).dump(2) << "\n";
  open("metrics.json") << metrics_json(out.metrics).dump(2) << "\n";
}

}  // namespace liveredact::pipeline
