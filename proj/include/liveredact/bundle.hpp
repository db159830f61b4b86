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

// Call bundles: one JSON object per line holding a call's timed words per
// channel, gold entity annotations and an optional audio reference. The
// field layout is frozen in docs/bundle_schema.md.

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "liveredact/asr_stream.hpp"
#include "liveredact/common.hpp"
#include "liveredact/nlu.hpp"
#include "liveredact/normalizer.hpp"

namespace liveredact::harness {

inline constexpr int kBundleVersion = 1;

struct GoldEntity {
  EntityType type = EntityType::kOther;
  Channel channel = Channel::kCaller;
  int first = 0;
  int last = 0;
  std::string canonical;

  friend bool operator==(const GoldEntity&, const GoldEntity&) = default;
};

struct CallBundle {
  std::string call_id;
  Millis duration_ms = 0;
  std::uint64_t seed = 0;
  std::optional<std::string> audio;  // path relative to the bundle file
  asr::Script words;
  std::vector<GoldEntity> entities;

  const std::vector<asr::TimedWord>& channel(Channel c) const {
    return words[static_cast<std::size_t>(index_of(c))];
  }

  /// Token texts of a gold entity's word span.
  std::vector<std::string> entity_tokens(const GoldEntity& e) const {
    std::vector<std::string> out;
    const auto& ws = channel(e.channel);
    for (int i = e.first; i <= e.last; ++i) out.push_back(ws[static_cast<std::size_t>(i)].text);
    return out;
  }

  friend bool operator==(const CallBundle&, const CallBundle&) = default;
};

inline nlohmann::json bundle_to_json(const CallBundle& b) {
  nlohmann::json channels = nlohmann::json::array();
  for (int c = 0; c < kNumChannels; ++c) {
    nlohmann::json ws = nlohmann::json::array();
    for (const auto& w : b.words[static_cast<std::size_t>(c)])
      ws.push_back({{"w", w.text}, {"s", w.start_ms}, {"e", w.end_ms}});
    channels.push_back({{"name", channel_name(channel_from_index(c))}, {"words", ws}});
  }
  nlohmann::json ents = nlohmann::json::array();
  for (const auto& e : b.entities)
    ents.push_back({{"type", entity_name(e.type)},
                    {"channel", index_of(e.channel)},
                    {"first", e.first},
                    {"last", e.last},
                    {"canonical", e.canonical}});
  nlohmann::json j = {{"version", kBundleVersion}, {"call_id", b.call_id}, {"duration_ms", b.duration_ms},
                      {"seed", b.seed}, {"channels", channels}, {"entities", ents}};
  j["audio"] = b.audio ? nlohmann::json(*b.audio) : nlohmann::json(nullptr);
  return j;
}

/// Structural checks plus the annotation consistency rule: each gold
/// canonical must be what the normalizer reads from the annotated words.
inline void validate_bundle(const CallBundle& b, const norm::Lexicon& lx = norm::Lexicon::defaults()) {
  if (b.call_id.empty()) throw FormatError("call_id is empty");
  asr::validate_script(b.words);
  for (int c = 0; c < kNumChannels; ++c) {
    const auto& ws = b.words[static_cast<std::size_t>(c)];
    if (!ws.empty() && ws.back().end_ms > b.duration_ms)
      throw FormatError("call " + b.call_id + ": words extend past duration_ms");
  }
  for (std::size_t k = 0; k < b.entities.size(); ++k) {
    const auto& e = b.entities[k];
    const auto n = static_cast<int>(b.channel(e.channel).size());
    const std::string where = "call " + b.call_id + " entity " + std::to_string(k);
    if (e.first < 0 || e.last < e.first || e.last >= n) throw FormatError(where + ": word indices out of range");
    if (e.type == EntityType::kOther) continue;
    norm::CanonicalValue v;
    try {
      v = norm::words_to_digits(b.entity_tokens(e), e.type, lx);
    } catch (const EmptyValueError&) {
      throw FormatError(where + ": annotated words carry no digits");
    }
    if (v.value != e.canonical)
      throw FormatError(where + ": canonical '" + e.canonical + "' disagrees with normalizer reading '" +
                        v.value + "'");
  }
}

inline CallBundle bundle_from_json(const nlohmann::json& j) {
  const int version = j.at("version").get<int>();
  if (version != kBundleVersion)
    throw FormatError("bundle version " + std::to_string(version) + " is not supported (expected " +
                      std::to_string(kBundleVersion) + ")");
  CallBundle b;
  b.call_id = j.at("call_id").get<std::string>();
  b.duration_ms = j.at("duration_ms").get<Millis>();
  b.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("audio") && !j.at("audio").is_null()) b.audio = j.at("audio").get<std::string>();
  const auto& channels = j.at("channels");
  if (channels.size() != kNumChannels) throw FormatError("bundle must list exactly two channels");
  for (int c = 0; c < kNumChannels; ++c)
    for (const auto& w : channels.at(static_cast<std::size_t>(c)).at("words"))
      b.words[static_cast<std::size_t>(c)].push_back(
          {w.at("w").get<std::string>(), w.at("s").get<Millis>(), w.at("e").get<Millis>(), channel_from_index(c)});
  if (j.contains("entities"))
    for (const auto& e : j.at("entities")) {
      GoldEntity g;
      const auto t = parse_entity(e.at("type").get<std::string>());
      if (!t) throw FormatError("unknown entity type '" + e.at("type").get<std::string>() + "'");
      g.type = *t;
      const int ch = e.at("channel").get<int>();
      if (ch != 0 && ch != 1) throw FormatError("entity channel must be 0 or 1");
      g.channel = channel_from_index(ch);
      g.first = e.at("first").get<int>();
      g.last = e.at("last").get<int>();
      g.canonical = e.at("canonical").get<std::string>();
      b.entities.push_back(std::move(g));
    }
  return b;
}

/// Reads every record of a JSONL file; errors carry file:line.
inline std::vector<CallBundle> read_bundle_file(const std::string& path,
                                                const norm::Lexicon& lx = norm::Lexicon::defaults()) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open bundle file " + path);
  std::vector<CallBundle> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      CallBundle b = bundle_from_json(nlohmann::json::parse(line));
      validate_bundle(b, lx);
      out.push_back(std::move(b));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

/// A JSONL file, or every *.jsonl in a directory in name order.
inline std::vector<std::string> bundle_files(const std::string& path) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(path)) return {path};
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(path))
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw FormatError("no .jsonl bundle files in " + path);
  return files;
}

inline std::vector<CallBundle> load_corpus(const std::string& path,
                                           const norm::Lexicon& lx = norm::Lexicon::defaults()) {
  std::vector<CallBundle> all;
  for (const auto& f : bundle_files(path)) {
    auto part = read_bundle_file(f, lx);
    all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return all;
}

inline void write_bundle_file(const std::string& path, const std::vector<CallBundle>& bundles) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot write bundle file " + path);
  for (const auto& b : bundles) out << bundle_to_json(b).dump() << "\n";
}

/// Audio path resolved against the directory of the bundle file.
inline std::optional<std::string> resolve_audio(const CallBundle& b, const std::string& bundle_path) {
  if (!b.audio) return std::nullopt;
  std::filesystem::path p(*b.audio);
  if (p.is_absolute()) return p.string();
  return (std::filesystem::path(bundle_path).parent_path() / p).string();
}

/// Time interval covered by a gold entity's words.
inline std::pair<Millis, Millis> entity_interval(const CallBundle& b, const GoldEntity& e) {
  const auto& ws = b.channel(e.channel);
  return {ws[static_cast<std::size_t>(e.first)].start_ms, ws[static_cast<std::size_t>(e.last)].end_ms};
}

/// Gold-type lookup: the caller annotation whose time span overlaps the
/// trigger word, or OTHER when there is none.
class OracleClassifier : public nlu::EntityClassifier {
 public:
  explicit OracleClassifier(const CallBundle& bundle) : bundle_(bundle) {}

  std::optional<EntityType> gold_type(const nlu::NluContext& ctx) const {
    for (const auto& e : bundle_.entities) {
      if (e.channel != ctx.channel) continue;
      const auto [s, t] = entity_interval(bundle_, e);
      if (ctx.trigger_start_ms < t && s < ctx.trigger_end_ms) return e.type;
    }
    return std::nullopt;
  }

  nlu::Prediction classify(const nlu::NluContext& ctx) const override {
    nlu::Prediction p;
    p.type = gold_type(ctx).value_or(EntityType::kOther);
    p.probs.fill(0.0);
    p.probs[static_cast<std::size_t>(index_of(p.type))] = 1.0;
    return p;
  }

 private:
  const CallBundle& bundle_;
};

/// Passes queries through to `inner` and keeps every context it saw along
/// with the label an oracle assigns to it.
class RecordingClassifier : public nlu::EntityClassifier {
 public:
  struct Entry {
    nlu::NluContext context;
    EntityType predicted;
    std::optional<EntityType> gold;
  };

  RecordingClassifier(const nlu::EntityClassifier& inner, const OracleClassifier* oracle)
      : inner_(inner), oracle_(oracle) {}

  nlu::Prediction classify(const nlu::NluContext& ctx) const override {
    auto p = inner_.classify(ctx);
    entries.push_back({ctx, p.type, oracle_ ? oracle_->gold_type(ctx) : std::nullopt});
    return p;
  }

  mutable std::vector<Entry> entries;

 private:
  const nlu::EntityClassifier& inner_;
  const OracleClassifier* oracle_;
};

}  // namespace liveredact::harness
