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

// Synthetic call generator. Calls alternate agent prompts and caller answers;
// the answers carry verbalized entity values with exact gold spans. Optional
// audio renders every word as a band-limited noise burst over a quiet floor.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "liveredact/asr_stream.hpp"
#include "liveredact/audio.hpp"
#include "liveredact/bundle.hpp"
#include "liveredact/common.hpp"
#include "liveredact/config.hpp"
#include "liveredact/normalizer.hpp"
#include "liveredact/rng.hpp"

namespace liveredact::harness {

struct GenConfig {
  std::size_t n_calls = 200;
  std::uint64_t seed = 1;
  // Relative weights, in entity declaration order.
  std::array<double, kNumEntityTypes> entity_mix = {0.08, 0.08, 0.24, 0.18, 0.16, 0.12, 0.14};
  int min_entities = 2;
  int max_entities = 5;
  double filler_rate = 0.15;
  double correction_rate = 0.1;
  double repeater_rate = 0.2;
  double grouped_rate = 0.4;  // remainder is plain
  double long_pause_rate = 0.0;
  double agent_interrupt_rate = 0.0;
  double luhn_valid_prob = 0.98;
  bool render_audio = false;
  std::string call_prefix = "call";

  void validate() const {
    for (double p : {filler_rate, correction_rate, repeater_rate, grouped_rate, long_pause_rate,
                     agent_interrupt_rate, luhn_valid_prob})
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("gen: rates must lie in [0,1]");
    if (repeater_rate + grouped_rate > 1.0) throw ConfigError("gen: repeater_rate + grouped_rate exceeds 1");
    double total = 0.0;
    for (double w : entity_mix) {
      if (!(w >= 0.0)) throw ConfigError("gen: entity_mix weights must be >= 0");
      total += w;
    }
    if (!(total > 0.0)) throw ConfigError("gen: entity_mix has no positive weight");
    if (min_entities < 1 || max_entities < min_entities) throw ConfigError("gen: need 1 <= min_entities <= max_entities");
  }

  void apply(const ConfigMap& m) {
    std::set<std::string> known = {"gen.n_calls",          "gen.seed",          "gen.min_entities",
                                   "gen.max_entities",     "gen.filler_rate",   "gen.correction_rate",
                                   "gen.repeater_rate",    "gen.grouped_rate",  "gen.long_pause_rate",
                                   "gen.agent_interrupt_rate", "gen.luhn_valid_prob", "gen.render_audio",
                                   "gen.call_prefix"};
    for (EntityType t : kAllEntityTypes) known.insert("gen.mix." + std::string(entity_name(t)));
    if (auto bad = m.unknown_in("gen", known); !bad.empty()) throw ConfigError("unknown config key " + bad.front());
    m.get("gen.n_calls", n_calls);
    m.get("gen.seed", seed);
    m.get("gen.min_entities", min_entities);
    m.get("gen.max_entities", max_entities);
    m.get("gen.filler_rate", filler_rate);
    m.get("gen.correction_rate", correction_rate);
    m.get("gen.repeater_rate", repeater_rate);
    m.get("gen.grouped_rate", grouped_rate);
    m.get("gen.long_pause_rate", long_pause_rate);
    m.get("gen.agent_interrupt_rate", agent_interrupt_rate);
    m.get("gen.luhn_valid_prob", luhn_valid_prob);
    m.get("gen.render_audio", render_audio);
    m.get("gen.call_prefix", call_prefix);
    // Any gen.mix.* key switches to an explicit mix; unnamed types get 0.
    bool explicit_mix = false;
    for (EntityType t : kAllEntityTypes) explicit_mix |= m.has("gen.mix." + std::string(entity_name(t)));
    if (explicit_mix) {
      entity_mix.fill(0.0);
      for (EntityType t : kAllEntityTypes)
        m.get("gen.mix." + std::string(entity_name(t)), entity_mix[static_cast<std::size_t>(index_of(t))]);
    }
    validate();
  }
};

// ---------------------------------------------------------------------------
// Values

inline std::string random_digits(Rng& rng, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<char>('0' + rng.uniform_int(0, 9)));
  return s;
}

/// Check digit that makes `body + d` pass Luhn.
inline char luhn_check_digit(std::string_view body) {
  int sum = 0;
  bool dbl = true;  // the digit right of body will be undoubled
  for (auto it = body.rbegin(); it != body.rend(); ++it) {
    int d = *it - '0';
    if (dbl) d = d * 2 > 9 ? d * 2 - 9 : d * 2;
    sum += d;
    dbl = !dbl;
  }
  return static_cast<char>('0' + (10 - sum % 10) % 10);
}

inline char aba_check_digit(std::string_view eight) {
  const int w[8] = {3, 7, 1, 3, 7, 1, 3, 7};
  int sum = 0;
  for (int i = 0; i < 8; ++i) sum += w[i] * (eight[static_cast<std::size_t>(i)] - '0');
  return static_cast<char>('0' + (10 - sum % 10) % 10);
}

inline std::string random_value(EntityType type, Rng& rng, double luhn_valid_prob) {
  switch (type) {
    case EntityType::kCcNum: {
      const std::size_t lengths[] = {16, 16, 16, 16, 16, 16, 15, 15, 13, 14, 17, 18, 19};
      const std::size_t n = rng.pick(std::span<const std::size_t>(lengths));
      std::string body = std::to_string(rng.uniform_int(3, 6)) + random_digits(rng, n - 2);
      char check = luhn_check_digit(body);
      if (!rng.bernoulli(luhn_valid_prob)) check = static_cast<char>('0' + (check - '0' + 1) % 10);
      return body + check;
    }
    case EntityType::kCvv: return random_digits(rng, rng.bernoulli(0.85) ? 3 : 4);
    case EntityType::kExpDate: {
      std::ostringstream os;
      os << std::setw(2) << std::setfill('0') << rng.uniform_int(1, 12) << "/" << std::setw(2)
         << rng.uniform_int(24, 35);
      return os.str();
    }
    case EntityType::kZip: return random_digits(rng, 5);
    case EntityType::kRouting: {
      std::string body = random_digits(rng, 8);
      return body + aba_check_digit(body);
    }
    case EntityType::kBankAcc: return random_digits(rng, static_cast<std::size_t>(rng.uniform_int(6, 12)));
    case EntityType::kOther: return std::to_string(rng.uniform_int(2, 40));
  }
  return "0";
}

// ---------------------------------------------------------------------------
// Dialogue templates

inline const std::vector<std::string>& agent_prompts(EntityType t) {
  static const std::array<std::vector<std::string>, kNumEntityTypes> prompts = {{
      {"what is the routing number of your bank", "can you read me the routing number",
       "please give me the bank routing number"},
      {"and the checking account number", "what is your bank account number",
       "can i have the account number please"},
      {"can i have the card number please", "what is the long number on the front of the card",
       "please read me your card number"},
      {"and the security code on the back", "what is the cvv on the back of the card",
       "can you give me the security code please"},
      {"what is the expiration date", "when does the card expire", "and the expiry date please"},
      {"what is the billing zip code", "can i get the zip code on the account", "and your postal code please"},
      {"how long have you been with us", "how many people are on the plan", "what time works best for a callback"},
  }};
  return prompts[static_cast<std::size_t>(index_of(t))];
}

struct OtherFrame {
  std::vector<std::string> before;
  std::vector<std::string> after;
};

inline const std::vector<OtherFrame>& other_frames() {
  static const std::vector<OtherFrame> frames = {
      {{"about"}, {"years", "i", "think"}},
      {{"there", "are"}, {"of", "us", "on", "it"}},
      {{"maybe", "around"}, {"in", "the", "afternoon"}},
      {{"i", "guess", "roughly"}, {"or", "so"}},
  };
  return frames;
}

inline std::vector<std::string> words_of(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// ---------------------------------------------------------------------------
// Call assembly

namespace detail {

struct Token {
  std::string text;
  int entity = -1;        // index into the call's entity list
  Millis gap_before = -1;  // override of the usual inter-word gap
  bool interrupt = false;  // agent backchannel inside this gap
};

class CallBuilder {
 public:
  CallBuilder(const GenConfig& cfg, std::uint64_t seed, const norm::Lexicon& lx)
      : cfg_(cfg), rng_(seed), lx_(lx) {}

  Rng& rng() { return rng_; }

  void agent(const std::vector<std::string>& words) {
    clock_ += turn_gap();
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i > 0) clock_ += word_gap();
      place(Channel::kAgent, words[i]);
    }
  }

  void caller(std::vector<Token> tokens, std::vector<GoldEntity>& entities) {
    clock_ += turn_gap();
    // Keep the end-of-entity rule from merging this entity into the last one:
    // three non-number words or a long pause must separate them.
    auto first_num = std::find_if(tokens.begin(), tokens.end(), [&](const Token& t) { return numeric(t.text); });
    if (first_num != tokens.end() && last_numeric_end_ >= 0) {
      const int words_between = nonnum_since_ + static_cast<int>(first_num - tokens.begin());
      if (words_between < 3) {
        Millis lead = 0;
        for (auto it = tokens.begin(); it != first_num; ++it) lead += 300 + 150;  // earliest case
        const Millis need = last_numeric_end_ + kBoundaryPauseMs - (clock_ + lead);
        if (need > 0) clock_ += need + rng_.uniform_int(100, 400);
      }
    }
    auto& words = b_.words[static_cast<std::size_t>(index_of(Channel::kCaller))];
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const Token& t = tokens[i];
      if (i > 0) {
        if (t.interrupt) {
          const Millis gap = 1100 + rng_.uniform_int(0, 300);
          const Millis s = clock_ + 250;
          const Millis e = s + 350;
          auto& agent_words = b_.words[static_cast<std::size_t>(index_of(Channel::kAgent))];
          static const std::vector<std::string> backchannel = {"okay", "mhm", "right", "yes"};
          agent_words.push_back({rng_.pick(backchannel), std::max(s, agent_free_), e, Channel::kAgent});
          if (agent_words.back().start_ms >= agent_words.back().end_ms) agent_words.pop_back();
          else agent_free_ = e;
          clock_ += gap;
        } else {
          clock_ += t.gap_before >= 0 ? t.gap_before : word_gap();
        }
      }
      place(Channel::kCaller, t.text);
      const int idx = static_cast<int>(words.size()) - 1;
      if (t.entity >= 0) {
        auto& e = entities[static_cast<std::size_t>(t.entity)];
        if (e.first < 0) e.first = idx;
        e.last = idx;
      }
      if (numeric(t.text)) {
        nonnum_since_ = 0;
        last_numeric_end_ = words.back().end_ms;
      } else {
        ++nonnum_since_;
      }
    }
  }

  CallBundle finish(std::string call_id, std::uint64_t seed, std::vector<GoldEntity> entities) {
    b_.call_id = std::move(call_id);
    b_.seed = seed;
    Millis end = 0;
    for (const auto& ch : b_.words)
      if (!ch.empty()) end = std::max(end, ch.back().end_ms);
    b_.duration_ms = end + 800;
    b_.entities = std::move(entities);
    return std::move(b_);
  }

  bool numeric(const std::string& w) const { return lx_.classify(w).kind != norm::WordKind::kOther; }

 private:
  static constexpr Millis kBoundaryPauseMs = 3600;

  Millis word_gap() { return rng_.uniform_int(150, 600); }
  Millis turn_gap() { return rng_.uniform_int(400, 1000); }

  void place(Channel ch, const std::string& text) {
    const Millis dur = rng_.uniform_int(300, 450);
    auto& words = b_.words[static_cast<std::size_t>(index_of(ch))];
    Millis start = clock_;
    if (ch == Channel::kAgent) start = std::max(start, agent_free_);
    words.push_back({text, start, start + dur, ch});
    clock_ = start + dur;
    if (ch == Channel::kAgent) agent_free_ = clock_;
  }

  const GenConfig& cfg_;
  Rng rng_;
  const norm::Lexicon& lx_;
  CallBundle b_;
  Millis clock_ = 300;
  Millis agent_free_ = 0;
  Millis last_numeric_end_ = -1;
  int nonnum_since_ = 0;
};

inline norm::Style pick_style(const GenConfig& cfg, Rng& rng) {
  if (rng.bernoulli(cfg.correction_rate)) return norm::Style::kWithCorrections;
  const double u = rng.uniform();
  if (u < cfg.repeater_rate) return norm::Style::kRepeater;
  if (u < cfg.repeater_rate + cfg.grouped_rate) return norm::Style::kGrouped;
  return norm::Style::kPlain;
}

}  // namespace detail

/// One call, fully determined by (cfg, index).
inline CallBundle generate_call(const GenConfig& cfg, std::size_t index,
                                const norm::Lexicon& lx = norm::Lexicon::defaults()) {
  const std::uint64_t seed = mix_seed(cfg.seed, index);
  detail::CallBuilder call(cfg, seed, lx);
  Rng& rng = call.rng();
  std::vector<GoldEntity> entities;

  static const std::vector<std::string> greetings = {"thank you for calling how can i help you today",
                                                     "good morning this is the billing team how can i help",
                                                     "hello and thanks for calling what can i do for you"};
  static const std::vector<std::string> openers = {"hi i would like to make a payment",
                                                   "hello i need to pay my bill",
                                                   "yes i want to update my payment details"};
  static const std::vector<std::string> prefixes = {"sure it is", "yes it is", "okay it is", "sure",
                                                    "let me see it is", "yeah", "it is"};
  static const std::vector<std::string> suffixes = {"", "", "that is it", "i think", "okay"};
  static const std::vector<std::string> acks = {"thank you", "great thank you", "perfect", "got it thank you"};
  static const std::vector<std::string> closings = {"is there anything else i can help you with",
                                                    "your payment is all set anything else today"};
  static const std::vector<std::string> goodbyes = {"no that is all thank you", "nope that is everything bye"};

  call.agent(words_of(rng.pick(greetings)));
  {
    std::vector<detail::Token> t;
    for (auto& w : words_of(rng.pick(openers))) t.push_back({w});
    call.caller(std::move(t), entities);
  }

  const auto n_entities = rng.uniform_int(cfg.min_entities, cfg.max_entities);
  for (std::int64_t k = 0; k < n_entities; ++k) {
    const EntityType type = kAllEntityTypes[rng.weighted(std::span<const double>(cfg.entity_mix))];
    const std::string value = random_value(type, rng, cfg.luhn_valid_prob);
    call.agent(words_of(rng.pick(agent_prompts(type))));

    norm::CanonicalValue canon = norm::make_canonical(type, value);
    norm::Style style = type == EntityType::kOther ? (rng.bernoulli(0.5) ? norm::Style::kGrouped : norm::Style::kPlain)
                                                   : detail::pick_style(cfg, rng);
    auto spoken = norm::verbalize(canon, style, rng.next(), lx);

    const int id = static_cast<int>(entities.size());
    entities.push_back({type, Channel::kCaller, -1, -1, value});

    std::vector<detail::Token> tokens;
    if (!lx.fillers().empty() && rng.bernoulli(cfg.filler_rate)) tokens.push_back({rng.pick(lx.fillers())});
    OtherFrame frame;
    if (type == EntityType::kOther) {
      frame = rng.pick(other_frames());
      for (auto& w : frame.before) tokens.push_back({w});
    } else {
      for (auto& w : words_of(rng.pick(prefixes))) tokens.push_back({w});
    }
    const std::size_t entity_begin = tokens.size();
    for (auto& w : spoken) tokens.push_back({w, id});
    const std::size_t entity_end = tokens.size();
    if (entity_end - entity_begin >= 3 && rng.bernoulli(cfg.long_pause_rate)) {
      const auto at = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(entity_begin) + 1,
                                                               static_cast<std::int64_t>(entity_end) - 1));
      tokens[at].gap_before = rng.uniform_int(3500, 4500);
    } else if (entity_end - entity_begin >= 3 && rng.bernoulli(cfg.agent_interrupt_rate)) {
      const auto at = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(entity_begin) + 1,
                                                               static_cast<std::int64_t>(entity_end) - 1));
      tokens[at].interrupt = true;
    }
    if (type == EntityType::kOther) {
      for (auto& w : frame.after) tokens.push_back({w});
    } else {
      for (auto& w : words_of(rng.pick(suffixes))) tokens.push_back({w});
    }
    call.caller(std::move(tokens), entities);
    call.agent(words_of(rng.pick(acks)));
  }

  call.agent(words_of(rng.pick(closings)));
  {
    std::vector<detail::Token> t;
    for (auto& w : words_of(rng.pick(goodbyes))) t.push_back({w});
    call.caller(std::move(t), entities);
  }

  std::ostringstream id;
  id << cfg.call_prefix << "-" << std::setw(5) << std::setfill('0') << index;
  CallBundle b = call.finish(id.str(), seed, std::move(entities));
  for (const auto& e : b.entities) {
    if (e.type == EntityType::kOther) continue;
    const auto tokens = b.entity_tokens(e);
    const auto got = norm::words_to_digits(tokens, e.type, lx).value;
    if (got != e.canonical) {
      std::string said;
      for (const auto& w : tokens) said += (said.empty() ? "" : " ") + w;
      throw ContractViolation("generated call " + b.call_id + " reads '" + said + "' as '" + got + "', not " +
                              e.canonical + " (" + std::string(entity_name(e.type)) + ")");
    }
  }
  return b;
}

inline std::vector<CallBundle> generate_corpus(const GenConfig& cfg,
                                               const norm::Lexicon& lx = norm::Lexicon::defaults()) {
  cfg.validate();
  std::vector<CallBundle> out;
  out.reserve(cfg.n_calls);
  for (std::size_t i = 0; i < cfg.n_calls; ++i) out.push_back(generate_call(cfg, i, lx));
  return out;
}

// ---------------------------------------------------------------------------
// Audio

struct RenderConfig {
  double word_rms = 3000.0;
  double floor_rms = 20.0;
  Millis ramp_ms = 5;
};

/// Band-limited noise bursts (one-pole high-pass into one-pole low-pass) for
/// every word, over low-level white noise.
inline audio::PcmBuffer render_call_audio(const CallBundle& b, const RenderConfig& rc = {}) {
  audio::PcmBuffer pcm(static_cast<std::size_t>(audio::ms_to_samples(b.duration_ms)));
  for (int c = 0; c < kNumChannels; ++c) {
    Rng rng(mix_seed(b.seed, 0xA0D10 + static_cast<std::uint64_t>(c)));
    auto& out = pcm.channels[static_cast<std::size_t>(c)];
    std::vector<double> sig(out.size());
    const double floor_amp = rc.floor_rms * std::sqrt(3.0);
    for (double& s : sig) s = floor_amp * (2.0 * rng.uniform() - 1.0);
    for (const auto& w : b.words[static_cast<std::size_t>(c)]) {
      const auto s0 = static_cast<std::size_t>(audio::ms_to_samples(w.start_ms));
      const auto s1 = std::min(sig.size(), static_cast<std::size_t>(audio::ms_to_samples(w.end_ms)));
      if (s1 <= s0) continue;
      const std::size_t n = s1 - s0;
      const auto ramp = std::min<std::size_t>(static_cast<std::size_t>(audio::ms_to_samples(rc.ramp_ms)), n / 2);
      double hp_prev_in = 0.0, hp = 0.0, lp = 0.0;
      // The cascade roughly halves the white-noise RMS; the factor restores it.
      const double amp = rc.word_rms * std::sqrt(3.0) * 2.2;
      for (std::size_t i = 0; i < n; ++i) {
        const double x = 2.0 * rng.uniform() - 1.0;
        hp = 0.95 * (hp + x - hp_prev_in);
        hp_prev_in = x;
        lp += 0.45 * (hp - lp);
        double g = 1.0;
        if (ramp > 0 && i < ramp) g = 0.5 - 0.5 * std::cos(M_PI * static_cast<double>(i) / static_cast<double>(ramp));
        if (ramp > 0 && n - 1 - i < ramp)
          g = std::min(g, 0.5 - 0.5 * std::cos(M_PI * static_cast<double>(n - 1 - i) / static_cast<double>(ramp)));
        sig[s0 + i] += amp * g * lp;
      }
    }
    for (std::size_t i = 0; i < sig.size(); ++i)
      out[i] = static_cast<std::int16_t>(std::clamp(std::lround(sig[i]), -32768L, 32767L));
  }
  return pcm;
}

}  // namespace liveredact::harness
