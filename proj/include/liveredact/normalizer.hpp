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

// Spoken-number normalization: lexicon, correction resolution, numeral
// parsing with ambiguity, per-entity canonical formats, checksums, and the
// inverse verbalizer used to synthesize speech for a canonical value.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "liveredact/common.hpp"
#include "liveredact/rng.hpp"

namespace liveredact::norm {

enum class WordKind : std::uint8_t {
  kOther,
  kDigit,
  kAmbiguousZero,  // "oh": a zero next to number words, a hesitation otherwise
  kTeen,
  kTens,
  kMultiplier,
  kRepeater,
  kMonth,
};

struct WordInfo {
  WordKind kind = WordKind::kOther;
  int value = 0;
};

/// Number words, correction markers and fillers. Loadable from JSON so new
/// phrasings need no code change.
class Lexicon {
 public:
  Lexicon() {
    const char* digits[] = {"zero", "one", "two",   "three", "four",
                            "five", "six", "seven", "eight", "nine"};
    for (int i = 0; i < 10; ++i) digits_[digits[i]] = i;
    ambiguous_zero_ = {"oh", "o"};
    const char* teens[] = {"ten",     "eleven",  "twelve",    "thirteen", "fourteen",
                           "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};
    for (int i = 0; i < 10; ++i) teens_[teens[i]] = 10 + i;
    const char* tens[] = {"twenty", "thirty",  "forty",  "fifty",
                          "sixty",  "seventy", "eighty", "ninety"};
    for (int i = 0; i < 8; ++i) tens_[tens[i]] = 20 + 10 * i;
    multipliers_ = {{"hundred", 100}, {"thousand", 1000}};
    repeaters_ = {{"double", 2}, {"triple", 3}};
    const char* months[] = {"january", "february", "march",     "april",
                            "may",     "june",     "july",      "august",
                            "september", "october", "november", "december"};
    for (int i = 0; i < 12; ++i) months_[months[i]] = i + 1;
    markers_ = {{"no", "no"}, {"sorry"}, {"i", "mean"}, {"scratch", "that"}, {"wait"}};
    fillers_ = {"uh", "um"};
    rebuild();
  }

  static const Lexicon& defaults() {
    static const Lexicon lexicon;
    return lexicon;
  }

  /// Keys present in `j` replace the corresponding default sets.
  static Lexicon from_json(const nlohmann::json& j) {
    Lexicon lx;
    auto read_map = [&](const char* key, std::map<std::string, int>& dst) {
      if (!j.contains(key)) return;
      dst.clear();
      for (const auto& [k, v] : j.at(key).items()) dst[k] = v.get<int>();
    };
    read_map("digits", lx.digits_);
    read_map("teens", lx.teens_);
    read_map("tens", lx.tens_);
    read_map("multipliers", lx.multipliers_);
    read_map("repeaters", lx.repeaters_);
    read_map("months", lx.months_);
    if (j.contains("ambiguous_zero"))
      lx.ambiguous_zero_ = j.at("ambiguous_zero").get<std::set<std::string>>();
    if (j.contains("correction_markers"))
      lx.markers_ = j.at("correction_markers").get<std::vector<std::vector<std::string>>>();
    if (j.contains("fillers"))
      lx.fillers_ = j.at("fillers").get<std::vector<std::string>>();
    lx.rebuild();
    return lx;
  }

  static Lexicon load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open lexicon " + path);
    try {
      return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("lexicon " + path + ": " + e.what());
    }
  }

  nlohmann::json to_json() const {
    return {{"digits", digits_},       {"ambiguous_zero", ambiguous_zero_},
            {"teens", teens_},         {"tens", tens_},
            {"multipliers", multipliers_}, {"repeaters", repeaters_},
            {"months", months_},       {"correction_markers", markers_},
            {"fillers", fillers_}};
  }

  WordInfo classify(std::string_view word) const {
    auto it = index_.find(std::string(word));
    return it == index_.end() ? WordInfo{} : it->second;
  }

  /// True for unconditional number words (everything but ambiguous zeros).
  bool is_number_word(std::string_view word) const {
    const WordKind k = classify(word).kind;
    return k != WordKind::kOther && k != WordKind::kAmbiguousZero;
  }

  bool is_ambiguous_zero(std::string_view word) const {
    return classify(word).kind == WordKind::kAmbiguousZero;
  }

  /// Length of the correction marker starting at tokens[i], or 0.
  std::size_t match_marker(const std::vector<std::string>& tokens, std::size_t i) const {
    std::size_t best = 0;
    for (const auto& m : markers_) {
      if (m.empty() || i + m.size() > tokens.size() || m.size() <= best) continue;
      if (std::equal(m.begin(), m.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i)))
        best = m.size();
    }
    return best;
  }

  const std::vector<std::vector<std::string>>& markers() const { return markers_; }
  const std::vector<std::string>& fillers() const { return fillers_; }

  /// Spoken form of a single digit. `zero_as_oh` selects "oh" for 0.
  const std::string& digit_word(int d, bool zero_as_oh = false) const {
    if (d == 0 && zero_as_oh) return oh_word_;
    return digit_words_[static_cast<std::size_t>(d)];
  }
  const std::string& teen_word(int v) const { return teen_words_[static_cast<std::size_t>(v - 10)]; }
  const std::string& tens_word(int v) const { return tens_words_[static_cast<std::size_t>(v / 10 - 2)]; }
  const std::string& month_word(int m) const { return month_words_[static_cast<std::size_t>(m - 1)]; }
  const std::string& multiplier_word(int v) const { return multiplier_words_.at(v); }
  const std::string& repeater_word(int n) const { return repeater_words_.at(n); }

 private:
  void rebuild() {
    index_.clear();
    auto add = [&](const std::string& w, WordInfo info) {
      auto [it, inserted] = index_.emplace(w, info);
      if (!inserted && !(it->second.kind == WordKind::kAmbiguousZero ||
                         info.kind == WordKind::kAmbiguousZero))
        throw ConfigError("lexicon word '" + w + "' appears in two sets");
    };
    for (const auto& w : ambiguous_zero_) add(w, {WordKind::kAmbiguousZero, 0});
    for (const auto& [w, v] : digits_) {
      if (ambiguous_zero_.count(w)) continue;
      add(w, {WordKind::kDigit, v});
    }
    for (const auto& [w, v] : teens_) add(w, {WordKind::kTeen, v});
    for (const auto& [w, v] : tens_) add(w, {WordKind::kTens, v});
    for (const auto& [w, v] : multipliers_) add(w, {WordKind::kMultiplier, v});
    for (const auto& [w, v] : repeaters_) add(w, {WordKind::kRepeater, v});
    for (const auto& [w, v] : months_) add(w, {WordKind::kMonth, v});

    digit_words_.assign(10, "");
    for (const auto& [w, v] : digits_)
      if (v >= 0 && v <= 9 && !ambiguous_zero_.count(w) && digit_words_[static_cast<std::size_t>(v)].empty())
        digit_words_[static_cast<std::size_t>(v)] = w;
    oh_word_ = ambiguous_zero_.count("oh") ? "oh"
               : ambiguous_zero_.empty()   ? digit_words_[0]
                                           : *ambiguous_zero_.begin();
    teen_words_.assign(10, "");
    for (const auto& [w, v] : teens_)
      if (v >= 10 && v <= 19) teen_words_[static_cast<std::size_t>(v - 10)] = w;
    tens_words_.assign(8, "");
    for (const auto& [w, v] : tens_)
      if (v >= 20 && v <= 90 && v % 10 == 0) tens_words_[static_cast<std::size_t>(v / 10 - 2)] = w;
    month_words_.assign(12, "");
    for (const auto& [w, v] : months_)
      if (v >= 1 && v <= 12) month_words_[static_cast<std::size_t>(v - 1)] = w;
    multiplier_words_.clear();
    for (const auto& [w, v] : multipliers_) multiplier_words_[v] = w;
    repeater_words_.clear();
    for (const auto& [w, v] : repeaters_) repeater_words_[v] = w;
  }

  std::map<std::string, int> digits_, teens_, tens_, multipliers_, repeaters_, months_;
  std::set<std::string> ambiguous_zero_;
  std::vector<std::vector<std::string>> markers_;
  std::vector<std::string> fillers_;

  std::unordered_map<std::string, WordInfo> index_;
  std::vector<std::string> digit_words_, teen_words_, tens_words_, month_words_;
  std::string oh_word_;
  std::map<int, std::string> multiplier_words_, repeater_words_;
};

/// Resolves which tokens act as number words. An ambiguous zero counts when a
/// neighbor it is `adjacent` to is numeric, propagated through runs of zeros.
inline std::vector<bool> resolve_numeric(
    std::size_t n, const std::function<WordKind(std::size_t)>& kind_of,
    const std::function<bool(std::size_t, std::size_t)>& adjacent) {
  std::vector<bool> numeric(n, false);
  std::vector<bool> ambiguous(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const WordKind k = kind_of(i);
    ambiguous[i] = k == WordKind::kAmbiguousZero;
    numeric[i] = k != WordKind::kOther && !ambiguous[i];
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!ambiguous[i] || numeric[i]) continue;
      const bool left = i > 0 && numeric[i - 1] && adjacent(i - 1, i);
      const bool right = i + 1 < n && numeric[i + 1] && adjacent(i, i + 1);
      if (left || right) {
        numeric[i] = true;
        changed = true;
      }
    }
  }
  return numeric;
}

inline std::vector<bool> resolve_numeric(const std::vector<std::string>& tokens,
                                         const Lexicon& lx) {
  return resolve_numeric(
      tokens.size(), [&](std::size_t i) { return lx.classify(tokens[i]).kind; },
      [](std::size_t, std::size_t) { return true; });
}

// ---------------------------------------------------------------------------
// Checksums

inline bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

/// Luhn mod-10 over a digit string.
inline bool luhn_check(std::string_view digits) {
  if (!all_digits(digits)) throw FormatError("luhn_check: input must be a non-empty digit string");
  int sum = 0;
  bool twice = false;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    int d = *it - '0';
    if (twice) {
      d *= 2;
      if (d > 9) d -= 9;
    }
    sum += d;
    twice = !twice;
  }
  return sum % 10 == 0;
}

/// ABA routing-number check: 3(d1+d4+d7) + 7(d2+d5+d8) + (d3+d6+d9) = 0 mod 10.
inline bool aba_check(std::string_view digits9) {
  if (digits9.size() != 9 || !all_digits(digits9))
    throw FormatError("aba_check: input must be exactly 9 digits");
  static constexpr int kWeights[3] = {3, 7, 1};
  int sum = 0;
  for (std::size_t i = 0; i < 9; ++i) sum += kWeights[i % 3] * (digits9[i] - '0');
  return sum % 10 == 0;
}

// ---------------------------------------------------------------------------
// Canonical values

struct CanonicalValue {
  EntityType entity_type = EntityType::kOther;
  std::string value;
  bool valid = false;
  std::vector<std::string> alternatives;
  std::vector<std::string> diagnostics;
};

/// Digits of a canonical string ("01/25" -> "0125").
inline std::string digits_of(std::string_view canonical) {
  std::string out;
  for (char c : canonical)
    if (c >= '0' && c <= '9') out.push_back(c);
  return out;
}

struct Canonicalized {
  std::string value;
  bool format_ok = false;
};

/// Maps a raw digit string to the type's canonical layout and checks format.
inline Canonicalized canonicalize(EntityType type, const std::string& d) {
  const auto n = d.size();
  auto in = [&](std::size_t lo, std::size_t hi) { return n >= lo && n <= hi; };
  switch (type) {
    case EntityType::kCcNum: return {d, in(13, 19)};
    case EntityType::kCvv: return {d, in(3, 4)};
    case EntityType::kZip: return {d, n == 5};
    case EntityType::kRouting: return {d, n == 9};
    case EntityType::kBankAcc: return {d, in(3, 17)};
    case EntityType::kOther: return {d, n >= 1};
    case EntityType::kExpDate: {
      std::string mm, yy;
      if (n == 4) {
        mm = d.substr(0, 2), yy = d.substr(2, 2);
      } else if (n == 3) {
        mm = "0" + d.substr(0, 1), yy = d.substr(1, 2);
      } else if (n == 6 && d.compare(2, 2, "20") == 0) {
        mm = d.substr(0, 2), yy = d.substr(4, 2);
      } else if (n == 5 && d.compare(1, 2, "20") == 0) {
        mm = "0" + d.substr(0, 1), yy = d.substr(3, 2);
      } else {
        return {d, false};
      }
      const int month = std::stoi(mm);
      return {mm + "/" + yy, month >= 1 && month <= 12};
    }
  }
  return {d, false};
}

inline bool checksum_ok(EntityType type, const std::string& value) {
  if (type == EntityType::kCcNum) return luhn_check(value);
  if (type == EntityType::kRouting) return aba_check(value);
  return true;
}

/// Outcome of applying correction markers to a token sequence.
struct CorrectionResult {
  std::vector<std::string> tokens;  // markers and retracted groups removed
  std::vector<std::string> diagnostics;
  bool conflict = false;
};

/// A correction marker deletes the number group right before it; the group
/// after it takes its place. Adjacent markers act as one.
inline CorrectionResult resolve_corrections(const std::vector<std::string>& tokens,
                                            const Lexicon& lx = Lexicon::defaults()) {
  const auto numeric = resolve_numeric(tokens, lx);
  CorrectionResult r;
  // Positions in r.tokens where each surviving group starts and ends.
  struct Span { std::size_t begin, end; };
  std::vector<Span> groups;
  bool open_group = false;
  bool pending_marker = false;
  bool marker_run = false;
  std::optional<std::pair<std::size_t, std::vector<std::string>>> retracted;
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (const std::size_t m = numeric[i] ? 0 : lx.match_marker(tokens, i); m > 0) {
      open_group = false;
      if (!marker_run) {
        if (groups.empty()) {
          r.conflict = true;
          r.diagnostics.push_back("correction marker '" + tokens[i] + "' has no preceding number group");
        } else {
          const Span g = groups.back();
          groups.pop_back();
          const auto b = r.tokens.begin() + static_cast<std::ptrdiff_t>(g.begin);
          const auto e = r.tokens.begin() + static_cast<std::ptrdiff_t>(g.end);
          retracted = {g.begin, std::vector<std::string>(b, e)};
          r.tokens.erase(b, e);
        }
        pending_marker = true;
      }
      marker_run = true;
      i += m;
      continue;
    }
    marker_run = false;
    if (numeric[i]) {
      if (!open_group) {
        groups.push_back({r.tokens.size(), r.tokens.size()});
        open_group = true;
      }
      pending_marker = false;
      retracted.reset();
      r.tokens.push_back(tokens[i]);
      groups.back().end = r.tokens.size();
    } else {
      open_group = false;
      r.tokens.push_back(tokens[i]);
    }
    ++i;
  }
  if (pending_marker) {
    // Nothing replaced the retracted group, so keep it as the best guess.
    r.conflict = true;
    r.diagnostics.push_back("correction marker is not followed by a number group");
    if (retracted)
      r.tokens.insert(r.tokens.begin() + static_cast<std::ptrdiff_t>(retracted->first), retracted->second.begin(),
                      retracted->second.end());
  }
  return r;
}

namespace detail {

struct Chunk {
  std::vector<std::string> readings;  // first is the primary parse
};

inline std::string below100_string(int v) { return std::to_string(v); }

/// Parses one contiguous number group into chunks of alternative readings.
inline std::vector<Chunk> parse_group(const std::vector<WordInfo>& g,
                                      std::vector<std::string>& diagnostics) {
  std::vector<Chunk> chunks;
  std::size_t i = 0;
  auto kind = [&](std::size_t k) { return k < g.size() ? g[k].kind : WordKind::kOther; };
  auto is_digit = [&](std::size_t k) {
    return kind(k) == WordKind::kDigit || kind(k) == WordKind::kAmbiguousZero;
  };
  // below100 := teen | tens [digit 1-9] | digit
  auto parse_below100 = [&](std::size_t& k) -> std::optional<int> {
    if (kind(k) == WordKind::kTeen) return g[k++].value;
    if (kind(k) == WordKind::kTens) {
      int v = g[k++].value;
      if (is_digit(k) && g[k].value >= 1) v += g[k++].value;
      return v;
    }
    if (is_digit(k)) return g[k++].value;
    return std::nullopt;
  };

  while (i < g.size()) {
    const WordKind k = kind(i);
    if (k == WordKind::kMonth) {
      const int m = g[i++].value;
      chunks.push_back({{(m < 10 ? "0" : "") + std::to_string(m)}});
      continue;
    }
    if (k == WordKind::kRepeater) {
      const int times = g[i++].value;
      if (is_digit(i)) {
        chunks.push_back({{std::string(static_cast<std::size_t>(times),
                                       static_cast<char>('0' + g[i++].value))}});
      } else {
        diagnostics.push_back("repeater without a following digit ignored");
      }
      continue;
    }
    // Number phrase: [below100] [thousand] [[below100] hundred] [below100]
    std::size_t k2 = i;
    std::optional<int> lead = parse_below100(k2);
    std::vector<std::string> blocks;  // concatenative pieces
    long arithmetic = 0;
    bool has_multiplier = false;
    if (kind(k2) == WordKind::kMultiplier && g[k2].value == 1000) {
      const long v = (lead ? *lead : 1) * 1000L;
      arithmetic += v;
      blocks.push_back(std::to_string(v));
      has_multiplier = true;
      ++k2;
      lead = parse_below100(k2);
    }
    if (kind(k2) == WordKind::kMultiplier && g[k2].value == 100) {
      const long v = (lead ? *lead : 1) * 100L;
      arithmetic += v;
      blocks.push_back(std::to_string(v));
      has_multiplier = true;
      ++k2;
      lead = parse_below100(k2);
    }
    if (kind(k2) == WordKind::kMultiplier) {
      // A multiplier we could not attach ("hundred thousand"); keep it literal.
      const long v = (lead ? *lead : 1) * g[k2].value;
      arithmetic += v;
      blocks.push_back(std::to_string(v));
      has_multiplier = true;
      ++k2;
      lead.reset();
    }
    if (lead) {
      arithmetic += *lead;
      blocks.push_back(below100_string(*lead));
    }
    if (k2 == i) {
      // Unreachable for well-formed groups; skip the token.
      diagnostics.push_back("unparsed number token skipped");
      ++i;
      continue;
    }
    i = k2;
    Chunk c;
    c.readings.push_back(std::to_string(arithmetic));
    if (has_multiplier) {
      std::string concat;
      for (const auto& b : blocks) concat += b;
      if (concat != c.readings.front()) c.readings.push_back(concat);
    }
    chunks.push_back(std::move(c));
  }
  return chunks;
}

}  // namespace detail

inline constexpr std::size_t kMaxReadings = 256;

/// Word sequence to canonical value. Applies corrections, expands repeaters,
/// parses numeral phrases, and ranks ambiguous readings by (format satisfied,
/// fewest digits, parse order).
inline CanonicalValue words_to_digits(const std::vector<std::string>& tokens,
                                      EntityType type,
                                      const Lexicon& lx = Lexicon::defaults()) {
  CanonicalValue out;
  out.entity_type = type;
  CorrectionResult corr = resolve_corrections(tokens, lx);
  out.diagnostics = corr.diagnostics;

  const auto numeric = resolve_numeric(corr.tokens, lx);
  std::vector<std::vector<WordInfo>> groups;
  bool open = false;
  for (std::size_t i = 0; i < corr.tokens.size(); ++i) {
    if (!numeric[i]) {
      open = false;
      continue;
    }
    if (!open) groups.emplace_back();
    open = true;
    groups.back().push_back(lx.classify(corr.tokens[i]));
  }

  std::vector<detail::Chunk> chunks;
  for (const auto& g : groups) {
    auto cs = detail::parse_group(g, out.diagnostics);
    chunks.insert(chunks.end(), cs.begin(), cs.end());
  }
  if (chunks.empty()) throw EmptyValueError("no parseable digits in entity words");

  // Enumerate combinations in parse-priority order (odometer over chunks).
  struct Candidate {
    Canonicalized canon;
    std::size_t digits;
    std::vector<std::size_t> choice;
  };
  std::vector<Candidate> candidates;
  std::vector<std::size_t> choice(chunks.size(), 0);
  while (true) {
    std::string raw;
    for (std::size_t c = 0; c < chunks.size(); ++c) raw += chunks[c].readings[choice[c]];
    candidates.push_back({canonicalize(type, raw), raw.size(), choice});
    if (candidates.size() >= kMaxReadings) break;
    bool exhausted = true;
    for (std::size_t c = chunks.size(); c-- > 0;) {
      if (++choice[c] < chunks[c].readings.size()) {
        exhausted = false;
        break;
      }
      choice[c] = 0;
    }
    if (exhausted) break;
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.canon.format_ok != b.canon.format_ok) return a.canon.format_ok;
    if (a.digits != b.digits) return a.digits < b.digits;
    return a.choice < b.choice;
  });

  out.value = candidates.front().canon.value;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const auto& v = candidates[i].canon.value;
    if (v != out.value && std::find(out.alternatives.begin(), out.alternatives.end(), v) ==
                              out.alternatives.end())
      out.alternatives.push_back(v);
  }
  const bool format_ok = candidates.front().canon.format_ok;
  out.valid = format_ok && !corr.conflict && checksum_ok(type, digits_of(out.value));
  if (!format_ok)
    out.diagnostics.push_back("value does not match the " + std::string(entity_name(type)) + " format");
  return out;
}

// ---------------------------------------------------------------------------
// Verbalizer

enum class Style : std::uint8_t { kPlain, kGrouped, kRepeater, kWithCorrections };

inline constexpr std::array<Style, 4> kAllStyles = {Style::kPlain, Style::kGrouped,
                                                    Style::kRepeater, Style::kWithCorrections};

inline std::string_view style_name(Style s) {
  switch (s) {
    case Style::kPlain: return "plain";
    case Style::kGrouped: return "grouped";
    case Style::kRepeater: return "repeater";
    case Style::kWithCorrections: return "with_corrections";
  }
  return "plain";
}

namespace detail {

using Words = std::vector<std::string>;

inline void append(Words& out, const Words& more) { out.insert(out.end(), more.begin(), more.end()); }

inline Words say_plain(std::string_view d, const Lexicon& lx) {
  Words w;
  for (char c : d) w.push_back(lx.digit_word(c - '0'));
  return w;
}

/// Two-digit chunk. "0d" reads "oh d" only when d is nonzero, so the zero
/// always has a number-word neighbor.
inline Words say_pair(int a, int b, const Lexicon& lx) {
  if (a == 0) {
    if (b == 0) return {lx.digit_word(0), lx.digit_word(0)};
    return {lx.digit_word(0, true), lx.digit_word(b)};
  }
  if (a == 1) return {lx.teen_word(10 + b)};
  Words w{lx.tens_word(10 * a)};
  if (b != 0) w.push_back(lx.digit_word(b));
  return w;
}

/// Pairs, with an odd leading digit spoken alone first ("405" -> four oh five)
/// so a bare tens word is never followed by a lone digit.
inline Words say_grouped(std::string_view d, const Lexicon& lx) {
  Words w;
  std::size_t i = 0;
  if (d.size() % 2 == 1) w.push_back(lx.digit_word(d[i++] - '0'));
  for (; i + 1 < d.size(); i += 2) append(w, say_pair(d[i] - '0', d[i + 1] - '0', lx));
  return w;
}

inline Words say_repeater(std::string_view d, const Lexicon& lx) {
  Words w;
  std::size_t i = 0;
  while (i < d.size()) {
    std::size_t j = i;
    while (j < d.size() && d[j] == d[i]) ++j;
    std::size_t run = j - i;
    const int digit = d[i] - '0';
    while (run > 0) {
      if (run == 1) {
        w.push_back(lx.digit_word(digit));
        run = 0;
      } else {
        const std::size_t take = (run == 3 || run >= 5) ? 3 : 2;
        w.push_back(lx.repeater_word(static_cast<int>(take)));
        w.push_back(lx.digit_word(digit, true));
        run -= take;
      }
    }
    i = j;
  }
  return w;
}

/// Month-year forms for an expiration date given its four digits MMYY.
inline Words say_expdate(std::string_view mmyy, Rng& rng, const Lexicon& lx) {
  const int mm = std::stoi(std::string(mmyy.substr(0, 2)));
  const int yy = std::stoi(std::string(mmyy.substr(2, 2)));
  Words w;
  if (mm >= 1 && mm <= 12 && rng.bernoulli(0.6)) {
    w.push_back(lx.month_word(mm));
  } else {
    append(w, say_pair(mm / 10, mm % 10, lx));
  }
  switch (rng.uniform_int(0, 2)) {
    case 0:  // "twenty twenty five"
      w.push_back(lx.tens_word(20));
      if (yy < 10) {
        append(w, say_pair(0, yy, lx));
      } else {
        append(w, say_pair(yy / 10, yy % 10, lx));
      }
      break;
    case 1:  // "two thousand twenty five"
      w.push_back(lx.digit_word(2));
      w.push_back(lx.multiplier_word(1000));
      if (yy >= 20) {
        append(w, say_pair(yy / 10, yy % 10, lx));
      } else if (yy >= 10) {
        w.push_back(lx.teen_word(yy));
      } else if (yy > 0) {
        w.push_back(lx.digit_word(yy));
      }
      break;
    default:  // bare "twenty five"
      append(w, say_pair(yy / 10, yy % 10, lx));
      break;
  }
  return w;
}

inline Words say_base(std::string_view d, Style style, EntityType type, Rng& rng, const Lexicon& lx) {
  switch (style) {
    case Style::kPlain: return say_plain(d, lx);
    case Style::kRepeater: return say_repeater(d, lx);
    default:
      if (type == EntityType::kExpDate && d.size() == 4) return say_expdate(d, rng, lx);
      return say_grouped(d, lx);
  }
}

}  // namespace detail

/// Spoken-word rendering of a canonical value. For every style,
/// words_to_digits(verbalize(c)) recovers c.value.
inline std::vector<std::string> verbalize(const CanonicalValue& canonical, Style style,
                                          std::uint64_t seed,
                                          const Lexicon& lx = Lexicon::defaults()) {
  using detail::Words;
  Rng rng(seed);
  const std::string d = digits_of(canonical.value);
  if (d.empty()) throw ArgumentError("verbalize: canonical value has no digits");
  const EntityType type = canonical.entity_type;
  if (style != Style::kWithCorrections) return detail::say_base(d, style, type, rng, lx);

  const Style base = rng.bernoulli(0.5) ? Style::kGrouped : Style::kPlain;
  const auto& markers = lx.markers();
  if (markers.empty()) return detail::say_base(d, base, type, rng, lx);
  const auto& marker = rng.pick(markers);
  Words w;

  if (type == EntityType::kExpDate && d.size() == 4) {
    // Wrong month, marker, then the full date restated.
    const int mm = std::stoi(d.substr(0, 2));
    int wrong = static_cast<int>(rng.uniform_int(1, 11));
    if (wrong >= mm) ++wrong;
    w.push_back(lx.month_word(wrong));
    detail::append(w, marker);
    detail::append(w, detail::say_expdate(d, rng, lx));
    return w;
  }

  // Correct prefix, filler, a wrong chunk, marker, then the correct remainder.
  // The filler keeps the correct prefix apart from the wrong chunk. With a
  // two-word marker it would make three non-number words in a row and end the
  // entity, so such markers always retract from the start.
  const bool can_split = marker.size() < 2 && !lx.fillers().empty();
  std::size_t split = 0;
  if (can_split && d.size() > 1 && rng.bernoulli(0.7))
    split = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(d.size()) - 1));
  const std::string remainder = d.substr(split);
  const std::size_t wrong_len = std::min<std::size_t>(remainder.size(), static_cast<std::size_t>(rng.uniform_int(1, 4)));
  std::string wrong;
  do {
    wrong.clear();
    for (std::size_t i = 0; i < wrong_len; ++i) wrong.push_back(static_cast<char>('0' + rng.uniform_int(0, 9)));
  } while (wrong == remainder.substr(0, wrong_len));
  if (split > 0) {
    detail::append(w, detail::say_base(d.substr(0, split), base, type, rng, lx));
    w.push_back(lx.fillers().front());
  }
  detail::append(w, detail::say_plain(wrong, lx));
  detail::append(w, marker);
  detail::append(w, detail::say_base(remainder, base, type, rng, lx));
  return w;
}

/// Convenience for building a canonical value from its string.
inline CanonicalValue make_canonical(EntityType type, std::string value) {
  CanonicalValue c;
  c.entity_type = type;
  c.value = std::move(value);
  const auto canon = canonicalize(type, digits_of(c.value));
  c.valid = canon.format_ok && checksum_ok(type, digits_of(c.value));
  return c;
}

}  // namespace liveredact::norm
