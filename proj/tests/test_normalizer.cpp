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

#include <algorithm>

#include "liveredact/generator.hpp"
#include "liveredact/normalizer.hpp"
#include "test_support.hpp"

namespace liveredact::norm {
namespace {

using testing::split;

// Doubling oracle written out longhand: walk from the left, double the
// digits whose distance from the right end is odd.
bool luhn_oracle(const std::string& d) {
  int total = 0;
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) {
    int v = d[i] - '0';
    if ((n - 1 - i) % 2 == 1) {
      v = v * 2;
      v = v / 10 + v % 10;
    }
    total += v;
  }
  return total % 10 == 0;
}

TEST(WordsToDigits, MonthCorrectionCase) {
  const auto c = words_to_digits(split("february no no january twenty twenty five"), EntityType::kExpDate);
  EXPECT_EQ(c.value, "01/25");
  EXPECT_TRUE(c.valid);
}

TEST(WordsToDigits, DoubleOhSeven) {
  const auto c = words_to_digits(split("double oh seven"), EntityType::kBankAcc);
  EXPECT_EQ(c.value, "007");
}

TEST(WordsToDigits, HundredPrefersArithmeticReading) {
  const auto c = words_to_digits(split("one hundred twenty"), EntityType::kBankAcc);
  EXPECT_EQ(c.value, "120");
  EXPECT_EQ(c.alternatives, (std::vector<std::string>{"10020"}));
}

TEST(WordsToDigits, RepeatedFourTwo) {
  std::string s;
  for (int i = 0; i < 8; ++i) s += "four two ";
  const auto c = words_to_digits(split(s), EntityType::kCcNum);
  EXPECT_EQ(c.value, "4242424242424242");
  EXPECT_TRUE(c.valid);
}

TEST(WordsToDigits, ConcatenativeReadingWhenArithmeticBreaksFormat) {
  // Nine digits are needed: 1234 + 120 has seven, 1234 + 10020 has nine.
  const auto c = words_to_digits(split("one two three four one hundred twenty"), EntityType::kRouting);
  EXPECT_EQ(c.value, "123410020");
  EXPECT_NE(std::find(c.alternatives.begin(), c.alternatives.end(), "1234120"), c.alternatives.end());
}

TEST(WordsToDigits, ExpirationYearForms) {
  for (const char* s : {"march twenty twenty five", "march two thousand twenty five", "march twenty five",
                        "oh three twenty five"})
    EXPECT_EQ(words_to_digits(split(s), EntityType::kExpDate).value, "03/25") << s;
}

TEST(WordsToDigits, NoDigitsThrowsEmptyValue) {
  EXPECT_THROW(words_to_digits(split("thank you very much"), EntityType::kCvv), EmptyValueError);
  EXPECT_THROW(words_to_digits({}, EntityType::kCvv), EmptyValueError);
}

TEST(WordsToDigits, DanglingMarkerIsInvalidWithDiagnostic) {
  const auto c = words_to_digits(split("one two three sorry"), EntityType::kCvv);
  EXPECT_EQ(c.value, "123");
  EXPECT_FALSE(c.valid);
  EXPECT_FALSE(c.diagnostics.empty());
}

TEST(WordsToDigits, FormatAndChecksumDriveValidity) {
  EXPECT_FALSE(words_to_digits(split("one two"), EntityType::kZip).valid);
  std::string bad;
  for (int i = 0; i < 7; ++i) bad += "four two ";
  bad += "four three";
  EXPECT_FALSE(words_to_digits(split(bad), EntityType::kCcNum).valid);
  EXPECT_TRUE(words_to_digits(split("zero one one zero zero zero zero one five"), EntityType::kRouting).valid);
}

TEST(WordsToDigits, AlternativesNeverRepeatValue) {
  for (const char* s : {"one hundred twenty", "two thousand five", "twenty five", "ninety nine hundred"}) {
    const auto c = words_to_digits(split(s), EntityType::kBankAcc);
    EXPECT_EQ(std::count(c.alternatives.begin(), c.alternatives.end(), c.value), 0) << s;
  }
}

TEST(Corrections, MarkerReplacesPrecedingGroupOnly) {
  const auto r = resolve_corrections(split("four one uh seven seven i mean two two"));
  EXPECT_EQ(r.tokens, split("four one uh two two"));
  EXPECT_FALSE(r.conflict);
}

TEST(Corrections, ResolutionIsIdempotent) {
  for (const char* s : {"february no no january twenty twenty five", "one two sorry three four wait five",
                        "four four uh nine i mean one one", "no no one"}) {
    const auto once = resolve_corrections(split(s));
    EXPECT_EQ(resolve_corrections(once.tokens).tokens, once.tokens) << s;
  }
}

TEST(AmbiguousZero, OhNeedsANumberNeighbour) {
  const Lexicon& lx = Lexicon::defaults();
  EXPECT_EQ(resolve_numeric(split("oh okay"), lx), (std::vector<bool>{false, false}));
  EXPECT_EQ(resolve_numeric(split("oh seven"), lx), (std::vector<bool>{true, true}));
  EXPECT_EQ(resolve_numeric(split("double oh oh"), lx), (std::vector<bool>{true, true, true}));
}

TEST(AmbiguousZero, AdjacencyWindowUsesTiming) {
  const Lexicon& lx = Lexicon::defaults();
  const std::vector<Millis> start = {0, 2000}, end = {300, 2300};
  auto kind = [&](std::size_t i) { return lx.classify(i == 0 ? "oh" : "seven").kind; };
  auto near = [&](std::size_t a, std::size_t b) { return start[b] - end[a] < 1000; };
  EXPECT_EQ(resolve_numeric(2, kind, near), (std::vector<bool>{false, true}));
}

TEST(Luhn, Examples) {
  EXPECT_TRUE(luhn_check("4242424242424242"));
  EXPECT_FALSE(luhn_check("4242424242424243"));
  EXPECT_TRUE(luhn_check("0"));
  EXPECT_THROW(luhn_check("42a2"), FormatError);
}

TEST(Luhn, AgreesWithDoublingOracle) {
  Rng rng(17);
  for (int i = 0; i < 2000; ++i) {
    const auto d = harness::random_digits(rng, static_cast<std::size_t>(rng.uniform_int(1, 19)));
    ASSERT_EQ(luhn_check(d), luhn_oracle(d)) << d;
  }
}

TEST(Aba, Examples) {
  EXPECT_TRUE(aba_check("011000015"));
  EXPECT_TRUE(aba_check("000000000"));
  EXPECT_FALSE(aba_check("000000001"));
  EXPECT_THROW(aba_check("01100001"), FormatError);
}

TEST(Verbalize, PlainIsDigitByDigit) {
  EXPECT_EQ(verbalize(make_canonical(EntityType::kBankAcc, "007"), Style::kPlain, 1),
            split("zero zero seven"));
}

TEST(Verbalize, RepeaterCanSayDoubleOh) {
  EXPECT_EQ(verbalize(make_canonical(EntityType::kBankAcc, "007"), Style::kRepeater, 1),
            split("double oh seven"));
}

TEST(Verbalize, ExpDateCorrectionShape) {
  bool saw_marker = false;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto w = verbalize(make_canonical(EntityType::kExpDate, "01/25"), Style::kWithCorrections, seed);
    EXPECT_NE(w.front(), "january") << seed;
    EXPECT_EQ(words_to_digits(w, EntityType::kExpDate).value, "01/25");
    for (const auto& m : Lexicon::defaults().markers())
      saw_marker |= std::search(w.begin(), w.end(), m.begin(), m.end()) != w.end();
  }
  EXPECT_TRUE(saw_marker);
}

TEST(Verbalize, RoundTripsEveryStyleAndType) {
  Rng rng(99);
  for (EntityType t : kAllEntityTypes) {
    if (t == EntityType::kOther) continue;
    for (Style s : kAllStyles) {
      for (int i = 0; i < 300; ++i) {
        const auto v = harness::random_value(t, rng, 0.98);
        const auto words = verbalize(make_canonical(t, v), s, rng.next());
        ASSERT_EQ(words_to_digits(words, t).value, v) << entity_name(t) << " " << style_name(s);
      }
    }
  }
}

TEST(Verbalize, NeverThreeNonNumberWordsInARow) {
  // The end-of-entity rule closes after three; a spoken value must not.
  const Lexicon& lx = Lexicon::defaults();
  Rng rng(5);
  for (int i = 0; i < 3000; ++i) {
    const EntityType t = kAllEntityTypes[static_cast<std::size_t>(rng.uniform_int(0, 5))];
    const auto words = verbalize(make_canonical(t, harness::random_value(t, rng, 1.0)), Style::kWithCorrections,
                                 rng.next());
    const auto numeric = resolve_numeric(words, lx);
    int run = 0;
    for (bool n : numeric) {
      run = n ? 0 : run + 1;
      ASSERT_LT(run, 3);
    }
  }
}

TEST(Lexicon, JsonRoundTripAndOverride) {
  const auto j = Lexicon::defaults().to_json();
  const auto back = Lexicon::from_json(j);
  EXPECT_EQ(back.to_json(), j);
  auto custom = j;
  custom["correction_markers"] = {{"oops"}};
  const auto lx = Lexicon::from_json(custom);
  EXPECT_EQ(words_to_digits(split("one two oops three four five"), EntityType::kCvv, lx).value, "345");
}

}  // namespace
}  // namespace liveredact::norm
