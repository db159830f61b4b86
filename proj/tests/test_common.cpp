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

#include <set>

#include "liveredact/common.hpp"
#include "liveredact/rng.hpp"

namespace liveredact {
namespace {

TEST(EntityType, NamesRoundTripInDeclarationOrder) {
  const char* expected[] = {"ROUTING", "BANKACC", "CCNUM", "CVV", "EXPDATE", "ZIP", "OTHER"};
  for (int i = 0; i < kNumEntityTypes; ++i) {
    const EntityType t = kAllEntityTypes[static_cast<std::size_t>(i)];
    EXPECT_EQ(index_of(t), i);
    EXPECT_EQ(entity_name(t), expected[i]);
    EXPECT_EQ(parse_entity(expected[i]), t);
  }
  EXPECT_FALSE(parse_entity("SSN").has_value());
}

TEST(EntitySet, DefaultSensitiveSetIsCardAndBankData) {
  const EntitySet s = default_sensitive_set();
  EXPECT_TRUE(s.contains(EntityType::kCcNum));
  EXPECT_TRUE(s.contains(EntityType::kCvv));
  EXPECT_TRUE(s.contains(EntityType::kBankAcc));
  EXPECT_TRUE(s.contains(EntityType::kRouting));
  EXPECT_FALSE(s.contains(EntityType::kExpDate));
  EXPECT_FALSE(s.contains(EntityType::kZip));
  EXPECT_FALSE(s.contains(EntityType::kOther));
}

TEST(Channel, IndexConvention) {
  EXPECT_EQ(index_of(Channel::kAgent), 0);
  EXPECT_EQ(index_of(Channel::kCaller), 1);
  EXPECT_EQ(channel_from_index(1), Channel::kCaller);
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, UniformIntIsInclusiveAndCoversRange) {
  Rng r(3);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = r.uniform_int(-2, 2);
    ASSERT_GE(v, -2);
    ASSERT_LE(v, 2);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 5u);
}

TEST(Rng, WeightedNeverPicksZeroWeight) {
  Rng r(9);
  const std::vector<double> w = {0.0, 1.0, 0.0, 3.0};
  int counts[4] = {};
  for (int i = 0; i < 4000; ++i) ++counts[r.weighted(w)];
  EXPECT_EQ(counts[0], 0);
  EXPECT_EQ(counts[2], 0);
  EXPECT_NEAR(counts[3] / 4000.0, 0.75, 0.03);
}

TEST(Rng, MixSeedSeparatesStreams) {
  EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
  EXPECT_NE(mix_seed(1, 0), mix_seed(2, 0));
  EXPECT_EQ(mix_seed(7, 3), mix_seed(7, 3));
}

}  // namespace
}  // namespace liveredact
