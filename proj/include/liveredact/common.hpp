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

#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace liveredact {

using Millis = std::int64_t;

enum class Channel : std::uint8_t { kAgent = 0, kCaller = 1 };

inline constexpr int kNumChannels = 2;

inline constexpr int index_of(Channel c) { return static_cast<int>(c); }

inline constexpr Channel channel_from_index(int i) {
  return i == 0 ? Channel::kAgent : Channel::kCaller;
}

inline std::string_view channel_name(Channel c) {
  return c == Channel::kAgent ? "agent" : "caller";
}

// Declaration order is the tie-break order for every argmax in the library.
enum class EntityType : std::uint8_t {
  kRouting = 0,
  kBankAcc,
  kCcNum,
  kCvv,
  kExpDate,
  kZip,
  kOther,
};

inline constexpr int kNumEntityTypes = 7;

inline constexpr std::array<EntityType, kNumEntityTypes> kAllEntityTypes = {
    EntityType::kRouting, EntityType::kBankAcc, EntityType::kCcNum,
    EntityType::kCvv,     EntityType::kExpDate, EntityType::kZip,
    EntityType::kOther};

inline constexpr int index_of(EntityType t) { return static_cast<int>(t); }

inline std::string_view entity_name(EntityType t) {
  switch (t) {
    case EntityType::kRouting: return "ROUTING";
    case EntityType::kBankAcc: return "BANKACC";
    case EntityType::kCcNum: return "CCNUM";
    case EntityType::kCvv: return "CVV";
    case EntityType::kExpDate: return "EXPDATE";
    case EntityType::kZip: return "ZIP";
    case EntityType::kOther: return "OTHER";
  }
  return "OTHER";
}

inline std::optional<EntityType> parse_entity(std::string_view name) {
  for (EntityType t : kAllEntityTypes) {
    if (entity_name(t) == name) return t;
  }
  return std::nullopt;
}

/// Small fixed-size set of entity types, used for the sensitive set and the
/// dialog-state "already captured" bits.
class EntitySet {
 public:
  constexpr EntitySet() = default;
  constexpr EntitySet(std::initializer_list<EntityType> types) {
    for (EntityType t : types) insert(t);
  }

  constexpr void insert(EntityType t) { bits_ |= bit(t); }
  constexpr bool contains(EntityType t) const { return (bits_ & bit(t)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint32_t bits() const { return bits_; }

  friend constexpr bool operator==(EntitySet, EntitySet) = default;

 private:
  static constexpr std::uint32_t bit(EntityType t) {
    return 1u << static_cast<unsigned>(t);
  }
  std::uint32_t bits_ = 0;
};

inline EntitySet default_sensitive_set() {
  return {EntityType::kCcNum, EntityType::kCvv, EntityType::kBankAcc,
          EntityType::kRouting};
}

// Error taxonomy. Every error the library raises derives from Error.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or value.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that names a rate, codec or layout we do not handle.
class UnsupportedFormatError : public FormatError {
 public:
  UnsupportedFormatError(std::string field, const std::string& what)
      : FormatError(what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class ScriptFormatError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// A decoder broke the partial-hypothesis contract (stable prefix changed).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

/// Normalization found nothing that reads as a digit.
class EmptyValueError : public Error {
 public:
  using Error::Error;
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace liveredact
