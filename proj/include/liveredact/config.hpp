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

// Flat "namespace.key = value" configuration files with command-line
// overrides layered on top.

#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "liveredact/common.hpp"

namespace liveredact {

class ConfigMap {
 public:
  ConfigMap() = default;

  /// Lines are `key = value`; `#` starts a comment; blank lines are skipped.
  static ConfigMap parse(std::string_view text, const std::string& origin = "<config>") {
    ConfigMap m;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t nl = text.find('\n', pos);
      std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos)
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
      const std::string key(trim(line.substr(0, eq)));
      if (key.empty() || key.find('.') == std::string::npos)
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": key '" + key +
                          "' needs a dotted namespace");
      m.values_[key] = std::string(trim(line.substr(eq + 1)));
    }
    return m;
  }

  static ConfigMap load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
  }

  /// `key=value` from the command line; replaces any file value.
  void set_override(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw ConfigError("override '" + std::string(assignment) + "' lacks '='");
    values_[std::string(trim(assignment.substr(0, eq)))] = std::string(trim(assignment.substr(eq + 1)));
  }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  /// Keys under `ns.` that are not in `known`.
  std::vector<std::string> unknown_in(std::string_view ns, const std::set<std::string>& known) const {
    std::vector<std::string> out;
    const std::string prefix = std::string(ns) + ".";
    for (const auto& [k, v] : values_)
      if (k.rfind(prefix, 0) == 0 && !known.count(k)) out.push_back(k);
    return out;
  }

  template <typename T>
  void get(const std::string& key, T& dst) const {
    auto it = values_.find(key);
    if (it == values_.end()) return;
    dst = convert<T>(key, it->second);
  }

  template <typename T>
  static T convert(const std::string& key, const std::string& raw) {
    if constexpr (std::is_same_v<T, std::string>) {
      return raw;
    } else if constexpr (std::is_same_v<T, bool>) {
      if (raw == "true" || raw == "1" || raw == "yes" || raw == "on") return true;
      if (raw == "false" || raw == "0" || raw == "no" || raw == "off") return false;
      throw ConfigError("config key " + key + ": '" + raw + "' is not a boolean");
    } else if constexpr (std::is_floating_point_v<T>) {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(raw, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != raw.size() || raw.empty())
        throw ConfigError("config key " + key + ": '" + raw + "' is not a number");
      return static_cast<T>(v);
    } else {
      T v{};
      auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
      if (ec != std::errc() || p != raw.data() + raw.size())
        throw ConfigError("config key " + key + ": '" + raw + "' is not an integer");
      return v;
    }
  }

  static std::vector<std::string> split_list(const std::string& raw) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : raw + ",") {
      if (c == ',') {
        auto t = trim(cur);
        if (!t.empty()) out.emplace_back(t);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    return out;
  }

  static std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
  }

 private:
  std::map<std::string, std::string> values_;
};

inline EntitySet parse_entity_set(const std::string& key, const std::string& raw) {
  EntitySet set;
  for (const auto& name : ConfigMap::split_list(raw)) {
    auto t = parse_entity(name);
    if (!t) throw ConfigError("config key " + key + ": unknown entity type '" + name + "'");
    set.insert(*t);
  }
  return set;
}

inline std::string entity_set_string(EntitySet s) {
  std::string out;
  for (EntityType t : kAllEntityTypes)
    if (s.contains(t)) out += (out.empty() ? "" : ",") + std::string(entity_name(t));
  return out;
}

}  // namespace liveredact
