// core/src/ini.cpp

// Copyright 2026  The trajloc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "trajloc/pipeline/ini.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "trajloc/errors.hpp"

namespace trajloc {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
    ++b;
  }
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
    --e;
  }
  return s.substr(b, e - b);
}

}  // namespace

IniConfig IniConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

IniConfig IniConfig::parse_string(const std::string& text,
                                  const std::string& origin) {
  IniConfig cfg;
  cfg.text_ = text;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') {
      continue;
    }
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3) {
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": malformed section header '" + t + "'");
      }
      section = trim(t.substr(1, t.size() - 2));
      cfg.sections_.try_emplace(section);
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected 'key = value', got '" + t + "'");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    }
    if (section.empty()) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": key '" +
                        key + "' outside any [section]");
    }
    auto [it, inserted] = cfg.sections_[section].emplace(key, value);
    if (!inserted) {
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": duplicate key '" + section + "." + key + "'");
    }
  }
  return cfg;
}

bool IniConfig::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.contains(key);
}

std::string IniConfig::get_str(const std::string& section,
                               const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end() || !s->second.contains(key)) {
    throw ConfigError("config missing key '" + section + "." + key + "'");
  }
  return s->second.at(key);
}

std::string IniConfig::get_str(const std::string& section,
                               const std::string& key,
                               const std::string& fallback) const {
  return has(section, key) ? get_str(section, key) : fallback;
}

double IniConfig::get_f64(const std::string& section,
                          const std::string& key) const {
  const std::string v = get_str(section, key);
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) {
      throw std::invalid_argument(v);
    }
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + section + "." + key +
                      "' is not a number: '" + v + "'");
  }
}

double IniConfig::get_f64(const std::string& section, const std::string& key,
                          double fallback) const {
  return has(section, key) ? get_f64(section, key) : fallback;
}

std::int64_t IniConfig::get_i64(const std::string& section,
                                const std::string& key) const {
  const std::string v = get_str(section, key);
  try {
    std::size_t used = 0;
    const std::int64_t x = std::stoll(v, &used);
    if (used != v.size()) {
      throw std::invalid_argument(v);
    }
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + section + "." + key +
                      "' is not an integer: '" + v + "'");
  }
}

std::int64_t IniConfig::get_i64(const std::string& section,
                                const std::string& key,
                                std::int64_t fallback) const {
  return has(section, key) ? get_i64(section, key) : fallback;
}

std::uint64_t IniConfig::get_u64(const std::string& section,
                                 const std::string& key) const {
  const std::string v = get_str(section, key);
  try {
    std::size_t used = 0;
    const std::uint64_t x = std::stoull(v, &used);
    if (used != v.size()) {
      throw std::invalid_argument(v);
    }
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + section + "." + key +
                      "' is not an unsigned integer: '" + v + "'");
  }
}

std::uint64_t IniConfig::get_u64(const std::string& section,
                                 const std::string& key,
                                 std::uint64_t fallback) const {
  return has(section, key) ? get_u64(section, key) : fallback;
}

bool IniConfig::get_bool(const std::string& section, const std::string& key,
                         bool fallback) const {
  if (!has(section, key)) {
    return fallback;
  }
  const std::string v = get_str(section, key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") {
    return true;
  }
  if (v == "false" || v == "0" || v == "no" || v == "off") {
    return false;
  }
  throw ConfigError("config key '" + section + "." + key +
                    "' is not a boolean: '" + v + "'");
}

void IniConfig::require_known(
    const std::map<std::string, std::set<std::string>>& schema) const {
  for (const auto& [section, keys] : sections_) {
    auto s = schema.find(section);
    if (s == schema.end()) {
      throw ConfigError("unknown config section '[" + section + "]'");
    }
    for (const auto& [key, value] : keys) {
      if (!s->second.contains(key)) {
        throw ConfigError("unknown config key '" + section + "." + key + "'");
      }
    }
  }
}

}  // namespace trajloc
