// core/include/trajloc/pipeline/ini.hpp

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

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace trajloc {

// Plain-text key/value config with [section] headers, '#'/';' comments and
// 'key = value' lines.  Lookups are by (section, key); missing required
// keys and unknown keys raise ConfigError naming the key.
class IniConfig {
 public:
  static IniConfig parse_file(const std::string& path);
  static IniConfig parse_string(const std::string& text,
                                const std::string& origin = "<string>");

  bool has(const std::string& section, const std::string& key) const;

  std::string get_str(const std::string& section, const std::string& key) const;
  std::string get_str(const std::string& section, const std::string& key,
                      const std::string& fallback) const;
  double get_f64(const std::string& section, const std::string& key) const;
  double get_f64(const std::string& section, const std::string& key,
                 double fallback) const;
  std::int64_t get_i64(const std::string& section, const std::string& key) const;
  std::int64_t get_i64(const std::string& section, const std::string& key,
                       std::int64_t fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;

  // Rejects any (section, key) not present in `schema`; the error names the
  // offending entry.
  void require_known(
      const std::map<std::string, std::set<std::string>>& schema) const;

  const std::map<std::string, std::map<std::string, std::string>>& sections()
      const {
    return sections_;
  }

  // The raw text as parsed (for config snapshots).
  const std::string& text() const { return text_; }

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::string text_;
  std::string origin_;
};

}  // namespace trajloc
