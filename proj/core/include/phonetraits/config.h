// Copyright 2026 The Phonetraits Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PHONETRAITS_CONFIG_H_
#define PHONETRAITS_CONFIG_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace phonetraits {

// Sectioned key-value configuration (INI syntax). Keys are addressed as
// "section.key"; keys before any section header live in the root.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig Load(const std::filesystem::path& path);
  static KeyValueConfig Parse(const std::string& text);

  bool Has(const std::string& key) const;
  std::optional<std::string> Get(const std::string& key) const;
  std::string GetString(const std::string& key, const std::string& fallback) const;
  double GetDouble(const std::string& key, double fallback) const;
  long long GetInt(const std::string& key, long long fallback) const;
  bool GetBool(const std::string& key, bool fallback) const;
  std::vector<double> GetDoubleList(const std::string& key,
                                    const std::vector<double>& fallback) const;
  std::vector<int> GetIntList(const std::string& key,
                              const std::vector<int>& fallback) const;
  std::vector<std::string> GetStringList(
      const std::string& key, const std::vector<std::string>& fallback) const;

  void Set(const std::string& key, const std::string& value);
  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace phonetraits

#endif  // PHONETRAITS_CONFIG_H_
