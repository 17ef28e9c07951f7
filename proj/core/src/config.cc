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

#include "phonetraits/config.h"

#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "phonetraits/types.h"

namespace phonetraits {
namespace {

void Flatten(const boost::property_tree::ptree& tree, const std::string& prefix,
             std::map<std::string, std::string>& out) {
  for (const auto& [key, child] : tree) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (child.empty()) {
      out[name] = boost::algorithm::trim_copy(child.data());
    } else {
      Flatten(child, name, out);
    }
  }
}

std::vector<std::string> SplitList(const std::string& value) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, value, boost::algorithm::is_any_of(","));
  std::vector<std::string> out;
  for (auto& p : parts) {
    boost::algorithm::trim(p);
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

template <typename T, typename Convert>
T Converted(const KeyValueConfig& cfg, const std::string& key, T fallback, Convert convert) {
  const auto value = cfg.Get(key);
  if (!value) return fallback;
  try {
    return convert(*value);
  } catch (const std::exception&) {
    throw InvalidArgument("config key " + key + " has an invalid value: " + *value);
  }
}

}  // namespace

KeyValueConfig KeyValueConfig::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

KeyValueConfig KeyValueConfig::Parse(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw IoError(std::string("config parse error: ") + e.what());
  }
  KeyValueConfig cfg;
  Flatten(tree, "", cfg.entries_);
  return cfg;
}

bool KeyValueConfig::Has(const std::string& key) const { return entries_.contains(key); }

std::optional<std::string> KeyValueConfig::Get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::GetString(const std::string& key, const std::string& fallback) const {
  return Get(key).value_or(fallback);
}

double KeyValueConfig::GetDouble(const std::string& key, double fallback) const {
  return Converted(*this, key, fallback, [](const std::string& v) {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  });
}

long long KeyValueConfig::GetInt(const std::string& key, long long fallback) const {
  return Converted(*this, key, fallback, [](const std::string& v) {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  });
}

bool KeyValueConfig::GetBool(const std::string& key, bool fallback) const {
  return Converted(*this, key, fallback, [](const std::string& v) {
    const std::string s = boost::algorithm::to_lower_copy(v);
    if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
    if (s == "0" || s == "false" || s == "no" || s == "off") return false;
    throw std::invalid_argument(v);
  });
}

std::vector<double> KeyValueConfig::GetDoubleList(const std::string& key,
                                                  const std::vector<double>& fallback) const {
  return Converted(*this, key, fallback, [](const std::string& v) {
    std::vector<double> out;
    for (const auto& p : SplitList(v)) out.push_back(std::stod(p));
    return out;
  });
}

std::vector<int> KeyValueConfig::GetIntList(const std::string& key,
                                            const std::vector<int>& fallback) const {
  return Converted(*this, key, fallback, [](const std::string& v) {
    std::vector<int> out;
    for (const auto& p : SplitList(v)) out.push_back(std::stoi(p));
    return out;
  });
}

std::vector<std::string> KeyValueConfig::GetStringList(
    const std::string& key, const std::vector<std::string>& fallback) const {
  const auto value = Get(key);
  return value ? SplitList(*value) : fallback;
}

void KeyValueConfig::Set(const std::string& key, const std::string& value) {
  entries_[key] = value;
}

}  // namespace phonetraits
