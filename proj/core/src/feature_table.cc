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

#include "phonetraits/feature_table.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "phonetraits/linalg.h"
#include "phonetraits/parallel.h"

namespace phonetraits {
namespace {

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

int FeatureTable::ColumnIndex(const std::string& name) const {
  for (std::size_t j = 0; j < names.size(); ++j)
    if (names[j] == name) return static_cast<int>(j);
  return -1;
}

FeatureVector FeatureTable::Row(int i) const {
  FeatureVector v;
  v.user_id = user_ids.at(i);
  for (std::size_t j = 0; j < names.size(); ++j) v.values[names[j]] = values(i, j);
  return v;
}

FeatureTable ImputeMedian(std::span<const RawFeatures> raw,
                          const std::vector<std::string>& names) {
  FeatureTable table;
  table.names = names;
  const auto n = static_cast<Eigen::Index>(raw.size());
  const auto m = static_cast<Eigen::Index>(names.size());
  table.values.setZero(n, m);
  table.missing.setConstant(n, m, true);
  for (Eigen::Index i = 0; i < n; ++i) {
    table.user_ids.push_back(raw[i].user_id);
    for (Eigen::Index j = 0; j < m; ++j) {
      auto it = raw[i].values.find(names[j]);
      if (it != raw[i].values.end() && it->second && std::isfinite(*it->second)) {
        table.values(i, j) = *it->second;
        table.missing(i, j) = false;
      }
    }
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    std::vector<double> present;
    for (Eigen::Index i = 0; i < n; ++i)
      if (!table.missing(i, j)) present.push_back(table.values(i, j));
    const double fill = present.empty() ? 0.0 : Median(present);
    for (Eigen::Index i = 0; i < n; ++i)
      if (table.missing(i, j)) table.values(i, j) = fill;
  }
  return table;
}

FeatureTable ExtractAll(std::span<const UserRecord> users,
                        const FeatureConfig& config, int jobs) {
  std::vector<RawFeatures> raw(users.size());
  ParallelFor(static_cast<int>(users.size()), jobs,
              [&](int i) { raw[i] = ExtractUser(users[i], config); });
  return ImputeMedian(raw, CanonicalFeatureNames(config));
}

void WriteFeatureTable(const FeatureTable& table, std::ostream& out) {
  out << "user_id";
  for (const auto& name : table.names) out << ',' << name;
  out << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
    out << table.user_ids[i];
    for (Eigen::Index j = 0; j < table.values.cols(); ++j) out << ',' << table.values(i, j);
    out << '\n';
  }
}

void WriteFeatureTable(const FeatureTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  WriteFeatureTable(table, out);
}

void WriteMissingness(const FeatureTable& table, std::ostream& out) {
  out << "user_id";
  for (const auto& name : table.names) out << ',' << name;
  out << '\n';
  for (Eigen::Index i = 0; i < table.missing.rows(); ++i) {
    out << table.user_ids[i];
    for (Eigen::Index j = 0; j < table.missing.cols(); ++j)
      out << ',' << (table.missing(i, j) ? 1 : 0);
    out << '\n';
  }
}

FeatureTable ReadFeatureTable(std::istream& in) {
  FeatureTable table;
  std::string line;
  if (!std::getline(in, line)) throw IoError("feature table is empty");
  auto header = SplitCsv(line);
  if (header.empty() || header.front() != "user_id")
    throw IoError("feature table must start with a user_id column");
  table.names.assign(header.begin() + 1, header.end());
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = SplitCsv(line);
    if (fields.size() != header.size())
      throw IoError("feature row for '" + fields.front() + "' has wrong width");
    table.user_ids.push_back(fields.front());
    std::vector<double> row;
    for (std::size_t j = 1; j < fields.size(); ++j) row.push_back(std::stod(fields[j]));
    rows.push_back(std::move(row));
  }
  table.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(table.names.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) table.values(i, j) = rows[i][j];
  table.missing.setConstant(table.values.rows(), table.values.cols(), false);
  return table;
}

FeatureTable ReadFeatureTable(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open feature table " + path.string());
  return ReadFeatureTable(in);
}

}  // namespace phonetraits
