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

#ifndef PHONETRAITS_FEATURE_TABLE_H_
#define PHONETRAITS_FEATURE_TABLE_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phonetraits/features.h"

namespace phonetraits {

// Users x features, complete after imputation. `missing` records which
// entries were imputed.
struct FeatureTable {
  std::vector<std::string> user_ids;
  std::vector<std::string> names;
  Eigen::MatrixXd values;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> missing;

  int ColumnIndex(const std::string& name) const;  // -1 when absent
  FeatureVector Row(int i) const;
};

// Fills missing entries with the per-feature median over the users that have
// the feature; a feature missing for everyone becomes 0.
FeatureTable ImputeMedian(std::span<const RawFeatures> raw,
                          const std::vector<std::string>& names);

// Extracts and imputes every user. `jobs` caps worker threads.
FeatureTable ExtractAll(std::span<const UserRecord> users,
                        const FeatureConfig& config, int jobs = 1);

void WriteFeatureTable(const FeatureTable& table, std::ostream& out);
void WriteFeatureTable(const FeatureTable& table,
                       const std::filesystem::path& path);
// Missingness flags as a 0/1 table with the same layout.
void WriteMissingness(const FeatureTable& table, std::ostream& out);
FeatureTable ReadFeatureTable(std::istream& in);
FeatureTable ReadFeatureTable(const std::filesystem::path& path);

}  // namespace phonetraits

#endif  // PHONETRAITS_FEATURE_TABLE_H_
