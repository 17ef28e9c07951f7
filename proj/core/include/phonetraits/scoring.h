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

#ifndef PHONETRAITS_SCORING_H_
#define PHONETRAITS_SCORING_H_

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phonetraits/types.h"

namespace phonetraits {

using WeightMatrix = Eigen::Matrix<double, kNumTraits, kNumQuestions>;

/// Signed questionnaire key. Reverse-coded items are scored as 6 - answer
/// before weighting; with `mean_normalize` each trait is divided by the sum
/// of absolute weights in its row.
struct ScoringKey {
  WeightMatrix weights = WeightMatrix::Zero();
  std::array<std::string, kNumTraits> trait_names = {"O", "C", "E", "A", "N"};
  std::array<int, kNumQuestions> question_trait{};
  std::array<bool, kNumQuestions> reverse_coded{};
  bool mean_normalize = true;

  // Throws InvalidArgument when an invariant does not hold.
  void Validate() const;
  int TraitIndex(const std::string& name) const;  // -1 when unknown
};

/// Standard published BFI-44 key (E 8, A 9, C 9, N 8, O 10 items).
ScoringKey DefaultBfi44Key();

// Key file: CSV with header question_index,trait,weight,reverse_coded and
// one-based question indices.
ScoringKey ReadScoringKey(std::istream& in);
ScoringKey ReadScoringKey(const std::filesystem::path& path);
void WriteScoringKey(const ScoringKey& key, std::ostream& out);

struct TraitScores {
  std::string user_id;
  std::array<double, kNumTraits> scores{};
};

// Throws InvalidArgument unless answers has 44 entries in [1, 5].
TraitScores ScoreTraits(std::string user_id, std::span<const int> answers,
                        const ScoringKey& key);
// Real-valued variant without range checks (used for linearity checks).
Eigen::Matrix<double, kNumTraits, 1> ScoreVector(
    const Eigen::Matrix<double, kNumQuestions, 1>& answers,
    const ScoringKey& key);

/// Cut points of a tertile split. Values <= lower get 0, values <= upper get
/// 1, the rest 2. A degenerate split labels everything 1.
struct TertileCuts {
  double lower = 0.0;
  double upper = 0.0;
  bool degenerate = false;

  int Label(double value) const;
};

TertileCuts FitTertiles(std::span<const double> values);
std::vector<int> TertileLabels(std::span<const double> values);

}  // namespace phonetraits

#endif  // PHONETRAITS_SCORING_H_
