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

#include "phonetraits/scoring.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace phonetraits {
namespace {

struct KeyItem {
  int question;  // one-based
  bool reverse;
};

// Published BFI-44 scoring key; "R" items are reverse-scored.
const std::array<std::vector<KeyItem>, kNumTraits>& Bfi44Items() {
  static const std::array<std::vector<KeyItem>, kNumTraits> kItems = {{
      // O
      {{5, false}, {10, false}, {15, false}, {20, false}, {25, false},
       {30, false}, {35, true}, {40, false}, {41, true}, {44, false}},
      // C
      {{3, false}, {8, true}, {13, false}, {18, true}, {23, true},
       {28, false}, {33, false}, {38, false}, {43, true}},
      // E
      {{1, false}, {6, true}, {11, false}, {16, false}, {21, true},
       {26, false}, {31, true}, {36, false}},
      // A
      {{2, true}, {7, false}, {12, true}, {17, false}, {22, false},
       {27, true}, {32, false}, {37, true}, {42, false}},
      // N
      {{4, false}, {9, true}, {14, false}, {19, false}, {24, true},
       {29, false}, {34, true}, {39, false}},
  }};
  return kItems;
}

std::string Trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

void ScoringKey::Validate() const {
  for (int q = 0; q < kNumQuestions; ++q) {
    const int t = question_trait[q];
    if (t < 0 || t >= kNumTraits)
      throw InvalidArgument("question " + std::to_string(q + 1) + " has no trait");
    for (int other = 0; other < kNumTraits; ++other)
      if (other != t && weights(other, q) != 0.0)
        throw InvalidArgument("question " + std::to_string(q + 1) +
                              " is weighted under two traits");
  }
  for (int t = 0; t < kNumTraits; ++t)
    if (weights.row(t).cwiseAbs().maxCoeff() == 0.0)
      throw InvalidArgument("trait " + trait_names[t] + " has no weighted item");
}

int ScoringKey::TraitIndex(const std::string& name) const {
  for (int t = 0; t < kNumTraits; ++t)
    if (trait_names[t] == name) return t;
  return -1;
}

ScoringKey DefaultBfi44Key() {
  ScoringKey key;
  key.question_trait.fill(-1);
  const auto& items = Bfi44Items();
  for (int t = 0; t < kNumTraits; ++t) {
    for (const KeyItem& item : items[t]) {
      key.weights(t, item.question - 1) = 1.0;
      key.question_trait[item.question - 1] = t;
      key.reverse_coded[item.question - 1] = item.reverse;
    }
  }
  key.Validate();
  return key;
}

ScoringKey ReadScoringKey(std::istream& in) {
  ScoringKey key;
  key.question_trait.fill(-1);
  std::string line;
  if (!std::getline(in, line)) throw IoError("key file is empty");
  int trait_count = 0;
  std::array<bool, kNumQuestions> seen{};
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    std::stringstream ss(line);
    std::string q, trait, weight, reverse;
    if (!std::getline(ss, q, ',') || !std::getline(ss, trait, ',') ||
        !std::getline(ss, weight, ',') || !std::getline(ss, reverse))
      throw IoError("key row has fewer than four columns: " + line);
    const int question = std::stoi(q) - 1;
    if (question < 0 || question >= kNumQuestions)
      throw IoError("question index out of range: " + q);
    if (seen[question]) throw IoError("question listed twice: " + q);
    seen[question] = true;
    trait = Trim(trait);
    int t = key.TraitIndex(trait);
    if (t < 0) {
      if (trait_count >= kNumTraits) throw IoError("more than five traits in key");
      // Custom trait labels replace the defaults in order of appearance.
      t = trait_count;
      key.trait_names[t] = trait;
    }
    trait_count = std::max(trait_count, t + 1);
    key.question_trait[question] = t;
    key.weights(t, question) = std::stod(weight);
    reverse = Trim(reverse);
    key.reverse_coded[question] = reverse == "1" || reverse == "true";
  }
  key.Validate();
  return key;
}

ScoringKey ReadScoringKey(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open key file " + path.string());
  return ReadScoringKey(in);
}

void WriteScoringKey(const ScoringKey& key, std::ostream& out) {
  out << "question_index,trait,weight,reverse_coded\n";
  for (int q = 0; q < kNumQuestions; ++q) {
    const int t = key.question_trait[q];
    out << q + 1 << ',' << key.trait_names[t] << ',' << key.weights(t, q) << ','
        << (key.reverse_coded[q] ? 1 : 0) << '\n';
  }
}

Eigen::Matrix<double, kNumTraits, 1> ScoreVector(
    const Eigen::Matrix<double, kNumQuestions, 1>& answers,
    const ScoringKey& key) {
  Eigen::Matrix<double, kNumQuestions, 1> coded = answers;
  for (int q = 0; q < kNumQuestions; ++q)
    if (key.reverse_coded[q]) coded(q) = 6.0 - coded(q);
  Eigen::Matrix<double, kNumTraits, 1> scores = key.weights * coded;
  if (key.mean_normalize) {
    for (int t = 0; t < kNumTraits; ++t) scores(t) /= key.weights.row(t).cwiseAbs().sum();
  }
  return scores;
}

TraitScores ScoreTraits(std::string user_id, std::span<const int> answers,
                        const ScoringKey& key) {
  if (answers.size() != static_cast<std::size_t>(kNumQuestions))
    throw InvalidArgument("expected 44 answers, got " + std::to_string(answers.size()));
  Eigen::Matrix<double, kNumQuestions, 1> a;
  for (int q = 0; q < kNumQuestions; ++q) {
    if (answers[q] < 1 || answers[q] > 5)
      throw InvalidArgument("answer " + std::to_string(q + 1) + " outside [1, 5]");
    a(q) = answers[q];
  }
  const auto s = ScoreVector(a, key);
  TraitScores out;
  out.user_id = std::move(user_id);
  for (int t = 0; t < kNumTraits; ++t) out.scores[t] = s(t);
  return out;
}

int TertileCuts::Label(double value) const {
  if (degenerate) return 1;
  if (value <= lower) return 0;
  if (value <= upper) return 1;
  return 2;
}

TertileCuts FitTertiles(std::span<const double> values) {
  if (values.size() < 3) throw InvalidArgument("tertiles need at least 3 values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  TertileCuts cuts;
  if (sorted.front() == sorted.back()) {
    cuts.degenerate = true;
    return cuts;
  }
  const std::size_t n = sorted.size();
  // Largest value of the bottom third and of the bottom two thirds.
  cuts.lower = sorted[(n + 2) / 3 - 1];
  cuts.upper = sorted[(2 * n + 2) / 3 - 1];
  return cuts;
}

std::vector<int> TertileLabels(std::span<const double> values) {
  const TertileCuts cuts = FitTertiles(values);
  std::vector<int> labels;
  labels.reserve(values.size());
  for (double v : values) labels.push_back(cuts.Label(v));
  return labels;
}

}  // namespace phonetraits
