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

#ifndef PHONETRAITS_LEARN_H_
#define PHONETRAITS_LEARN_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phonetraits/svm.h"

namespace phonetraits {

// Indices of the n columns with the largest |Pearson r| against the labels;
// ties go to the lower index.
std::vector<int> SelectFeatures(const Eigen::MatrixXd& features,
                                std::span<const int> labels, int n);

// Selects features, then trains the SVM on those columns. The returned model
// records the selected indices.
SvmModel TrainClassifier(const Eigen::MatrixXd& features,
                         std::span<const int> labels, const Hyperparameters& hp,
                         const SmoOptions& options = {});
// Applies a TrainClassifier model to a full-width feature matrix.
std::vector<int> PredictClassifier(const SvmModel& model,
                                   const Eigen::MatrixXd& features);

double Accuracy(std::span<const int> predicted, std::span<const int> truth);

// Accuracy on the test labels of always predicting the most frequent training
// label (ties toward the lower label).
double BaselineAccuracy(std::span<const int> train_labels,
                        std::span<const int> test_labels);

// f_classifier / f_baseline - 1. Throws InvalidArgument when f_baseline <= 0.
double RelativeImprovement(double f_classifier, double f_baseline);

struct Split {
  std::vector<int> train;
  std::vector<int> test;
};

// Stratified k-fold: every class is shuffled and dealt round-robin, so per
// fold class counts differ by at most one from proportional allocation.
std::vector<Split> StratifiedFolds(std::span<const int> labels, int folds,
                                   std::uint64_t seed);
// Plain shuffled k-fold.
std::vector<Split> KFolds(int n, int folds, std::uint64_t seed);

struct FoldResult {
  int repeat = 0;
  int fold = 0;
  double accuracy = 0.0;
  double baseline = 0.0;
  double relative_improvement = 0.0;
};

struct CvReport {
  std::vector<FoldResult> folds;  // accepted folds only
  std::vector<double> repeat_improvement;  // mean S per repeat
  double mean_accuracy = 0.0;
  double mean_baseline = 0.0;
  double relative_improvement = 0.0;  // mean over folds, then repeats
  double bootstrap_std = 0.0;
  int folds_used = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
};

struct CvOptions {
  int repeats = 100;
  int folds = 5;
  std::uint64_t seed = 1;
  int bootstrap_samples = 1000;
  int jobs = 1;
  SmoOptions smo;
};

CvReport CrossValidate(const Eigen::MatrixXd& features,
                       std::span<const int> labels, const Hyperparameters& hp,
                       const CvOptions& options);

// Standard deviation of the mean of `values` over bootstrap resamples.
double BootstrapStd(std::span<const double> values, int samples,
                    std::uint64_t seed);

struct GridSpec {
  std::vector<double> cost = {0.05, 0.2, 0.8, 1, 5, 20, 42, 100};
  std::vector<double> gamma = {0.01, 0.05, 0.2, 0.75, 1, 2, 10};
  std::vector<int> n_features = {4, 8, 12, 16, 20, 24};
  KernelType kernel = KernelType::kRbf;
};

struct GridPointResult {
  Hyperparameters hp;
  double mean_accuracy = 0.0;
};

struct GridSearchResult {
  Hyperparameters best;
  std::vector<GridPointResult> points;
};

// Highest mean CV accuracy wins; ties toward smaller C, then gamma, then n.
// n values above the feature count are clamped.
GridSearchResult GridSearch(const Eigen::MatrixXd& features,
                            std::span<const int> labels, const GridSpec& grid,
                            const CvOptions& options);

// Model files are JSON.
void WriteModel(const SvmModel& model, std::ostream& out);
SvmModel ReadModel(std::istream& in);

}  // namespace phonetraits

#endif  // PHONETRAITS_LEARN_H_
