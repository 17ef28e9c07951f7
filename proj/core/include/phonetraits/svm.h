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

#ifndef PHONETRAITS_SVM_H_
#define PHONETRAITS_SVM_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace phonetraits {

enum class KernelType { kRbf, kLinear };

std::string_view KernelName(KernelType kernel);

struct Hyperparameters {
  double cost = 1.0;
  double gamma = 0.1;
  int n_features = 8;
  KernelType kernel = KernelType::kRbf;

  friend bool operator==(const Hyperparameters&,
                         const Hyperparameters&) = default;
};

// One binary soft-margin machine of the one-vs-one ensemble. The decision
// value sum_i coef_i K(sv_i, x) + bias is positive for `positive_label`.
struct BinarySvm {
  int positive_label = 0;
  int negative_label = 1;
  Eigen::MatrixXd support_vectors;  // rows, standardized feature space
  Eigen::VectorXd coefficients;     // y_i * alpha_i
  double bias = 0.0;
  int iterations = 0;

  // Exact comparison; matrices of different shapes compare unequal.
  friend bool operator==(const BinarySvm& a, const BinarySvm& b);
};

struct SvmModel {
  Hyperparameters hp;
  std::vector<int> selected_features;  // column indices in the full table
  Eigen::VectorXd mean;                // standardization of the selected columns
  Eigen::VectorXd scale;
  std::vector<int> classes;  // sorted distinct training labels
  std::vector<BinarySvm> machines;
  bool constant = false;     // fewer than two training classes
  int constant_label = 0;
  std::vector<std::string> warnings;

  friend bool operator==(const SvmModel& a, const SvmModel& b);
};

struct SmoOptions {
  double tolerance = 1e-3;  // KKT violation gap
  int max_iterations = 1000000;
};

double KernelValue(KernelType kernel, double gamma,
                   const Eigen::Ref<const Eigen::VectorXd>& a,
                   const Eigen::Ref<const Eigen::VectorXd>& b);

// Solves the binary C-SVC dual with labels +1/-1 using second-order working
// set selection. X is already standardized.
BinarySvm TrainBinarySvm(const Eigen::MatrixXd& x, std::span<const int> signs,
                         const Hyperparameters& hp,
                         const SmoOptions& options = {});
double DecisionValue(const BinarySvm& machine, KernelType kernel, double gamma,
                     const Eigen::Ref<const Eigen::VectorXd>& x);

// Standardizes X with its own statistics and trains the one-vs-one ensemble.
// X holds only the model's feature columns.
SvmModel TrainSvm(const Eigen::MatrixXd& x, std::span<const int> labels,
                  const Hyperparameters& hp, const SmoOptions& options = {});

// Majority vote over pairwise machines; ties go to the lower label.
std::vector<int> Predict(const SvmModel& model, const Eigen::MatrixXd& x);
int PredictOne(const SvmModel& model,
               const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace phonetraits

#endif  // PHONETRAITS_SVM_H_
