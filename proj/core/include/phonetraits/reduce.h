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

#ifndef PHONETRAITS_REDUCE_H_
#define PHONETRAITS_REDUCE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "phonetraits/scoring.h"

namespace phonetraits {

enum class ReductionMethod { kBig5, kPca, kIca, kFa, kSdr };

std::string_view MethodName(ReductionMethod method);
std::optional<ReductionMethod> ParseMethod(std::string_view name);

/// k x 44 projection of questionnaire answers. Answers are mapped through
/// (answers - center) / scale before the rows are applied; the fixed key
/// uses center 0 and scale 1.
struct ProjectionBasis {
  ReductionMethod method = ReductionMethod::kPca;
  Eigen::MatrixXd rows;
  Eigen::VectorXd center;
  Eigen::VectorXd scale;
  std::vector<std::string> component_names;
  // Per-component diagnostics (explained_variance, r2_train, ...).
  std::vector<std::map<std::string, double>> diagnostics;
  std::vector<std::string> warnings;

  int components() const { return static_cast<int>(rows.rows()); }
};

// users x k component scores. Throws InvalidArgument on a column mismatch.
Eigen::MatrixXd Project(const Eigen::MatrixXd& answers,
                        const Eigen::MatrixXd& rows);
Eigen::MatrixXd Project(const Eigen::MatrixXd& answers,
                        const ProjectionBasis& basis);

ProjectionBasis Big5Basis(const ScoringKey& key);

struct PcaResult {
  ProjectionBasis basis;
  Eigen::VectorXd explained_variance;  // all eigenvalues, descending
  double total_variance = 0.0;
};

// Standardizes internally unless `standardize` is false (then only centers).
PcaResult PcaFit(const Eigen::MatrixXd& answers, int k = 5,
                 bool standardize = true);

struct IcaOptions {
  int k = 5;
  std::uint64_t seed = 42;
  int max_iterations = 500;
  double tolerance = 1e-6;
  double reliability_z = 3.0;
  bool standardize = true;
};

struct IcaResult {
  ProjectionBasis basis;
  Eigen::MatrixXd whitening;  // k x d, maps standardized data to white
  std::vector<bool> converged;
  std::vector<bool> reliable;  // negentropy distinguishable from Gaussian
  std::vector<double> negentropy_z;
};

IcaResult IcaFit(const Eigen::MatrixXd& answers, const IcaOptions& options);

struct FaOptions {
  int k = 5;
  int max_iterations = 1000;
  double tolerance = 1e-8;
  double min_uniqueness = 1e-6;
  bool standardize = true;
};

struct FaResult {
  ProjectionBasis basis;
  Eigen::MatrixXd loadings;        // d x k, unnormalized
  Eigen::VectorXd uniquenesses;    // d
  std::vector<double> log_likelihood;  // per iteration, mean per sample
  int iterations = 0;
  bool converged = false;
  bool heywood = false;
};

// EM on a covariance matrix estimated from n samples.
FaResult FactorAnalysisEm(const Eigen::MatrixXd& covariance, int n_samples,
                          const FaOptions& options);
FaResult FaFit(const Eigen::MatrixXd& answers, const FaOptions& options);

struct SdrOptions {
  int k = 5;
  int starts = 5;
  int max_alternations = 200;
  double r2_tolerance = 1e-8;
  int sqp_max_iterations = 100;
  std::uint64_t seed = 7;
  bool standardize = true;
};

struct SdrComponentReport {
  double r2_train = 0.0;
  double r2_test = std::numeric_limits<double>::quiet_NaN();
  int alternations = 0;
  bool converged = false;
  std::vector<double> r2_trace;  // training R^2 after every half step
  int successful_starts = 0;
};

struct SdrFitReport {
  std::vector<SdrComponentReport> components;
  std::vector<int> selected_features;
};

struct SdrResult {
  ProjectionBasis basis;
  SdrFitReport report;
  // Linear models of the final components: intercept then coefficients.
  std::vector<Eigen::VectorXd> models;
};

// Features must already be restricted to the selected columns.
SdrResult SdrFit(const Eigen::MatrixXd& features, const Eigen::MatrixXd& answers,
                 const SdrOptions& options);

// Evaluates R^2 of each component's stored linear model on held-out rows and
// writes it into report.components[i].r2_test.
void SdrScoreHeldOut(SdrResult& result, const Eigen::MatrixXd& features,
                     const Eigen::MatrixXd& answers);

// Feature screening by the product of correlation p-values against every
// question, recomputed in each of `folds` training splits and combined by
// mean rank. Returns feature indices, strongest first.
std::vector<int> SdrRankFeatures(const Eigen::MatrixXd& features,
                                 const Eigen::MatrixXd& answers, int folds,
                                 std::uint64_t seed);

// Sum over questions of log p-values for every feature on one data split.
Eigen::VectorXd LogPValueProducts(const Eigen::MatrixXd& features,
                                  const Eigen::MatrixXd& answers);

// Basis file: comment metadata followed by a CSV of component rows.
void WriteBasis(const ProjectionBasis& basis, std::ostream& out);
void WriteBasis(const ProjectionBasis& basis, const std::filesystem::path& path);
ProjectionBasis ReadBasis(std::istream& in);
ProjectionBasis ReadBasis(const std::filesystem::path& path);

}  // namespace phonetraits

#endif  // PHONETRAITS_REDUCE_H_
