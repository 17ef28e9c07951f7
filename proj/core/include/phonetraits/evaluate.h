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

#ifndef PHONETRAITS_EVALUATE_H_
#define PHONETRAITS_EVALUATE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phonetraits/learn.h"
#include "phonetraits/reduce.h"
#include "phonetraits/scoring.h"

namespace phonetraits {

enum class RunConvention {
  kFolds,       // every fold is one run
  kProcedures,  // every full k-fold procedure is one run
};

struct EvaluationProtocol {
  std::vector<ReductionMethod> methods = {
      ReductionMethod::kBig5, ReductionMethod::kPca, ReductionMethod::kIca,
      ReductionMethod::kFa, ReductionMethod::kSdr};
  int runs = 500;
  int folds = 5;
  RunConvention convention = RunConvention::kFolds;
  int k = 5;
  int sdr_features = 8;
  int sdr_rank_folds = 5;
  SdrOptions sdr;
  IcaOptions ica;
  FaOptions fa;
  Hyperparameters hp;
  SmoOptions smo;
  std::uint64_t seed = 2016;
  int jobs = 1;
};

// One fold of one method: per-component S (NaN for skipped components) and
// their mean.
struct MethodRun {
  ReductionMethod method = ReductionMethod::kBig5;
  int run = 0;
  int repeat = 0;
  int fold = 0;  // -1 for a whole procedure
  std::vector<double> component_improvement;
  double relative_improvement = 0.0;
  double accuracy = 0.0;
  double baseline = 0.0;
};

struct MethodSummary {
  ReductionMethod method = ReductionMethod::kBig5;
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> component_mean;  // per component, over runs
};

struct EvaluationReport {
  std::vector<MethodRun> runs;  // ordered by method, then run
  std::vector<MethodSummary> summaries;
  std::vector<std::string> warnings;

  const MethodSummary* Summary(ReductionMethod method) const;
};

// Fits each reduction on the training split only (the key is fixed), tertiles
// the component scores with cut points from the training split, and runs the
// classifier per component.
EvaluationReport EvaluateReductions(const Eigen::MatrixXd& features,
                                    const Eigen::MatrixXd& answers,
                                    const ScoringKey& key,
                                    const EvaluationProtocol& protocol);

// Fits the requested reduction on all rows.
ProjectionBasis FitBasis(ReductionMethod method, const Eigen::MatrixXd& features,
                         const Eigen::MatrixXd& answers, const ScoringKey& key,
                         const EvaluationProtocol& protocol,
                         std::uint64_t seed);

void WriteEvaluationReport(const EvaluationReport& report, int k,
                           std::ostream& out);
EvaluationReport ReadEvaluationReport(std::istream& in);

}  // namespace phonetraits

#endif  // PHONETRAITS_EVALUATE_H_
