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

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "phonetraits/evaluate.h"
#include "test_support.h"

namespace phonetraits {
namespace {

using test::RandomNormal;

Eigen::MatrixXd RandomAnswerMatrix(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> a(1, 5);
  Eigen::MatrixXd out(n, kNumQuestions);
  for (int i = 0; i < n; ++i)
    for (int q = 0; q < kNumQuestions; ++q) out(i, q) = a(rng);
  return out;
}

EvaluationProtocol SmallProtocol(std::vector<ReductionMethod> methods, int runs) {
  EvaluationProtocol p;
  p.methods = std::move(methods);
  p.runs = runs;
  p.sdr_features = 4;
  p.sdr.starts = 2;
  return p;
}

TEST(EvaluateTest, Big5OnIndependentDataCentersNearZero) {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd features = RandomNormal(150, 10, rng);
  const Eigen::MatrixXd answers = RandomAnswerMatrix(150, rng);
  const auto report = EvaluateReductions(features, answers, DefaultBfi44Key(),
                                         SmallProtocol({ReductionMethod::kBig5}, 20));
  const MethodSummary* s = report.Summary(ReductionMethod::kBig5);
  ASSERT_NE(s, nullptr);
  ASSERT_EQ(report.runs.size(), 20u);
  EXPECT_LT(std::abs(s->mean), 4 * s->stddev / std::sqrt(20.0));
  EXPECT_EQ(s->component_mean.size(), 5u);
}

TEST(EvaluateTest, FoldConventionIndexesRuns) {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd features = RandomNormal(60, 6, rng);
  const Eigen::MatrixXd answers = RandomAnswerMatrix(60, rng);
  const auto report = EvaluateReductions(features, answers, DefaultBfi44Key(),
                                         SmallProtocol({ReductionMethod::kBig5}, 7));
  ASSERT_EQ(report.runs.size(), 7u);
  for (int r = 0; r < 7; ++r) {
    EXPECT_EQ(report.runs[r].run, r);
    EXPECT_EQ(report.runs[r].repeat, r / 5);
    EXPECT_EQ(report.runs[r].fold, r % 5);
  }
}

TEST(EvaluateTest, ProcedureConventionAveragesFolds) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd features = RandomNormal(60, 6, rng);
  const Eigen::MatrixXd answers = RandomAnswerMatrix(60, rng);
  const ScoringKey key = DefaultBfi44Key();
  const auto methods = std::vector<ReductionMethod>{ReductionMethod::kBig5, ReductionMethod::kPca};
  const auto folds = EvaluateReductions(features, answers, key, SmallProtocol(methods, 5));
  EvaluationProtocol proc = SmallProtocol(methods, 1);
  proc.convention = RunConvention::kProcedures;
  const auto whole = EvaluateReductions(features, answers, key, proc);
  ASSERT_EQ(whole.runs.size(), 2u);
  for (int m = 0; m < 2; ++m) {
    double sum = 0.0;
    for (int f = 0; f < 5; ++f) sum += folds.runs[m * 5 + f].relative_improvement;
    EXPECT_EQ(whole.runs[m].fold, -1);
    EXPECT_NEAR(whole.runs[m].relative_improvement, sum / 5, 1e-12);
  }
}

TEST(EvaluateTest, ConstantComponentIsSkippedWithWarning) {
  std::mt19937_64 rng(4);
  const ScoringKey key = DefaultBfi44Key();
  const Eigen::MatrixXd features = RandomNormal(50, 5, rng);
  Eigen::MatrixXd answers = RandomAnswerMatrix(50, rng);
  const int e = key.TraitIndex("E");
  for (int q = 0; q < kNumQuestions; ++q)
    if (key.question_trait[q] == e) answers.col(q).setConstant(3.0);
  const auto report =
      EvaluateReductions(features, answers, key, SmallProtocol({ReductionMethod::kBig5}, 5));
  EXPECT_FALSE(report.warnings.empty());
  for (const MethodRun& r : report.runs) {
    EXPECT_TRUE(std::isnan(r.component_improvement[e]));
    EXPECT_FALSE(std::isnan(r.relative_improvement));
  }
}

TEST(EvaluateTest, ParallelMatchesSerial) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd features = RandomNormal(60, 8, rng);
  const Eigen::MatrixXd answers = RandomAnswerMatrix(60, rng);
  EvaluationProtocol p = SmallProtocol({ReductionMethod::kIca, ReductionMethod::kSdr}, 5);
  const auto serial = EvaluateReductions(features, answers, DefaultBfi44Key(), p);
  p.jobs = 3;
  const auto parallel = EvaluateReductions(features, answers, DefaultBfi44Key(), p);
  ASSERT_EQ(serial.runs.size(), parallel.runs.size());
  for (std::size_t i = 0; i < serial.runs.size(); ++i) {
    const auto& a = serial.runs[i].component_improvement;
    const auto& b = parallel.runs[i].component_improvement;
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t c = 0; c < a.size(); ++c)
      EXPECT_TRUE(a[c] == b[c] || (std::isnan(a[c]) && std::isnan(b[c]))) << i << ' ' << c;
  }
}

TEST(EvaluateTest, ReportCsvRoundTrip) {
  std::mt19937_64 rng(6);
  const Eigen::MatrixXd features = RandomNormal(60, 6, rng);
  const Eigen::MatrixXd answers = RandomAnswerMatrix(60, rng);
  const auto report =
      EvaluateReductions(features, answers, DefaultBfi44Key(),
                         SmallProtocol({ReductionMethod::kBig5, ReductionMethod::kFa}, 5));
  std::stringstream ss;
  WriteEvaluationReport(report, 5, ss);
  const auto back = ReadEvaluationReport(ss);
  ASSERT_EQ(back.runs.size(), report.runs.size());
  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    EXPECT_EQ(back.runs[i].method, report.runs[i].method);
    EXPECT_EQ(back.runs[i].relative_improvement, report.runs[i].relative_improvement);
    EXPECT_EQ(back.runs[i].component_improvement.size(), 5u);
  }
  for (ReductionMethod m : {ReductionMethod::kBig5, ReductionMethod::kFa})
    EXPECT_DOUBLE_EQ(back.Summary(m)->mean, report.Summary(m)->mean);
}

TEST(EvaluateTest, RejectsMismatchedInputs) {
  std::mt19937_64 rng(7);
  EXPECT_THROW(EvaluateReductions(RandomNormal(10, 3, rng), RandomAnswerMatrix(11, rng),
                                  DefaultBfi44Key(), SmallProtocol({ReductionMethod::kBig5}, 1)),
               InvalidArgument);
}

TEST(FitBasisTest, SdrRecordsSelectedFeatures) {
  std::mt19937_64 rng(8);
  Eigen::MatrixXd features = RandomNormal(80, 12, rng);
  const Eigen::MatrixXd answers = RandomAnswerMatrix(80, rng);
  features.col(5) = answers.col(0) + 0.01 * RandomNormal(80, 1, rng);
  const EvaluationProtocol p = SmallProtocol({ReductionMethod::kSdr}, 1);
  const ProjectionBasis basis =
      FitBasis(ReductionMethod::kSdr, features, answers, DefaultBfi44Key(), p, 3);
  EXPECT_EQ(basis.rows.rows(), 5);
  ASSERT_FALSE(basis.warnings.empty());
  EXPECT_EQ(basis.warnings.front().rfind("selected features: 5", 0), 0u);
}

}  // namespace
}  // namespace phonetraits
