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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "phonetraits/linalg.h"
#include "phonetraits/reduce.h"
#include "test_support.h"

namespace phonetraits {
namespace {

using test::RandomNormal;

double AbsCorr(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd ca = a.array() - a.mean();
  const Eigen::VectorXd cb = b.array() - b.mean();
  return std::abs(ca.dot(cb)) / (ca.norm() * cb.norm());
}

void ExpectSignConvention(const Eigen::MatrixXd& rows) {
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    Eigen::Index arg = 0;
    rows.row(r).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(rows(r, arg), 0.0) << "row " << r;
  }
}

// --- projection ----------------------------------------------------------

TEST(ProjectTest, UnitRowSelectsQuestion) {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd y = RandomNormal(20, 44, rng);
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(1, 44);
  rows(0, 6) = 1.0;
  EXPECT_EQ(Project(y, rows).col(0), y.col(6));
}

TEST(ProjectTest, ZeroAnswersGiveZeroScores) {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd rows = RandomNormal(5, 44, rng);
  EXPECT_TRUE(Project(Eigen::MatrixXd::Zero(7, 44), rows).isZero(0.0));
}

TEST(ProjectTest, MatchesDoubleLoop) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd y = RandomNormal(30, 44, rng);
  const Eigen::MatrixXd rows = RandomNormal(5, 44, rng);
  const Eigen::MatrixXd s = Project(y, rows);
  for (int i = 0; i < 30; ++i)
    for (int c = 0; c < 5; ++c) {
      double v = 0.0;
      for (int j = 0; j < 44; ++j) v += y(i, j) * rows(c, j);
      EXPECT_NEAR(s(i, c), v, 1e-12);
    }
}

TEST(ProjectTest, DimensionMismatchRejected) {
  EXPECT_THROW(Project(Eigen::MatrixXd::Zero(3, 43), Eigen::MatrixXd::Zero(5, 44)),
               InvalidArgument);
}

TEST(ProjectTest, BasisAppliesStandardization) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd y = RandomNormal(10, 44, rng);
  ProjectionBasis b;
  b.rows = RandomNormal(2, 44, rng);
  b.center = Eigen::VectorXd::Constant(44, 0.5);
  b.scale = Eigen::VectorXd::Constant(44, 2.0);
  const Eigen::MatrixXd expected = ((y.array() - 0.5) / 2.0).matrix() * b.rows.transpose();
  EXPECT_LT((Project(y, b) - expected).cwiseAbs().maxCoeff(), 1e-12);
}

// --- fixed key -------------------------------------------------------------

TEST(Big5BasisTest, UnitRowsFollowKey) {
  const ScoringKey key = DefaultBfi44Key();
  const ProjectionBasis b = Big5Basis(key);
  ASSERT_EQ(b.components(), 5);
  for (int t = 0; t < 5; ++t) {
    EXPECT_NEAR(b.rows.row(t).norm(), 1.0, 1e-12);
    for (int q = 0; q < 44; ++q) {
      if (key.weights(t, q) == 0) {
        EXPECT_EQ(b.rows(t, q), 0.0);
      } else {
        EXPECT_EQ(b.rows(t, q) > 0, !key.reverse_coded[q]);
      }
    }
  }
}

// --- PCA -------------------------------------------------------------------

TEST(PcaTest, SingleDirection) {
  std::mt19937_64 rng(5);
  const Eigen::VectorXd v = test::RandomUnit(44, rng);
  const Eigen::VectorXd s = RandomNormal(200, 1, rng);
  const Eigen::MatrixXd y = s * v.transpose();
  const PcaResult r = PcaFit(y, 5, false);
  ASSERT_GE(r.basis.components(), 1);
  EXPECT_NEAR(std::abs(r.basis.rows.row(0).dot(v)), 1.0, 1e-9);
  EXPECT_NEAR(r.basis.diagnostics[0].at("explained_ratio"), 1.0, 1e-9);
  EXPECT_EQ(r.basis.components(), 1);
  EXPECT_FALSE(r.basis.warnings.empty());
}

TEST(PcaTest, IsotropicEigenvaluesClose) {
  std::mt19937_64 rng(6);
  const Eigen::MatrixXd y = RandomNormal(100000, 44, rng);
  const PcaResult r = PcaFit(y, 5, false);
  const double top = r.explained_variance(0);
  const double bottom = r.explained_variance(43);
  EXPECT_LT((top - bottom) / r.explained_variance.mean(), 0.10);
  const PcaResult again = PcaFit(y, 5, false);
  EXPECT_EQ(r.basis.rows, again.basis.rows);
}

TEST(PcaTest, RankFiveReconstruction) {
  std::mt19937_64 rng(7);
  const Eigen::MatrixXd scores = RandomNormal(300, 5, rng);
  const Eigen::MatrixXd w = RandomNormal(5, 44, rng);
  Eigen::MatrixXd y = scores * w;
  y.rowwise() += RandomNormal(1, 44, rng).row(0);
  const PcaResult r = PcaFit(y, 5, false);
  const Eigen::MatrixXd s = Project(y, r.basis);
  Eigen::MatrixXd back = s * r.basis.rows;
  back.rowwise() += r.basis.center.transpose();
  EXPECT_LT((back - y).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(PcaTest, OrthonormalOrderedAndSigned) {
  std::mt19937_64 rng(8);
  const Eigen::MatrixXd y = RandomNormal(150, 44, rng) * RandomNormal(44, 44, rng);
  const PcaResult r = PcaFit(y, 5, true);
  const Eigen::MatrixXd gram = r.basis.rows * r.basis.rows.transpose();
  EXPECT_LT((gram - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-6);
  for (int i = 1; i < r.explained_variance.size(); ++i)
    EXPECT_LE(r.explained_variance(i), r.explained_variance(i - 1));
  EXPECT_LE(r.explained_variance.head(5).sum(), r.total_variance + 1e-9);
  ExpectSignConvention(r.basis.rows);
}

// --- ICA -------------------------------------------------------------------

TEST(IcaTest, RecoversUniformSources) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 2000;
  Eigen::MatrixXd sources(n, 2);
  for (int i = 0; i < n; ++i) sources.row(i) << u(rng), u(rng);
  Eigen::Matrix2d mixing;
  mixing << 1.0, 0.6, 0.4, 1.0;
  const Eigen::MatrixXd x = sources * mixing.transpose();
  IcaOptions options;
  options.k = 2;
  const IcaResult r = IcaFit(x, options);
  const Eigen::MatrixXd recovered = Project(x, r.basis);
  const double direct = std::min(AbsCorr(recovered.col(0), sources.col(0)),
                                 AbsCorr(recovered.col(1), sources.col(1)));
  const double swapped = std::min(AbsCorr(recovered.col(0), sources.col(1)),
                                  AbsCorr(recovered.col(1), sources.col(0)));
  EXPECT_GT(std::max(direct, swapped), 0.95);
  EXPECT_TRUE(r.converged[0] && r.converged[1]);
  EXPECT_TRUE(r.reliable[0] && r.reliable[1]);
}

TEST(IcaTest, GaussianDataFlaggedUnreliable) {
  std::mt19937_64 rng(10);
  const Eigen::MatrixXd x = RandomNormal(2000, 6, rng);
  IcaOptions options;
  options.k = 2;
  const IcaResult r = IcaFit(x, options);
  for (bool reliable : r.reliable) EXPECT_FALSE(reliable);
}

TEST(IcaTest, WhitenedDataHasIdentityCovariance) {
  std::mt19937_64 rng(11);
  const Eigen::MatrixXd x = RandomNormal(500, 44, rng) * RandomNormal(44, 44, rng);
  const IcaResult r = IcaFit(x, IcaOptions{});
  const Standardizer s = Standardizer::Fit(x);
  const Eigen::MatrixXd white = s.Apply(x) * r.whitening.transpose();
  const Eigen::MatrixXd cov = white.transpose() * white / static_cast<double>(x.rows());
  EXPECT_LT((cov - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(IcaTest, DeterministicUnitRowsAndSigned) {
  std::mt19937_64 rng(12);
  const Eigen::MatrixXd x = RandomNormal(300, 44, rng).array().cube().matrix();
  const IcaResult a = IcaFit(x, IcaOptions{});
  const IcaResult b = IcaFit(x, IcaOptions{});
  EXPECT_EQ(a.basis.rows, b.basis.rows);
  ASSERT_EQ(a.basis.components(), 5);
  for (int c = 0; c < 5; ++c) EXPECT_NEAR(a.basis.rows.row(c).norm(), 1.0, 1e-12);
  ExpectSignConvention(a.basis.rows);
  for (int c = 1; c < 5; ++c)
    EXPECT_LE(a.basis.diagnostics[c].at("explained_variance"),
              a.basis.diagnostics[c - 1].at("explained_variance"));
}

// --- FA --------------------------------------------------------------------

TEST(FaTest, RecoversOneFactorLoadings) {
  std::mt19937_64 rng(13);
  const int n = 3000, d = 12;
  std::uniform_real_distribution<double> load(0.3, 0.9);
  Eigen::VectorXd lambda(d);
  for (int j = 0; j < d; ++j) lambda(j) = load(rng);
  const Eigen::MatrixXd f = RandomNormal(n, 1, rng);
  Eigen::MatrixXd x = f * lambda.transpose();
  for (int j = 0; j < d; ++j)
    x.col(j) += std::sqrt(1 - lambda(j) * lambda(j)) * RandomNormal(n, 1, rng);
  FaOptions options;
  options.k = 1;
  const FaResult r = FaFit(x, options);
  EXPECT_GT(AbsCorr(r.basis.rows.row(0).transpose(), lambda), 0.95);
  EXPECT_TRUE(r.converged);
  for (std::size_t i = 1; i < r.log_likelihood.size(); ++i)
    EXPECT_GE(r.log_likelihood[i], r.log_likelihood[i - 1] - 1e-12);
}

TEST(FaTest, PureNoiseImpliesDiagonalCovariance) {
  std::mt19937_64 rng(14);
  const int n = 4000, d = 10;
  Eigen::MatrixXd x = RandomNormal(n, d, rng);
  for (int j = 0; j < d; ++j) x.col(j) *= 1.0 + j;
  FaOptions options;
  options.k = 1;
  options.standardize = false;
  const FaResult r = FaFit(x, options);
  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);
  // A one-factor model on a single variable is equivalent to pure noise, so
  // only the implied covariance is identified: it must stay near diagonal.
  const Eigen::MatrixXd implied =
      r.loadings * r.loadings.transpose() + Eigen::MatrixXd(r.uniquenesses.asDiagonal());
  for (int i = 0; i < d; ++i) {
    EXPECT_NEAR(implied(i, i) / cov(i, i), 1.0, 0.01) << i;
    for (int j = i + 1; j < d; ++j)
      EXPECT_LT(std::abs(implied(i, j)) / std::sqrt(cov(i, i) * cov(j, j)), 0.05) << i << ' ' << j;
  }
}

TEST(FaTest, LogLikelihoodMonotoneOnFiveFactors) {
  std::mt19937_64 rng(15);
  const Eigen::MatrixXd latent = RandomNormal(600, 5, rng);
  const Eigen::MatrixXd x = latent * RandomNormal(5, 44, rng) + RandomNormal(600, 44, rng);
  const FaResult r = FaFit(x, FaOptions{});
  ASSERT_GT(r.log_likelihood.size(), 2u);
  for (std::size_t i = 1; i < r.log_likelihood.size(); ++i)
    EXPECT_GE(r.log_likelihood[i], r.log_likelihood[i - 1] - 1e-12) << i;
  for (int c = 0; c < 5; ++c) EXPECT_NEAR(r.basis.rows.row(c).norm(), 1.0, 1e-12);
  ExpectSignConvention(r.basis.rows);
  const FaResult again = FaFit(x, FaOptions{});
  EXPECT_EQ(r.basis.rows, again.basis.rows);
}

TEST(FaTest, HeywoodCaseClipped) {
  std::mt19937_64 rng(16);
  const Eigen::MatrixXd f = RandomNormal(500, 1, rng);
  Eigen::MatrixXd x(500, 4);
  x.col(0) = f;
  x.col(1) = f;
  x.col(2) = f + RandomNormal(500, 1, rng);
  x.col(3) = RandomNormal(500, 1, rng);
  FaOptions options;
  options.k = 1;
  const FaResult r = FaFit(x, options);
  EXPECT_TRUE(r.heywood);
  EXPECT_GE(r.uniquenesses.minCoeff(), options.min_uniqueness);
  EXPECT_FALSE(r.basis.warnings.empty());
}

// --- basis files -----------------------------------------------------------

TEST(BasisFileTest, RoundTrip) {
  std::mt19937_64 rng(17);
  const Eigen::MatrixXd y = RandomNormal(80, 44, rng);
  const ProjectionBasis b = PcaFit(y, 5, true).basis;
  std::stringstream ss;
  WriteBasis(b, ss);
  const ProjectionBasis back = ReadBasis(ss);
  EXPECT_EQ(back.method, ReductionMethod::kPca);
  EXPECT_EQ(back.rows, b.rows);
  EXPECT_EQ(back.center, b.center);
  EXPECT_EQ(back.scale, b.scale);
  EXPECT_EQ(back.component_names, b.component_names);
}

TEST(MethodNameTest, ParseRoundTrip) {
  for (auto m : {ReductionMethod::kBig5, ReductionMethod::kPca, ReductionMethod::kIca,
                 ReductionMethod::kFa, ReductionMethod::kSdr})
    EXPECT_EQ(ParseMethod(MethodName(m)), m);
  EXPECT_FALSE(ParseMethod("nmf").has_value());
}

}  // namespace
}  // namespace phonetraits
