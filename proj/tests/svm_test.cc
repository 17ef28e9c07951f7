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
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "phonetraits/svm.h"
#include "test_support.h"

namespace phonetraits {
namespace {

using test::RandomNormal;

double Rbf(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double gamma) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += (a(i) - b(i)) * (a(i) - b(i));
  return std::exp(-gamma * s);
}

// Independent kernel-expansion evaluation of a trained model.
int OraclePredict(const SvmModel& model, const Eigen::VectorXd& raw) {
  if (model.constant) return model.constant_label;
  const Eigen::VectorXd x = (raw - model.mean).cwiseQuotient(model.scale);
  std::map<int, int> votes;
  for (const BinarySvm& m : model.machines) {
    double f = m.bias;
    for (Eigen::Index i = 0; i < m.support_vectors.rows(); ++i) {
      const Eigen::VectorXd sv = m.support_vectors.row(i).transpose();
      const double k = model.hp.kernel == KernelType::kRbf ? Rbf(sv, x, model.hp.gamma) : sv.dot(x);
      f += m.coefficients(i) * k;
    }
    ++votes[f > 0 ? m.positive_label : m.negative_label];
  }
  int best = model.classes.front(), count = -1;
  for (int c : model.classes) {
    if (votes[c] > count) {
      best = c;
      count = votes[c];
    }
  }
  return best;
}

// Three bands along the first coordinate with a small margin between them.
void Bands(int n, std::uint64_t seed, Eigen::MatrixXd& x, std::vector<int>& labels) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  x.resize(n, 2);
  labels.resize(n);
  for (int i = 0; i < n; ++i) {
    const int label = i % 3;
    x(i, 0) = label + 0.1 + 0.8 * u(rng);
    x(i, 1) = u(rng);
    labels[i] = label;
  }
}

double TrainingAccuracy(const SvmModel& model, const Eigen::MatrixXd& x,
                        const std::vector<int>& labels) {
  const auto pred = Predict(model, x);
  int ok = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) ok += pred[i] == labels[i];
  return static_cast<double>(ok) / labels.size();
}

TEST(SvmTest, SeparableBands) {
  Eigen::MatrixXd x;
  std::vector<int> labels;
  Bands(300, 1, x, labels);
  const SvmModel model = TrainSvm(x, labels, {1.0, 1.0, 2, KernelType::kRbf});
  EXPECT_GT(TrainingAccuracy(model, x, labels), 0.95);
  EXPECT_EQ(model.machines.size(), 3u);
  EXPECT_EQ(model.classes, (std::vector<int>{0, 1, 2}));
}

TEST(SvmTest, LinearKernelSeparatesBands) {
  Eigen::MatrixXd x;
  std::vector<int> labels;
  Bands(300, 2, x, labels);
  const SvmModel model = TrainSvm(x, labels, {10.0, 1.0, 2, KernelType::kLinear});
  EXPECT_GT(TrainingAccuracy(model, x, labels), 0.95);
}

TEST(SvmTest, LargeGammaMemorizes) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd x = RandomNormal(150, 4, rng);
  std::vector<int> labels(150);
  std::uniform_int_distribution<int> l(0, 2);
  for (int& v : labels) v = l(rng);
  const SvmModel model = TrainSvm(x, labels, {10.0, 1000.0, 4, KernelType::kRbf});
  EXPECT_EQ(TrainingAccuracy(model, x, labels), 1.0);
}

TEST(SvmTest, PredictMatchesKernelExpansion) {
  std::mt19937_64 rng(4);
  Eigen::MatrixXd x = RandomNormal(200, 3, rng);
  std::vector<int> labels(200);
  for (int i = 0; i < 200; ++i) labels[i] = x(i, 0) + 0.5 * x(i, 1) > 0.4 ? 2 : (x(i, 2) > 0 ? 1 : 0);
  for (KernelType kernel : {KernelType::kRbf, KernelType::kLinear}) {
    const SvmModel model = TrainSvm(x, labels, {2.0, 0.5, 3, kernel});
    const Eigen::MatrixXd probe = RandomNormal(300, 3, rng) * 1.5;
    const auto pred = Predict(model, probe);
    for (int i = 0; i < probe.rows(); ++i)
      EXPECT_EQ(pred[i], OraclePredict(model, probe.row(i).transpose())) << i;
  }
}

TEST(SvmTest, SingleClassGivesConstantModel) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd x = RandomNormal(20, 2, rng);
  const std::vector<int> labels(20, 2);
  const SvmModel model = TrainSvm(x, labels, {});
  EXPECT_TRUE(model.constant);
  EXPECT_FALSE(model.warnings.empty());
  for (int p : Predict(model, RandomNormal(10, 2, rng))) EXPECT_EQ(p, 2);
}

TEST(SvmTest, DimensionMismatchRejected) {
  Eigen::MatrixXd x;
  std::vector<int> labels;
  Bands(30, 6, x, labels);
  const SvmModel model = TrainSvm(x, labels, {});
  EXPECT_THROW(Predict(model, Eigen::MatrixXd::Zero(2, 3)), InvalidArgument);
}

TEST(SvmTest, VoteTieGoesToLowerLabel) {
  // Three pairwise machines that each prefer a different class form a cycle.
  SvmModel model;
  model.classes = {0, 1, 2};
  model.mean = Eigen::VectorXd::Zero(1);
  model.scale = Eigen::VectorXd::Ones(1);
  model.hp.kernel = KernelType::kLinear;
  auto machine = [](int pos, int neg, double bias) {
    BinarySvm m;
    m.positive_label = pos;
    m.negative_label = neg;
    m.support_vectors = Eigen::MatrixXd::Zero(1, 1);
    m.coefficients = Eigen::VectorXd::Zero(1);
    m.bias = bias;
    return m;
  };
  model.machines = {machine(0, 1, 1.0), machine(0, 2, -1.0), machine(1, 2, 1.0)};
  EXPECT_EQ(PredictOne(model, Eigen::VectorXd::Zero(1)), 0);
}

struct BinaryFixture {
  Eigen::MatrixXd x;
  std::vector<int> signs;
};

BinaryFixture Overlapping(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BinaryFixture f;
  f.x = RandomNormal(n, 2, rng);
  f.signs.resize(n);
  for (int i = 0; i < n; ++i) {
    f.signs[i] = i % 2 ? 1 : -1;
    f.x(i, 0) += 0.8 * f.signs[i];
  }
  return f;
}

TEST(BinarySvmTest, DualFeasibleAndKktWithinTolerance) {
  const BinaryFixture f = Overlapping(120, 7);
  const Hyperparameters hp{1.0, 0.5, 2, KernelType::kRbf};
  const BinarySvm m = TrainBinarySvm(f.x, f.signs, hp);
  EXPECT_NEAR(m.coefficients.sum(), 0.0, 1e-9);
  EXPECT_LE(m.coefficients.cwiseAbs().maxCoeff(), hp.cost + 1e-12);
  // Recover alpha per training point by matching support vectors.
  for (int i = 0; i < f.x.rows(); ++i) {
    double alpha = 0.0;
    for (Eigen::Index s = 0; s < m.support_vectors.rows(); ++s)
      if (m.support_vectors.row(s) == f.x.row(i)) alpha = std::abs(m.coefficients(s));
    double fx = m.bias;
    for (Eigen::Index s = 0; s < m.support_vectors.rows(); ++s)
      fx += m.coefficients(s) * Rbf(m.support_vectors.row(s).transpose(), f.x.row(i).transpose(),
                                    hp.gamma);
    const double margin = f.signs[i] * fx;
    const double tol = 2e-3;
    if (alpha == 0.0) {
      EXPECT_GE(margin, 1 - tol) << i;
    } else if (alpha < hp.cost - 1e-12) {
      EXPECT_NEAR(margin, 1.0, tol) << i;
    } else {
      EXPECT_LE(margin, 1 + tol) << i;
    }
  }
}

TEST(BinarySvmTest, DuplicatedPointsKeepDecisionFunction) {
  // Separable data with a large cost: no multiplier sits at its bound, so
  // duplicating the sample leaves the optimal decision function unchanged.
  std::mt19937_64 rng(8);
  BinaryFixture f;
  f.x = RandomNormal(60, 2, rng);
  f.signs.resize(60);
  for (int i = 0; i < 60; ++i) {
    f.signs[i] = i % 2 ? 1 : -1;
    f.x(i, 0) = f.signs[i] * (1.0 + std::abs(f.x(i, 0)));
  }
  BinaryFixture twice;
  twice.x.resize(120, 2);
  twice.x << f.x, f.x;
  twice.signs = f.signs;
  twice.signs.insert(twice.signs.end(), f.signs.begin(), f.signs.end());
  const Hyperparameters hp{1000.0, 0.2, 2, KernelType::kRbf};
  const SmoOptions tight{1e-6, 1000000};
  const BinarySvm a = TrainBinarySvm(f.x, f.signs, hp, tight);
  const BinarySvm b = TrainBinarySvm(twice.x, twice.signs, hp, tight);
  ASSERT_LT(a.coefficients.cwiseAbs().maxCoeff(), hp.cost);
  const Eigen::MatrixXd probe = RandomNormal(200, 2, rng) * 2.0;
  for (int i = 0; i < probe.rows(); ++i) {
    const double fa = DecisionValue(a, hp.kernel, hp.gamma, probe.row(i).transpose());
    const double fb = DecisionValue(b, hp.kernel, hp.gamma, probe.row(i).transpose());
    EXPECT_NEAR(fa, fb, 1e-4 * std::max(1.0, std::abs(fa))) << i;
  }
}

TEST(KernelTest, Values) {
  const Eigen::Vector2d a(1.0, 2.0), b(0.0, 4.0);
  EXPECT_NEAR(KernelValue(KernelType::kRbf, 0.5, a, b), std::exp(-2.5), 1e-15);
  EXPECT_EQ(KernelValue(KernelType::kLinear, 0.5, a, b), 8.0);
}

}  // namespace
}  // namespace phonetraits
