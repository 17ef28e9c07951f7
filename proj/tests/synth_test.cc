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
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "phonetraits/features.h"
#include "phonetraits/ingest.h"
#include "phonetraits/linalg.h"
#include "phonetraits/synth.h"
#include "test_support.h"

namespace phonetraits {
namespace {

SynthConfig Small(int n = 40, std::uint64_t seed = 3) {
  SynthConfig c;
  c.n_users = n;
  c.seed = seed;
  c.days = 14;
  return c;
}

std::string Serialized(const std::vector<UserRecord>& records) {
  std::stringstream ss;
  WriteCorpus(records, ss);
  return ss.str();
}

TEST(SynthTest, DeterministicForSeed) {
  const SynthOutput a = GenerateCorpus(Small());
  const SynthOutput b = GenerateCorpus(Small());
  EXPECT_EQ(Serialized(a.records), Serialized(b.records));
  EXPECT_EQ(a.truth.p_star, b.truth.p_star);
  EXPECT_NE(Serialized(GenerateCorpus(Small(40, 4)).records), Serialized(a.records));
}

TEST(SynthTest, GroundTruthMatchesCorpusTruth) {
  const SynthOutput out = GenerateCorpus(Small());
  const GroundTruthRecord truth = GroundTruth(Small());
  EXPECT_EQ(truth.latent_answers, out.truth.latent_answers);
  EXPECT_EQ(truth.planted_target, out.truth.planted_target);
}

TEST(SynthTest, PlantedDirectionIsUnit) {
  for (std::uint64_t seed : {1, 2, 3}) {
    SynthConfig c = Small(20, seed);
    c.key_alignment = seed == 3 ? 0.5 : 0.0;
    EXPECT_NEAR(GroundTruth(c).p_star.norm(), 1.0, 1e-12);
  }
  SynthConfig given = Small(20);
  given.p_star = Eigen::VectorXd::Zero(kNumQuestions);
  given.p_star(5) = 3.0;
  const auto truth = GroundTruth(given);
  EXPECT_EQ(truth.p_star(5), 1.0);
}

TEST(SynthTest, NoiselessRelationIsExact) {
  SynthConfig c = Small(60);
  c.sigma = 0.0;
  c.overlap = 0.0;
  c.trait_loading = 0.4;
  const auto truth = GroundTruth(c);
  const Eigen::VectorXd along = truth.latent_answers * truth.p_star;
  EXPECT_LT((along - truth.rescale * truth.planted_target).cwiseAbs().maxCoeff(), 1e-9);
  // The target is linear in the standardized signals, so OLS recovers it fully.
  const Eigen::MatrixXd xs = Standardizer::Fit(truth.signal_values).Apply(truth.signal_values);
  Eigen::MatrixXd design(xs.rows(), xs.cols() + 1);
  design << Eigen::VectorXd::Ones(xs.rows()), xs;
  const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(along);
  const Eigen::VectorXd resid = along - design * beta;
  const double r2 = 1.0 - resid.squaredNorm() / (along.array() - along.mean()).square().sum();
  EXPECT_GT(r2, 1.0 - 1e-10);
}

TEST(SynthTest, NoiseAlongDirectionHasScaleSigma) {
  SynthConfig c = Small(300);
  c.days = 7;
  c.sigma = 0.4;
  c.max_clip_fraction = 1.0;  // keep the latent scale untouched
  const auto truth = GroundTruth(c);
  ASSERT_EQ(truth.rescale, 1.0);
  const Eigen::VectorXd resid = truth.latent_answers * truth.p_star - truth.planted_target;
  const double sd = std::sqrt((resid.array() - resid.mean()).square().mean());
  EXPECT_NEAR(sd, 0.4, 0.05);
}

TEST(SynthTest, AnswersAreDiscretizedLatents) {
  const SynthOutput out = GenerateCorpus(Small());
  for (int u = 0; u < 40; ++u) {
    ASSERT_TRUE(out.records[u].answers.has_value());
    for (int q = 0; q < kNumQuestions; ++q) {
      const double expected = std::round(std::clamp(3.0 + out.truth.latent_answers(u, q), 1.0, 5.0));
      EXPECT_EQ((*out.records[u].answers)[q], expected);
    }
  }
}

TEST(SynthTest, ExcessiveClippingIsRescaled) {
  SynthConfig c = Small(30);
  c.noise_scale = 5.0;
  const auto truth = GroundTruth(c);
  EXPECT_LT(truth.rescale, 1.0);
  EXPECT_FALSE(truth.warnings.empty());
  const double clipped =
      static_cast<double>((truth.latent_answers.array().abs() > 2.0 + 1e-9).count()) /
      truth.latent_answers.size();
  EXPECT_LE(clipped, c.max_clip_fraction + 1e-9);
}

TEST(SynthTest, UsersPassDefaultFilter) {
  const SynthOutput out = GenerateCorpus(Small(50, 9));
  EXPECT_EQ(FilterParticipants(out.records).size(), 50u);
}

TEST(SynthTest, UniformContactsGiveTwoBits) {
  SynthConfig c = Small(5);
  c.min_contacts = 4;
  c.max_contacts = 4;
  c.max_zipf_exponent = 0.0;
  c.days = 60;
  c.rate_spread = 0.0;
  c.text_rate_per_day = 10.0;
  const SynthOutput out = GenerateCorpus(c);
  for (int u = 0; u < 5; ++u) {
    EXPECT_DOUBLE_EQ(out.truth.users[u].contact_entropy_bits, 2.0);
    std::map<std::string, int> counts;
    for (const TextEvent& t : out.records[u].texts) ++counts[t.counterpart];
    for (const CallEvent& call : out.records[u].calls) ++counts[call.counterpart];
    std::vector<double> values;
    for (const auto& [id, n] : counts) values.push_back(n);
    ASSERT_GE(std::accumulate(values.begin(), values.end(), 0.0), 500.0);
    EXPECT_NEAR(test::EntropyOracle(values), 2.0, 0.1);
  }
}

TEST(SynthTest, ZipfEntropy) {
  EXPECT_DOUBLE_EQ(ZipfEntropyBits(4, 0.0), 2.0);
  EXPECT_EQ(ZipfEntropyBits(1, 1.2), 0.0);
  EXPECT_LT(ZipfEntropyBits(10, 1.5), ZipfEntropyBits(10, 0.5));
  // Exponent 1 over two contacts gives probabilities 2/3 and 1/3.
  const double h = -(2.0 / 3) * std::log2(2.0 / 3) - (1.0 / 3) * std::log2(1.0 / 3);
  EXPECT_NEAR(ZipfEntropyBits(2, 1.0), h, 1e-12);
}

TEST(SynthTest, RejectsBadConfig) {
  SynthConfig c = Small();
  c.min_contacts = 5;
  c.max_contacts = 2;
  EXPECT_THROW(GenerateCorpus(c), InvalidArgument);
  c = Small();
  c.sigma = -1;
  EXPECT_THROW(GenerateCorpus(c), InvalidArgument);
}

TEST(SynthTest, GroundTruthJsonHasPlantedDirection) {
  const auto truth = GroundTruth(Small(10));
  std::stringstream ss;
  WriteGroundTruth(truth, ss);
  EXPECT_NE(ss.str().find("\"p_star\""), std::string::npos);
}

}  // namespace
}  // namespace phonetraits
