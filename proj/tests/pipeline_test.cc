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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "phonetraits/pipeline.h"

namespace phonetraits {
namespace {

namespace fs = std::filesystem;

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::path(::testing::TempDir()) / ("phonetraits_" + name);
  fs::remove_all(dir);
  return dir;
}

PipelineConfig SmallPipeline(const fs::path& dir) {
  PipelineConfig c = LoadPipelineConfig(KeyValueConfig::Parse(
      "[pipeline]\nseed = 11\n"
      "[synth]\nn_users = 40\ndays = 14\nsigma = 0.3\n"
      "[evaluate]\nruns = 5\n"
      "[reduce]\nsdr_starts = 2\nsdr_features = 4\n"
      "[learn]\nrepeats = 2\nbootstrap_samples = 50\nn_features = 4,8\n"));
  c.output_dir = dir;
  return c;
}

TEST(PipelineConfigTest, ParsesSections) {
  const PipelineConfig c = LoadPipelineConfig(KeyValueConfig::Parse(
      "[pipeline]\nseed = 5\nstages = ingest,extract\njobs = 2\ncorpus = data/x.jsonl\n"
      "[features]\nar_order = 4\n"
      "[evaluate]\nmethods = pca,sdr\nconvention = procedures\nruns = 3\n"
      "[learn]\ncost = 1,2\ntarget = N\n"));
  EXPECT_EQ(c.seed, 5u);
  EXPECT_EQ(c.stages, (std::set<std::string>{"ingest", "extract"}));
  EXPECT_EQ(c.jobs, 2);
  EXPECT_EQ(c.corpus_path, fs::path("data/x.jsonl"));
  EXPECT_EQ(c.features.ar_order, 4);
  EXPECT_EQ(c.evaluation.methods,
            (std::vector<ReductionMethod>{ReductionMethod::kPca, ReductionMethod::kSdr}));
  EXPECT_EQ(c.evaluation.convention, RunConvention::kProcedures);
  EXPECT_EQ(c.evaluation.runs, 3);
  EXPECT_EQ(c.evaluation.seed, 5u);
  EXPECT_EQ(c.synth.seed, 5u);
  EXPECT_EQ(c.grid.cost, (std::vector<double>{1, 2}));
  EXPECT_EQ(c.train_target, "N");
}

TEST(PipelineConfigTest, RejectsUnknownValues) {
  EXPECT_THROW(LoadPipelineConfig(KeyValueConfig::Parse("[pipeline]\nstages = bogus\n")),
               InvalidArgument);
  EXPECT_THROW(LoadPipelineConfig(KeyValueConfig::Parse("[evaluate]\nmethods = pca,xyz\n")),
               InvalidArgument);
  EXPECT_THROW(LoadPipelineConfig(KeyValueConfig::Parse("[evaluate]\nconvention = odd\n")),
               InvalidArgument);
}

TEST(PipelineTest, FullRunIsReproducible) {
  const fs::path a = TempDir("run_a"), b = TempDir("run_b");
  const Manifest first = RunPipeline(SmallPipeline(a));
  ASSERT_TRUE(first.ok);
  ASSERT_EQ(first.entries.size(), PipelineStages().size());
  for (std::size_t i = 0; i < first.entries.size(); ++i) {
    EXPECT_EQ(first.entries[i].stage, PipelineStages()[i]);
    EXPECT_TRUE(first.entries[i].ok) << first.entries[i].diagnostic;
    for (const ManifestFile& f : first.entries[i].files) EXPECT_TRUE(fs::exists(a / f.path));
  }
  EXPECT_TRUE(fs::exists(a / "manifest.json"));
  PipelineConfig parallel = SmallPipeline(b);
  parallel.jobs = 2;
  const Manifest second = RunPipeline(parallel);
  ASSERT_TRUE(second.ok);
  for (std::size_t i = 0; i < first.entries.size(); ++i) {
    ASSERT_EQ(first.entries[i].files.size(), second.entries[i].files.size());
    for (std::size_t j = 0; j < first.entries[i].files.size(); ++j) {
      EXPECT_EQ(first.entries[i].files[j].path, second.entries[i].files[j].path);
      EXPECT_EQ(first.entries[i].files[j].sha256, second.entries[i].files[j].sha256)
          << first.entries[i].files[j].path;
    }
  }
}

TEST(PipelineTest, MissingCorpusNamesFileAndStage) {
  const fs::path dir = TempDir("missing");
  PipelineConfig c = SmallPipeline(dir);
  c.stages = {"ingest", "extract"};
  c.corpus_path = dir / "no_such_corpus.jsonl";
  const Manifest m = RunPipeline(c);
  EXPECT_FALSE(m.ok);
  ASSERT_EQ(m.entries.size(), 1u);
  EXPECT_EQ(m.entries[0].stage, "ingest");
  EXPECT_NE(m.entries[0].diagnostic.find("no_such_corpus.jsonl"), std::string::npos);
  EXPECT_NE(m.entries[0].diagnostic.find("ingest"), std::string::npos);
  std::stringstream ss;
  WriteManifest(m, ss);
  EXPECT_NE(ss.str().find("no_such_corpus"), std::string::npos);
}

TEST(Sha256Test, KnownDigest) {
  const fs::path dir = TempDir("sha");
  fs::create_directories(dir);
  std::ofstream(dir / "abc.txt") << "abc";
  EXPECT_EQ(Sha256File(dir / "abc.txt"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_THROW(Sha256File(dir / "absent"), IoError);
}

EvaluationReport SyntheticReport(int runs) {
  EvaluationReport report;
  for (ReductionMethod m : {ReductionMethod::kBig5, ReductionMethod::kPca, ReductionMethod::kIca,
                            ReductionMethod::kFa, ReductionMethod::kSdr}) {
    for (int r = 0; r < runs; ++r) {
      MethodRun mr;
      mr.method = m;
      mr.run = r;
      mr.relative_improvement = 0.01 * r;
      report.runs.push_back(mr);
    }
    MethodSummary s;
    s.method = m;
    s.component_mean = {0.1, 0.3, 0.2, 0.0, -0.1};
    report.summaries.push_back(s);
  }
  return report;
}

TEST(FigureDataTest, ImprovementRowsCoverEveryRun) {
  const ScoringKey key = DefaultBfi44Key();
  const FigureTables t = EmitFigureData(SyntheticReport(100), Big5Basis(key), key);
  EXPECT_EQ(t.improvement_rows.size(), 500u);
  std::stringstream ss;
  WriteImprovementTable(t, ss);
  int lines = 0;
  for (std::string line; std::getline(ss, line);) ++lines;
  EXPECT_EQ(lines, 501);
}

TEST(FigureDataTest, BestComponentChosenAndTraitMeansExact) {
  const ScoringKey key = DefaultBfi44Key();
  const ProjectionBasis basis = Big5Basis(key);
  const FigureTables t = EmitFigureData(SyntheticReport(3), basis, key);
  EXPECT_EQ(t.component, 1);
  ASSERT_EQ(t.loading_rows.size(), 44u);
  ASSERT_EQ(t.trait_mean_rows.size(), 5u);
  for (const auto& [trait, mean] : t.trait_mean_rows) {
    const int ti = key.TraitIndex(trait);
    double sum = 0.0;
    int count = 0;
    for (int q = 0; q < kNumQuestions; ++q) {
      if (key.question_trait[q] != ti) continue;
      sum += basis.rows(1, q);
      ++count;
    }
    EXPECT_NEAR(mean, sum / count, 1e-12);
  }
}

TEST(FigureDataTest, SingleNonzeroLoading) {
  const ScoringKey key = DefaultBfi44Key();
  ProjectionBasis basis;
  basis.method = ReductionMethod::kPca;
  basis.rows = Eigen::MatrixXd::Zero(1, kNumQuestions);
  basis.rows(0, 10) = 1.0;
  const FigureTables t = EmitFigureData(SyntheticReport(1), basis, key, 0);
  int nonzero = 0;
  for (const auto& [q, trait, loading] : t.loading_rows) {
    if (loading != 0.0) {
      ++nonzero;
      EXPECT_EQ(q, 11);
      EXPECT_EQ(trait, key.trait_names[key.question_trait[10]]);
    }
  }
  EXPECT_EQ(nonzero, 1);
  EXPECT_THROW(EmitFigureData(SyntheticReport(1), basis, key, 3), InvalidArgument);
}

}  // namespace
}  // namespace phonetraits
