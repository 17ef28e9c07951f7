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

// Command line front end for the phonetraits pipeline.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "phonetraits/config.h"
#include "phonetraits/evaluate.h"
#include "phonetraits/feature_table.h"
#include "phonetraits/ingest.h"
#include "phonetraits/learn.h"
#include "phonetraits/linalg.h"
#include "phonetraits/pipeline.h"
#include "phonetraits/reduce.h"
#include "phonetraits/scoring.h"
#include "phonetraits/synth.h"

namespace pt = phonetraits;
namespace fs = std::filesystem;

namespace {

struct GlobalOptions {
  std::uint64_t seed = 2016;
  bool seed_set = false;
  int jobs = 1;
  std::string config_path;
};

pt::KeyValueConfig LoadConfig(const GlobalOptions& g) {
  return g.config_path.empty() ? pt::KeyValueConfig() : pt::KeyValueConfig::Load(g.config_path);
}

std::ofstream OpenOutput(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw pt::IoError("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

pt::ScoringKey LoadKey(const std::string& path) {
  return path.empty() ? pt::DefaultBfi44Key() : pt::ReadScoringKey(fs::path(path));
}

// Answers of the records, in the order of the feature table rows.
Eigen::MatrixXd AnswersFor(const pt::FeatureTable& table, const std::string& records_path) {
  const pt::Corpus corpus = pt::ParseCorpus(fs::path(records_path));
  std::map<std::string, const pt::UserRecord*> by_id;
  for (const auto& u : corpus.users) by_id[u.user_id] = &u;
  Eigen::MatrixXd answers(static_cast<Eigen::Index>(table.user_ids.size()), pt::kNumQuestions);
  for (std::size_t i = 0; i < table.user_ids.size(); ++i) {
    auto it = by_id.find(table.user_ids[i]);
    if (it == by_id.end() || !it->second->answers)
      throw pt::InvalidArgument("no questionnaire for user " + table.user_ids[i]);
    for (int q = 0; q < pt::kNumQuestions; ++q) answers(i, q) = (*it->second->answers)[q];
  }
  return answers;
}

std::vector<int> ReadLabels(const std::string& path, const std::string& target,
                            const std::vector<std::string>& users) {
  std::ifstream in(path);
  if (!in) throw pt::IoError("cannot open label file " + path);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  std::stringstream hs(line);
  for (std::string f; std::getline(hs, f, ',');) header.push_back(f);
  const auto col = std::find(header.begin(), header.end(), target) - header.begin();
  if (col == static_cast<long>(header.size()))
    throw pt::InvalidArgument("label file has no column " + target);
  std::map<std::string, int> by_id;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::vector<std::string> fields;
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (fields.size() != header.size()) throw pt::IoError("ragged label row: " + line);
    by_id[fields[0]] = std::stoi(fields[col]);
  }
  std::vector<int> labels;
  for (const auto& u : users) {
    auto it = by_id.find(u);
    if (it == by_id.end()) throw pt::InvalidArgument("no label for user " + u);
    labels.push_back(it->second);
  }
  return labels;
}

void Warn(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Behavioral features, Big Five scoring and reduction analysis"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--seed", g.seed, "Root random seed")->each([&](const std::string&) {
    g.seed_set = true;
  });
  app.add_option("--jobs", g.jobs, "Maximum worker threads")->check(CLI::PositiveNumber);
  app.add_option("--config", g.config_path, "Key-value configuration file")
      ->check(CLI::ExistingFile);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with planted truth");
  std::string synth_out, synth_truth;
  int synth_users = 0;
  synth->add_option("--output", synth_out, "Corpus file to write")->required();
  synth->add_option("--truth", synth_truth, "Ground-truth JSON file to write");
  synth->add_option("--users", synth_users, "Override the number of users");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Parse a corpus and apply the participant filter");
  std::string ingest_in, ingest_out;
  pt::FilterThresholds thresholds;
  ingest->add_option("--input", ingest_in, "Corpus file or directory")->required();
  ingest->add_option("--output", ingest_out, "Records file to write")->required();
  ingest->add_option("--min-texts", thresholds.min_texts, "Minimum texts");
  ingest->add_option("--min-calls", thresholds.min_calls, "Minimum calls");
  ingest->add_option("--min-gps", thresholds.min_gps, "Minimum GPS points");

  // extract
  auto* extract = app.add_subcommand("extract", "Compute the behavioral feature table");
  std::string extract_records, extract_out, extract_missing;
  extract->add_option("--records", extract_records, "Records file")->required();
  extract->add_option("--output", extract_out, "Feature CSV to write")->required();
  extract->add_option("--missingness", extract_missing, "Imputation flag CSV to write");

  // score
  auto* score = app.add_subcommand("score", "Score questionnaires into traits and tertiles");
  std::string score_records, score_key, score_out, score_labels;
  score->add_option("--records", score_records, "Records file")->required();
  score->add_option("--key", score_key, "Scoring key CSV (default: BFI-44)");
  score->add_option("--output", score_out, "Trait score CSV to write")->required();
  score->add_option("--labels", score_labels, "Tertile label CSV to write");

  // reduce
  auto* reduce = app.add_subcommand("reduce", "Fit a five-component projection of the answers");
  std::string reduce_answers, reduce_features, reduce_method = "pca", reduce_out, reduce_key;
  int reduce_k = 5;
  reduce->add_option("--answers", reduce_answers, "Records file holding the answers")->required();
  reduce->add_option("--features", reduce_features, "Feature CSV (needed by sdr)");
  reduce->add_option("--method", reduce_method, "big5, pca, ica, fa or sdr")
      ->check(CLI::IsMember({"big5", "pca", "ica", "fa", "sdr"}));
  reduce->add_option("--k", reduce_k, "Number of components")->check(CLI::PositiveNumber);
  reduce->add_option("--key", reduce_key, "Scoring key CSV for big5");
  reduce->add_option("--output", reduce_out, "Basis file to write")->required();

  // train
  auto* train = app.add_subcommand("train", "Grid-search and train a tertile classifier");
  std::string train_features, train_labels, train_grid, train_out, train_target = "E";
  train->add_option("--features", train_features, "Feature CSV")->required();
  train->add_option("--labels", train_labels, "Tertile label CSV")->required();
  train->add_option("--target", train_target, "Label column");
  train->add_option("--grid", train_grid, "Key-value file with a [learn] grid section")
      ->check(CLI::ExistingFile);
  train->add_option("--output", train_out, "Model JSON to write")->required();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Compare reductions by relative improvement");
  std::string eval_features, eval_records, eval_methods, eval_out, eval_key, eval_convention;
  int eval_runs = 0;
  evaluate->add_option("--features", eval_features, "Feature CSV")->required();
  evaluate->add_option("--records", eval_records, "Records file holding the answers")->required();
  evaluate->add_option("--method-list", eval_methods, "Comma-separated methods");
  evaluate->add_option("--runs", eval_runs, "Number of CV runs");
  evaluate->add_option("--convention", eval_convention, "folds or procedures")
      ->check(CLI::IsMember({"folds", "procedures"}));
  evaluate->add_option("--key", eval_key, "Scoring key CSV for big5");
  evaluate->add_option("--output", eval_out, "Report CSV to write")->required();

  // figures
  auto* figures = app.add_subcommand("figures", "Write figure-ready tables");
  std::string fig_report, fig_basis, fig_key, fig1_out, fig2_out;
  int fig_component = -1;
  figures->add_option("--report", fig_report, "Evaluation report CSV")->required();
  figures->add_option("--basis", fig_basis, "Basis file for the loading table")->required();
  figures->add_option("--key", fig_key, "Scoring key CSV");
  figures->add_option("--component", fig_component,
                      "Basis row (default: highest mean improvement)");
  figures->add_option("--fig1", fig1_out, "Improvement table to write")->required();
  figures->add_option("--fig2", fig2_out, "Loading table to write")->required();

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "Run every stage and write a manifest");
  std::string pipeline_dir;
  pipeline->add_option("--output-dir", pipeline_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    const pt::KeyValueConfig config = LoadConfig(g);
    const std::uint64_t seed =
        g.seed_set ? g.seed
                   : static_cast<std::uint64_t>(
                         config.GetInt("pipeline.seed", static_cast<long long>(g.seed)));

    if (*synth) {
      pt::SynthConfig sc = pt::LoadSynthConfig(config);
      if (g.seed_set || !config.Has("synth.seed")) sc.seed = seed;
      if (synth_users > 0) sc.n_users = synth_users;
      const pt::SynthOutput out = pt::GenerateCorpus(sc);
      pt::WriteCorpus(out.records, fs::path(synth_out));
      if (!synth_truth.empty()) {
        std::ofstream truth = OpenOutput(synth_truth);
        pt::WriteGroundTruth(out.truth, truth);
      }
      Warn(out.truth.warnings);
      std::cout << "wrote " << out.records.size() << " users to " << synth_out << '\n';
    } else if (*ingest) {
      const pt::Corpus corpus = pt::ParseCorpus(fs::path(ingest_in));
      const auto kept = pt::FilterParticipants(corpus.users, thresholds);
      pt::WriteCorpus(kept, fs::path(ingest_out));
      for (const auto& d : corpus.stats.diagnostics) std::cerr << "malformed: " << d << '\n';
      std::cout << corpus.stats.lines << " lines, " << corpus.stats.malformed << " malformed, "
                << corpus.stats.duplicates << " duplicates; kept " << kept.size() << " of "
                << corpus.users.size() << " users\n";
    } else if (*extract) {
      const pt::Corpus corpus = pt::ParseCorpus(fs::path(extract_records));
      const pt::FeatureTable table =
          pt::ExtractAll(corpus.users, pt::LoadFeatureConfig(config), g.jobs);
      pt::WriteFeatureTable(table, fs::path(extract_out));
      if (!extract_missing.empty()) {
        std::ofstream miss = OpenOutput(extract_missing);
        pt::WriteMissingness(table, miss);
      }
      std::cout << "wrote " << table.user_ids.size() << " x " << table.names.size()
                << " features\n";
    } else if (*score) {
      const pt::Corpus corpus = pt::ParseCorpus(fs::path(score_records));
      const pt::ScoringKey key = LoadKey(score_key.empty() ? config.GetString("scoring.key", "")
                                                           : score_key);
      std::vector<pt::TraitScores> scores;
      for (const auto& u : corpus.users) {
        if (!u.answers) {
          std::cerr << "warning: " << u.user_id << " has no questionnaire; skipped\n";
          continue;
        }
        scores.push_back(pt::ScoreTraits(u.user_id, *u.answers, key));
      }
      std::ofstream out = OpenOutput(score_out);
      out << "user_id";
      for (const auto& t : key.trait_names) out << ',' << t;
      out << '\n';
      for (const auto& s : scores) {
        out << s.user_id;
        for (double v : s.scores) out << ',' << v;
        out << '\n';
      }
      if (!score_labels.empty()) {
        std::array<std::vector<int>, pt::kNumTraits> labels;
        for (int t = 0; t < pt::kNumTraits; ++t) {
          std::vector<double> v;
          for (const auto& s : scores) v.push_back(s.scores[t]);
          if (pt::FitTertiles(v).degenerate)
            std::cerr << "warning: trait " << key.trait_names[t] << " is constant\n";
          labels[t] = pt::TertileLabels(v);
        }
        std::ofstream lab = OpenOutput(score_labels);
        lab << "user_id";
        for (const auto& t : key.trait_names) lab << ',' << t;
        lab << '\n';
        for (std::size_t i = 0; i < scores.size(); ++i) {
          lab << scores[i].user_id;
          for (int t = 0; t < pt::kNumTraits; ++t) lab << ',' << labels[t][i];
          lab << '\n';
        }
      }
    } else if (*reduce) {
      pt::EvaluationProtocol protocol = pt::LoadEvaluationProtocol(config);
      protocol.k = reduce_k;
      const auto method = *pt::ParseMethod(reduce_method);
      Eigen::MatrixXd features, answers;
      if (!reduce_features.empty()) {
        const pt::FeatureTable table = pt::ReadFeatureTable(fs::path(reduce_features));
        features = table.values;
        answers = AnswersFor(table, reduce_answers);
      } else {
        if (method == pt::ReductionMethod::kSdr)
          throw pt::InvalidArgument("sdr needs --features");
        const pt::Corpus corpus = pt::ParseCorpus(fs::path(reduce_answers));
        answers.resize(static_cast<Eigen::Index>(corpus.users.size()), pt::kNumQuestions);
        for (std::size_t i = 0; i < corpus.users.size(); ++i) {
          if (!corpus.users[i].answers)
            throw pt::InvalidArgument("no questionnaire for " + corpus.users[i].user_id);
          for (int q = 0; q < pt::kNumQuestions; ++q)
            answers(i, q) = (*corpus.users[i].answers)[q];
        }
        features.resize(answers.rows(), 0);
      }
      const pt::ProjectionBasis basis =
          pt::FitBasis(method, features, answers, LoadKey(reduce_key), protocol, seed);
      pt::WriteBasis(basis, fs::path(reduce_out));
      Warn(basis.warnings);
    } else if (*train) {
      const pt::FeatureTable table = pt::ReadFeatureTable(fs::path(train_features));
      const auto labels = ReadLabels(train_labels, train_target, table.user_ids);
      const pt::KeyValueConfig grid_cfg =
          train_grid.empty() ? config : pt::KeyValueConfig::Load(train_grid);
      pt::PipelineConfig defaults = pt::LoadPipelineConfig(grid_cfg);
      pt::CvOptions cv = defaults.cv;
      cv.seed = seed;
      cv.jobs = g.jobs;
      const pt::GridSearchResult result = pt::GridSearch(table.values, labels, defaults.grid, cv);
      const pt::SvmModel model = pt::TrainClassifier(table.values, labels, result.best, cv.smo);
      std::ofstream out = OpenOutput(train_out);
      pt::WriteModel(model, out);
      Warn(model.warnings);
      std::cout << "best C=" << result.best.cost << " gamma=" << result.best.gamma
                << " n=" << result.best.n_features << '\n';
    } else if (*evaluate) {
      pt::EvaluationProtocol protocol = pt::LoadEvaluationProtocol(config);
      if (!config.Has("evaluate.seed") || g.seed_set) protocol.seed = seed;
      protocol.jobs = g.jobs;
      if (!eval_methods.empty()) {
        protocol.methods.clear();
        std::stringstream ss(eval_methods);
        for (std::string m; std::getline(ss, m, ',');) {
          auto parsed = pt::ParseMethod(m);
          if (!parsed) throw pt::InvalidArgument("unknown method " + m);
          protocol.methods.push_back(*parsed);
        }
      }
      if (eval_runs > 0) protocol.runs = eval_runs;
      if (!eval_convention.empty())
        protocol.convention = eval_convention == "procedures" ? pt::RunConvention::kProcedures
                                                              : pt::RunConvention::kFolds;
      const pt::FeatureTable table = pt::ReadFeatureTable(fs::path(eval_features));
      const Eigen::MatrixXd answers = AnswersFor(table, eval_records);
      const pt::EvaluationReport report =
          pt::EvaluateReductions(table.values, answers, LoadKey(eval_key), protocol);
      std::ofstream out = OpenOutput(eval_out);
      pt::WriteEvaluationReport(report, protocol.k, out);
      for (const auto& s : report.summaries)
        std::cout << pt::MethodName(s.method) << ": mean S " << s.mean << " (sd " << s.stddev
                  << ")\n";
    } else if (*figures) {
      std::ifstream in(fig_report);
      if (!in) throw pt::IoError("cannot open report " + fig_report);
      const pt::EvaluationReport report = pt::ReadEvaluationReport(in);
      const pt::ProjectionBasis basis = pt::ReadBasis(fs::path(fig_basis));
      const pt::FigureTables tables =
          pt::EmitFigureData(report, basis, LoadKey(fig_key), fig_component);
      std::ofstream f1 = OpenOutput(fig1_out);
      pt::WriteImprovementTable(tables, f1);
      std::ofstream f2 = OpenOutput(fig2_out);
      pt::WriteLoadingTable(tables, f2);
    } else if (*pipeline) {
      pt::KeyValueConfig cfg = config;
      if (g.seed_set) cfg.Set("pipeline.seed", std::to_string(g.seed));
      pt::PipelineConfig pc = pt::LoadPipelineConfig(cfg);
      pc.jobs = g.jobs;
      if (!pipeline_dir.empty()) pc.output_dir = pipeline_dir;
      const pt::Manifest manifest = pt::RunPipeline(pc);
      for (const auto& e : manifest.entries) {
        std::cout << e.stage << ": " << (e.ok ? "ok" : "FAILED") << '\n';
        if (!e.diagnostic.empty()) std::cerr << e.diagnostic << '\n';
      }
      return manifest.ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
