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

#include "phonetraits/pipeline.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <openssl/evp.h>

#include "json.hpp"
#include "phonetraits/feature_table.h"
#include "phonetraits/linalg.h"
#include "phonetraits/scoring.h"

namespace phonetraits {
namespace fs = std::filesystem;

namespace {

std::ofstream OpenOutput(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

void RequireFile(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("required input file not found: " + path.string());
}

Eigen::MatrixXd AnswerMatrix(const std::vector<UserRecord>& users) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(users.size()), kNumQuestions);
  for (std::size_t u = 0; u < users.size(); ++u) {
    if (!users[u].answers) throw InvalidArgument("user " + users[u].user_id + " has no answers");
    for (int q = 0; q < kNumQuestions; ++q) a(u, q) = (*users[u].answers)[q];
  }
  return a;
}

// Answers aligned to the feature table's user order.
Eigen::MatrixXd AlignedAnswers(const FeatureTable& table, const std::vector<UserRecord>& users) {
  std::map<std::string, const UserRecord*> by_id;
  for (const auto& u : users) by_id[u.user_id] = &u;
  std::vector<UserRecord> ordered;
  for (const auto& id : table.user_ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw InvalidArgument("no record for feature row " + id);
    ordered.push_back(*it->second);
  }
  return AnswerMatrix(ordered);
}

ScoringKey LoadKey(const PipelineConfig& config) {
  if (config.key_path.empty()) return DefaultBfi44Key();
  RequireFile(config.key_path);
  return ReadScoringKey(config.key_path);
}

std::vector<int> ReadLabelColumn(const fs::path& path, const std::string& target,
                                 const std::vector<std::string>& user_ids) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) header.push_back(f);
  }
  const auto col = std::find(header.begin(), header.end(), target) - header.begin();
  if (col == static_cast<long>(header.size()))
    throw InvalidArgument("label file has no column " + target);
  std::map<std::string, int> labels;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::vector<std::string> fields;
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != header.size()) throw IoError("ragged label row: " + line);
    labels[fields[0]] = std::stoi(fields[col]);
  }
  std::vector<int> out;
  for (const auto& id : user_ids) {
    auto it = labels.find(id);
    if (it == labels.end()) throw InvalidArgument("no label for user " + id);
    out.push_back(it->second);
  }
  return out;
}

class Runner {
 public:
  explicit Runner(const PipelineConfig& config) : cfg_(config), dir_(config.output_dir) {}

  Manifest Run() {
    fs::create_directories(dir_);
    Manifest manifest;
    for (const std::string& stage : PipelineStages()) {
      if (!cfg_.stages.contains(stage)) continue;
      ManifestEntry entry;
      entry.stage = stage;
      try {
        std::vector<std::string> files = RunStage(stage);
        for (const auto& f : files) entry.files.push_back({f, Sha256File(dir_ / f)});
        entry.ok = true;
      } catch (const std::exception& e) {
        entry.ok = false;
        entry.diagnostic = "stage " + stage + ": " + e.what();
        manifest.ok = false;
      }
      manifest.entries.push_back(std::move(entry));
      if (!manifest.ok) break;
    }
    std::ofstream out = OpenOutput(dir_ / "manifest.json");
    WriteManifest(manifest, out);
    return manifest;
  }

 private:
  std::vector<std::string> RunStage(const std::string& stage) {
    if (stage == "synth") return Synth();
    if (stage == "ingest") return Ingest();
    if (stage == "extract") return Extract();
    if (stage == "score") return Score();
    if (stage == "reduce") return Reduce();
    if (stage == "train") return Train();
    if (stage == "evaluate") return Evaluate();
    throw InvalidArgument("unknown stage " + stage);
  }

  std::vector<std::string> Synth() {
    const SynthOutput out = GenerateCorpus(cfg_.synth);
    WriteCorpus(out.records, dir_ / "corpus.jsonl");
    std::ofstream truth = OpenOutput(dir_ / "truth.json");
    WriteGroundTruth(out.truth, truth);
    return {"corpus.jsonl", "truth.json"};
  }

  std::vector<std::string> Ingest() {
    const fs::path corpus = cfg_.stages.contains("synth") || cfg_.corpus_path.empty()
                                ? dir_ / "corpus.jsonl"
                                : cfg_.corpus_path;
    RequireFile(corpus);
    const Corpus parsed = ParseCorpus(corpus);
    const auto kept = FilterParticipants(parsed.users, cfg_.filter);
    WriteCorpus(kept, dir_ / "records.jsonl");
    return {"records.jsonl"};
  }

  std::vector<UserRecord> Records() {
    RequireFile(dir_ / "records.jsonl");
    return ParseCorpus(dir_ / "records.jsonl").users;
  }

  FeatureTable Features() {
    RequireFile(dir_ / "features.csv");
    return ReadFeatureTable(dir_ / "features.csv");
  }

  std::vector<std::string> Extract() {
    const auto users = Records();
    const FeatureTable table = ExtractAll(users, cfg_.features, cfg_.jobs);
    WriteFeatureTable(table, dir_ / "features.csv");
    std::ofstream miss = OpenOutput(dir_ / "missingness.csv");
    WriteMissingness(table, miss);
    return {"features.csv", "missingness.csv"};
  }

  std::vector<std::string> Score() {
    const auto users = Records();
    const ScoringKey key = LoadKey(cfg_);
    std::ofstream scores = OpenOutput(dir_ / "scores.csv");
    std::ofstream labels = OpenOutput(dir_ / "labels.csv");
    scores << "user_id";
    labels << "user_id";
    for (const auto& t : key.trait_names) {
      scores << ',' << t;
      labels << ',' << t;
    }
    scores << '\n';
    labels << '\n';
    std::vector<TraitScores> all;
    for (const auto& u : users) {
      if (!u.answers) throw InvalidArgument("user " + u.user_id + " has no answers");
      all.push_back(ScoreTraits(u.user_id, *u.answers, key));
    }
    std::array<std::vector<int>, kNumTraits> trait_labels;
    for (int t = 0; t < kNumTraits; ++t) {
      std::vector<double> v;
      for (const auto& s : all) v.push_back(s.scores[t]);
      trait_labels[t] = TertileLabels(v);
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
      scores << all[i].user_id;
      labels << all[i].user_id;
      for (int t = 0; t < kNumTraits; ++t) {
        scores << ',' << all[i].scores[t];
        labels << ',' << trait_labels[t][i];
      }
      scores << '\n';
      labels << '\n';
    }
    return {"scores.csv", "labels.csv"};
  }

  std::vector<std::string> Reduce() {
    const FeatureTable table = Features();
    const Eigen::MatrixXd answers = AlignedAnswers(table, Records());
    const ScoringKey key = LoadKey(cfg_);
    std::vector<std::string> files;
    for (ReductionMethod m : cfg_.evaluation.methods) {
      const ProjectionBasis basis =
          FitBasis(m, table.values, answers, key, cfg_.evaluation,
                   MixSeed(cfg_.evaluation.seed, static_cast<std::uint64_t>(m)));
      const std::string name = "basis_" + std::string(MethodName(m)) + ".csv";
      WriteBasis(basis, dir_ / name);
      files.push_back(name);
    }
    return files;
  }

  std::vector<std::string> Train() {
    const FeatureTable table = Features();
    RequireFile(dir_ / "labels.csv");
    const auto labels = ReadLabelColumn(dir_ / "labels.csv", cfg_.train_target, table.user_ids);
    const GridSearchResult search = GridSearch(table.values, labels, cfg_.grid, cfg_.cv);
    const SvmModel model = TrainClassifier(table.values, labels, search.best, cfg_.cv.smo);
    std::ofstream out = OpenOutput(dir_ / "model.json");
    WriteModel(model, out);
    std::ofstream grid = OpenOutput(dir_ / "grid.csv");
    grid << "cost,gamma,n_features,mean_accuracy\n";
    for (const auto& p : search.points)
      grid << p.hp.cost << ',' << p.hp.gamma << ',' << p.hp.n_features << ','
           << p.mean_accuracy << '\n';
    return {"model.json", "grid.csv"};
  }

  std::vector<std::string> Evaluate() {
    const FeatureTable table = Features();
    const Eigen::MatrixXd answers = AlignedAnswers(table, Records());
    const ScoringKey key = LoadKey(cfg_);
    EvaluationProtocol protocol = cfg_.evaluation;
    protocol.jobs = cfg_.jobs;
    const EvaluationReport report = EvaluateReductions(table.values, answers, key, protocol);
    std::ofstream out = OpenOutput(dir_ / "report.csv");
    WriteEvaluationReport(report, protocol.k, out);

    // The loading figure uses ICA when available, as in the study.
    ReductionMethod figure_method = protocol.methods.front();
    if (std::find(protocol.methods.begin(), protocol.methods.end(), ReductionMethod::kIca) !=
        protocol.methods.end())
      figure_method = ReductionMethod::kIca;
    const fs::path basis_path =
        dir_ / ("basis_" + std::string(MethodName(figure_method)) + ".csv");
    const ProjectionBasis basis =
        fs::exists(basis_path)
            ? ReadBasis(basis_path)
            : FitBasis(figure_method, table.values, answers, key, protocol,
                       MixSeed(protocol.seed, static_cast<std::uint64_t>(figure_method)));
    const FigureTables tables = EmitFigureData(report, basis, key);
    std::ofstream fig1 = OpenOutput(dir_ / "fig1.csv");
    WriteImprovementTable(tables, fig1);
    std::ofstream fig2 = OpenOutput(dir_ / "fig2.csv");
    WriteLoadingTable(tables, fig2);
    return {"report.csv", "fig1.csv", "fig2.csv"};
  }

  const PipelineConfig& cfg_;
  fs::path dir_;
};

}  // namespace

FeatureConfig LoadFeatureConfig(const KeyValueConfig& c) {
  FeatureConfig f;
  f.utc_offset_seconds = c.GetInt("features.utc_offset_seconds", f.utc_offset_seconds);
  f.bin_width_seconds = c.GetInt("features.bin_width_seconds", f.bin_width_seconds);
  f.ar_order = static_cast<int>(c.GetInt("features.ar_order", f.ar_order));
  f.night_start_hour = static_cast<int>(c.GetInt("features.night_start_hour", f.night_start_hour));
  f.night_end_hour = static_cast<int>(c.GetInt("features.night_end_hour", f.night_end_hour));
  f.response_window_seconds =
      c.GetInt("features.response_window_seconds", f.response_window_seconds);
  f.early_window_seconds = c.GetInt("features.early_window_seconds", f.early_window_seconds);
  f.contact_entropy_bin_seconds =
      c.GetInt("features.contact_entropy_bin_seconds", f.contact_entropy_bin_seconds);
  f.stationary_max_speed = c.GetDouble("features.stationary_max_speed", f.stationary_max_speed);
  f.gps_min_gap_seconds = c.GetInt("features.gps_min_gap_seconds", f.gps_min_gap_seconds);
  f.dbscan_epsilon_meters =
      c.GetDouble("features.dbscan_epsilon_meters", f.dbscan_epsilon_meters);
  f.dbscan_min_points =
      static_cast<int>(c.GetInt("features.dbscan_min_points", f.dbscan_min_points));
  f.autocovariance_lags = c.GetIntList("features.autocovariance_lags", f.autocovariance_lags);
  return f;
}

SynthConfig LoadSynthConfig(const KeyValueConfig& c) {
  SynthConfig s;
  s.n_users = static_cast<int>(c.GetInt("synth.n_users", s.n_users));
  s.seed = static_cast<std::uint64_t>(c.GetInt("synth.seed", static_cast<long long>(s.seed)));
  s.days = static_cast<int>(c.GetInt("synth.days", s.days));
  s.start = c.GetInt("synth.start", s.start);
  s.utc_offset_seconds = c.GetInt("synth.utc_offset_seconds", s.utc_offset_seconds);
  s.text_rate_per_day = c.GetDouble("synth.text_rate_per_day", s.text_rate_per_day);
  s.call_rate_per_day = c.GetDouble("synth.call_rate_per_day", s.call_rate_per_day);
  s.rate_spread = c.GetDouble("synth.rate_spread", s.rate_spread);
  s.min_rate_per_day = c.GetDouble("synth.min_rate_per_day", s.min_rate_per_day);
  s.reply_probability = c.GetDouble("synth.reply_probability", s.reply_probability);
  s.mean_reply_delay_seconds =
      c.GetDouble("synth.mean_reply_delay_seconds", s.mean_reply_delay_seconds);
  s.mean_call_duration_seconds =
      c.GetDouble("synth.mean_call_duration_seconds", s.mean_call_duration_seconds);
  s.min_contacts = static_cast<int>(c.GetInt("synth.min_contacts", s.min_contacts));
  s.max_contacts = static_cast<int>(c.GetInt("synth.max_contacts", s.max_contacts));
  s.max_zipf_exponent = c.GetDouble("synth.max_zipf_exponent", s.max_zipf_exponent);
  s.facebook_friends_mean = c.GetDouble("synth.facebook_friends_mean", s.facebook_friends_mean);
  s.city_latitude = c.GetDouble("synth.city_latitude", s.city_latitude);
  s.city_longitude = c.GetDouble("synth.city_longitude", s.city_longitude);
  s.city_radius_meters = c.GetDouble("synth.city_radius_meters", s.city_radius_meters);
  s.jitter_meters = c.GetDouble("synth.jitter_meters", s.jitter_meters);
  s.gps_interval_seconds = c.GetInt("synth.gps_interval_seconds", s.gps_interval_seconds);
  s.scan_interval_seconds = c.GetInt("synth.scan_interval_seconds", s.scan_interval_seconds);
  s.peers_per_user = static_cast<int>(c.GetInt("synth.peers_per_user", s.peers_per_user));
  s.proximity_probability = c.GetDouble("synth.proximity_probability", s.proximity_probability);
  const auto p = c.GetDoubleList("synth.p_star", {});
  if (!p.empty()) s.p_star = Eigen::Map<const Eigen::VectorXd>(p.data(), p.size());
  const auto a = c.GetDoubleList("synth.alpha_star", {});
  if (!a.empty()) s.alpha_star = Eigen::Map<const Eigen::VectorXd>(a.data(), a.size());
  s.signal_features = c.GetStringList("synth.signal_features", s.signal_features);
  s.signal_scale = c.GetDouble("synth.signal_scale", s.signal_scale);
  s.sigma = c.GetDouble("synth.sigma", s.sigma);
  s.trait_loading = c.GetDouble("synth.trait_loading", s.trait_loading);
  s.noise_scale = c.GetDouble("synth.noise_scale", s.noise_scale);
  s.overlap = c.GetDouble("synth.overlap", s.overlap);
  s.key_alignment = c.GetDouble("synth.key_alignment", s.key_alignment);
  s.max_clip_fraction = c.GetDouble("synth.max_clip_fraction", s.max_clip_fraction);
  return s;
}

EvaluationProtocol LoadEvaluationProtocol(const KeyValueConfig& c) {
  EvaluationProtocol e;
  if (c.Has("evaluate.methods")) {
    e.methods.clear();
    for (const auto& name : c.GetStringList("evaluate.methods", {})) {
      auto m = ParseMethod(name);
      if (!m) throw InvalidArgument("unknown reduction method " + name);
      e.methods.push_back(*m);
    }
    if (e.methods.empty()) throw InvalidArgument("evaluate.methods is empty");
  }
  e.runs = static_cast<int>(c.GetInt("evaluate.runs", e.runs));
  e.folds = static_cast<int>(c.GetInt("evaluate.folds", e.folds));
  const std::string convention = c.GetString("evaluate.convention", "folds");
  if (convention == "folds") {
    e.convention = RunConvention::kFolds;
  } else if (convention == "procedures") {
    e.convention = RunConvention::kProcedures;
  } else {
    throw InvalidArgument("evaluate.convention must be folds or procedures");
  }
  e.seed = static_cast<std::uint64_t>(c.GetInt("evaluate.seed", static_cast<long long>(e.seed)));
  e.hp.cost = c.GetDouble("evaluate.cost", e.hp.cost);
  e.hp.gamma = c.GetDouble("evaluate.gamma", e.hp.gamma);
  e.hp.n_features = static_cast<int>(c.GetInt("evaluate.n_features", e.hp.n_features));
  e.hp.kernel = c.GetString("evaluate.kernel", "rbf") == "linear" ? KernelType::kLinear
                                                                  : KernelType::kRbf;
  e.smo.tolerance = c.GetDouble("learn.tolerance", e.smo.tolerance);
  e.k = static_cast<int>(c.GetInt("reduce.k", e.k));
  e.sdr_features = static_cast<int>(c.GetInt("reduce.sdr_features", e.sdr_features));
  e.sdr_rank_folds = static_cast<int>(c.GetInt("reduce.sdr_rank_folds", e.sdr_rank_folds));
  e.sdr.starts = static_cast<int>(c.GetInt("reduce.sdr_starts", e.sdr.starts));
  e.sdr.max_alternations =
      static_cast<int>(c.GetInt("reduce.sdr_max_alternations", e.sdr.max_alternations));
  e.sdr.r2_tolerance = c.GetDouble("reduce.sdr_r2_tolerance", e.sdr.r2_tolerance);
  e.ica.max_iterations =
      static_cast<int>(c.GetInt("reduce.ica_max_iterations", e.ica.max_iterations));
  e.ica.tolerance = c.GetDouble("reduce.ica_tolerance", e.ica.tolerance);
  e.fa.max_iterations =
      static_cast<int>(c.GetInt("reduce.fa_max_iterations", e.fa.max_iterations));
  e.fa.tolerance = c.GetDouble("reduce.fa_tolerance", e.fa.tolerance);
  return e;
}

GridSpec LoadGridSpec(const KeyValueConfig& c) {
  GridSpec g;
  g.cost = c.GetDoubleList("learn.cost", g.cost);
  g.gamma = c.GetDoubleList("learn.gamma", g.gamma);
  g.n_features = c.GetIntList("learn.n_features", g.n_features);
  g.kernel = c.GetString("learn.kernel", "rbf") == "linear" ? KernelType::kLinear
                                                            : KernelType::kRbf;
  return g;
}

PipelineConfig LoadPipelineConfig(const KeyValueConfig& c) {
  PipelineConfig p;
  p.output_dir = c.GetString("pipeline.output_dir", p.output_dir.string());
  if (c.Has("pipeline.stages")) {
    p.stages.clear();
    for (const auto& s : c.GetStringList("pipeline.stages", {})) {
      if (std::find(PipelineStages().begin(), PipelineStages().end(), s) ==
          PipelineStages().end())
        throw InvalidArgument("unknown pipeline stage " + s);
      p.stages.insert(s);
    }
  }
  p.seed = static_cast<std::uint64_t>(c.GetInt("pipeline.seed", static_cast<long long>(p.seed)));
  p.jobs = static_cast<int>(c.GetInt("pipeline.jobs", p.jobs));
  p.corpus_path = c.GetString("pipeline.corpus", "");
  p.key_path = c.GetString("scoring.key", "");
  p.train_target = c.GetString("learn.target", p.train_target);
  p.features = LoadFeatureConfig(c);
  p.synth = LoadSynthConfig(c);
  if (!c.Has("synth.seed")) p.synth.seed = p.seed;
  p.synth.utc_offset_seconds = c.GetInt("synth.utc_offset_seconds", p.features.utc_offset_seconds);
  p.filter.min_texts = static_cast<int>(c.GetInt("ingest.min_texts", p.filter.min_texts));
  p.filter.min_calls = static_cast<int>(c.GetInt("ingest.min_calls", p.filter.min_calls));
  p.filter.min_gps = static_cast<int>(c.GetInt("ingest.min_gps", p.filter.min_gps));
  p.filter.min_friends = static_cast<int>(c.GetInt("ingest.min_friends", p.filter.min_friends));
  p.evaluation = LoadEvaluationProtocol(c);
  if (!c.Has("evaluate.seed")) p.evaluation.seed = p.seed;
  p.grid.cost = c.GetDoubleList("learn.cost", p.grid.cost);
  p.grid.gamma = c.GetDoubleList("learn.gamma", p.grid.gamma);
  p.grid.n_features = c.GetIntList("learn.n_features", p.grid.n_features);
  p.grid.kernel = c.GetString("learn.kernel", "rbf") == "linear" ? KernelType::kLinear
                                                                 : KernelType::kRbf;
  p.cv.repeats = static_cast<int>(c.GetInt("learn.repeats", p.cv.repeats));
  p.cv.folds = static_cast<int>(c.GetInt("learn.folds", p.cv.folds));
  p.cv.bootstrap_samples =
      static_cast<int>(c.GetInt("learn.bootstrap_samples", p.cv.bootstrap_samples));
  p.cv.smo.tolerance = c.GetDouble("learn.tolerance", p.cv.smo.tolerance);
  p.cv.seed = static_cast<std::uint64_t>(c.GetInt("learn.seed", static_cast<long long>(p.seed)));
  return p;
}

Manifest RunPipeline(const PipelineConfig& config) {
  PipelineConfig cfg = config;
  cfg.cv.jobs = cfg.jobs;
  cfg.evaluation.jobs = cfg.jobs;
  return Runner(cfg).Run();
}

void WriteManifest(const Manifest& manifest, std::ostream& out) {
  nlohmann::ordered_json j;
  j["ok"] = manifest.ok;
  nlohmann::ordered_json stages = nlohmann::ordered_json::array();
  for (const ManifestEntry& e : manifest.entries) {
    nlohmann::ordered_json entry;
    entry["stage"] = e.stage;
    entry["ok"] = e.ok;
    if (!e.diagnostic.empty()) entry["diagnostic"] = e.diagnostic;
    nlohmann::ordered_json files = nlohmann::ordered_json::array();
    for (const ManifestFile& f : e.files) files.push_back({{"path", f.path}, {"sha256", f.sha256}});
    entry["files"] = std::move(files);
    stages.push_back(std::move(entry));
  }
  j["stages"] = std::move(stages);
  out << j.dump(2) << '\n';
}

std::string Sha256File(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot hash " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw IoError("SHA-256 initialization failed");
  }
  std::vector<char> buffer(1 << 16);
  while (in) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buffer.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx, digest, &length);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

FigureTables EmitFigureData(const EvaluationReport& report, const ProjectionBasis& basis,
                            const ScoringKey& key, int component) {
  FigureTables tables;
  for (const MethodRun& r : report.runs)
    tables.improvement_rows.emplace_back(std::string(MethodName(r.method)), r.run,
                                         r.relative_improvement);
  if (basis.components() == 0) return tables;
  if (component < 0) {
    component = 0;
    if (const MethodSummary* s = report.Summary(basis.method)) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < s->component_mean.size(); ++c) {
        if (static_cast<int>(c) < basis.components() && s->component_mean[c] > best) {
          best = s->component_mean[c];
          component = static_cast<int>(c);
        }
      }
    }
  }
  if (component >= basis.components()) throw InvalidArgument("component index out of range");
  tables.component = component;
  const Eigen::Index d = basis.rows.cols();
  std::array<double, kNumTraits> sum{};
  std::array<int, kNumTraits> count{};
  for (Eigen::Index q = 0; q < d; ++q) {
    const int t = q < kNumQuestions ? key.question_trait[q] : -1;
    const double loading = basis.rows(component, q);
    tables.loading_rows.emplace_back(static_cast<int>(q + 1),
                                     t >= 0 ? key.trait_names[t] : std::string(), loading);
    if (t >= 0) {
      sum[t] += loading;
      ++count[t];
    }
  }
  for (int t = 0; t < kNumTraits; ++t)
    if (count[t] > 0) tables.trait_mean_rows.emplace_back(key.trait_names[t], sum[t] / count[t]);
  return tables;
}

void WriteImprovementTable(const FigureTables& tables, std::ostream& out) {
  out << std::setprecision(17) << "method,run,relative_improvement\n";
  for (const auto& [method, run, s] : tables.improvement_rows)
    out << method << ',' << run << ',' << s << '\n';
}

void WriteLoadingTable(const FigureTables& tables, std::ostream& out) {
  out << std::setprecision(17) << "kind,question,trait,loading\n";
  for (const auto& [q, trait, loading] : tables.loading_rows)
    out << "question," << q << ',' << trait << ',' << loading << '\n';
  for (const auto& [trait, mean] : tables.trait_mean_rows)
    out << "trait_mean,," << trait << ',' << mean << '\n';
}

}  // namespace phonetraits
