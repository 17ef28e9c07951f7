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

#include "phonetraits/learn.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>

#include "json.hpp"
#include "phonetraits/linalg.h"
#include "phonetraits/parallel.h"
#include "phonetraits/types.h"

namespace phonetraits {
namespace {

using nlohmann::json;

std::vector<int> Gather(std::span<const int> values, const std::vector<int>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (int r : rows) out.push_back(values[r]);
  return out;
}

std::vector<int> Complement(int n, const std::vector<int>& rows) {
  std::vector<bool> in(n, false);
  for (int r : rows) in[r] = true;
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

json MatrixToJson(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd MatrixFromJson(const json& j, Eigen::Index cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != cols)
      throw IoError("model matrix row has the wrong width");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

json VectorToJson(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd VectorFromJson(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

}  // namespace

std::vector<int> SelectFeatures(const Eigen::MatrixXd& features,
                                std::span<const int> labels, int n) {
  if (static_cast<Eigen::Index>(labels.size()) != features.rows())
    throw InvalidArgument("label count does not match feature rows");
  Eigen::VectorXd y(features.rows());
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = labels[i];
  const auto m = static_cast<int>(features.cols());
  std::vector<double> score(m);
  for (int j = 0; j < m; ++j)
    score[j] = std::abs(PearsonCorrelation(features.col(j), y));
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return score[a] > score[b]; });
  order.resize(std::clamp(n, 0, m));
  return order;
}

SvmModel TrainClassifier(const Eigen::MatrixXd& features, std::span<const int> labels,
                         const Hyperparameters& hp, const SmoOptions& options) {
  if (hp.n_features < 1) throw InvalidArgument("n_features must be at least 1");
  const std::vector<int> selected = SelectFeatures(features, labels, hp.n_features);
  SvmModel model = TrainSvm(SelectColumns(features, selected), labels, hp, options);
  model.selected_features = selected;
  return model;
}

std::vector<int> PredictClassifier(const SvmModel& model, const Eigen::MatrixXd& features) {
  for (int c : model.selected_features)
    if (c < 0 || c >= features.cols())
      throw InvalidArgument("feature table is narrower than the model expects");
  return Predict(model, SelectColumns(features, model.selected_features));
}

double Accuracy(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size() || truth.empty())
    throw InvalidArgument("accuracy needs equal, nonempty label lists");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double BaselineAccuracy(std::span<const int> train_labels, std::span<const int> test_labels) {
  if (train_labels.empty() || test_labels.empty())
    throw InvalidArgument("baseline needs nonempty label lists");
  std::map<int, int> counts;
  for (int l : train_labels) ++counts[l];
  int best = counts.begin()->first;
  for (const auto& [label, count] : counts)
    if (count > counts[best]) best = label;
  const auto hits = std::count(test_labels.begin(), test_labels.end(), best);
  return static_cast<double>(hits) / static_cast<double>(test_labels.size());
}

double RelativeImprovement(double f_classifier, double f_baseline) {
  if (!(f_baseline > 0.0)) throw InvalidArgument("baseline accuracy must be positive");
  return f_classifier / f_baseline - 1.0;
}

std::vector<Split> StratifiedFolds(std::span<const int> labels, int folds,
                                   std::uint64_t seed) {
  if (folds < 2) throw InvalidArgument("need at least two folds");
  std::map<int, std::vector<int>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i)
    by_class[labels[i]].push_back(static_cast<int>(i));
  std::mt19937_64 rng(seed);
  std::vector<std::vector<int>> test(folds);
  std::size_t slot = 0;
  for (auto& [label, members] : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (int idx : members) test[slot++ % folds].push_back(idx);
  }
  std::vector<Split> splits(folds);
  const int n = static_cast<int>(labels.size());
  for (int f = 0; f < folds; ++f) {
    std::sort(test[f].begin(), test[f].end());
    splits[f].test = test[f];
    splits[f].train = Complement(n, test[f]);
  }
  return splits;
}

std::vector<Split> KFolds(int n, int folds, std::uint64_t seed) {
  if (folds < 2 || n < folds) throw InvalidArgument("need 2 <= folds <= rows");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Split> splits(folds);
  for (int i = 0; i < n; ++i) splits[i % folds].test.push_back(order[i]);
  for (auto& s : splits) {
    std::sort(s.test.begin(), s.test.end());
    s.train = Complement(n, s.test);
  }
  return splits;
}

CvReport CrossValidate(const Eigen::MatrixXd& features, std::span<const int> labels,
                       const Hyperparameters& hp, const CvOptions& options) {
  if (static_cast<Eigen::Index>(labels.size()) != features.rows())
    throw InvalidArgument("label count does not match feature rows");
  CvReport report;
  report.seed = options.seed;
  std::map<int, int> counts;
  for (int l : labels) ++counts[l];
  int smallest = static_cast<int>(labels.size());
  for (const auto& [label, count] : counts) smallest = std::min(smallest, count);
  int folds = options.folds;
  if (smallest < folds) {
    folds = std::max(2, smallest);
    report.warnings.push_back("smallest class has " + std::to_string(smallest) +
                              " members; using " + std::to_string(folds) + " folds");
  }

  std::vector<std::vector<FoldResult>> per_repeat(options.repeats);
  std::vector<std::vector<std::string>> repeat_warnings(options.repeats);
  ParallelFor(options.repeats, options.jobs, [&](int r) {
    const auto splits = StratifiedFolds(labels, folds, MixSeed(options.seed, r));
    for (int f = 0; f < folds; ++f) {
      const Split& s = splits[f];
      if (s.test.empty()) continue;
      const auto train_labels = Gather(labels, s.train);
      const auto test_labels = Gather(labels, s.test);
      const double baseline = BaselineAccuracy(train_labels, test_labels);
      if (baseline <= 0.0) {
        repeat_warnings[r].push_back("repeat " + std::to_string(r) + " fold " +
                                     std::to_string(f) + ": zero baseline, fold rejected");
        continue;
      }
      const SvmModel model =
          TrainClassifier(SelectRows(features, s.train), train_labels, hp, options.smo);
      const auto predicted = PredictClassifier(model, SelectRows(features, s.test));
      FoldResult fr;
      fr.repeat = r;
      fr.fold = f;
      fr.accuracy = Accuracy(predicted, test_labels);
      fr.baseline = baseline;
      fr.relative_improvement = RelativeImprovement(fr.accuracy, baseline);
      per_repeat[r].push_back(fr);
    }
  });

  double acc = 0.0, base = 0.0;
  for (int r = 0; r < options.repeats; ++r) {
    for (auto& w : repeat_warnings[r]) report.warnings.push_back(std::move(w));
    if (per_repeat[r].empty()) continue;
    double s = 0.0;
    for (const FoldResult& fr : per_repeat[r]) {
      s += fr.relative_improvement;
      acc += fr.accuracy;
      base += fr.baseline;
      report.folds.push_back(fr);
    }
    report.repeat_improvement.push_back(s / static_cast<double>(per_repeat[r].size()));
  }
  report.folds_used = static_cast<int>(report.folds.size());
  if (report.folds_used > 0) {
    report.mean_accuracy = acc / report.folds_used;
    report.mean_baseline = base / report.folds_used;
    report.relative_improvement = Mean(report.repeat_improvement);
    report.bootstrap_std = BootstrapStd(report.repeat_improvement, options.bootstrap_samples,
                                        MixSeed(options.seed, 0xb007));
  }
  return report;
}

double BootstrapStd(std::span<const double> values, int samples, std::uint64_t seed) {
  if (values.empty() || samples < 2) return 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
  std::vector<double> means(samples);
  for (int b = 0; b < samples; ++b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) sum += values[pick(rng)];
    means[b] = sum / static_cast<double>(values.size());
  }
  return PopulationStd(means);
}

GridSearchResult GridSearch(const Eigen::MatrixXd& features, std::span<const int> labels,
                            const GridSpec& grid, const CvOptions& options) {
  auto sorted_unique = [](auto values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
  };
  const auto costs = sorted_unique(grid.cost);
  const auto gammas = sorted_unique(grid.gamma);
  std::vector<int> ns;
  for (int n : grid.n_features)
    ns.push_back(std::clamp(n, 1, static_cast<int>(features.cols())));
  ns = sorted_unique(ns);
  if (costs.empty() || gammas.empty() || ns.empty())
    throw InvalidArgument("every grid axis needs at least one value");

  GridSearchResult result;
  double best = -1.0;
  // Ascending iteration with a strict comparison implements the tie-break.
  for (double c : costs) {
    for (double g : gammas) {
      for (int n : ns) {
        Hyperparameters hp{c, g, n, grid.kernel};
        const CvReport cv = CrossValidate(features, labels, hp, options);
        result.points.push_back({hp, cv.mean_accuracy});
        if (cv.mean_accuracy > best) {
          best = cv.mean_accuracy;
          result.best = hp;
        }
      }
    }
  }
  return result;
}

void WriteModel(const SvmModel& model, std::ostream& out) {
  json j;
  j["format"] = "phonetraits-svm-1";
  j["hyperparameters"] = {{"cost", model.hp.cost},
                          {"gamma", model.hp.gamma},
                          {"n_features", model.hp.n_features},
                          {"kernel", std::string(KernelName(model.hp.kernel))}};
  j["selected_features"] = model.selected_features;
  j["mean"] = VectorToJson(model.mean);
  j["scale"] = VectorToJson(model.scale);
  j["classes"] = model.classes;
  j["constant"] = model.constant;
  j["constant_label"] = model.constant_label;
  j["warnings"] = model.warnings;
  json machines = json::array();
  for (const BinarySvm& m : model.machines) {
    machines.push_back({{"positive_label", m.positive_label},
                        {"negative_label", m.negative_label},
                        {"bias", m.bias},
                        {"iterations", m.iterations},
                        {"coefficients", VectorToJson(m.coefficients)},
                        {"support_vectors", MatrixToJson(m.support_vectors)}});
  }
  j["machines"] = std::move(machines);
  out << j.dump(1) << '\n';
}

SvmModel ReadModel(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    SvmModel model;
    const json& hp = j.at("hyperparameters");
    model.hp.cost = hp.at("cost").get<double>();
    model.hp.gamma = hp.at("gamma").get<double>();
    model.hp.n_features = hp.at("n_features").get<int>();
    model.hp.kernel =
        hp.at("kernel").get<std::string>() == "linear" ? KernelType::kLinear : KernelType::kRbf;
    model.selected_features = j.at("selected_features").get<std::vector<int>>();
    model.mean = VectorFromJson(j.at("mean"));
    model.scale = VectorFromJson(j.at("scale"));
    model.classes = j.at("classes").get<std::vector<int>>();
    model.constant = j.at("constant").get<bool>();
    model.constant_label = j.at("constant_label").get<int>();
    model.warnings = j.at("warnings").get<std::vector<std::string>>();
    for (const json& m : j.at("machines")) {
      BinarySvm machine;
      machine.positive_label = m.at("positive_label").get<int>();
      machine.negative_label = m.at("negative_label").get<int>();
      machine.bias = m.at("bias").get<double>();
      machine.iterations = m.at("iterations").get<int>();
      machine.coefficients = VectorFromJson(m.at("coefficients"));
      machine.support_vectors = MatrixFromJson(m.at("support_vectors"), model.mean.size());
      model.machines.push_back(std::move(machine));
    }
    return model;
  } catch (const json::exception& e) {
    throw IoError(std::string("model file is missing fields: ") + e.what());
  }
}

}  // namespace phonetraits
