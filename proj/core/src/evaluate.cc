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

#include "phonetraits/evaluate.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "phonetraits/linalg.h"
#include "phonetraits/parallel.h"

namespace phonetraits {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ComponentOutcome {
  double improvement = kNaN;
  double accuracy = kNaN;
  double baseline = kNaN;
};

// Classifies every component of one fitted basis on one split.
std::vector<ComponentOutcome> EvaluateBasis(const ProjectionBasis& basis,
                                            const Eigen::MatrixXd& features,
                                            const Eigen::MatrixXd& answers,
                                            const Split& split,
                                            const EvaluationProtocol& protocol,
                                            std::vector<std::string>& warnings) {
  const Eigen::MatrixXd scores = Project(answers, basis);
  const Eigen::MatrixXd train_x = SelectRows(features, split.train);
  const Eigen::MatrixXd test_x = SelectRows(features, split.test);
  std::vector<ComponentOutcome> out(basis.components());
  for (int c = 0; c < basis.components(); ++c) {
    std::vector<double> train_scores;
    for (int r : split.train) train_scores.push_back(scores(r, c));
    const TertileCuts cuts = FitTertiles(train_scores);
    if (cuts.degenerate) {
      warnings.push_back(std::string(MethodName(basis.method)) + " component " +
                         std::to_string(c + 1) + " is constant; skipped");
      continue;
    }
    std::vector<int> train_labels, test_labels;
    for (double v : train_scores) train_labels.push_back(cuts.Label(v));
    for (int r : split.test) test_labels.push_back(cuts.Label(scores(r, c)));
    const double baseline = BaselineAccuracy(train_labels, test_labels);
    if (baseline <= 0.0) {
      warnings.push_back(std::string(MethodName(basis.method)) + " component " +
                         std::to_string(c + 1) + ": zero baseline; skipped");
      continue;
    }
    const SvmModel model = TrainClassifier(train_x, train_labels, protocol.hp, protocol.smo);
    const double accuracy = Accuracy(PredictClassifier(model, test_x), test_labels);
    out[c] = {RelativeImprovement(accuracy, baseline), accuracy, baseline};
  }
  return out;
}

double NanMean(const std::vector<double>& values) {
  double sum = 0.0;
  int count = 0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    sum += v;
    ++count;
  }
  return count ? sum / count : kNaN;
}

}  // namespace

const MethodSummary* EvaluationReport::Summary(ReductionMethod method) const {
  for (const MethodSummary& s : summaries)
    if (s.method == method) return &s;
  return nullptr;
}

ProjectionBasis FitBasis(ReductionMethod method, const Eigen::MatrixXd& features,
                         const Eigen::MatrixXd& answers, const ScoringKey& key,
                         const EvaluationProtocol& protocol, std::uint64_t seed) {
  switch (method) {
    case ReductionMethod::kBig5:
      return Big5Basis(key);
    case ReductionMethod::kPca:
      return PcaFit(answers, protocol.k).basis;
    case ReductionMethod::kIca: {
      IcaOptions opts = protocol.ica;
      opts.k = protocol.k;
      opts.seed = seed;
      return IcaFit(answers, opts).basis;
    }
    case ReductionMethod::kFa: {
      FaOptions opts = protocol.fa;
      opts.k = protocol.k;
      return FaFit(answers, opts).basis;
    }
    case ReductionMethod::kSdr: {
      std::vector<int> ranking =
          SdrRankFeatures(features, answers, protocol.sdr_rank_folds, seed);
      ranking.resize(std::min<std::size_t>(ranking.size(), protocol.sdr_features));
      SdrOptions opts = protocol.sdr;
      opts.k = protocol.k;
      opts.seed = seed;
      ProjectionBasis basis = SdrFit(SelectColumns(features, ranking), answers, opts).basis;
      std::string list;
      for (int f : ranking) list += (list.empty() ? "" : " ") + std::to_string(f);
      basis.warnings.insert(basis.warnings.begin(), "selected features: " + list);
      return basis;
    }
  }
  throw InvalidArgument("unknown reduction method");
}

EvaluationReport EvaluateReductions(const Eigen::MatrixXd& features,
                                    const Eigen::MatrixXd& answers, const ScoringKey& key,
                                    const EvaluationProtocol& protocol) {
  if (features.rows() != answers.rows())
    throw InvalidArgument("features and answers have different row counts");
  if (protocol.runs < 1 || protocol.folds < 2)
    throw InvalidArgument("need at least one run and two folds");
  const int n = static_cast<int>(answers.rows());
  const int folds = protocol.folds;
  const int repeats = protocol.convention == RunConvention::kFolds
                          ? (protocol.runs + folds - 1) / folds
                          : protocol.runs;
  const int tasks = protocol.convention == RunConvention::kFolds
                        ? protocol.runs
                        : protocol.runs * folds;
  const auto methods = protocol.methods;
  const std::size_t n_methods = methods.size();

  // results[task][method] holds per-component outcomes of one fold.
  std::vector<std::vector<std::vector<ComponentOutcome>>> results(tasks);
  std::vector<std::vector<std::string>> warnings(tasks);
  std::vector<std::vector<Split>> splits(repeats);
  for (int r = 0; r < repeats; ++r) splits[r] = KFolds(n, folds, MixSeed(protocol.seed, r));

  ParallelFor(tasks, protocol.jobs, [&](int task) {
    const int r = task / folds;
    const int f = task % folds;
    const Split& split = splits[r][f];
    const Eigen::MatrixXd train_f = SelectRows(features, split.train);
    const Eigen::MatrixXd train_a = SelectRows(answers, split.train);
    results[task].resize(n_methods);
    for (std::size_t m = 0; m < n_methods; ++m) {
      const ProjectionBasis basis =
          FitBasis(methods[m], train_f, train_a, key, protocol,
                   MixSeed(protocol.seed, r, f, static_cast<std::uint64_t>(methods[m])));
      results[task][m] =
          EvaluateBasis(basis, features, answers, split, protocol, warnings[task]);
    }
  });

  EvaluationReport report;
  for (auto& w : warnings)
    for (auto& s : w) report.warnings.push_back(std::move(s));
  const int runs = protocol.runs;
  for (std::size_t m = 0; m < n_methods; ++m) {
    for (int run = 0; run < runs; ++run) {
      MethodRun mr;
      mr.method = methods[m];
      mr.run = run;
      // Components averaged within each fold; procedures average their folds.
      const int first = protocol.convention == RunConvention::kFolds ? run : run * folds;
      const int count = protocol.convention == RunConvention::kFolds ? 1 : folds;
      mr.repeat = first / folds;
      mr.fold = count == 1 ? first % folds : -1;
      std::vector<std::vector<double>> per_component;
      std::vector<double> fold_s, fold_acc, fold_base;
      for (int t = first; t < first + count; ++t) {
        const auto& outcome = results[t][m];
        if (per_component.size() < outcome.size()) per_component.resize(outcome.size());
        std::vector<double> s, acc, base;
        for (std::size_t c = 0; c < outcome.size(); ++c) {
          per_component[c].push_back(outcome[c].improvement);
          s.push_back(outcome[c].improvement);
          acc.push_back(outcome[c].accuracy);
          base.push_back(outcome[c].baseline);
        }
        fold_s.push_back(NanMean(s));
        fold_acc.push_back(NanMean(acc));
        fold_base.push_back(NanMean(base));
      }
      for (const auto& values : per_component)
        mr.component_improvement.push_back(NanMean(values));
      mr.relative_improvement = NanMean(fold_s);
      mr.accuracy = NanMean(fold_acc);
      mr.baseline = NanMean(fold_base);
      report.runs.push_back(std::move(mr));
    }
  }

  for (ReductionMethod method : methods) {
    MethodSummary summary;
    summary.method = method;
    std::vector<double> values;
    std::vector<std::vector<double>> components;
    for (const MethodRun& mr : report.runs) {
      if (mr.method != method) continue;
      if (!std::isnan(mr.relative_improvement)) values.push_back(mr.relative_improvement);
      if (components.size() < mr.component_improvement.size())
        components.resize(mr.component_improvement.size());
      for (std::size_t c = 0; c < mr.component_improvement.size(); ++c)
        components[c].push_back(mr.component_improvement[c]);
    }
    summary.mean = values.empty() ? kNaN : Mean(values);
    summary.stddev = values.empty() ? kNaN : PopulationStd(values);
    for (const auto& c : components) summary.component_mean.push_back(NanMean(c));
    report.summaries.push_back(std::move(summary));
  }
  return report;
}

void WriteEvaluationReport(const EvaluationReport& report, int k, std::ostream& out) {
  out << std::setprecision(17);
  out << "method,run,repeat,fold,relative_improvement,accuracy,baseline";
  for (int c = 0; c < k; ++c) out << ",s_c" << c + 1;
  out << '\n';
  for (const MethodRun& mr : report.runs) {
    out << MethodName(mr.method) << ',' << mr.run << ',' << mr.repeat << ',' << mr.fold << ','
        << mr.relative_improvement << ',' << mr.accuracy << ',' << mr.baseline;
    for (int c = 0; c < k; ++c) {
      out << ',';
      if (c < static_cast<int>(mr.component_improvement.size()))
        out << mr.component_improvement[c];
    }
    out << '\n';
  }
}

EvaluationReport ReadEvaluationReport(std::istream& in) {
  EvaluationReport report;
  std::string line;
  if (!std::getline(in, line)) throw IoError("report is empty");
  std::vector<ReductionMethod> order;
  std::map<ReductionMethod, std::vector<double>> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::vector<std::string> fields;
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (fields.size() < 7) throw IoError("report row has fewer than 7 columns: " + line);
    auto method = ParseMethod(fields[0]);
    if (!method) throw IoError("unknown method in report: " + fields[0]);
    auto number = [](const std::string& s) {
      return s.empty() ? kNaN : std::stod(s);
    };
    MethodRun mr;
    mr.method = *method;
    mr.run = std::stoi(fields[1]);
    mr.repeat = std::stoi(fields[2]);
    mr.fold = std::stoi(fields[3]);
    mr.relative_improvement = number(fields[4]);
    mr.accuracy = number(fields[5]);
    mr.baseline = number(fields[6]);
    for (std::size_t c = 7; c < fields.size(); ++c)
      mr.component_improvement.push_back(number(fields[c]));
    if (std::find(order.begin(), order.end(), mr.method) == order.end())
      order.push_back(mr.method);
    if (!std::isnan(mr.relative_improvement))
      values[mr.method].push_back(mr.relative_improvement);
    report.runs.push_back(std::move(mr));
  }
  for (ReductionMethod m : order) {
    MethodSummary s;
    s.method = m;
    const auto& v = values[m];
    s.mean = v.empty() ? kNaN : Mean(v);
    s.stddev = v.empty() ? kNaN : PopulationStd(v);
    report.summaries.push_back(std::move(s));
  }
  return report;
}

}  // namespace phonetraits
