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
#include <numeric>
#include <random>

#include "phonetraits/learn.h"
#include "phonetraits/linalg.h"
#include "phonetraits/reduce.h"
#include "phonetraits/sqp.h"

namespace phonetraits {
namespace {

// Shared state for one SDR fit: standardized answers y, the feature design
// [1 X] and its pseudo-inverse.
struct SdrProblem {
  Eigen::MatrixXd y;
  Eigen::MatrixXd gram;  // y' y
  Eigen::MatrixXd design;
  Eigen::MatrixXd design_pinv;
};

struct LinearFit {
  Eigen::VectorXd alpha;
  Eigen::VectorXd fitted;
};

LinearFit FitAlpha(const SdrProblem& prob, const Eigen::VectorXd& p) {
  LinearFit fit;
  fit.alpha = prob.design_pinv * (prob.y * p);
  fit.fitted = prob.design * fit.alpha;
  return fit;
}

double RSquared(const Eigen::VectorXd& target, const Eigen::VectorXd& fitted) {
  const double mean = target.mean();
  const double ss_tot = (target.array() - mean).square().sum();
  if (ss_tot <= 0.0) return 0.0;
  return 1.0 - (target - fitted).squaredNorm() / ss_tot;
}

double R2(const SdrProblem& prob, const Eigen::VectorXd& p, const LinearFit& fit) {
  return RSquared(prob.y * p, fit.fitted);
}

struct StartOutcome {
  Eigen::VectorXd p;
  LinearFit fit;
  double r2 = -std::numeric_limits<double>::infinity();
  int alternations = 0;
  bool converged = false;
  bool ok = false;
  std::vector<double> trace;
};

StartOutcome RunStart(const SdrProblem& prob, const Eigen::MatrixXd& previous,
                      Eigen::VectorXd p, const SdrOptions& options) {
  StartOutcome out;
  const Eigen::Index d = p.size();
  LinearFit fit = FitAlpha(prob, p);
  double r2 = R2(prob, p, fit);
  out.trace.push_back(r2);
  Eigen::MatrixXd hessian;

  SqpProblem qp;
  qp.constraints = [&](const Eigen::VectorXd& x, Eigen::VectorXd& c, Eigen::MatrixXd& a) {
    const Eigen::Index m = 1 + previous.cols();
    c.resize(m);
    a.resize(m, d);
    c(0) = x.squaredNorm() - 1.0;
    a.row(0) = 2.0 * x.transpose();
    if (previous.cols() > 0) {
      c.tail(previous.cols()) = previous.transpose() * x;
      a.bottomRows(previous.cols()) = previous.transpose();
    }
  };

  for (int alt = 0; alt < options.max_alternations; ++alt) {
    out.alternations = alt + 1;
    const double before = r2;

    // (b) alpha fixed: minimize 1 - R^2 = (p'Gp - 2h'p + c0) / p'Gp.
    const Eigen::VectorXd h = prob.y.transpose() * fit.fitted;
    const double c0 = fit.fitted.squaredNorm();
    qp.objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
      const Eigen::VectorXd gx = prob.gram * x;
      const double t = x.dot(gx);
      if (t <= 1e-300) {
        grad = Eigen::VectorXd::Zero(d);
        return 1.0;
      }
      const double num = t - 2.0 * h.dot(x) + c0;
      grad = ((2.0 * gx - 2.0 * h) * t - 2.0 * gx * num) / (t * t);
      return num / t;
    };
    SqpOptions sqp_options;
    sqp_options.max_iterations = options.sqp_max_iterations;
    sqp_options.initial_hessian = hessian;
    SqpResult sqp = MinimizeSqp(qp, p, sqp_options);
    hessian = sqp.hessian;
    if (sqp.x.allFinite() && sqp.constraint_violation < 1e-8) {
      const double candidate = RSquared(prob.y * sqp.x, fit.fitted);
      if (candidate >= r2) {
        p = sqp.x;
        r2 = candidate;
      }
    }
    out.trace.push_back(r2);

    // (a) p fixed: least-squares alpha.
    LinearFit refit = FitAlpha(prob, p);
    const double candidate = R2(prob, p, refit);
    if (candidate >= r2) {
      fit = std::move(refit);
      r2 = candidate;
    }
    out.trace.push_back(r2);

    if (r2 - before < options.r2_tolerance) {
      out.converged = true;
      break;
    }
  }
  out.p = std::move(p);
  out.fit = std::move(fit);
  out.r2 = r2;
  out.ok = std::isfinite(r2);
  return out;
}

}  // namespace

SdrResult SdrFit(const Eigen::MatrixXd& features, const Eigen::MatrixXd& answers,
                 const SdrOptions& options) {
  if (features.rows() != answers.rows())
    throw InvalidArgument("features and answers have different row counts");
  if (answers.rows() < 3) throw InvalidArgument("SDR needs at least three rows");
  SdrResult result;
  ProjectionBasis& basis = result.basis;
  basis.method = ReductionMethod::kSdr;

  Standardizer s = Standardizer::Fit(answers);
  if (!options.standardize) s.scale.setOnes();
  basis.center = s.center;
  basis.scale = s.scale;

  // Features are standardized for conditioning; models are mapped back to raw
  // feature units at the end.
  const Standardizer fs = Standardizer::Fit(features);
  const Eigen::Index n = answers.rows();
  const Eigen::Index d = answers.cols();
  const Eigen::Index m = features.cols();
  SdrProblem prob;
  prob.y = s.Apply(answers);
  prob.gram = prob.y.transpose() * prob.y;
  prob.design.resize(n, m + 1);
  prob.design.col(0).setOnes();
  prob.design.rightCols(m) = fs.Apply(features);
  prob.design_pinv = prob.design.completeOrthogonalDecomposition().pseudoInverse();

  const int k = static_cast<int>(std::min<Eigen::Index>(options.k, d));
  Eigen::MatrixXd previous(d, 0);
  for (int c = 0; c < k; ++c) {
    SdrComponentReport report;
    StartOutcome best;
    for (int start = 0; start < options.starts; ++start) {
      std::mt19937_64 rng(MixSeed(options.seed, static_cast<std::uint64_t>(c),
                                  static_cast<std::uint64_t>(start)));
      std::normal_distribution<double> normal;
      Eigen::VectorXd p(d);
      for (Eigen::Index i = 0; i < d; ++i) p(i) = normal(rng);
      if (previous.cols() > 0) p -= previous * (previous.transpose() * p);
      p.normalize();
      StartOutcome outcome = RunStart(prob, previous, std::move(p), options);
      if (!outcome.ok) continue;
      ++report.successful_starts;
      if (outcome.r2 > best.r2) best = std::move(outcome);
    }
    if (report.successful_starts == 0) {
      basis.warnings.push_back("component " + std::to_string(c + 1) +
                               ": optimizer failed on every start; stopping");
      break;
    }
    // Remove residual constraint error so the rows are orthonormal.
    Eigen::VectorXd p = best.p;
    if (previous.cols() > 0) p -= previous * (previous.transpose() * p);
    p.normalize();
    const LinearFit fit = FitAlpha(prob, p);

    report.r2_train = R2(prob, p, fit);
    report.alternations = best.alternations;
    report.converged = best.converged;
    report.r2_trace = std::move(best.trace);
    if (!report.converged)
      basis.warnings.push_back("component " + std::to_string(c + 1) +
                               " reached the alternation limit");

    Eigen::VectorXd model(m + 1);
    const Eigen::VectorXd slopes = fit.alpha.tail(m).cwiseQuotient(fs.scale);
    model(0) = fit.alpha(0) - slopes.dot(fs.center);
    model.tail(m) = slopes;

    previous.conservativeResize(d, c + 1);
    previous.col(c) = p;
    result.models.push_back(std::move(model));
    basis.component_names.push_back("sdr" + std::to_string(c + 1));
    basis.diagnostics.push_back({{"r2_train", report.r2_train},
                                 {"alternations", static_cast<double>(report.alternations)},
                                 {"converged", report.converged ? 1.0 : 0.0}});
    result.report.components.push_back(std::move(report));
  }
  basis.rows = previous.transpose();
  // Flipping a row leaves R^2 unchanged; the model flips with it.
  for (int c = 0; c < basis.components(); ++c) {
    Eigen::Index arg = 0;
    basis.rows.row(c).cwiseAbs().maxCoeff(&arg);
    if (basis.rows(c, arg) < 0) {
      basis.rows.row(c) *= -1.0;
      result.models[c] *= -1.0;
    }
  }
  return result;
}

void SdrScoreHeldOut(SdrResult& result, const Eigen::MatrixXd& features,
                     const Eigen::MatrixXd& answers) {
  const Eigen::MatrixXd scores = Project(answers, result.basis);
  for (int c = 0; c < result.basis.components(); ++c) {
    const Eigen::VectorXd& model = result.models[c];
    if (features.cols() != model.size() - 1)
      throw InvalidArgument("held-out features do not match the SDR model width");
    const Eigen::VectorXd fitted =
        (features * model.tail(model.size() - 1)).array() + model(0);
    const double r2 = RSquared(scores.col(c), fitted);
    result.report.components[c].r2_test = r2;
    result.basis.diagnostics[c]["r2_test"] = r2;
  }
}

Eigen::VectorXd LogPValueProducts(const Eigen::MatrixXd& features,
                                  const Eigen::MatrixXd& answers) {
  const int n = static_cast<int>(features.rows());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(features.cols());
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    const Eigen::VectorXd x = features.col(j);
    for (Eigen::Index q = 0; q < answers.cols(); ++q)
      out(j) += LogCorrelationPValue(PearsonCorrelation(x, answers.col(q)), n);
  }
  return out;
}

std::vector<int> SdrRankFeatures(const Eigen::MatrixXd& features,
                                 const Eigen::MatrixXd& answers, int folds,
                                 std::uint64_t seed) {
  if (features.rows() != answers.rows())
    throw InvalidArgument("features and answers have different row counts");
  const Eigen::Index m = features.cols();
  std::vector<std::vector<int>> train_sets;
  if (folds >= 2 && features.rows() >= folds) {
    for (const Split& split : KFolds(static_cast<int>(features.rows()), folds, seed))
      train_sets.push_back(split.train);
  } else {
    train_sets.emplace_back(features.rows());
    std::iota(train_sets[0].begin(), train_sets[0].end(), 0);
  }

  std::vector<double> mean_rank(m, 0.0);
  for (const auto& rows : train_sets) {
    const Eigen::VectorXd score =
        LogPValueProducts(SelectRows(features, rows), SelectRows(answers, rows));
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return score(a) < score(b); });
    for (Eigen::Index r = 0; r < m; ++r) mean_rank[order[r]] += static_cast<double>(r);
  }
  std::vector<int> ranking(m);
  std::iota(ranking.begin(), ranking.end(), 0);
  std::stable_sort(ranking.begin(), ranking.end(),
                   [&](int a, int b) { return mean_rank[a] < mean_rank[b]; });
  return ranking;
}

}  // namespace phonetraits
