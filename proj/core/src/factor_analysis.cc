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
#include <numbers>
#include <numeric>

#include "phonetraits/linalg.h"
#include "phonetraits/reduce.h"

namespace phonetraits {
namespace {

// Mean per-sample Gaussian log-likelihood of covariance s under L L' + diag(psi).
// Uses the determinant lemma and Woodbury so only k x k systems are factored.
double LogLikelihood(const Eigen::MatrixXd& s, const Eigen::MatrixXd& l,
                     const Eigen::VectorXd& psi) {
  const Eigen::Index d = s.rows();
  const Eigen::Index k = l.cols();
  const Eigen::VectorXd psi_inv = psi.cwiseInverse();
  const Eigen::MatrixXd pl = psi_inv.asDiagonal() * l;
  const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(k, k) + l.transpose() * pl;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  const double log_det = psi.array().log().sum() +
                         2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  // tr(Sigma^-1 S) = tr(Psi^-1 S) - tr(M^-1 L' Psi^-1 S Psi^-1 L)
  const double trace = (psi_inv.asDiagonal() * s).trace() -
                       llt.solve(pl.transpose() * s * pl).trace();
  return -0.5 * (static_cast<double>(d) * std::log(2.0 * std::numbers::pi) + log_det + trace);
}

}  // namespace

FaResult FactorAnalysisEm(const Eigen::MatrixXd& covariance, int n_samples,
                          const FaOptions& options) {
  const Eigen::Index d = covariance.rows();
  if (covariance.cols() != d) throw InvalidArgument("covariance must be square");
  if (options.k < 1 || options.k > d) throw InvalidArgument("factor count out of range");
  if (n_samples < 2) throw InvalidArgument("FA needs at least two samples");
  const int k = options.k;
  FaResult result;

  // Principal-component start.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance);
  double rest = 0.0;
  for (Eigen::Index i = 0; i < d - k; ++i) rest += eig.eigenvalues()(i);
  rest = d > k ? rest / static_cast<double>(d - k) : 0.0;
  Eigen::MatrixXd l(d, k);
  for (int c = 0; c < k; ++c) {
    const double lambda = eig.eigenvalues()(d - 1 - c);
    l.col(c) = eig.eigenvectors().col(d - 1 - c) * std::sqrt(std::max(lambda - rest, 1e-6));
  }
  Eigen::VectorXd psi =
      (covariance.diagonal() - l.rowwise().squaredNorm()).cwiseMax(options.min_uniqueness);

  double previous = LogLikelihood(covariance, l, psi);
  result.log_likelihood.push_back(previous);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter + 1;
    // E-step: beta = L' Sigma^-1 via Woodbury.
    const Eigen::VectorXd psi_inv = psi.cwiseInverse();
    const Eigen::MatrixXd pl = psi_inv.asDiagonal() * l;
    const Eigen::MatrixXd m =
        Eigen::MatrixXd::Identity(k, k) + l.transpose() * pl;
    const Eigen::MatrixXd beta = m.llt().solve(pl.transpose());
    const Eigen::MatrixXd sb = covariance * beta.transpose();  // d x k
    const Eigen::MatrixXd ezz =
        Eigen::MatrixXd::Identity(k, k) - beta * l + beta * sb;
    // M-step.
    l = ezz.llt().solve(sb.transpose()).transpose();
    Eigen::VectorXd next = covariance.diagonal() - (l.cwiseProduct(sb)).rowwise().sum();
    for (Eigen::Index i = 0; i < d; ++i) {
      if (next(i) < options.min_uniqueness) {
        next(i) = options.min_uniqueness;
        result.heywood = true;
      }
    }
    psi = next;
    const double ll = LogLikelihood(covariance, l, psi);
    result.log_likelihood.push_back(ll);
    if (std::abs(ll - previous) < options.tolerance) {
      result.converged = true;
      break;
    }
    previous = ll;
  }

  result.loadings = l;
  result.uniquenesses = psi;
  ProjectionBasis& basis = result.basis;
  basis.method = ReductionMethod::kFa;
  std::vector<double> ss(k);
  for (int c = 0; c < k; ++c) ss[c] = l.col(c).squaredNorm();
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return ss[a] > ss[b]; });
  basis.rows.resize(k, d);
  for (int i = 0; i < k; ++i) {
    const int c = order[i];
    const double norm = std::sqrt(ss[c]);
    if (norm > 0) {
      basis.rows.row(i) = (l.col(c) / norm).transpose();
    } else {
      basis.rows.row(i).setZero();
    }
    basis.component_names.push_back("fa" + std::to_string(i + 1));
    basis.diagnostics.push_back({{"ss_loadings", ss[c]},
                                 {"log_likelihood", result.log_likelihood.back()},
                                 {"iterations", static_cast<double>(result.iterations)}});
  }
  ApplySignConvention(basis.rows);
  if (result.heywood)
    basis.warnings.push_back("Heywood case: uniquenesses clipped to " +
                             std::to_string(options.min_uniqueness));
  if (!result.converged)
    basis.warnings.push_back("EM stopped after " + std::to_string(result.iterations) +
                             " iterations without converging");
  return result;
}

FaResult FaFit(const Eigen::MatrixXd& answers, const FaOptions& options) {
  if (answers.rows() < 2) throw InvalidArgument("FA needs at least two rows");
  Standardizer s = Standardizer::Fit(answers);
  if (!options.standardize) s.scale.setOnes();
  const Eigen::MatrixXd z = s.Apply(answers);
  const Eigen::MatrixXd cov = (z.transpose() * z) / static_cast<double>(z.rows());
  FaResult result = FactorAnalysisEm(cov, static_cast<int>(z.rows()), options);
  result.basis.center = s.center;
  result.basis.scale = s.scale;
  return result;
}

}  // namespace phonetraits
