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

#include "phonetraits/linalg.h"
#include "phonetraits/reduce.h"

namespace phonetraits {
namespace {

// E[log cosh(v)] for v ~ N(0, 1).
constexpr double kGaussianLogCosh = 0.37456720749;

double LogCosh(double u) {
  const double a = std::abs(u);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

}  // namespace

IcaResult IcaFit(const Eigen::MatrixXd& answers, const IcaOptions& options) {
  if (answers.rows() < 2) throw InvalidArgument("ICA needs at least two rows");
  IcaResult result;
  ProjectionBasis& basis = result.basis;
  basis.method = ReductionMethod::kIca;

  Standardizer s = Standardizer::Fit(answers);
  if (!options.standardize) s.scale.setOnes();
  basis.center = s.center;
  basis.scale = s.scale;
  const Eigen::MatrixXd z = s.Apply(answers);
  const auto n = static_cast<double>(z.rows());
  const Eigen::Index d = z.cols();

  const Eigen::MatrixXd cov = (z.transpose() * z) / n;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const double top = std::max(eig.eigenvalues()(d - 1), 1e-300);
  int k = 0;
  while (k < options.k && k < d && eig.eigenvalues()(d - 1 - k) > 1e-10 * top) ++k;
  if (k < options.k)
    basis.warnings.push_back("data rank below " + std::to_string(options.k) +
                             "; returning " + std::to_string(k) + " components");

  result.whitening.resize(k, d);
  for (int c = 0; c < k; ++c) {
    result.whitening.row(c) = eig.eigenvectors().col(d - 1 - c).transpose() /
                              std::sqrt(eig.eigenvalues()(d - 1 - c));
  }
  const Eigen::MatrixXd white = z * result.whitening.transpose();  // n x k

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd w_all(k, k);
  std::vector<bool> converged(k, false);
  for (int c = 0; c < k; ++c) {
    Eigen::VectorXd w(k);
    for (int i = 0; i < k; ++i) w(i) = normal(rng);
    auto orthogonalize = [&](Eigen::VectorXd& v) {
      for (int j = 0; j < c; ++j) v -= v.dot(w_all.row(j).transpose()) * w_all.row(j).transpose();
      v.normalize();
    };
    orthogonalize(w);
    for (int iter = 0; iter < options.max_iterations; ++iter) {
      const Eigen::ArrayXd u = white * w;
      const Eigen::ArrayXd g = u.tanh();
      const double gprime = (1.0 - g.square()).mean();
      Eigen::VectorXd next = (white.transpose() * g.matrix()) / n - gprime * w;
      orthogonalize(next);
      const double delta = std::abs(std::abs(next.dot(w)) - 1.0);
      w = next;
      if (delta < options.tolerance) {
        converged[c] = true;
        break;
      }
    }
    w_all.row(c) = w.transpose();
  }

  // Unmixing rows in the standardized answer space, unit norm.
  Eigen::MatrixXd rows = w_all * result.whitening;
  for (int c = 0; c < k; ++c) rows.row(c).normalize();
  const Eigen::MatrixXd scores = z * rows.transpose();
  std::vector<double> variance(k), negentropy_z(k);
  for (int c = 0; c < k; ++c) {
    variance[c] = scores.col(c).squaredNorm() / n;
    const Eigen::ArrayXd u = white * w_all.row(c).transpose();
    const Eigen::ArrayXd g = u.unaryExpr([](double x) { return LogCosh(x); });
    const double mean = g.mean();
    const double sd = std::sqrt((g - mean).square().mean());
    negentropy_z[c] = sd > 0 ? (mean - kGaussianLogCosh) / (sd / std::sqrt(n)) : 0.0;
  }
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return variance[a] > variance[b]; });

  basis.rows.resize(k, d);
  for (int i = 0; i < k; ++i) {
    const int c = order[i];
    basis.rows.row(i) = rows.row(c);
    basis.component_names.push_back("ic" + std::to_string(i + 1));
    result.converged.push_back(converged[c]);
    const bool reliable = std::abs(negentropy_z[c]) >= options.reliability_z;
    result.reliable.push_back(reliable);
    result.negentropy_z.push_back(negentropy_z[c]);
    basis.diagnostics.push_back({{"explained_variance", variance[c]},
                                 {"negentropy_z", negentropy_z[c]},
                                 {"converged", converged[c] ? 1.0 : 0.0},
                                 {"reliable", reliable ? 1.0 : 0.0}});
    if (!converged[c])
      basis.warnings.push_back(basis.component_names.back() + " did not converge");
    if (!reliable)
      basis.warnings.push_back(basis.component_names.back() +
                               " is indistinguishable from a Gaussian direction");
  }
  ApplySignConvention(basis.rows);
  return result;
}

}  // namespace phonetraits
