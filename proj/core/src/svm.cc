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

#include "phonetraits/svm.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "phonetraits/linalg.h"
#include "phonetraits/types.h"

namespace phonetraits {
namespace {

constexpr double kTau = 1e-12;

Eigen::MatrixXd KernelMatrix(KernelType kernel, double gamma, const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd dot = x * x.transpose();
  if (kernel == KernelType::kLinear) return dot;
  const Eigen::VectorXd sq = dot.diagonal();
  Eigen::MatrixXd k(x.rows(), x.rows());
  for (Eigen::Index j = 0; j < x.rows(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      k(i, j) = std::exp(-gamma * std::max(sq(i) + sq(j) - 2.0 * dot(i, j), 0.0));
  return k;
}

template <typename M>
bool SameMatrix(const M& a, const M& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

}  // namespace

bool operator==(const BinarySvm& a, const BinarySvm& b) {
  return a.positive_label == b.positive_label && a.negative_label == b.negative_label &&
         SameMatrix(a.support_vectors, b.support_vectors) &&
         SameMatrix(a.coefficients, b.coefficients) && a.bias == b.bias &&
         a.iterations == b.iterations;
}

bool operator==(const SvmModel& a, const SvmModel& b) {
  return a.hp == b.hp && a.selected_features == b.selected_features &&
         SameMatrix(a.mean, b.mean) && SameMatrix(a.scale, b.scale) &&
         a.classes == b.classes && a.machines == b.machines && a.constant == b.constant &&
         a.constant_label == b.constant_label && a.warnings == b.warnings;
}

std::string_view KernelName(KernelType kernel) {
  return kernel == KernelType::kRbf ? "rbf" : "linear";
}

double KernelValue(KernelType kernel, double gamma,
                   const Eigen::Ref<const Eigen::VectorXd>& a,
                   const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (kernel == KernelType::kLinear) return a.dot(b);
  return std::exp(-gamma * (a - b).squaredNorm());
}

BinarySvm TrainBinarySvm(const Eigen::MatrixXd& x, std::span<const int> signs,
                         const Hyperparameters& hp, const SmoOptions& options) {
  const Eigen::Index n = x.rows();
  if (static_cast<Eigen::Index>(signs.size()) != n)
    throw InvalidArgument("label count does not match rows");
  if (hp.cost <= 0.0 || (hp.kernel == KernelType::kRbf && hp.gamma <= 0.0))
    throw InvalidArgument("SVM hyperparameters must be positive");
  const double c = hp.cost;
  const Eigen::MatrixXd k = KernelMatrix(hp.kernel, hp.gamma, x);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = signs[i] > 0 ? 1.0 : -1.0;

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd grad = Eigen::VectorXd::Constant(n, -1.0);  // Q alpha - e
  auto up = [&](Eigen::Index t) { return y(t) > 0 ? alpha(t) < c : alpha(t) > 0; };
  auto low = [&](Eigen::Index t) { return y(t) > 0 ? alpha(t) > 0 : alpha(t) < c; };

  BinarySvm machine;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    // Second-order working set selection.
    double g_max = -std::numeric_limits<double>::infinity();
    Eigen::Index i = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (up(t) && -y(t) * grad(t) > g_max) {
        g_max = -y(t) * grad(t);
        i = t;
      }
    }
    double g_min = std::numeric_limits<double>::infinity();
    Eigen::Index j = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t) {
      if (!low(t)) continue;
      const double v = -y(t) * grad(t);
      g_min = std::min(g_min, v);
      if (i < 0) continue;
      const double b = g_max - v;
      if (b > 0) {
        double a = k(i, i) + k(t, t) - 2.0 * k(i, t);
        if (a <= 0) a = kTau;
        const double obj = -(b * b) / a;
        if (obj < best) {
          best = obj;
          j = t;
        }
      }
    }
    if (i < 0 || j < 0 || g_max - g_min < options.tolerance) break;

    // Two-variable analytic update with clipping to the box.
    const double ai = alpha(i), aj = alpha(j);
    double quad = k(i, i) + k(j, j) - 2.0 * k(i, j);
    if (quad <= 0) quad = kTau;
    if (y(i) != y(j)) {
      const double delta = (-grad(i) - grad(j)) / quad;
      const double diff = alpha(i) - alpha(j);
      alpha(i) += delta;
      alpha(j) += delta;
      if (diff > 0) {
        if (alpha(j) < 0) { alpha(j) = 0; alpha(i) = diff; }
      } else {
        if (alpha(i) < 0) { alpha(i) = 0; alpha(j) = -diff; }
      }
      if (diff > 0) {
        if (alpha(i) > c) { alpha(i) = c; alpha(j) = c - diff; }
      } else {
        if (alpha(j) > c) { alpha(j) = c; alpha(i) = c + diff; }
      }
    } else {
      const double delta = (grad(i) - grad(j)) / quad;
      const double sum = alpha(i) + alpha(j);
      alpha(i) -= delta;
      alpha(j) += delta;
      if (sum > c) {
        if (alpha(i) > c) { alpha(i) = c; alpha(j) = sum - c; }
      } else {
        if (alpha(j) < 0) { alpha(j) = 0; alpha(i) = sum; }
      }
      if (sum > c) {
        if (alpha(j) > c) { alpha(j) = c; alpha(i) = sum - c; }
      } else {
        if (alpha(i) < 0) { alpha(i) = 0; alpha(j) = sum; }
      }
    }
    const double di = alpha(i) - ai, dj = alpha(j) - aj;
    for (Eigen::Index t = 0; t < n; ++t)
      grad(t) += y(t) * (y(i) * k(t, i) * di + y(j) * k(t, j) * dj);
  }
  machine.iterations = iter;

  // Bias: average over free vectors, else midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  int free = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = y(t) * grad(t);
    if (alpha(t) >= c) {
      if (y(t) < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha(t) <= 0) {
      if (y(t) > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++free;
      sum_free += yg;
    }
  }
  const double rho = free > 0 ? sum_free / free : (ub + lb) / 2.0;
  machine.bias = std::isfinite(rho) ? -rho : 0.0;

  int count = 0;
  for (Eigen::Index t = 0; t < n; ++t) count += alpha(t) > 0;
  machine.support_vectors.resize(count, x.cols());
  machine.coefficients.resize(count);
  for (Eigen::Index t = 0, r = 0; t < n; ++t) {
    if (alpha(t) <= 0) continue;
    machine.support_vectors.row(r) = x.row(t);
    machine.coefficients(r) = y(t) * alpha(t);
    ++r;
  }
  return machine;
}

double DecisionValue(const BinarySvm& machine, KernelType kernel, double gamma,
                     const Eigen::Ref<const Eigen::VectorXd>& x) {
  double sum = machine.bias;
  for (Eigen::Index r = 0; r < machine.support_vectors.rows(); ++r)
    sum += machine.coefficients(r) *
           KernelValue(kernel, gamma, machine.support_vectors.row(r).transpose(), x);
  return sum;
}

SvmModel TrainSvm(const Eigen::MatrixXd& x, std::span<const int> labels,
                  const Hyperparameters& hp, const SmoOptions& options) {
  if (static_cast<Eigen::Index>(labels.size()) != x.rows())
    throw InvalidArgument("label count does not match rows");
  if (x.rows() == 0) throw InvalidArgument("no training rows");
  SvmModel model;
  model.hp = hp;
  const Standardizer s = Standardizer::Fit(x);
  model.mean = s.center;
  model.scale = s.scale;
  model.classes.assign(labels.begin(), labels.end());
  std::sort(model.classes.begin(), model.classes.end());
  model.classes.erase(std::unique(model.classes.begin(), model.classes.end()),
                      model.classes.end());
  if (model.classes.size() < 2) {
    model.constant = true;
    model.constant_label = model.classes.front();
    model.warnings.push_back("single training class; constant model");
    return model;
  }
  const Eigen::MatrixXd z = s.Apply(x);
  for (std::size_t a = 0; a < model.classes.size(); ++a) {
    for (std::size_t b = a + 1; b < model.classes.size(); ++b) {
      std::vector<int> rows, signs;
      for (std::size_t t = 0; t < labels.size(); ++t) {
        if (labels[t] == model.classes[a] || labels[t] == model.classes[b]) {
          rows.push_back(static_cast<int>(t));
          signs.push_back(labels[t] == model.classes[a] ? 1 : -1);
        }
      }
      BinarySvm m = TrainBinarySvm(SelectRows(z, rows), signs, hp, options);
      m.positive_label = model.classes[a];
      m.negative_label = model.classes[b];
      model.machines.push_back(std::move(m));
    }
  }
  return model;
}

int PredictOne(const SvmModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (model.constant) return model.constant_label;
  if (x.size() != model.mean.size())
    throw InvalidArgument("feature count " + std::to_string(x.size()) +
                          " does not match the model's " +
                          std::to_string(model.mean.size()));
  const Eigen::VectorXd z = (x - model.mean).cwiseQuotient(model.scale);
  std::map<int, int> votes;
  for (int c : model.classes) votes[c] = 0;
  for (const BinarySvm& m : model.machines) {
    const double v = DecisionValue(m, model.hp.kernel, model.hp.gamma, z);
    ++votes[v > 0 ? m.positive_label : m.negative_label];
  }
  int best = model.classes.front();
  for (const auto& [label, count] : votes)
    if (count > votes[best]) best = label;
  return best;
}

std::vector<int> Predict(const SvmModel& model, const Eigen::MatrixXd& x) {
  if (!model.constant && x.cols() != model.mean.size())
    throw InvalidArgument("feature count " + std::to_string(x.cols()) +
                          " does not match the model's " +
                          std::to_string(model.mean.size()));
  std::vector<int> out;
  out.reserve(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) out.push_back(PredictOne(model, x.row(r).transpose()));
  return out;
}

}  // namespace phonetraits
