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

#include "phonetraits/linalg.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

namespace phonetraits {

Standardizer Standardizer::Fit(const Eigen::MatrixXd& data) {
  Standardizer s;
  const auto n = static_cast<double>(data.rows());
  s.center = data.colwise().mean().transpose();
  s.scale.resize(data.cols());
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    const double var =
        n > 0 ? (data.col(j).array() - s.center(j)).square().sum() / n : 0.0;
    s.scale(j) = var > 1e-24 ? std::sqrt(var) : 1.0;
  }
  return s;
}

Eigen::MatrixXd Standardizer::Apply(const Eigen::MatrixXd& data) const {
  return (data.rowwise() - center.transpose()).array().rowwise() /
         scale.transpose().array();
}

double Median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

double Mean(std::span<const double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

double PopulationStd(std::span<const double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double mean = Mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

double PearsonCorrelation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::ArrayXd da = a.array() - a.mean();
  const Eigen::ArrayXd db = b.array() - b.mean();
  const double saa = da.square().sum();
  const double sbb = db.square().sum();
  // Relative threshold: a column that is constant up to rounding has no
  // meaningful correlation.
  const double scale_a = std::max(1.0, a.array().abs().maxCoeff());
  const double scale_b = std::max(1.0, b.array().abs().maxCoeff());
  const double n = static_cast<double>(a.size());
  if (saa <= 1e-24 * n * scale_a * scale_a || sbb <= 1e-24 * n * scale_b * scale_b)
    return 0.0;
  return std::clamp((da * db).sum() / std::sqrt(saa * sbb), -1.0, 1.0);
}

double LogCorrelationPValue(double r, int n) {
  const double ar = std::abs(r);
  if (ar == 0.0 || n < 3) return 0.0;
  if (ar >= 1.0 - 1e-15) return -std::numeric_limits<double>::infinity();
  const double df = n - 2;
  const double t = ar * std::sqrt(df / ((1.0 - ar) * (1.0 + ar)));
  boost::math::students_t dist(df);
  const double tail = boost::math::cdf(boost::math::complement(dist, t));
  if (tail <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(std::min(1.0, 2.0 * tail));
}

void ApplySignConvention(Eigen::MatrixXd& rows) {
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    Eigen::Index arg = 0;
    rows.row(i).cwiseAbs().maxCoeff(&arg);
    if (rows(i, arg) < 0) rows.row(i) *= -1.0;
  }
}

Eigen::MatrixXd SelectRows(const Eigen::MatrixXd& m, std::span<const int> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(i) = m.row(rows[i]);
  return out;
}

Eigen::MatrixXd SelectColumns(const Eigen::MatrixXd& m,
                              std::span<const int> cols) {
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(j) = m.col(cols[j]);
  return out;
}

std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                      std::uint64_t c) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(seed);
  h = mix(h ^ a);
  h = mix(h ^ b);
  h = mix(h ^ c);
  return h;
}

}  // namespace phonetraits
