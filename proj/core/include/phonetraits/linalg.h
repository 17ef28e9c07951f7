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

#ifndef PHONETRAITS_LINALG_H_
#define PHONETRAITS_LINALG_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace phonetraits {

// Column means and standard deviations fitted on one matrix and applied to
// others. Zero-variance columns get scale 1.
struct Standardizer {
  Eigen::VectorXd center;
  Eigen::VectorXd scale;

  static Standardizer Fit(const Eigen::MatrixXd& data);
  Eigen::MatrixXd Apply(const Eigen::MatrixXd& data) const;
};

double Median(std::vector<double> values);
// Population standard deviation.
double PopulationStd(std::span<const double> values);
double Mean(std::span<const double> values);

// Pearson correlation; 0 when either side is constant.
double PearsonCorrelation(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Natural log of the two-sided p-value of a Pearson correlation r over n
// samples (t test with n - 2 degrees of freedom). Returns 0 for r == 0 and
// -infinity for |r| == 1.
double LogCorrelationPValue(double r, int n);

// Flips each row so its largest-magnitude entry is positive.
void ApplySignConvention(Eigen::MatrixXd& rows);

// Rows [rows] selected from a matrix.
Eigen::MatrixXd SelectRows(const Eigen::MatrixXd& m, std::span<const int> rows);
Eigen::MatrixXd SelectColumns(const Eigen::MatrixXd& m,
                              std::span<const int> cols);

// 64-bit mixing of a seed with stream identifiers (SplitMix64 finalizer).
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                      std::uint64_t c = 0);

}  // namespace phonetraits

#endif  // PHONETRAITS_LINALG_H_
