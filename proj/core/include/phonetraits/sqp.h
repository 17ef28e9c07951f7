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

#ifndef PHONETRAITS_SQP_H_
#define PHONETRAITS_SQP_H_

#include <functional>

#include <Eigen/Dense>

namespace phonetraits {

// Equality-constrained sequential quadratic programming: minimize f(x)
// subject to c(x) = 0. Each iteration solves the KKT system of the local
// quadratic model with a damped-BFGS Lagrangian Hessian and backtracks on the
// L1 merit function f + mu * |c|_1.
struct SqpProblem {
  // Returns f(x) and writes its gradient.
  std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)> objective;
  // Writes c(x) (m entries) and its Jacobian (m x n).
  std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&,
                     Eigen::MatrixXd&)>
      constraints;
};

struct SqpOptions {
  int max_iterations = 100;
  double step_tolerance = 1e-10;
  double kkt_tolerance = 1e-10;
  double constraint_tolerance = 1e-10;
  // Initial Lagrangian Hessian approximation; identity when empty.
  Eigen::MatrixXd initial_hessian;
};

struct SqpResult {
  Eigen::VectorXd x;
  Eigen::VectorXd multipliers;
  double objective = 0.0;
  double constraint_violation = 0.0;  // max |c_i|
  int iterations = 0;
  bool converged = false;
  Eigen::MatrixXd hessian;  // final approximation, for warm starts
};

SqpResult MinimizeSqp(const SqpProblem& problem, Eigen::VectorXd x0,
                      const SqpOptions& options = {});

}  // namespace phonetraits

#endif  // PHONETRAITS_SQP_H_
