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

#include "phonetraits/sqp.h"

#include <algorithm>
#include <cmath>

namespace phonetraits {
namespace {

struct Eval {
  Eigen::VectorXd x;
  double f = 0.0;
  Eigen::VectorXd g;
  Eigen::VectorXd c;
  Eigen::MatrixXd a;
};

Eval Evaluate(const SqpProblem& problem, Eigen::VectorXd x) {
  Eval e;
  e.x = std::move(x);
  e.f = problem.objective(e.x, e.g);
  problem.constraints(e.x, e.c, e.a);
  return e;
}

double Merit(const Eval& e, double mu) { return e.f + mu * e.c.lpNorm<1>(); }

// Minimum-norm correction onto the linearized constraints at the trial point.
Eigen::VectorXd SecondOrderCorrection(const Eval& trial, const Eigen::MatrixXd& a) {
  const Eigen::MatrixXd aat = a * a.transpose();
  return -a.transpose() * aat.completeOrthogonalDecomposition().solve(trial.c);
}

}  // namespace

SqpResult MinimizeSqp(const SqpProblem& problem, Eigen::VectorXd x0,
                      const SqpOptions& options) {
  const Eigen::Index n = x0.size();
  Eval cur = Evaluate(problem, std::move(x0));
  Eigen::MatrixXd b = options.initial_hessian.size() == n * n
                          ? options.initial_hessian
                          : Eigen::MatrixXd::Identity(n, n);
  double mu = 1.0;
  SqpResult result;
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(cur.c.size());

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter + 1;
    // KKT system via the Schur complement of the positive definite B.
    Eigen::LLT<Eigen::MatrixXd> llt(b);
    if (llt.info() != Eigen::Success) {
      b = Eigen::MatrixXd::Identity(n, n);
      llt.compute(b);
    }
    const Eigen::MatrixXd w = llt.solve(cur.a.transpose());
    const Eigen::VectorXd v = llt.solve(cur.g);
    const Eigen::MatrixXd schur = cur.a * w;
    lambda = schur.completeOrthogonalDecomposition().solve(cur.c - cur.a * v);
    const Eigen::VectorXd d = -(v + w * lambda);

    const double kkt = (cur.g + cur.a.transpose() * lambda).lpNorm<Eigen::Infinity>();
    const double viol = cur.c.size() ? cur.c.lpNorm<Eigen::Infinity>() : 0.0;
    if (viol <= options.constraint_tolerance &&
        (kkt <= options.kkt_tolerance ||
         d.lpNorm<Eigen::Infinity>() <= options.step_tolerance)) {
      result.converged = true;
      break;
    }

    if (lambda.size()) mu = std::max(mu, 1.1 * lambda.lpNorm<Eigen::Infinity>());
    const double phi0 = Merit(cur, mu);
    const double slope = cur.g.dot(d) - mu * cur.c.lpNorm<1>();

    Eval trial = Evaluate(problem, cur.x + d);
    double t = 1.0;
    if (Merit(trial, mu) > phi0 + 1e-4 * slope) {
      Eval corrected =
          Evaluate(problem, cur.x + d + SecondOrderCorrection(trial, cur.a));
      if (Merit(corrected, mu) <= phi0 + 1e-4 * slope) {
        trial = std::move(corrected);
      } else {
        t = 0.5;
        for (;;) {
          trial = Evaluate(problem, cur.x + t * d);
          if (Merit(trial, mu) <= phi0 + 1e-4 * t * slope) break;
          t *= 0.5;
          if (t < 1e-12) break;
        }
        if (t < 1e-12) break;  // no merit decrease along d
      }
    }

    // Damped BFGS on the Lagrangian gradient difference.
    const Eigen::VectorXd s = trial.x - cur.x;
    Eigen::VectorXd y = (trial.g + trial.a.transpose() * lambda) -
                        (cur.g + cur.a.transpose() * lambda);
    const Eigen::VectorXd bs = b * s;
    const double sbs = s.dot(bs);
    if (sbs > 1e-300) {
      double sy = s.dot(y);
      if (sy < 0.2 * sbs) {
        const double theta = 0.8 * sbs / (sbs - sy);
        y = theta * y + (1.0 - theta) * bs;
        sy = s.dot(y);
      }
      b += (y * y.transpose()) / sy - (bs * bs.transpose()) / sbs;
    }
    cur = std::move(trial);
    if (s.lpNorm<Eigen::Infinity>() <= options.step_tolerance &&
        cur.c.lpNorm<Eigen::Infinity>() <= options.constraint_tolerance) {
      result.converged = true;
      break;
    }
  }

  result.x = cur.x;
  result.objective = cur.f;
  result.constraint_violation = cur.c.size() ? cur.c.lpNorm<Eigen::Infinity>() : 0.0;
  result.multipliers = lambda;
  result.hessian = std::move(b);
  return result;
}

}  // namespace phonetraits
