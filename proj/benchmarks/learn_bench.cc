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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "phonetraits/learn.h"
#include "phonetraits/scoring.h"

namespace phonetraits {
namespace {

void BM_TrainClassifier(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(n, 24);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
  std::vector<double> score(n);
  for (int i = 0; i < n; ++i) score[i] = x(i, 0) + x(i, 1) + normal(rng);
  const auto labels = TertileLabels(score);
  for (auto _ : state)
    benchmark::DoNotOptimize(TrainClassifier(x, labels, {1.0, 0.1, 8, KernelType::kRbf}));
}
BENCHMARK(BM_TrainClassifier)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace phonetraits
