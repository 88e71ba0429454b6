//------------------------------------------------------------------------------
//
//   Copyright 2026 The augdist Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "augdist/augmented.hpp"
#include "augdist/stiefel.hpp"
#include "augdist/witness.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace augdist;

Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64 &rng)
{
  std::normal_distribution<double> normal;
  Matrix out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i)
      out(i, j) = normal(rng);
  return out;
}

struct GaussianPair
{
  GaussianMeasure low;
  GaussianMeasure high;
};

GaussianPair gaussian_pair()
{
  std::mt19937_64 rng(1);
  Matrix a = normal_matrix(3, 3, rng);
  Matrix b = normal_matrix(8, 8, rng);
  return {GaussianMeasure::make(normal_matrix(3, 1, rng).col(0), a * a.transpose() + Matrix::Identity(3, 3)),
          GaussianMeasure::make(normal_matrix(8, 1, rng).col(0), b * b.transpose() + Matrix::Identity(8, 8))};
}

// Gaussian W2 objective over V with the offset eliminated; central-difference gradient.
StiefelProblem w2_problem(const GaussianPair &pair)
{
  StiefelProblem problem;
  problem.m = pair.low.dim();
  problem.n = pair.high.dim();
  const BuresReference bures(pair.low.cov());
  const Matrix cov = pair.high.cov();
  problem.objective = [bures, cov](const Matrix &v, const Vector &) {
    return bures(symmetrize(v * cov * v.transpose()));
  };
  return problem;
}

void BM_MinimizeSerial(benchmark::State &state)
{
  const auto pair = gaussian_pair();
  const auto problem = w2_problem(pair);
  OptimizerParams params;
  params.restarts = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(minimize_serial(problem, params).value);
  state.SetItemsProcessed(state.iterations() * params.restarts);
}

void BM_MinimizeParallel(benchmark::State &state)
{
  const auto pair = gaussian_pair();
  const auto problem = w2_problem(pair);
  OptimizerParams params;
  params.restarts = static_cast<int>(state.range(0));
  params.threads = static_cast<int>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(minimize(problem, params).value);
  state.SetItemsProcessed(state.iterations() * params.restarts);
}

void BM_BruteForce(benchmark::State &state)
{
  std::mt19937_64 rng(2);
  Matrix x = normal_matrix(2, 5, rng);
  Matrix y = normal_matrix(4, 6, rng);
  const auto mu = DiscreteMeasure::uniform(x);
  const auto nu = DiscreteMeasure::uniform(y);
  std::function<double(const DiscreteMeasure &, const DiscreteMeasure &)> w2 =
      [](const DiscreteMeasure &a, const DiscreteMeasure &b) { return wp_discrete(a, b, 2.0).value; };
  SearchOptions options;
  options.samples = 256;
  options.threads = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(brute_force_search(w2, mu, nu, options).value);
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(options.samples));
}

BENCHMARK(BM_MinimizeSerial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MinimizeParallel)
    ->Args({8, 1})
    ->Args({8, 4})
    ->Args({32, 1})
    ->Args({32, 4})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK(BM_BruteForce)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

} // namespace

BENCHMARK_MAIN();
