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

#include "augdist/parallel.hpp"
#include "augdist/stiefel.hpp"
#include "test_util.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace augdist {
namespace {

TEST(Parallel, ArgminFirstBreaksTiesByIndex)
{
  const double nan = std::nan("");
  EXPECT_EQ(parallel::argmin_first({3.0, 1.0, 1.0, 2.0}), 1u);
  EXPECT_EQ(parallel::argmin_first({nan, 2.0, nan, 2.0}), 1u);
  EXPECT_EQ(parallel::argmin_first({nan, nan}), 2u);
  EXPECT_EQ(parallel::argmin_first({}), 0u);
}

TEST(Parallel, LowestFailingIndexWins)
{
  for (int threads : {1, 4}) {
    try {
      parallel::for_each_index(20, threads, [](std::size_t i) {
        if (i == 7 || i == 13)
          throw std::runtime_error(std::to_string(i));
      });
      FAIL() << "expected an exception";
    } catch (const std::runtime_error &e) {
      EXPECT_STREQ(e.what(), "7");
    }
  }
}

TEST(Parallel, EveryIndexVisitedOnce)
{
  std::vector<int> hits(100, 0);
  parallel::for_each_index(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits)
    EXPECT_EQ(h, 1);
}

TEST(Parallel, ResolveThreads)
{
  EXPECT_EQ(parallel::resolve_threads(3), 3);
  ::setenv("AUGDIST_THREADS", "5", 1);
  EXPECT_EQ(parallel::resolve_threads(0), 5);
  ::setenv("AUGDIST_THREADS", "junk", 1);
  EXPECT_GE(parallel::resolve_threads(0), 1);
  ::unsetenv("AUGDIST_THREADS");
  EXPECT_GE(parallel::resolve_threads(0), 1);
}

TEST(Parallel, MinimizeMatchesSerialBitwise)
{
  Matrix a = Matrix::Zero(3, 3);
  a.diagonal() << 3.0, 1.0, 2.0;
  StiefelProblem problem;
  problem.m = 2;
  problem.n = 3;
  problem.objective = [&](const Matrix &v, const Vector &) { return -(v * a * v.transpose()).trace(); };
  OptimizerParams params;
  params.restarts = 8;
  params.seed = 42;
  auto serial = minimize_serial(problem, params);
  for (int threads : {1, 2, 4}) {
    params.threads = threads;
    auto par = minimize(problem, params);
    EXPECT_EQ(par.value, serial.value);
    EXPECT_EQ(par.restart_index, serial.restart_index);
    EXPECT_EQ(par.iterations, serial.iterations);
    EXPECT_TRUE(par.v == serial.v);
    EXPECT_EQ(par.trace, serial.trace);
  }
}

} // namespace
} // namespace augdist
