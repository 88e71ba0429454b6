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

#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace augdist::parallel {

/// Thread count to use for a request: a positive request wins, otherwise the
/// AUGDIST_THREADS environment variable, otherwise the OpenMP default.
int resolve_threads(int requested);

/// Reference loop: runs fn(0), fn(1), ... in order on the calling thread.
template <class Fn>
void for_each_index_serial(std::size_t count, Fn &&fn)
{
  for (std::size_t i = 0; i < count; ++i)
    fn(i);
}

/// Runs fn(i) for every index with up to `threads` OpenMP threads. Each index
/// must write only its own output slot. If any call throws, the exception of
/// the lowest failing index is rethrown after the loop.
template <class Fn>
void for_each_index(std::size_t count, int threads, Fn &&fn)
{
  const int workers = resolve_threads(threads);
  if (workers <= 1 || count <= 1) {
    for_each_index_serial(count, fn);
    return;
  }

  std::vector<std::exception_ptr> failures(count);
  const auto total = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (long long i = 0; i < total; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      failures[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto &failure : failures)
    if (failure)
      std::rethrow_exception(failure);
}

/// Index of the smallest value; ties go to the lowest index. NaN entries are
/// skipped. Returns count when every entry is NaN.
std::size_t argmin_first(const std::vector<double> &values);

} // namespace augdist::parallel
