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

#include <cmath>
#include <cstdlib>
#include <string>

namespace augdist::parallel {

int resolve_threads(int requested)
{
  if (requested > 0)
    return requested;
  if (const char *env = std::getenv("AUGDIST_THREADS")) {
    try {
      int value = std::stoi(env);
      if (value > 0)
        return value;
    } catch (const std::exception &) {
      // unparsable values fall through to auto
    }
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::size_t argmin_first(const std::vector<double> &values)
{
  std::size_t best = values.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i]))
      continue;
    if (best == values.size() || values[i] < values[best])
      best = i;
  }
  return best;
}

} // namespace augdist::parallel
