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

#include "augdist/error.hpp"
#include "augdist/measures.hpp"

#include <gtest/gtest.h>

#include <cstdint>
#include <random>

namespace augdist::test {

inline Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64 &rng)
{
  std::normal_distribution<double> normal;
  Matrix out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i)
      out(i, j) = normal(rng);
  return out;
}

inline Vector simplex_weights(Eigen::Index k, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  Vector w(k);
  for (Eigen::Index i = 0; i < k; ++i)
    w[i] = unit(rng);
  return w / w.sum();
}

inline DiscreteMeasure random_discrete(Eigen::Index dim, Eigen::Index k, std::mt19937_64 &rng)
{
  Matrix points = gaussian_matrix(dim, k, rng);
  Vector weights = simplex_weights(k, rng);
  return DiscreteMeasure::make(points, weights);
}

inline Matrix random_spd(Eigen::Index n, std::mt19937_64 &rng)
{
  Matrix a = gaussian_matrix(n, n, rng);
  return a * a.transpose() + 0.5 * Matrix::Identity(n, n);
}

inline GaussianMeasure random_gaussian(Eigen::Index n, std::mt19937_64 &rng)
{
  return GaussianMeasure::make(gaussian_matrix(n, 1, rng).col(0), random_spd(n, rng));
}

template <class Fn>
ErrorCode error_code_of(Fn &&fn)
{
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  ADD_FAILURE() << "no augdist::Error thrown";
  return ErrorCode::Unsupported;
}

} // namespace augdist::test
