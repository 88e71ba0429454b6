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

#include "augdist/linalg.hpp"

namespace augdist {

/// Transport plan with its prescribed marginals.
struct Coupling
{
  Matrix plan; // rows follow row_marginal, columns follow col_marginal
  Vector row_marginal;
  Vector col_marginal;

  /// Largest absolute deviation of plan row/column sums from the marginals.
  double marginal_residual() const;
};

struct TransportResult
{
  double value = 0.0;
  Coupling coupling;
  int pivots = 0;
};

/// Exact discrete optimal transport by the transportation (network) simplex
/// method with Bland's pivoting rule. The returned plan is a basic feasible
/// solution with at most rows + cols - 1 nonzero entries.
TransportResult ot_solve(const Matrix &cost, const Vector &row_weights, const Vector &col_weights);

} // namespace augdist
