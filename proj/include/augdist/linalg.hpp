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

#include <Eigen/Dense>

namespace augdist {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Eigenvalues in ascending order with matching eigenvector columns.
struct SymmetricEigen
{
  Vector values;
  Matrix vectors;
};

inline Matrix symmetrize(const Matrix &a) { return 0.5 * (a + a.transpose()); }

/// Eigendecomposition of (A + A^T)/2.
SymmetricEigen symmetric_eigen(const Matrix &a);

/// Principal square root of a PSD matrix; negative eigenvalues are clamped to 0.
Matrix psd_sqrt(const Matrix &a);

/// Squared Bures distance tr(S + A - 2 (R A R)^{1/2}) to a fixed covariance S
/// with R = S^{1/2}. For positive definite S it is evaluated as the sum of
/// squares ||R - R^{-1} (R A R)^{1/2}||_F^2.
class BuresReference
{
public:
  explicit BuresReference(const Matrix &cov);

  double operator()(const Matrix &a) const;

private:
  Matrix root_;
  Matrix root_inv_;
  bool invertible_ = false;
  double trace_ = 0.0;
};

/// max_ij |V V^T - I|_ij
double orthonormality_residual(const Matrix &v);

double max_abs(const Matrix &a);

bool all_finite(const Matrix &a);

} // namespace augdist
