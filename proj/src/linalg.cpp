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

#include "augdist/linalg.hpp"
#include "augdist/error.hpp"

#include <cmath>

namespace augdist {

std::string_view to_string(ErrorCode code) noexcept
{
  switch (code) {
  case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
  case ErrorCode::WeightSumViolation: return "WeightSumViolation";
  case ErrorCode::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
  case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  case ErrorCode::SingularCovariance: return "SingularCovariance";
  case ErrorCode::InfeasibleMarginals: return "InfeasibleMarginals";
  case ErrorCode::StepTooLarge: return "StepTooLarge";
  case ErrorCode::ObjectiveNonFinite: return "ObjectiveNonFinite";
  case ErrorCode::SupportViolation: return "SupportViolation";
  case ErrorCode::InvalidArgument: return "InvalidArgument";
  case ErrorCode::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

SymmetricEigen symmetric_eigen(const Matrix &a)
{
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(a));
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix psd_sqrt(const Matrix &a)
{
  auto eig = symmetric_eigen(a);
  Vector root = eig.values.cwiseMax(0.0).cwiseSqrt();
  return symmetrize(eig.vectors * root.asDiagonal() * eig.vectors.transpose());
}

BuresReference::BuresReference(const Matrix &cov)
{
  auto eig = symmetric_eigen(cov);
  Vector lambda = eig.values.cwiseMax(0.0);
  root_ = symmetrize(eig.vectors * lambda.cwiseSqrt().asDiagonal() * eig.vectors.transpose());
  trace_ = lambda.sum();
  const double top = lambda.size() ? lambda.maxCoeff() : 0.0;
  invertible_ = lambda.size() > 0 && lambda.minCoeff() > 1e-12 * std::max(1.0, top);
  if (invertible_)
    root_inv_ =
        symmetrize(eig.vectors * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * eig.vectors.transpose());
}

double BuresReference::operator()(const Matrix &a) const
{
  Matrix cross = psd_sqrt(root_ * a * root_);
  if (invertible_)
    return (root_ - root_inv_ * cross).squaredNorm();
  return std::max(0.0, trace_ + a.trace() - 2.0 * cross.trace());
}

double orthonormality_residual(const Matrix &v)
{
  Matrix gram = v * v.transpose();
  gram -= Matrix::Identity(v.rows(), v.rows());
  return max_abs(gram);
}

double max_abs(const Matrix &a)
{
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

bool all_finite(const Matrix &a)
{
  return a.allFinite();
}

} // namespace augdist
