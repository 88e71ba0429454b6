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

#include "augdist/measures.hpp"
#include "augdist/error.hpp"

#include <cmath>
#include <string>

namespace augdist {

double merge_tolerance(const Matrix &points)
{
  double max_norm = points.cols() == 0 ? 0.0 : points.colwise().norm().maxCoeff();
  return kMergeRelTol * (1.0 + max_norm);
}

MergedAtoms merge_atoms(const Matrix &points, const Vector &weights)
{
  const Eigen::Index count = points.cols();
  const double tol = merge_tolerance(points);

  MergedAtoms out;
  out.assignment.resize(static_cast<std::size_t>(count));
  std::vector<Eigen::Index> representatives;
  std::vector<double> merged_weights;

  for (Eigen::Index i = 0; i < count; ++i) {
    Eigen::Index target = -1;
    for (std::size_t r = 0; r < representatives.size(); ++r) {
      if ((points.col(representatives[r]) - points.col(i)).norm() <= tol) {
        target = static_cast<Eigen::Index>(r);
        break;
      }
    }
    if (target < 0) {
      target = static_cast<Eigen::Index>(representatives.size());
      representatives.push_back(i);
      merged_weights.push_back(0.0);
    }
    merged_weights[static_cast<std::size_t>(target)] += weights[i];
    out.assignment[static_cast<std::size_t>(i)] = target;
  }

  out.points.resize(points.rows(), static_cast<Eigen::Index>(representatives.size()));
  out.weights.resize(static_cast<Eigen::Index>(representatives.size()));
  for (std::size_t r = 0; r < representatives.size(); ++r) {
    out.points.col(static_cast<Eigen::Index>(r)) = points.col(representatives[r]);
    out.weights[static_cast<Eigen::Index>(r)] = merged_weights[r];
  }
  return out;
}

DiscreteMeasure DiscreteMeasure::make(const Matrix &points, const Vector &weights)
{
  if (points.rows() < 1 || points.cols() < 1)
    throw Error(ErrorCode::DimensionMismatch, "discrete measure needs at least one atom of positive dimension");
  if (points.cols() != weights.size())
    throw Error(ErrorCode::DimensionMismatch, "point count and weight count differ");
  if (!points.allFinite() || !weights.allFinite())
    throw Error(ErrorCode::NonFiniteEntry, "discrete measure has non-finite entries");
  if ((weights.array() < 0.0).any())
    throw Error(ErrorCode::WeightSumViolation, "negative weight");

  const double total = weights.sum();
  if (std::abs(total - 1.0) > kWeightRenormBand)
    throw Error(ErrorCode::WeightSumViolation, "weights sum to " + std::to_string(total));

  // Zero-mass atoms are not part of the support.
  Eigen::Index kept = (weights.array() > 0.0).count();
  Matrix support(points.rows(), kept);
  Vector mass(kept);
  for (Eigen::Index i = 0, j = 0; i < points.cols(); ++i) {
    if (weights[i] > 0.0) {
      support.col(j) = points.col(i);
      mass[j] = weights[i] / total;
      ++j;
    }
  }

  auto merged = merge_atoms(support, mass);
  return DiscreteMeasure(std::move(merged.points), std::move(merged.weights));
}

DiscreteMeasure DiscreteMeasure::make(const std::vector<Vector> &points, const std::vector<double> &weights)
{
  if (points.empty())
    throw Error(ErrorCode::DimensionMismatch, "discrete measure needs at least one atom");
  const Eigen::Index n = points.front().size();
  Matrix cols(n, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != n)
      throw Error(ErrorCode::DimensionMismatch, "atoms have different dimensions");
    cols.col(static_cast<Eigen::Index>(i)) = points[i];
  }
  Vector w = Eigen::Map<const Vector>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  return make(cols, w);
}

DiscreteMeasure DiscreteMeasure::dirac(const Vector &location)
{
  return make(Matrix(location), Vector::Ones(1));
}

DiscreteMeasure DiscreteMeasure::uniform(const Matrix &points)
{
  return make(points, Vector::Constant(points.cols(), 1.0 / static_cast<double>(points.cols())));
}

Vector DiscreteMeasure::mean() const
{
  return points_ * weights_;
}

GaussianMeasure GaussianMeasure::make(const Vector &mean, const Matrix &cov)
{
  const Eigen::Index n = mean.size();
  if (n < 1 || cov.rows() != n || cov.cols() != n)
    throw Error(ErrorCode::DimensionMismatch, "covariance shape does not match mean");
  if (!mean.allFinite() || !cov.allFinite())
    throw Error(ErrorCode::NonFiniteEntry, "gaussian has non-finite entries");

  const double scale = std::max(1.0, max_abs(cov));
  if (max_abs(cov - cov.transpose()) > 1e-10 * scale)
    throw Error(ErrorCode::NotPositiveSemidefinite, "covariance is not symmetric");

  Matrix sym = symmetrize(cov);
  auto eig = symmetric_eigen(sym);
  const double top = std::max(0.0, eig.values.maxCoeff());
  if (eig.values.minCoeff() < -1e-10 * top || (top == 0.0 && eig.values.minCoeff() < 0.0))
    throw Error(ErrorCode::NotPositiveSemidefinite,
                "covariance has eigenvalue " + std::to_string(eig.values.minCoeff()));
  if (eig.values.minCoeff() < 0.0) {
    Vector clamped = eig.values.cwiseMax(0.0);
    sym = symmetrize(eig.vectors * clamped.asDiagonal() * eig.vectors.transpose());
  }
  return GaussianMeasure(mean, std::move(sym));
}

UniformBallMeasure UniformBallMeasure::make(Eigen::Index dim)
{
  if (dim < 1)
    throw Error(ErrorCode::DimensionMismatch, "ball dimension must be positive");
  return UniformBallMeasure(dim);
}

AffineProjection AffineProjection::make(const Matrix &v, const Vector &b)
{
  if (v.rows() < 1 || v.rows() > v.cols())
    throw Error(ErrorCode::DimensionMismatch, "projection must satisfy 1 <= m <= n");
  if (b.size() != v.rows())
    throw Error(ErrorCode::DimensionMismatch, "offset length differs from projection rows");
  if (!v.allFinite() || !b.allFinite())
    throw Error(ErrorCode::NonFiniteEntry, "projection has non-finite entries");
  if (orthonormality_residual(v) > kOrthonormalTol)
    throw Error(ErrorCode::InvalidArgument, "projection rows are not orthonormal");
  return AffineProjection(v, b);
}

AffineProjection AffineProjection::make(const Matrix &v)
{
  return make(v, Vector::Zero(v.rows()));
}

AffineProjection AffineProjection::identity(Eigen::Index n)
{
  return AffineProjection(Matrix::Identity(n, n), Vector::Zero(n));
}

Matrix AffineProjection::apply_columns(const Matrix &points) const
{
  Matrix out = v_ * points;
  out.colwise() += b_;
  return out;
}

AffineProjection compose(const AffineProjection &outer, const AffineProjection &inner)
{
  if (outer.in_dim() != inner.out_dim())
    throw Error(ErrorCode::DimensionMismatch, "projections are not composable");
  return AffineProjection::make(outer.v() * inner.v(), outer.v() * inner.b() + outer.b());
}

DiscreteMeasure pushforward(const DiscreteMeasure &measure, const AffineProjection &map)
{
  if (measure.dim() != map.in_dim())
    throw Error(ErrorCode::DimensionMismatch, "measure dimension differs from projection input");
  return DiscreteMeasure::make(map.apply_columns(measure.points()), measure.weights());
}

GaussianMeasure pushforward(const GaussianMeasure &measure, const AffineProjection &map)
{
  if (measure.dim() != map.in_dim())
    throw Error(ErrorCode::DimensionMismatch, "measure dimension differs from projection input");
  Matrix cov = symmetrize(map.v() * measure.cov() * map.v().transpose());
  return GaussianMeasure::make(map.apply(measure.mean()), cov);
}

Eigen::Index dim(const Measure &measure)
{
  return std::visit([](const auto &m) { return m.dim(); }, measure);
}

} // namespace augdist
