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

#include <cstddef>
#include <variant>
#include <vector>

namespace augdist {

/// Absolute band within which input weights are renormalized instead of rejected.
inline constexpr double kWeightRenormBand = 1e-9;
/// Relative tolerance used when deciding whether two atoms coincide.
inline constexpr double kMergeRelTol = 1e-9;

/// Result of canonical atom merging. `assignment[i]` is the output atom that
/// input atom i was merged into. Output atoms keep first-occurrence order.
struct MergedAtoms
{
  Matrix points; // dim x k, one atom per column
  Vector weights;
  std::vector<Eigen::Index> assignment;
};

/// Merge distance for a point cloud: 1e-9 * (1 + largest atom norm).
double merge_tolerance(const Matrix &points);

MergedAtoms merge_atoms(const Matrix &points, const Vector &weights);

/// Finite atomic probability measure on R^n. Immutable once built.
class DiscreteMeasure
{
public:
  /// Columns of `points` are atoms. Validates, renormalizes, drops zero-mass
  /// atoms and merges coincident ones.
  static DiscreteMeasure make(const Matrix &points, const Vector &weights);
  static DiscreteMeasure make(const std::vector<Vector> &points, const std::vector<double> &weights);
  static DiscreteMeasure dirac(const Vector &location);
  /// Uniform weights over the given atoms.
  static DiscreteMeasure uniform(const Matrix &points);

  Eigen::Index dim() const { return points_.rows(); }
  Eigen::Index size() const { return points_.cols(); }
  const Matrix &points() const { return points_; }
  const Vector &weights() const { return weights_; }
  Vector point(Eigen::Index i) const { return points_.col(i); }
  double weight(Eigen::Index i) const { return weights_[i]; }

  /// Weighted mean of the atoms.
  Vector mean() const;

private:
  DiscreteMeasure(Matrix points, Vector weights)
    : points_(std::move(points)), weights_(std::move(weights))
  {}

  Matrix points_;
  Vector weights_;
};

class GaussianMeasure
{
public:
  /// Symmetrizes the covariance and clamps tiny negative eigenvalues to 0.
  static GaussianMeasure make(const Vector &mean, const Matrix &cov);

  Eigen::Index dim() const { return mean_.size(); }
  const Vector &mean() const { return mean_; }
  const Matrix &cov() const { return cov_; }

private:
  GaussianMeasure(Vector mean, Matrix cov) : mean_(std::move(mean)), cov_(std::move(cov)) {}

  Vector mean_;
  Matrix cov_;
};

/// Uniform probability measure on the closed unit ball of R^dim.
class UniformBallMeasure
{
public:
  static UniformBallMeasure make(Eigen::Index dim);

  Eigen::Index dim() const { return dim_; }

private:
  explicit UniformBallMeasure(Eigen::Index dim) : dim_(dim) {}

  Eigen::Index dim_;
};

/// x -> V x + b with V having orthonormal rows (m <= n).
class AffineProjection
{
public:
  static constexpr double kOrthonormalTol = 1e-10;

  static AffineProjection make(const Matrix &v, const Vector &b);
  static AffineProjection make(const Matrix &v);
  static AffineProjection identity(Eigen::Index n);

  Eigen::Index out_dim() const { return v_.rows(); }
  Eigen::Index in_dim() const { return v_.cols(); }
  const Matrix &v() const { return v_; }
  const Vector &b() const { return b_; }

  Vector apply(const Vector &x) const { return v_ * x + b_; }
  /// Applies the map to every column.
  Matrix apply_columns(const Matrix &points) const;

private:
  AffineProjection(Matrix v, Vector b) : v_(std::move(v)), b_(std::move(b)) {}

  Matrix v_;
  Vector b_;
};

/// outer o inner, i.e. x -> outer(inner(x)).
AffineProjection compose(const AffineProjection &outer, const AffineProjection &inner);

DiscreteMeasure pushforward(const DiscreteMeasure &measure, const AffineProjection &map);
GaussianMeasure pushforward(const GaussianMeasure &measure, const AffineProjection &map);

using Measure = std::variant<GaussianMeasure, DiscreteMeasure, UniformBallMeasure>;

Eigen::Index dim(const Measure &measure);

} // namespace augdist
