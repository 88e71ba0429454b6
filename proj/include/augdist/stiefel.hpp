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

#include <cstdint>
#include <functional>
#include <vector>

namespace augdist {

struct OptimizerParams
{
  int restarts = 32;
  int max_iters = 500;
  double grad_tol = 1e-10;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  std::uint64_t seed = 0;
  /// 0 = AUGDIST_THREADS or OpenMP default.
  int threads = 0;

  void validate() const;
};

/// How the offset b is handled by the optimizer.
enum class OffsetMode
{
  None,       ///< b is an empty vector
  Gradient,   ///< b descends jointly with V
  ClosedForm, ///< b = optimal_offset(V) after every V update
};

struct StiefelStart
{
  Matrix v;
  Vector b;
};

/// Objective over {V in R^{m x n}: V V^T = I_m} x R^m.
struct StiefelProblem
{
  Eigen::Index m = 1;
  Eigen::Index n = 1;
  std::function<double(const Matrix &v, const Vector &b)> objective;
  /// Optional Euclidean gradient; central differences are used when empty.
  std::function<void(const Matrix &v, const Vector &b, Matrix &grad_v, Vector &grad_b)> gradient;
  OffsetMode offset_mode = OffsetMode::None;
  std::function<Vector(const Matrix &v)> optimal_offset;
  /// Deterministic starting points that take the place of the first Haar draws.
  std::vector<StiefelStart> warm_starts;
};

struct OptimizationOutcome
{
  Matrix v;
  Vector b;
  double value = 0.0;
  int iterations = 0;
  int restart_index = 0;
  double grad_norm = 0.0;
  bool converged = false;
  /// Restarts whose final value lies within 1e-8 (relative) of the best.
  int restarts_agreeing = 0;
  /// Objective value before every accepted step, plus the final value.
  std::vector<double> trace;
};

/// Haar-distributed point of the Stiefel manifold: rows of the sign-fixed
/// thin-QR factor of an i.i.d. standard-normal m x n matrix.
Matrix haar_sample(Eigen::Index m, Eigen::Index n, std::uint64_t seed);

/// Projection of G onto the tangent space at V: G - (G V^T + V G^T) V / 2.
Matrix tangent_project(const Matrix &v, const Matrix &g);

/// Row-orthonormalization of V + step * delta with positive-diagonal QR.
Matrix retract_qr(const Matrix &v, const Matrix &delta, double step);

/// Central-difference gradient of the problem objective (see OffsetMode for
/// how b participates).
void finite_difference_gradient(const StiefelProblem &problem, const Matrix &v, const Vector &b,
                                Matrix &grad_v, Vector &grad_b);

/// Single-start projected gradient descent with Armijo backtracking.
OptimizationOutcome descend(const StiefelProblem &problem, const StiefelStart &start,
                            const OptimizerParams &params);

/// Multistart descent; restarts run in parallel, reduction picks the smallest
/// value with ties broken by restart index.
OptimizationOutcome minimize(const StiefelProblem &problem, const OptimizerParams &params);

/// Serial reference for `minimize`; results are bitwise identical.
OptimizationOutcome minimize_serial(const StiefelProblem &problem, const OptimizerParams &params);

} // namespace augdist
