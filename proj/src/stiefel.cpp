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

#include "augdist/stiefel.hpp"
#include "augdist/error.hpp"
#include "augdist/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace augdist {

void OptimizerParams::validate() const
{
  if (restarts < 1)
    throw Error(ErrorCode::InvalidArgument, "restarts must be >= 1");
  if (max_iters < 0)
    throw Error(ErrorCode::InvalidArgument, "max_iters must be >= 0");
  if (!(backtrack > 0.0 && backtrack < 1.0))
    throw Error(ErrorCode::InvalidArgument, "backtrack must lie in (0,1)");
  if (!(armijo_c > 0.0 && armijo_c < 1.0))
    throw Error(ErrorCode::InvalidArgument, "armijo_c must lie in (0,1)");
  if (!(grad_tol >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "grad_tol must be non-negative");
}

namespace {

// Rows of the result span the row space of y; positive-diagonal convention.
Matrix orthonormalize_rows(const Matrix &y)
{
  const Eigen::Index m = y.rows();
  const Eigen::Index n = y.cols();
  Eigen::HouseholderQR<Matrix> qr(y.transpose());
  Matrix r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  Vector diag = r.diagonal().cwiseAbs();
  if (diag.minCoeff() <= 1e-12 * std::max(diag.maxCoeff(), 1e-300))
    throw Error(ErrorCode::StepTooLarge, "retraction input is rank deficient");

  Matrix q = qr.householderQ() * Matrix::Identity(n, m);
  for (Eigen::Index i = 0; i < m; ++i)
    if (r(i, i) < 0.0)
      q.col(i) = -q.col(i);
  return q.transpose();
}

StiefelStart initial_point(const StiefelProblem &problem, const OptimizerParams &params, int restart)
{
  StiefelStart start;
  const auto index = static_cast<std::size_t>(restart);
  if (index < problem.warm_starts.size()) {
    start = problem.warm_starts[index];
  } else {
    start.v = haar_sample(problem.m, problem.n, params.seed + static_cast<std::uint64_t>(restart));
  }
  switch (problem.offset_mode) {
  case OffsetMode::None: start.b = Vector(); break;
  case OffsetMode::Gradient:
    if (start.b.size() != problem.m)
      start.b = Vector::Zero(problem.m);
    break;
  case OffsetMode::ClosedForm: start.b = problem.optimal_offset(start.v); break;
  }
  return start;
}

double checked_value(const StiefelProblem &problem, const Matrix &v, const Vector &b)
{
  double value = problem.objective(v, b);
  if (!std::isfinite(value))
    throw Error(ErrorCode::ObjectiveNonFinite, "objective is not finite at a feasible point");
  return value;
}

double evaluate_reduced(const StiefelProblem &problem, const Matrix &v, const Vector &b)
{
  if (problem.offset_mode == OffsetMode::ClosedForm)
    return problem.objective(v, problem.optimal_offset(v));
  return problem.objective(v, b);
}

std::vector<OptimizationOutcome> run_restarts(const StiefelProblem &problem, const OptimizerParams &params,
                                              bool serial)
{
  params.validate();
  std::vector<OptimizationOutcome> outcomes(static_cast<std::size_t>(params.restarts));
  auto body = [&](std::size_t r) {
    auto start = initial_point(problem, params, static_cast<int>(r));
    outcomes[r] = descend(problem, start, params);
    outcomes[r].restart_index = static_cast<int>(r);
  };
  if (serial)
    parallel::for_each_index_serial(outcomes.size(), body);
  else
    parallel::for_each_index(outcomes.size(), params.threads, body);
  return outcomes;
}

OptimizationOutcome reduce(std::vector<OptimizationOutcome> outcomes)
{
  std::vector<double> values;
  values.reserve(outcomes.size());
  for (const auto &o : outcomes)
    values.push_back(o.value);
  std::size_t best = parallel::argmin_first(values);
  OptimizationOutcome result = std::move(outcomes[best]);
  const double tol = 1e-8 * (1.0 + std::abs(result.value));
  result.restarts_agreeing = static_cast<int>(
      std::count_if(values.begin(), values.end(), [&](double v) { return std::abs(v - result.value) <= tol; }));
  return result;
}

} // namespace

Matrix haar_sample(Eigen::Index m, Eigen::Index n, std::uint64_t seed)
{
  if (m < 1 || m > n)
    throw Error(ErrorCode::InvalidArgument, "haar_sample requires 1 <= m <= n");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(m, n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      g(i, j) = normal(rng);
  return orthonormalize_rows(g);
}

Matrix tangent_project(const Matrix &v, const Matrix &g)
{
  if (v.rows() != g.rows() || v.cols() != g.cols())
    throw Error(ErrorCode::DimensionMismatch, "tangent_project shape mismatch");
  Matrix sym = g * v.transpose();
  sym = 0.5 * (sym + sym.transpose()).eval();
  return g - sym * v;
}

Matrix retract_qr(const Matrix &v, const Matrix &delta, double step)
{
  if (v.rows() != delta.rows() || v.cols() != delta.cols())
    throw Error(ErrorCode::DimensionMismatch, "retract_qr shape mismatch");
  return orthonormalize_rows(v + step * delta);
}

void finite_difference_gradient(const StiefelProblem &problem, const Matrix &v, const Vector &b,
                                Matrix &grad_v, Vector &grad_b)
{
  grad_v.resize(v.rows(), v.cols());
  const double hv = 1e-6 * (1.0 + max_abs(v));
  Matrix probe = v;
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
      const double saved = probe(i, j);
      probe(i, j) = saved + hv;
      const double up = evaluate_reduced(problem, probe, b);
      probe(i, j) = saved - hv;
      const double down = evaluate_reduced(problem, probe, b);
      probe(i, j) = saved;
      grad_v(i, j) = (up - down) / (2.0 * hv);
    }
  }

  if (problem.offset_mode != OffsetMode::Gradient) {
    grad_b = Vector::Zero(b.size());
    return;
  }
  grad_b.resize(b.size());
  const double hb = 1e-6 * (1.0 + max_abs(b));
  Vector shifted = b;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    const double saved = shifted[i];
    shifted[i] = saved + hb;
    const double up = problem.objective(v, shifted);
    shifted[i] = saved - hb;
    const double down = problem.objective(v, shifted);
    shifted[i] = saved;
    grad_b[i] = (up - down) / (2.0 * hb);
  }
}

OptimizationOutcome descend(const StiefelProblem &problem, const StiefelStart &start,
                            const OptimizerParams &params)
{
  const bool move_b = problem.offset_mode == OffsetMode::Gradient;

  Matrix v = start.v;
  Vector b = start.b;
  double value = checked_value(problem, v, b);

  OptimizationOutcome out;
  out.trace.push_back(value);

  Matrix prev_v, prev_dir_v;
  Vector prev_b, prev_dir_b;
  Matrix grad_v;
  Vector grad_b;
  int stagnant = 0;

  int iter = 0;
  for (; iter < params.max_iters; ++iter) {
    if (problem.gradient)
      problem.gradient(v, b, grad_v, grad_b);
    else
      finite_difference_gradient(problem, v, b, grad_v, grad_b);
    if (!move_b)
      grad_b = Vector::Zero(b.size());

    Matrix dir_v = tangent_project(v, grad_v);
    const double gnorm2 = dir_v.squaredNorm() + grad_b.squaredNorm();
    out.grad_norm = std::sqrt(gnorm2);
    if (out.grad_norm <= params.grad_tol) {
      out.converged = true;
      break;
    }

    // Barzilai-Borwein trial step, alternating its two forms.
    double step = 1.0;
    if (iter > 0) {
      const double ss = (v - prev_v).squaredNorm() + (move_b ? (b - prev_b).squaredNorm() : 0.0);
      const double yy = (dir_v - prev_dir_v).squaredNorm() + (move_b ? (grad_b - prev_dir_b).squaredNorm() : 0.0);
      const double sy = (v - prev_v).cwiseProduct(dir_v - prev_dir_v).sum() +
                        (move_b ? (b - prev_b).dot(grad_b - prev_dir_b) : 0.0);
      if (sy > 0.0 && yy > 0.0)
        step = (iter % 2 == 1) ? ss / sy : sy / yy;
    }
    step = std::clamp(step, 1e-12, 1e12);

    bool accepted = false;
    Matrix next_v;
    Vector next_b;
    double next_value = value;
    for (int tries = 0; tries < 80; ++tries, step *= params.backtrack) {
      try {
        next_v = retract_qr(v, dir_v, -step);
      } catch (const Error &e) {
        if (e.code() == ErrorCode::StepTooLarge)
          continue;
        throw;
      }
      switch (problem.offset_mode) {
      case OffsetMode::None: next_b = b; break;
      case OffsetMode::Gradient: next_b = b - step * grad_b; break;
      case OffsetMode::ClosedForm: next_b = problem.optimal_offset(next_v); break;
      }
      next_value = checked_value(problem, next_v, next_b);
      if (next_value <= value - params.armijo_c * step * gnorm2) {
        accepted = true;
        break;
      }
    }
    if (!accepted)
      break;

    stagnant = (next_value == value) ? stagnant + 1 : 0;
    prev_v = std::move(v);
    prev_b = std::move(b);
    prev_dir_v = std::move(dir_v);
    prev_dir_b = grad_b;
    v = std::move(next_v);
    b = std::move(next_b);
    value = next_value;
    out.trace.push_back(value);
    if (stagnant >= 5) {
      ++iter;
      break;
    }
  }

  out.v = std::move(v);
  out.b = std::move(b);
  out.value = value;
  out.iterations = iter;
  return out;
}

OptimizationOutcome minimize(const StiefelProblem &problem, const OptimizerParams &params)
{
  return reduce(run_restarts(problem, params, false));
}

OptimizationOutcome minimize_serial(const StiefelProblem &problem, const OptimizerParams &params)
{
  return reduce(run_restarts(problem, params, true));
}

} // namespace augdist
