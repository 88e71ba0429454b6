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

#include "augdist/augmented.hpp"
#include "augdist/error.hpp"
#include "augdist/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace augdist {

std::string_view to_string(Method method) noexcept
{
  switch (method) {
  case Method::ClosedForm: return "closed_form";
  case Method::Alternating: return "alternating";
  case Method::StiefelMultistart: return "stiefel_multistart";
  case Method::SameDimension: return "same_dimension";
  case Method::BruteForce: return "brute_force";
  case Method::FixedProjection: return "fixed_projection";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_lower_first(Eigen::Index m, Eigen::Index n)
{
  if (m > n)
    throw Error(ErrorCode::DimensionMismatch, "first measure must not have higher dimension than the second");
}

// Unit vector x with x^T cov x = target, built from the eigenvectors of the
// smallest and largest eigenvalues (lowest index on ties).
Vector rayleigh_certificate(const SymmetricEigen &eig, double target)
{
  const Eigen::Index n = eig.values.size();
  const double lo = eig.values[0];
  const double hi = eig.values[n - 1];
  Eigen::Index top = n - 1;
  for (Eigen::Index i = 0; i < n; ++i)
    if (eig.values[i] >= hi) {
      top = i;
      break;
    }
  const Vector q_lo = eig.vectors.col(0);
  const Vector q_hi = eig.vectors.col(top);
  if (top == 0 || hi - lo <= 0.0)
    return q_lo;
  const double s2 = std::clamp((target - lo) / (hi - lo), 0.0, 1.0);
  Vector x = std::sqrt(s2) * q_hi + std::sqrt(1.0 - s2) * q_lo;
  return x / x.norm();
}

struct OneDimSetup
{
  SymmetricEigen eig;
  PiecewiseSpec spec;
  double target = 0.0; // variance of the optimal projection
};

OneDimSetup one_dim_setup(const GaussianMeasure &first, const GaussianMeasure &second)
{
  if (first.dim() != 1)
    throw Error(ErrorCode::DimensionMismatch, "first gaussian must be one-dimensional");
  OneDimSetup s;
  s.eig = symmetric_eigen(second.cov());
  s.eig.values = s.eig.values.cwiseMax(0.0);
  const double var = first.cov()(0, 0);
  s.spec = {s.eig.values.maxCoeff(), s.eig.values.minCoeff(), std::sqrt(std::max(0.0, var))};
  s.target = std::clamp(var, s.spec.lambda_min, s.spec.lambda_max);
  return s;
}

DistanceReport one_dim_report(const GaussianMeasure &first, const GaussianMeasure &second,
                              const OneDimSetup &setup, double value)
{
  Vector x = rayleigh_certificate(setup.eig, setup.target);
  Matrix v = x.transpose();
  DistanceReport report;
  report.value = value;
  report.method = Method::ClosedForm;
  report.projection = AffineProjection::make(v, first.mean() - v * second.mean());
  return report;
}

double log_gamma_ball_constant(Eigen::Index m)
{
  const double md = static_cast<double>(m);
  return std::lgamma(md / 2.0 + 1.0) + md * std::log(2.0) / 2.0;
}

SymmetricEigen checked_spd(const Matrix &cov)
{
  auto eig = symmetric_eigen(cov);
  if (!(eig.values.minCoeff() > 0.0))
    throw Error(ErrorCode::SingularCovariance, "covariance is not strictly positive definite");
  return eig;
}

// ---- alternating solver for discrete W2 -----------------------------------

struct AlternatingState
{
  Matrix v;
  Vector b;
  double objective = kInf;
  Coupling plan;
  int rounds = 0;
};

class DiscretePairProblem
{
public:
  DiscretePairProblem(const DiscreteMeasure &first, const DiscreteMeasure &second)
    : x_(first.points()), p_(first.weights()), y_(second.points()), q_(second.weights())
  {
    x_mean_ = x_ * p_;
    y_mean_ = y_ * q_;
    x_centered_ = x_.colwise() - x_mean_;
    y_centered_ = y_.colwise() - y_mean_;
    scatter_ = y_centered_ * q_.asDiagonal() * y_centered_.transpose();
  }

  Eigen::Index m() const { return x_.rows(); }
  Eigen::Index n() const { return y_.rows(); }

  Vector offset(const Matrix &v) const { return x_mean_ - v * y_mean_; }

  // rows: atoms of the first measure; columns: projected atoms of the second
  Matrix cost(const Matrix &v, const Vector &b, double p) const
  {
    Matrix projected = v * y_;
    projected.colwise() += b;
    return power_distance_cost(x_, projected, p);
  }

  TransportResult transport(const Matrix &v, const Vector &b, double p) const
  {
    return ot_solve(cost(v, b, p), p_, q_);
  }

  // tr(V S V^T) - 2 tr(V C) with S the centered scatter of the second measure
  // and C the plan-weighted cross moment.
  StiefelProblem procrustes(const Matrix &plan) const
  {
    Matrix cross = y_centered_ * plan.transpose() * x_centered_.transpose(); // n x m
    StiefelProblem problem;
    problem.m = m();
    problem.n = n();
    problem.offset_mode = OffsetMode::None;
    const Matrix scatter = scatter_;
    problem.objective = [scatter, cross](const Matrix &v, const Vector &) {
      return (v * scatter * v.transpose()).trace() - 2.0 * (v * cross).trace();
    };
    problem.gradient = [scatter, cross](const Matrix &v, const Vector &, Matrix &gv, Vector &gb) {
      gv = 2.0 * v * scatter - 2.0 * cross.transpose();
      gb = Vector();
    };
    return problem;
  }

  // Envelope gradient of the transport value at fixed optimal plan.
  void transport_gradient(const Matrix &v, const Vector &b, double p, const Matrix &plan, Matrix &gv,
                          Vector &gb) const
  {
    gv = Matrix::Zero(m(), n());
    gb = Vector::Zero(m());
    for (Eigen::Index i = 0; i < plan.rows(); ++i)
      for (Eigen::Index j = 0; j < plan.cols(); ++j) {
        const double w = plan(i, j);
        if (w <= 0.0)
          continue;
        Vector r = v * y_.col(j) + b - x_.col(i);
        const double norm = r.norm();
        if (norm == 0.0)
          continue;
        Vector dr = w * p * std::pow(norm, p - 2.0) * r;
        gv += dr * y_.col(j).transpose();
        gb += dr;
      }
  }

private:
  Matrix x_;
  Vector p_;
  Matrix y_;
  Vector q_;
  Vector x_mean_;
  Vector y_mean_;
  Matrix x_centered_;
  Matrix y_centered_;
  Matrix scatter_;
};

AlternatingState alternate(const DiscretePairProblem &problem, Matrix v, const OptimizerParams &params)
{
  constexpr int kMaxRounds = 200;
  AlternatingState state;
  state.v = std::move(v);
  state.b = problem.offset(state.v);
  double previous = kInf;
  for (int round = 0; round < kMaxRounds; ++round) {
    auto solved = problem.transport(state.v, state.b, 2.0);
    state.objective = std::max(0.0, solved.value);
    state.plan = std::move(solved.coupling);
    state.rounds = round + 1;
    if (state.objective == 0.0)
      break;
    if (std::isfinite(previous) && std::abs(previous - state.objective) < 1e-12 * std::abs(previous))
      break;
    previous = state.objective;

    auto sub = problem.procrustes(state.plan.plan);
    auto stepped = descend(sub, {state.v, Vector()}, params);
    state.v = std::move(stepped.v);
    state.b = problem.offset(state.v);
  }
  return state;
}

AlternatingState best_alternating(const DiscretePairProblem &problem, const OptimizerParams &params,
                                  int &agreeing)
{
  params.validate();
  std::vector<AlternatingState> states(static_cast<std::size_t>(params.restarts));
  parallel::for_each_index(states.size(), params.threads, [&](std::size_t r) {
    Matrix start = haar_sample(problem.m(), problem.n(), params.seed + static_cast<std::uint64_t>(r));
    states[r] = alternate(problem, std::move(start), params);
  });
  std::vector<double> values;
  for (const auto &s : states)
    values.push_back(s.objective);
  std::size_t best = parallel::argmin_first(values);
  const double tol = 1e-8 * (1.0 + std::abs(values[best]));
  agreeing = static_cast<int>(
      std::count_if(values.begin(), values.end(), [&](double v) { return std::abs(v - values[best]) <= tol; }));
  return std::move(states[best]);
}

} // namespace

double w2_piecewise(const PiecewiseSpec &spec)
{
  const double lo = std::sqrt(spec.lambda_min);
  const double hi = std::sqrt(spec.lambda_max);
  if (spec.sigma < lo)
    return lo - spec.sigma;
  if (spec.sigma > hi)
    return spec.sigma - hi;
  return 0.0;
}

double kl_piecewise(const PiecewiseSpec &spec)
{
  const double s2 = spec.sigma * spec.sigma;
  const double lambda = std::clamp(s2, spec.lambda_min, spec.lambda_max);
  if (lambda == s2)
    return 0.0;
  return std::max(0.0, 0.5 * (s2 / lambda - 1.0 + std::log(lambda / s2)));
}

DistanceReport aug_w2_gauss_1d_nd(const GaussianMeasure &first, const GaussianMeasure &second)
{
  auto setup = one_dim_setup(first, second);
  return one_dim_report(first, second, setup, w2_piecewise(setup.spec));
}

DistanceReport aug_kl_gauss_1d_nd(const GaussianMeasure &first, const GaussianMeasure &second)
{
  auto setup = one_dim_setup(first, second);
  if (!(first.cov()(0, 0) > 0.0))
    throw Error(ErrorCode::SingularCovariance, "one-dimensional variance must be positive");
  if (!(setup.spec.lambda_min > 0.0))
    throw Error(ErrorCode::SingularCovariance, "covariance is not strictly positive definite");
  return one_dim_report(first, second, setup, kl_piecewise(setup.spec));
}

double gm_value(int m, double alpha, double beta)
{
  if (m < 1 || !(alpha >= beta) || !(beta >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "gm_value requires m >= 1 and alpha >= beta >= 0");
  const double knot = 1.0 / (m + 2.0);
  const double s = std::clamp(knot, beta, alpha);
  if (s == 0.0)
    return kInf;
  return std::log(s) / 2.0 + 1.0 / (2.0 * (m + 2.0) * s);
}

double kl_ball_gaussian(const UniformBallMeasure &ball, const GaussianMeasure &gaussian)
{
  if (ball.dim() != gaussian.dim())
    throw Error(ErrorCode::DimensionMismatch, "ball and gaussian live in different dimensions");
  auto eig = checked_spd(gaussian.cov());
  const double m = static_cast<double>(ball.dim());
  Eigen::LLT<Matrix> chol(symmetrize(gaussian.cov()));
  const double inv_trace = chol.solve(Matrix::Identity(ball.dim(), ball.dim())).trace();
  const double mahalanobis = gaussian.mean().dot(chol.solve(gaussian.mean()));
  return 0.5 * (eig.values.array().log().sum() + inv_trace / (m + 2.0) + mahalanobis) +
         log_gamma_ball_constant(ball.dim());
}

DistanceReport aug_kl_ball_gauss_multistart(const UniformBallMeasure &ball, const GaussianMeasure &gaussian,
                                            const OptimizerParams &params)
{
  const Eigen::Index m = ball.dim();
  const Eigen::Index n = gaussian.dim();
  require_lower_first(m, n);
  checked_spd(gaussian.cov());
  const Matrix cov = symmetrize(gaussian.cov());
  const Vector mean = gaussian.mean();
  const double md = static_cast<double>(m);
  const double constant = log_gamma_ball_constant(m);

  StiefelProblem problem;
  problem.m = m;
  problem.n = n;
  problem.offset_mode = OffsetMode::ClosedForm;
  problem.optimal_offset = [mean](const Matrix &v) -> Vector { return -(v * mean); };
  problem.objective = [cov, mean, md, constant](const Matrix &v, const Vector &b) {
    Matrix a = symmetrize(v * cov * v.transpose());
    Eigen::LLT<Matrix> chol(a);
    if (chol.info() != Eigen::Success)
      return kInf;
    const Vector shift = v * mean + b;
    const double log_det = 2.0 * chol.matrixL().toDenseMatrix().diagonal().array().log().sum();
    const double inv_trace = chol.solve(Matrix::Identity(a.rows(), a.rows())).trace();
    return 0.5 * (log_det + inv_trace / (md + 2.0) + shift.dot(chol.solve(shift))) + constant;
  };
  problem.gradient = [cov, md](const Matrix &v, const Vector &b, Matrix &gv, Vector &gb) {
    Matrix a = symmetrize(v * cov * v.transpose());
    Matrix inv = Eigen::LLT<Matrix>(a).solve(Matrix::Identity(a.rows(), a.rows()));
    gv = (inv - inv * inv / (md + 2.0)) * v * cov;
    gb = Vector::Zero(b.size());
  };

  auto outcome = minimize(problem, params);
  DistanceReport report;
  report.value = outcome.value;
  report.method = Method::StiefelMultistart;
  report.projection = AffineProjection::make(outcome.v, outcome.b);
  report.restarts_agreeing = outcome.restarts_agreeing;
  report.iterations = outcome.iterations;
  return report;
}

DistanceReport aug_kl_ball_gauss(const UniformBallMeasure &ball, const GaussianMeasure &gaussian,
                                 const OptimizerParams &params)
{
  const Eigen::Index m = ball.dim();
  const Eigen::Index n = gaussian.dim();
  require_lower_first(m, n);
  if (!(2 * m < n || m == 1))
    return aug_kl_ball_gauss_multistart(ball, gaussian, params);

  auto eig = checked_spd(gaussian.cov());
  // descending order: lambda_1 >= ... >= lambda_n
  Vector lambda = eig.values.reverse();
  Matrix q = eig.vectors.rowwise().reverse();

  const double knot = 1.0 / (static_cast<double>(m) + 2.0);
  double value = log_gamma_ball_constant(m);
  Matrix v(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = n - m + i;
    const double hi = lambda[i];
    const double lo = lambda[j];
    value += gm_value(static_cast<int>(m), hi, lo);
    const double target = std::clamp(knot, lo, hi);
    if (i == j || hi - lo <= 0.0) {
      v.row(i) = q.col(j).transpose();
    } else {
      const double s2 = std::clamp((target - lo) / (hi - lo), 0.0, 1.0);
      Vector row = std::sqrt(s2) * q.col(i) + std::sqrt(1.0 - s2) * q.col(j);
      v.row(i) = (row / row.norm()).transpose();
    }
  }

  DistanceReport report;
  report.value = value;
  report.method = Method::ClosedForm;
  report.projection = AffineProjection::make(v, -(v * gaussian.mean()));
  return report;
}

DistanceReport aug_w2_dirac_discrete(const Vector &location, const DiscreteMeasure &measure)
{
  const Eigen::Index m = location.size();
  const Eigen::Index n = measure.dim();
  if (m < 1 || m > n)
    throw Error(ErrorCode::DimensionMismatch, "dirac dimension must satisfy 1 <= m <= n");
  const Vector mean = measure.mean();
  Matrix centered = measure.points().colwise() - mean;
  Matrix scatter = centered * measure.weights().asDiagonal() * centered.transpose();
  auto eig = symmetric_eigen(scatter);

  Matrix v = eig.vectors.leftCols(m).transpose();
  DistanceReport report;
  report.value = std::sqrt(std::max(0.0, eig.values.head(m).sum()));
  report.method = Method::ClosedForm;
  report.projection = AffineProjection::make(v, location - v * mean);
  Coupling plan;
  plan.plan = measure.weights().transpose();
  plan.row_marginal = Vector::Ones(1);
  plan.col_marginal = measure.weights();
  report.plan = std::move(plan);
  return report;
}

DistanceReport aug_w2_discrete_discrete(const DiscreteMeasure &first, const DiscreteMeasure &second, double p,
                                        const OptimizerParams &params)
{
  require_lower_first(first.dim(), second.dim());
  if (!(p >= 1.0) || !std::isfinite(p))
    throw Error(ErrorCode::InvalidArgument, "p must be a finite value >= 1");

  DiscretePairProblem problem(first, second);
  int agreeing = 0;
  AlternatingState quadratic = best_alternating(problem, params, agreeing);

  DistanceReport report;
  if (p == 2.0) {
    report.value = std::sqrt(quadratic.objective);
    report.method = Method::Alternating;
    report.projection = AffineProjection::make(quadratic.v, quadratic.b);
    report.plan = std::move(quadratic.plan);
    report.restarts_agreeing = agreeing;
    report.iterations = quadratic.rounds;
    return report;
  }

  StiefelProblem stiefel;
  stiefel.m = problem.m();
  stiefel.n = problem.n();
  stiefel.offset_mode = OffsetMode::Gradient;
  stiefel.objective = [&problem, p](const Matrix &v, const Vector &b) { return problem.transport(v, b, p).value; };
  stiefel.gradient = [&problem, p](const Matrix &v, const Vector &b, Matrix &gv, Vector &gb) {
    auto solved = problem.transport(v, b, p);
    problem.transport_gradient(v, b, p, solved.coupling.plan, gv, gb);
  };
  stiefel.warm_starts.push_back({quadratic.v, quadratic.b});

  auto outcome = minimize(stiefel, params);
  auto final_plan = problem.transport(outcome.v, outcome.b, p);
  report.value = std::pow(std::max(0.0, final_plan.value), 1.0 / p);
  report.method = Method::StiefelMultistart;
  report.projection = AffineProjection::make(outcome.v, outcome.b);
  report.plan = std::move(final_plan.coupling);
  report.restarts_agreeing = outcome.restarts_agreeing;
  report.iterations = outcome.iterations;
  return report;
}

DistanceReport aug_w2_gauss_gauss(const GaussianMeasure &first, const GaussianMeasure &second,
                                  const OptimizerParams &params)
{
  require_lower_first(first.dim(), second.dim());
  const BuresReference bures(first.cov());
  const Matrix cov2 = second.cov();
  const Vector mean1 = first.mean();
  const Vector mean2 = second.mean();

  StiefelProblem problem;
  problem.m = first.dim();
  problem.n = second.dim();
  problem.offset_mode = OffsetMode::ClosedForm;
  problem.optimal_offset = [mean1, mean2](const Matrix &v) -> Vector { return mean1 - v * mean2; };
  // squared W2 against the projected gaussian
  problem.objective = [=](const Matrix &v, const Vector &b) {
    return (mean1 - v * mean2 - b).squaredNorm() + bures(symmetrize(v * cov2 * v.transpose()));
  };

  auto outcome = minimize(problem, params);
  DistanceReport report;
  report.value = std::sqrt(std::max(0.0, outcome.value));
  report.method = Method::StiefelMultistart;
  report.projection = AffineProjection::make(outcome.v, outcome.b);
  report.restarts_agreeing = outcome.restarts_agreeing;
  report.iterations = outcome.iterations;
  return report;
}

DistanceReport aug_kl_gauss_gauss(const GaussianMeasure &first, const GaussianMeasure &second,
                                  const OptimizerParams &params)
{
  require_lower_first(first.dim(), second.dim());
  auto eig1 = checked_spd(first.cov());
  checked_spd(second.cov());
  const Matrix cov1 = symmetrize(first.cov());
  const Matrix cov2 = symmetrize(second.cov());
  const Vector mean1 = first.mean();
  const Vector mean2 = second.mean();
  const double log_det1 = eig1.values.array().log().sum();
  const double md = static_cast<double>(first.dim());

  StiefelProblem problem;
  problem.m = first.dim();
  problem.n = second.dim();
  problem.offset_mode = OffsetMode::ClosedForm;
  problem.optimal_offset = [mean1, mean2](const Matrix &v) -> Vector { return mean1 - v * mean2; };
  problem.objective = [=](const Matrix &v, const Vector &b) {
    Matrix a = symmetrize(v * cov2 * v.transpose());
    Eigen::LLT<Matrix> chol(a);
    if (chol.info() != Eigen::Success)
      return kInf;
    const Vector diff = v * mean2 + b - mean1;
    const double log_det = 2.0 * chol.matrixL().toDenseMatrix().diagonal().array().log().sum();
    return 0.5 * (chol.solve(cov1).trace() + diff.dot(chol.solve(diff)) - md + log_det - log_det1);
  };
  problem.gradient = [cov1, cov2](const Matrix &v, const Vector &b, Matrix &gv, Vector &gb) {
    Matrix a = symmetrize(v * cov2 * v.transpose());
    Matrix inv = Eigen::LLT<Matrix>(a).solve(Matrix::Identity(a.rows(), a.rows()));
    gv = (inv - inv * cov1 * inv) * v * cov2;
    gb = Vector::Zero(b.size());
  };

  auto outcome = minimize(problem, params);
  DistanceReport report;
  report.value = std::max(0.0, outcome.value);
  report.method = Method::StiefelMultistart;
  report.projection = AffineProjection::make(outcome.v, outcome.b);
  report.restarts_agreeing = outcome.restarts_agreeing;
  report.iterations = outcome.iterations;
  return report;
}

} // namespace augdist
