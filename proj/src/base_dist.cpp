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

#include "augdist/base_dist.hpp"
#include "augdist/error.hpp"

#include <cmath>
#include <limits>

namespace augdist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool needs_theta(DivergenceKind kind)
{
  switch (kind) {
  case DivergenceKind::Renyi:
  case DivergenceKind::Chernoff:
  case DivergenceKind::AlphaBeta:
  case DivergenceKind::JensenShannon: return true;
  default: return false;
  }
}

void require_same_dim(const DiscreteMeasure &mu, const DiscreteMeasure &nu)
{
  if (mu.dim() != nu.dim())
    throw Error(ErrorCode::DimensionMismatch, "measures live in different dimensions");
}

double log_det_spd(const SymmetricEigen &eig)
{
  return eig.values.array().log().sum();
}

SymmetricEigen spd_eigen(const Matrix &cov)
{
  auto eig = symmetric_eigen(cov);
  if (!(eig.values.minCoeff() > 0.0))
    throw Error(ErrorCode::SingularCovariance, "covariance is not strictly positive definite");
  return eig;
}

} // namespace

DivergenceGenerator DivergenceGenerator::make(DivergenceKind kind, double theta, double phi)
{
  if (needs_theta(kind) && !(theta > 0.0 && theta < 1.0))
    throw Error(ErrorCode::InvalidArgument, "theta must lie in (0,1)");
  if (kind == DivergenceKind::AlphaBeta && !(phi > 0.0 && phi < 1.0))
    throw Error(ErrorCode::InvalidArgument, "phi must lie in (0,1)");
  return DivergenceGenerator(kind, theta, phi);
}

std::string DivergenceGenerator::name() const
{
  switch (kind_) {
  case DivergenceKind::KL: return "kl";
  case DivergenceKind::Exponential: return "exponential";
  case DivergenceKind::Pearson: return "pearson";
  case DivergenceKind::Hellinger: return "hellinger";
  case DivergenceKind::Jeffreys: return "jeffreys";
  case DivergenceKind::Renyi: return "renyi:" + std::to_string(theta_);
  case DivergenceKind::Chernoff: return "chernoff:" + std::to_string(theta_);
  case DivergenceKind::AlphaBeta: return "alphabeta:" + std::to_string(theta_) + ":" + std::to_string(phi_);
  case DivergenceKind::JensenShannon: return "js:" + std::to_string(theta_);
  case DivergenceKind::TotalVariation: return "tv";
  }
  return "unknown";
}

double DivergenceGenerator::operator()(double t) const
{
  const double th = theta_;
  switch (kind_) {
  case DivergenceKind::KL: return t * std::log(t);
  case DivergenceKind::Exponential: {
    const double l = std::log(t);
    return t * l * l;
  }
  case DivergenceKind::Pearson: return (t - 1.0) * (t - 1.0);
  case DivergenceKind::Hellinger: {
    const double r = std::sqrt(t) - 1.0;
    return r * r;
  }
  case DivergenceKind::Jeffreys: return (t - 1.0) * std::log(t);
  case DivergenceKind::Renyi: return (std::pow(t, th) - t) / (th * (th - 1.0));
  case DivergenceKind::Chernoff: return 4.0 * (1.0 - std::pow(t, 0.5 * (1.0 + th))) / (1.0 - th * th);
  case DivergenceKind::AlphaBeta:
    return 2.0 * (1.0 - std::pow(t, 0.5 * (1.0 - th))) * (1.0 - std::pow(t, 0.5 * (1.0 - phi_))) /
           ((1.0 - th) * (1.0 - phi_));
  case DivergenceKind::JensenShannon:
    return 0.5 * t * std::log(t / ((1.0 - th) * t + th)) + 0.5 * std::log(1.0 / (1.0 - th + th * t));
  case DivergenceKind::TotalVariation: return 0.5 * std::abs(t - 1.0);
  }
  return 0.0;
}

double DivergenceGenerator::at_zero() const
{
  const double th = theta_;
  switch (kind_) {
  case DivergenceKind::KL:
  case DivergenceKind::Exponential:
  case DivergenceKind::Renyi: return 0.0;
  case DivergenceKind::Pearson:
  case DivergenceKind::Hellinger: return 1.0;
  case DivergenceKind::Jeffreys: return kInf;
  case DivergenceKind::Chernoff: return 4.0 / (1.0 - th * th);
  case DivergenceKind::AlphaBeta: return 2.0 / ((1.0 - th) * (1.0 - phi_));
  case DivergenceKind::JensenShannon: return 0.5 * std::log(1.0 / (1.0 - th));
  case DivergenceKind::TotalVariation: return 0.5;
  }
  return 0.0;
}

double DivergenceGenerator::slope_at_infinity() const
{
  const double th = theta_;
  switch (kind_) {
  case DivergenceKind::KL:
  case DivergenceKind::Exponential:
  case DivergenceKind::Pearson:
  case DivergenceKind::Jeffreys: return kInf;
  case DivergenceKind::Hellinger: return 1.0;
  // t^theta / t -> 0 leaves -t / (theta (theta - 1)) / t
  case DivergenceKind::Renyi: return 1.0 / (th * (1.0 - th));
  // sublinear growth
  case DivergenceKind::Chernoff:
  case DivergenceKind::AlphaBeta: return 0.0;
  case DivergenceKind::JensenShannon: return 0.5 * std::log(1.0 / (1.0 - th));
  case DivergenceKind::TotalVariation: return 0.5;
  }
  return 0.0;
}

AlignedMasses align_supports(const DiscreteMeasure &mu, const DiscreteMeasure &nu)
{
  require_same_dim(mu, nu);
  Matrix combined(mu.dim(), mu.size() + nu.size());
  combined << mu.points(), nu.points();
  const double tol = merge_tolerance(combined);

  AlignedMasses out;
  std::vector<Eigen::Index> extra;
  out.first_index.resize(static_cast<std::size_t>(mu.size()));
  out.second_index.resize(static_cast<std::size_t>(nu.size()));
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    out.first_index[static_cast<std::size_t>(i)] = i;

  for (Eigen::Index j = 0; j < nu.size(); ++j) {
    Eigen::Index match = -1;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      if ((mu.points().col(i) - nu.points().col(j)).norm() <= tol) {
        match = i;
        break;
      }
    }
    if (match < 0) {
      match = mu.size() + static_cast<Eigen::Index>(extra.size());
      extra.push_back(j);
    }
    out.second_index[static_cast<std::size_t>(j)] = match;
  }

  const Eigen::Index total = mu.size() + static_cast<Eigen::Index>(extra.size());
  out.points.resize(mu.dim(), total);
  out.points.leftCols(mu.size()) = mu.points();
  for (std::size_t e = 0; e < extra.size(); ++e)
    out.points.col(mu.size() + static_cast<Eigen::Index>(e)) = nu.points().col(extra[e]);

  out.first = Vector::Zero(total);
  out.second = Vector::Zero(total);
  out.first.head(mu.size()) = mu.weights();
  for (Eigen::Index j = 0; j < nu.size(); ++j)
    out.second[out.second_index[static_cast<std::size_t>(j)]] += nu.weight(j);
  return out;
}

Matrix power_distance_cost(const Matrix &mu_points, const Matrix &nu_points, double p)
{
  Matrix cost(mu_points.cols(), nu_points.cols());
  for (Eigen::Index i = 0; i < mu_points.cols(); ++i)
    for (Eigen::Index j = 0; j < nu_points.cols(); ++j) {
      const double d = (mu_points.col(i) - nu_points.col(j)).norm();
      cost(i, j) = p == 2.0 ? d * d : std::pow(d, p);
    }
  return cost;
}

WassersteinResult wp_discrete(const DiscreteMeasure &mu, const DiscreteMeasure &nu, double p)
{
  require_same_dim(mu, nu);
  if (!(p >= 1.0) || !std::isfinite(p))
    throw Error(ErrorCode::InvalidArgument, "p must be a finite value >= 1");
  auto solved = ot_solve(power_distance_cost(mu.points(), nu.points(), p), mu.weights(), nu.weights());
  WassersteinResult out;
  out.value = std::pow(std::max(0.0, solved.value), 1.0 / p);
  out.coupling = std::move(solved.coupling);
  return out;
}

double w2_gaussian(const GaussianMeasure &first, const GaussianMeasure &second)
{
  if (first.dim() != second.dim())
    throw Error(ErrorCode::DimensionMismatch, "gaussians live in different dimensions");
  const double bures = BuresReference(second.cov())(first.cov());
  return std::sqrt((first.mean() - second.mean()).squaredNorm() + bures);
}

double kl_gaussian(const GaussianMeasure &first, const GaussianMeasure &second)
{
  if (first.dim() != second.dim())
    throw Error(ErrorCode::DimensionMismatch, "gaussians live in different dimensions");
  auto eig1 = spd_eigen(first.cov());
  auto eig2 = spd_eigen(second.cov());
  Eigen::LLT<Matrix> chol(symmetrize(second.cov()));
  const Vector diff = second.mean() - first.mean();
  const double trace_term = chol.solve(first.cov()).trace();
  const double mahalanobis = diff.dot(chol.solve(diff));
  const double n = static_cast<double>(first.dim());
  return 0.5 * (trace_term + mahalanobis - n + log_det_spd(eig2) - log_det_spd(eig1));
}

double tv_masses(const Vector &p, const Vector &q)
{
  return (p - q).cwiseMax(0.0).sum();
}

TvCertificate tv_discrete(const DiscreteMeasure &mu, const DiscreteMeasure &nu)
{
  auto aligned = align_supports(mu, nu);
  TvCertificate cert;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double excess = aligned.first[i] - aligned.second[i];
    if (excess > 0.0) {
      cert.positive_set.push_back(i);
      cert.value += excess;
    }
  }
  return cert;
}

double js_masses(const Vector &p, const Vector &q, double theta)
{
  if (!(theta > 0.0 && theta < 1.0))
    throw Error(ErrorCode::InvalidArgument, "theta must lie in (0,1)");
  double total = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double zeta = (1.0 - theta) * p[i] + theta * q[i];
    const double eta = (1.0 - theta) * q[i] + theta * p[i];
    if (p[i] > 0.0)
      total += 0.5 * p[i] * std::log(p[i] / zeta);
    if (q[i] > 0.0)
      total += 0.5 * q[i] * std::log(q[i] / eta);
  }
  return std::max(0.0, total);
}

double js_discrete(const DiscreteMeasure &mu, const DiscreteMeasure &nu, double theta)
{
  if (!(theta > 0.0 && theta < 1.0))
    throw Error(ErrorCode::InvalidArgument, "theta must lie in (0,1)");
  auto aligned = align_supports(mu, nu);
  return js_masses(aligned.first, aligned.second, theta);
}

double f_divergence_masses(const Vector &p, const Vector &q, const DivergenceGenerator &g)
{
  double total = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (q[i] > 0.0) {
      if (p[i] > 0.0)
        total += q[i] * g(p[i] / q[i]);
      else
        total += q[i] * g.at_zero();
    } else if (p[i] > 0.0) {
      const double slope = g.slope_at_infinity();
      if (slope != 0.0)
        total += p[i] * slope;
    }
  }
  return total;
}

double f_divergence_discrete(const DiscreteMeasure &mu, const DiscreteMeasure &nu, const DivergenceGenerator &g)
{
  auto aligned = align_supports(mu, nu);
  return f_divergence_masses(aligned.first, aligned.second, g);
}

} // namespace augdist
