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

#include "augdist/witness.hpp"
#include "augdist/error.hpp"

#include <cmath>
#include <numbers>

namespace augdist {

Matrix complete_basis(const Matrix &v)
{
  const Eigen::Index m = v.rows();
  const Eigen::Index n = v.cols();
  if (m > n)
    throw Error(ErrorCode::DimensionMismatch, "complete_basis requires m <= n");
  if (m == n)
    return Matrix(0, n);

  Eigen::HouseholderQR<Matrix> qr(v.transpose());
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  Matrix w = q.rightCols(n - m).transpose();
  // sign convention: the first largest-magnitude entry of each row is positive
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    Eigen::Index arg = 0;
    w.row(i).cwiseAbs().maxCoeff(&arg);
    if (w(i, arg) < 0.0)
      w.row(i) = -w.row(i);
  }
  return w;
}

DiscreteMeasure Disintegration::reassemble() const
{
  Vector weights = Vector::Zero(source_points.cols());
  for (std::size_t y = 0; y < members.size(); ++y)
    for (std::size_t k = 0; k < members[y].size(); ++k)
      weights[members[y][k]] = base.weight(static_cast<Eigen::Index>(y)) * conditional[y][static_cast<Eigen::Index>(k)];
  return DiscreteMeasure::make(source_points, weights);
}

DiscreteMeasure Disintegration::fiber(Eigen::Index y) const
{
  const auto &idx = members[static_cast<std::size_t>(y)];
  Matrix pts(source_points.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k)
    pts.col(static_cast<Eigen::Index>(k)) = source_points.col(idx[k]);
  return DiscreteMeasure::make(pts, conditional[static_cast<std::size_t>(y)]);
}

namespace {

struct Projected
{
  DiscreteMeasure beta;
  std::vector<Eigen::Index> assignment;
};

Projected project_with_assignment(const DiscreteMeasure &measure, const AffineProjection &map)
{
  if (measure.dim() != map.in_dim())
    throw Error(ErrorCode::DimensionMismatch, "measure dimension differs from projection input");
  auto merged = merge_atoms(map.apply_columns(measure.points()), measure.weights());
  return {DiscreteMeasure::make(merged.points, merged.weights), std::move(merged.assignment)};
}

void check_witness_dims(const DiscreteMeasure &mu, const DiscreteMeasure &nu, const AffineProjection &map)
{
  if (mu.dim() > nu.dim())
    throw Error(ErrorCode::DimensionMismatch, "witness requires dim(mu) <= dim(nu)");
  if (mu.dim() != map.out_dim() || nu.dim() != map.in_dim())
    throw Error(ErrorCode::DimensionMismatch, "projection does not map nu's space onto mu's");
}

// Lift of u in R^m through the fiber of x: V^T (u - b) + W^T W x.
struct Lift
{
  Matrix vt;
  Matrix complement;
  Vector b;

  Vector operator()(const Vector &u, const Vector &x) const { return vt * (u - b) + complement * x; }
};

Lift make_lift(const AffineProjection &map)
{
  Matrix w = complete_basis(map.v());
  return {map.v().transpose(), w.transpose() * w, map.b()};
}

DiscreteMeasure assemble(const std::vector<Vector> &points, const std::vector<double> &weights, Eigen::Index n)
{
  Matrix pts(n, static_cast<Eigen::Index>(points.size()));
  Vector w(static_cast<Eigen::Index>(weights.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    pts.col(static_cast<Eigen::Index>(i)) = points[i];
    w[static_cast<Eigen::Index>(i)] = weights[i];
  }
  return DiscreteMeasure::make(pts, w);
}

// Every panel is split at least kMinLevels times before the error test applies.
constexpr int kMinLevels = 6;
constexpr int kMaxLevels = 50;

double simpson_step(const std::function<double(double)> &f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int level)
{
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (level >= kMaxLevels || (level >= kMinLevels && std::abs(delta) <= 15.0 * tol))
    return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, level + 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, level + 1);
}

} // namespace

Disintegration disintegrate(const DiscreteMeasure &measure, const AffineProjection &map)
{
  auto projected = project_with_assignment(measure, map);
  Disintegration out{projected.beta, {}, {}, measure.points()};
  const auto count = static_cast<std::size_t>(projected.beta.size());
  out.members.resize(count);
  std::vector<std::vector<double>> cond(count);
  for (Eigen::Index a = 0; a < measure.size(); ++a) {
    const auto y = static_cast<std::size_t>(projected.assignment[static_cast<std::size_t>(a)]);
    out.members[y].push_back(a);
    cond[y].push_back(measure.weight(a) / projected.beta.weight(static_cast<Eigen::Index>(y)));
  }
  for (auto &c : cond)
    out.conditional.emplace_back(Eigen::Map<Vector>(c.data(), static_cast<Eigen::Index>(c.size())));
  return out;
}

WitnessResult witness_wp(const DiscreteMeasure &mu, const DiscreteMeasure &nu, const AffineProjection &map,
                         double p)
{
  check_witness_dims(mu, nu, map);
  auto projected = project_with_assignment(nu, map);
  auto lower = wp_discrete(mu, projected.beta, p);
  const Matrix &plan = lower.coupling.plan;
  const Lift lift = make_lift(map);

  std::vector<Vector> points;
  std::vector<double> weights;
  for (Eigen::Index a = 0; a < nu.size(); ++a) {
    const Eigen::Index y = projected.assignment[static_cast<std::size_t>(a)];
    const double conditional = nu.weight(a) / projected.beta.weight(y);
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      if (plan(i, y) <= 0.0)
        continue;
      points.push_back(lift(mu.point(i), nu.point(a)));
      weights.push_back(plan(i, y) * conditional);
    }
  }

  WitnessResult result{assemble(points, weights, nu.dim()), 0.0, lower.value};
  result.lhs = wp_discrete(result.alpha, nu, p).value;
  return result;
}

WitnessResult witness_tv(const DiscreteMeasure &mu, const DiscreteMeasure &nu, const AffineProjection &map)
{
  check_witness_dims(mu, nu, map);
  auto projected = project_with_assignment(nu, map);
  auto aligned = align_supports(mu, projected.beta);
  // mu atom sitting on each beta atom, if any
  std::vector<Eigen::Index> mu_on_beta(static_cast<std::size_t>(projected.beta.size()), -1);
  std::vector<bool> covered(static_cast<std::size_t>(mu.size()), false);
  for (Eigen::Index y = 0; y < projected.beta.size(); ++y) {
    const Eigen::Index u = aligned.second_index[static_cast<std::size_t>(y)];
    if (u < mu.size()) {
      mu_on_beta[static_cast<std::size_t>(y)] = u;
      covered[static_cast<std::size_t>(u)] = true;
    }
  }
  if (std::find(covered.begin(), covered.end(), false) != covered.end())
    throw Error(ErrorCode::SupportViolation, "mu has mass outside the support of the projected measure");

  const Lift lift = make_lift(map);
  std::vector<Vector> points;
  std::vector<double> weights;
  for (Eigen::Index a = 0; a < nu.size(); ++a) {
    const Eigen::Index y = projected.assignment[static_cast<std::size_t>(a)];
    const Eigen::Index u = mu_on_beta[static_cast<std::size_t>(y)];
    if (u < 0)
      continue;
    points.push_back(lift(mu.point(u), nu.point(a)));
    weights.push_back(mu.weight(u) * nu.weight(a) / projected.beta.weight(y));
  }

  WitnessResult result{assemble(points, weights, nu.dim()), 0.0, tv_discrete(mu, projected.beta).value};
  result.lhs = tv_discrete(result.alpha, nu).value;
  return result;
}

double adaptive_simpson(const std::function<double(double)> &f, double a, double b, double tol)
{
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 0);
}

double ball_gauss_kl_quadrature(double variance)
{
  if (!(variance > 0.0))
    throw Error(ErrorCode::InvalidArgument, "variance must be positive");
  const double uniform = 0.5;
  auto integrand = [&](double x) {
    const double log_normal = -0.5 * std::log(2.0 * std::numbers::pi * variance) - x * x / (2.0 * variance);
    return uniform * (std::log(uniform) - log_normal);
  };
  return adaptive_simpson(integrand, -1.0, 1.0, 1e-10);
}

double gaussian_tv_quadrature(double var1, double var2)
{
  if (!(var1 > 0.0) || !(var2 > 0.0))
    throw Error(ErrorCode::InvalidArgument, "variances must be positive");
  if (var1 == var2)
    return 0.0;
  auto density = [](double x, double var) {
    return std::exp(-x * x / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
  };
  auto integrand = [&](double x) { return std::abs(density(x, var1) - density(x, var2)); };
  // densities cross at +-crossing; the integrand has kinks there
  const double crossing = std::sqrt(std::log(var2 / var1) * var1 * var2 / (var2 - var1));
  const double limit = 40.0 * std::sqrt(std::max(var1, var2));
  const double half = adaptive_simpson(integrand, 0.0, crossing, 1e-14) +
                      adaptive_simpson(integrand, crossing, limit, 1e-14);
  // 1/2 * integral over R of |f - g|, integrand is even
  return half;
}

namespace detail {

Vector refine_offset_coordinates(const std::function<double(const Vector &)> &value, Vector b, const Vector &width)
{
  double best = value(b);
  Vector step = 0.25 * width;
  for (int round = 0; round < 60; ++round) {
    bool improved = false;
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      for (double sign : {1.0, -1.0}) {
        Vector trial = b;
        trial[i] += sign * step[i];
        const double v = value(trial);
        if (v < best) {
          best = v;
          b = std::move(trial);
          improved = true;
          break;
        }
      }
    }
    if (!improved)
      step *= 0.5;
  }
  return b;
}

} // namespace detail

} // namespace augdist
