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

#include "augdist/base_dist.hpp"
#include "augdist/measures.hpp"
#include "augdist/parallel.hpp"
#include "augdist/stiefel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace augdist {

/// Rows W such that [V; W] is orthogonal. Zero rows when V is square.
Matrix complete_basis(const Matrix &v);

/// Conditional distributions of a discrete measure over the fibers of a projection.
struct Disintegration
{
  DiscreteMeasure base; // pushforward beta
  std::vector<std::vector<Eigen::Index>> members; // source atom indices per base atom
  std::vector<Vector> conditional; // nu(x) / beta(y) for each member
  Matrix source_points;

  /// sum_y beta(y) * fiber_y as (points, weights) in source-atom order.
  DiscreteMeasure reassemble() const;
  /// Fiber over base atom y as a probability measure.
  DiscreteMeasure fiber(Eigen::Index y) const;
};

Disintegration disintegrate(const DiscreteMeasure &measure, const AffineProjection &map);

/// Embedding of the lower-dimensional measure together with the two sides of
/// the equality it certifies.
struct WitnessResult
{
  DiscreteMeasure alpha;
  double lhs = 0.0; // distance(alpha, nu) in the higher dimension
  double rhs = 0.0; // distance(mu, projected nu) in the lower dimension
};

WitnessResult witness_wp(const DiscreteMeasure &mu, const DiscreteMeasure &nu, const AffineProjection &map,
                         double p);
WitnessResult witness_tv(const DiscreteMeasure &mu, const DiscreteMeasure &nu, const AffineProjection &map);

/// KL(U[-1,1] || N(0, variance)) by adaptive Simpson quadrature of the density ratio.
double ball_gauss_kl_quadrature(double variance);

/// Total variation between N(0, var1) and N(0, var2) by quadrature.
double gaussian_tv_quadrature(double var1, double var2);

/// Adaptive Simpson integration with absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)> &f, double a, double b, double tol);

struct SearchResult
{
  double value = std::numeric_limits<double>::infinity();
  std::optional<AffineProjection> projection;
  std::size_t best_sample = 0;
};

struct SearchOptions
{
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  bool refine_offset = true;
  /// Evaluated before any random draw.
  std::optional<AffineProjection> forced;
  int threads = 0;
};

namespace detail {

// Componentwise range of atoms / means used for the offset box.
inline Matrix location_cloud(const DiscreteMeasure &m) { return m.points(); }
inline Matrix location_cloud(const GaussianMeasure &m) { return Matrix(m.mean()); }

Vector refine_offset_coordinates(const std::function<double(const Vector &)> &value, Vector b,
                                 const Vector &width);

} // namespace detail

/// Estimates inf over (V, b) of distance(mu, pushforward(nu, (V, b))) by Haar
/// sampling. Sample s draws V from seed + s and b uniformly from the box of
/// differences between mu locations and projected nu locations, inflated 1.5x;
/// b is then refined by coordinate pattern search.
template <class Low, class High>
SearchResult brute_force_search(const std::function<double(const Low &, const Low &)> &distance, const Low &mu,
                                const High &nu, const SearchOptions &options)
{
  const Eigen::Index m = mu.dim();
  const Eigen::Index n = nu.dim();
  const Matrix mu_cloud = detail::location_cloud(mu);
  const Matrix nu_cloud = detail::location_cloud(nu);

  auto evaluate = [&](const Matrix &v, const Vector &b) { return distance(mu, pushforward(nu, AffineProjection::make(v, b))); };

  auto sample = [&](std::size_t s) -> std::pair<double, AffineProjection> {
    Matrix v = haar_sample(m, n, options.seed + s);
    Matrix projected = v * nu_cloud;
    Vector lo = mu_cloud.rowwise().minCoeff() - projected.rowwise().maxCoeff();
    Vector hi = mu_cloud.rowwise().maxCoeff() - projected.rowwise().minCoeff();
    Vector center = 0.5 * (lo + hi);
    Vector half = 0.75 * (hi - lo);
    std::mt19937_64 rng(options.seed + s);
    rng.discard(1024);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Vector b(m);
    for (Eigen::Index i = 0; i < m; ++i)
      b[i] = center[i] + half[i] * unit(rng);
    if (options.refine_offset) {
      Vector width = (2.0 * half).cwiseMax(1e-3);
      b = detail::refine_offset_coordinates([&](const Vector &c) { return evaluate(v, c); }, b, width);
    }
    return {evaluate(v, b), AffineProjection::make(v, b)};
  };

  std::vector<double> values(options.samples, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::optional<AffineProjection>> maps(options.samples);
  parallel::for_each_index(options.samples, options.threads, [&](std::size_t s) {
    auto [value, map] = sample(s);
    values[s] = value;
    maps[s] = std::move(map);
  });

  SearchResult result;
  if (options.forced) {
    result.value = distance(mu, pushforward(nu, *options.forced));
    result.projection = options.forced;
  }
  std::size_t best = parallel::argmin_first(values);
  if (best < values.size() && (!result.projection || values[best] < result.value)) {
    result.value = values[best];
    result.projection = maps[best];
    result.best_sample = best;
  }
  return result;
}

} // namespace augdist
