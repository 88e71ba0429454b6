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
#include "augdist/stiefel.hpp"

#include <optional>
#include <string_view>

namespace augdist {

enum class Method
{
  ClosedForm,
  Alternating,
  StiefelMultistart,
  SameDimension,
  BruteForce,
  FixedProjection,
};

std::string_view to_string(Method method) noexcept;

/// Value of an augmented distance together with the projection that attains it.
struct DistanceReport
{
  double value = 0.0;
  Method method = Method::ClosedForm;
  std::optional<AffineProjection> projection;
  std::optional<Coupling> plan;
  int restarts_agreeing = 0;
  int iterations = 0;
};

/// Extreme eigenvalues of the higher-dimensional covariance and the standard
/// deviation of the one-dimensional measure.
struct PiecewiseSpec
{
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  double sigma = 0.0;
};

/// Three-branch W2 between N(., sigma^2) and the best 1-d projection.
double w2_piecewise(const PiecewiseSpec &spec);
/// Three-branch KL between N(., sigma^2) and the best 1-d projection.
double kl_piecewise(const PiecewiseSpec &spec);

DistanceReport aug_w2_gauss_1d_nd(const GaussianMeasure &first, const GaussianMeasure &second);
DistanceReport aug_kl_gauss_1d_nd(const GaussianMeasure &first, const GaussianMeasure &second);

/// g(s) = log(s)/2 + 1/(2 (m+2) s) minimized over s in [beta, alpha].
double gm_value(int m, double alpha, double beta);

/// KL(U(B^m) || N_m(mean, cov)) in the same dimension.
double kl_ball_gaussian(const UniformBallMeasure &ball, const GaussianMeasure &gaussian);

/// Closed form when m < n/2 or m = 1, Stiefel multistart otherwise.
DistanceReport aug_kl_ball_gauss(const UniformBallMeasure &ball, const GaussianMeasure &gaussian,
                                 const OptimizerParams &params = {});
/// Always takes the optimizer path.
DistanceReport aug_kl_ball_gauss_multistart(const UniformBallMeasure &ball, const GaussianMeasure &gaussian,
                                            const OptimizerParams &params = {});

/// W2 between a Dirac mass at y (dim m) and a discrete measure on R^n.
DistanceReport aug_w2_dirac_discrete(const Vector &location, const DiscreteMeasure &measure);

/// W_p between discrete measures of dimensions m <= n. p = 2 uses alternating
/// transport / Stiefel steps; other p run a multistart on the transport value
/// seeded with the p = 2 solution.
DistanceReport aug_w2_discrete_discrete(const DiscreteMeasure &first, const DiscreteMeasure &second, double p,
                                        const OptimizerParams &params = {});

DistanceReport aug_w2_gauss_gauss(const GaussianMeasure &first, const GaussianMeasure &second,
                                  const OptimizerParams &params = {});
DistanceReport aug_kl_gauss_gauss(const GaussianMeasure &first, const GaussianMeasure &second,
                                  const OptimizerParams &params = {});

} // namespace augdist
