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
#include "augdist/witness.hpp"
#include "test_util.hpp"

#include <cmath>

namespace augdist {
namespace {

using test::error_code_of;

GaussianMeasure gauss1(double mean, double var)
{
  return GaussianMeasure::make(Vector::Constant(1, mean), Matrix::Constant(1, 1, var));
}

GaussianMeasure centered(const Vector &diag)
{
  return GaussianMeasure::make(Vector::Zero(diag.size()), diag.asDiagonal());
}

Vector vec(std::initializer_list<double> values)
{
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values)
    v[i++] = x;
  return v;
}

TEST(AugmentedGaussian1d, W2Branches)
{
  EXPECT_NEAR(aug_w2_gauss_1d_nd(gauss1(0, 1), centered(vec({1, 4}))).value, 0.0, 1e-15);
  EXPECT_NEAR(aug_w2_gauss_1d_nd(gauss1(0, 9), centered(vec({4, 1}))).value, 1.0, 1e-15);
  EXPECT_NEAR(aug_w2_gauss_1d_nd(gauss1(0, 0.25), centered(vec({1, 1}))).value, 0.5, 1e-15);
}

TEST(AugmentedGaussian1d, KlBranches)
{
  EXPECT_NEAR(aug_kl_gauss_1d_nd(gauss1(0, 2), centered(vec({1, 4}))).value, 0.0, 1e-15);
  EXPECT_NEAR(aug_kl_gauss_1d_nd(gauss1(0, 4), centered(vec({1, 1, 1}))).value, 0.5 * (3.0 + std::log(0.25)),
              1e-12);
  EXPECT_NEAR(aug_kl_gauss_1d_nd(gauss1(0, 0.25), centered(vec({1, 2}))).value,
              0.5 * (0.25 - 1.0 + std::log(4.0)), 1e-12);
  EXPECT_EQ(error_code_of([] { aug_kl_gauss_1d_nd(gauss1(0, 1), centered(vec({1, 0}))); }),
            ErrorCode::SingularCovariance);
}

TEST(AugmentedGaussian1d, CertificateAttainsValue)
{
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    auto second = test::random_gaussian(4, rng);
    auto first = gauss1(0.3, 0.2 + trial * 0.5);
    auto report = aug_w2_gauss_1d_nd(first, second);
    ASSERT_TRUE(report.projection);
    EXPECT_LT(orthonormality_residual(report.projection->v()), 1e-12);
    auto projected = pushforward(second, *report.projection);
    EXPECT_NEAR(w2_gaussian(first, projected), report.value, 1e-9);
  }
}

TEST(AugmentedGaussian1d, KnotsAreContinuous)
{
  for (double lo : {0.5, 1.0})
    for (double hi : {2.0, 3.0}) {
      PiecewiseSpec at_lo{hi, lo, std::sqrt(lo)};
      PiecewiseSpec at_hi{hi, lo, std::sqrt(hi)};
      EXPECT_EQ(w2_piecewise(at_lo), 0.0);
      EXPECT_EQ(w2_piecewise(at_hi), 0.0);
      EXPECT_EQ(kl_piecewise(at_lo), 0.0);
      EXPECT_EQ(kl_piecewise(at_hi), 0.0);
      PiecewiseSpec below{hi, lo, std::sqrt(lo) * (1 - 1e-9)};
      EXPECT_NEAR(w2_piecewise(below), 0.0, 1e-8);
      EXPECT_NEAR(kl_piecewise(below), 0.0, 1e-12);
    }
}

TEST(GmValue, Branches)
{
  EXPECT_NEAR(gm_value(1, 1.0, 1.0), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(gm_value(1, 2.0, 0.1), 0.5 * std::log(1.0 / 3.0) + 0.5, 1e-15);
  for (int m = 1; m <= 4; ++m) {
    const double knot = 1.0 / (m + 2.0);
    const double g = std::log(knot) / 2.0 + 1.0 / (2.0 * (m + 2.0) * knot);
    EXPECT_NEAR(gm_value(m, knot, knot), g, 1e-15);
    EXPECT_NEAR(gm_value(m, 1.0, knot), g, 1e-15);
    EXPECT_NEAR(gm_value(m, knot, 0.0), g, 1e-15);
  }
  EXPECT_TRUE(std::isinf(gm_value(1, 0.0, 0.0)));
  EXPECT_EQ(error_code_of([] { gm_value(1, 0.1, 0.2); }), ErrorCode::InvalidArgument);
}

TEST(AugmentedBall, ClosedFormExamples)
{
  const auto ball1 = UniformBallMeasure::make(1);
  auto r = aug_kl_ball_gauss(ball1, centered(vec({1, 1, 1})));
  EXPECT_EQ(r.method, Method::ClosedForm);
  EXPECT_NEAR(r.value, 0.5 * std::log(M_PI / 2.0) + 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(r.value, ball_gauss_kl_quadrature(1.0), 1e-9);

  auto interior = aug_kl_ball_gauss(ball1, centered(vec({2.0, 0.7, 0.1})));
  EXPECT_NEAR(interior.value, 0.5 * std::log(M_PI / 6.0) + 0.5, 1e-12);

  auto two = aug_kl_ball_gauss(UniformBallMeasure::make(2), centered(Vector::Ones(5)));
  EXPECT_EQ(two.method, Method::ClosedForm);
  EXPECT_NEAR(two.value, 0.25 + std::log(2.0), 1e-12);
}

TEST(AugmentedBall, CertificateAttainsValue)
{
  std::mt19937_64 rng(6);
  for (Eigen::Index m : {1, 2}) {
    auto g = test::random_gaussian(5, rng);
    auto ball = UniformBallMeasure::make(m);
    auto r = aug_kl_ball_gauss(ball, g);
    ASSERT_TRUE(r.projection);
    EXPECT_NEAR(kl_ball_gaussian(ball, pushforward(g, *r.projection)), r.value, 1e-10);
  }
}

TEST(AugmentedBall, ClosedFormMatchesMultistart)
{
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    auto g = test::random_gaussian(5, rng);
    for (Eigen::Index m : {1, 2}) {
      auto ball = UniformBallMeasure::make(m);
      OptimizerParams params;
      params.seed = static_cast<std::uint64_t>(trial);
      EXPECT_NEAR(aug_kl_ball_gauss(ball, g).value, aug_kl_ball_gauss_multistart(ball, g, params).value, 1e-6);
    }
  }
}

TEST(AugmentedBall, LargeMUsesOptimizer)
{
  auto r = aug_kl_ball_gauss(UniformBallMeasure::make(2), centered(Vector::Ones(3)));
  EXPECT_EQ(r.method, Method::StiefelMultistart);
  EXPECT_NEAR(r.value, 0.25 + std::log(2.0), 1e-8);
  EXPECT_EQ(error_code_of([] { aug_kl_ball_gauss(UniformBallMeasure::make(3), centered(Vector::Ones(2))); }),
            ErrorCode::DimensionMismatch);
}

TEST(AugmentedDirac, EigenvalueExamples)
{
  Matrix pts(2, 2);
  pts << 1, -1, 0, 0;
  EXPECT_NEAR(aug_w2_dirac_discrete(Vector::Constant(1, 5.0), DiscreteMeasure::uniform(pts)).value, 0.0, 1e-15);
  Matrix cross(2, 4);
  cross << 1, -1, 0, 0, 0, 0, 1, -1;
  auto r = aug_w2_dirac_discrete(Vector::Constant(1, 0.0), DiscreteMeasure::uniform(cross));
  EXPECT_NEAR(r.value, std::sqrt(0.5), 1e-14);
  EXPECT_NEAR(aug_w2_dirac_discrete(Vector::Zero(2), DiscreteMeasure::dirac(Vector::Ones(3))).value, 0.0, 1e-15);
  EXPECT_EQ(error_code_of([] { aug_w2_dirac_discrete(Vector::Zero(3), DiscreteMeasure::dirac(Vector::Ones(2))); }),
            ErrorCode::DimensionMismatch);
}

TEST(AugmentedDirac, AgreesWithDiscreteSolver)
{
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    auto nu = test::random_discrete(4, 6, rng);
    Vector y = test::gaussian_matrix(2, 1, rng).col(0);
    auto closed = aug_w2_dirac_discrete(y, nu);
    auto solved = aug_w2_discrete_discrete(DiscreteMeasure::dirac(y), nu, 2.0);
    EXPECT_NEAR(closed.value, solved.value, 1e-6);
    EXPECT_NEAR(wp_discrete(DiscreteMeasure::dirac(y), pushforward(nu, *closed.projection), 2.0).value,
                closed.value, 1e-9);
  }
}

TEST(AugmentedDiscrete, MatchingLineExample)
{
  Matrix x(1, 2), y(2, 2);
  x << -1, 1;
  y << -2, 2, 0, 0;
  auto r = aug_w2_discrete_discrete(DiscreteMeasure::uniform(x), DiscreteMeasure::uniform(y), 2.0);
  EXPECT_NEAR(r.value, 0.0, 1e-6);
  EXPECT_EQ(r.method, Method::Alternating);
}

TEST(AugmentedDiscrete, ZeroDistanceAndMonotoneP)
{
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 5; ++trial) {
    auto nu = test::random_discrete(3, 5, rng);
    auto map = AffineProjection::make(haar_sample(2, 3, 50 + trial), test::gaussian_matrix(2, 1, rng).col(0));
    auto mu = pushforward(nu, map);
    OptimizerParams params;
    params.restarts = 64;
    EXPECT_LT(aug_w2_discrete_discrete(mu, nu, 2.0, params).value, 1e-6);

    auto other = test::random_discrete(2, 4, rng);
    const double w1 = aug_w2_discrete_discrete(other, nu, 1.0).value;
    const double w2 = aug_w2_discrete_discrete(other, nu, 2.0).value;
    EXPECT_LE(w1, w2 + 1e-6);
  }
  EXPECT_EQ(error_code_of([&] {
              aug_w2_discrete_discrete(DiscreteMeasure::dirac(Vector::Zero(1)),
                                       DiscreteMeasure::dirac(Vector::Zero(2)), 0.5);
            }),
            ErrorCode::InvalidArgument);
}

TEST(AugmentedGaussian, MatchesOneDimensionalClosedForms)
{
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    auto second = test::random_gaussian(3, rng);
    auto first = gauss1(0.5, 0.3 + trial);
    EXPECT_NEAR(aug_w2_gauss_gauss(first, second).value, aug_w2_gauss_1d_nd(first, second).value, 1e-6);
    EXPECT_NEAR(aug_kl_gauss_gauss(first, second).value, aug_kl_gauss_1d_nd(first, second).value, 1e-6);
  }
}

TEST(AugmentedGaussian, ZeroDistanceIsotropyAndFeasibility)
{
  std::mt19937_64 rng(12);
  auto nu = test::random_gaussian(4, rng);
  auto map = AffineProjection::make(haar_sample(2, 4, 3), Vector::Ones(2));
  auto mu = pushforward(nu, map);
  EXPECT_LT(aug_w2_gauss_gauss(mu, nu).value, 1e-6);
  EXPECT_LT(aug_kl_gauss_gauss(mu, nu).value, 1e-6);

  auto iso_low = GaussianMeasure::make(Vector::Zero(2), Matrix::Identity(2, 2));
  auto iso_high = GaussianMeasure::make(Vector::Ones(4), Matrix::Identity(4, 4));
  EXPECT_LT(aug_kl_gauss_gauss(iso_low, iso_high).value, 1e-12);

  auto a = test::random_gaussian(3, rng);
  auto b = test::random_gaussian(3, rng);
  EXPECT_LE(aug_w2_gauss_gauss(a, b).value, w2_gaussian(a, b) + 1e-9);
}

TEST(AugmentedGaussian, RotationInvariance)
{
  std::mt19937_64 rng(13);
  auto first = test::random_gaussian(2, rng);
  auto second = test::random_gaussian(4, rng);
  auto rotated = pushforward(second, AffineProjection::make(haar_sample(4, 4, 77)));
  EXPECT_NEAR(aug_w2_gauss_gauss(first, second).value, aug_w2_gauss_gauss(first, rotated).value, 1e-8);
  EXPECT_NEAR(aug_kl_gauss_gauss(first, second).value, aug_kl_gauss_gauss(first, rotated).value, 1e-8);
}

TEST(Augmented, RejectsWrongDimensionOrder)
{
  std::mt19937_64 rng(14);
  auto big = test::random_gaussian(3, rng);
  auto small = test::random_gaussian(2, rng);
  EXPECT_EQ(error_code_of([&] { aug_w2_gauss_gauss(big, small); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(error_code_of([&] { aug_kl_gauss_gauss(big, small); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(error_code_of([&] {
              aug_w2_discrete_discrete(test::random_discrete(3, 2, rng), test::random_discrete(2, 2, rng), 2.0);
            }),
            ErrorCode::DimensionMismatch);
}

} // namespace
} // namespace augdist
