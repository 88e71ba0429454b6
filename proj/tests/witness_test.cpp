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
#include <numbers>

namespace augdist {
namespace {

using test::error_code_of;

bool same_measure(const DiscreteMeasure &a, const DiscreteMeasure &b, double tol)
{
  auto aligned = align_supports(a, b);
  return aligned.points.cols() == a.size() && (aligned.first - aligned.second).cwiseAbs().maxCoeff() <= tol;
}

TEST(CompleteBasis, CompletesToOrthogonal)
{
  Matrix v(1, 2);
  v << 1, 0;
  Matrix w = complete_basis(v);
  ASSERT_EQ(w.rows(), 1);
  EXPECT_NEAR(std::abs(w(0, 1)), 1.0, 1e-15);
  EXPECT_EQ(complete_basis(haar_sample(3, 3, 1)).rows(), 0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Matrix h = haar_sample(2, 5, seed);
    Matrix full(5, 5);
    full << h, complete_basis(h);
    EXPECT_LT(max_abs(full * full.transpose() - Matrix::Identity(5, 5)), 1e-10);
    EXPECT_TRUE(complete_basis(h) == complete_basis(h));
  }
}

TEST(Disintegration, FullCollapseAndInjective)
{
  Matrix pts(2, 2);
  pts << 1, -1, 0, 0;
  auto nu = DiscreteMeasure::uniform(pts);
  Matrix v(1, 2);
  v << 0, 1;
  auto d = disintegrate(nu, AffineProjection::make(v));
  ASSERT_EQ(d.base.size(), 1);
  EXPECT_EQ(d.members[0].size(), 2u);
  EXPECT_TRUE(same_measure(d.fiber(0), nu, 1e-15));

  v << 1, 0;
  auto injective = disintegrate(nu, AffineProjection::make(v));
  ASSERT_EQ(injective.base.size(), 2);
  for (Eigen::Index y = 0; y < 2; ++y)
    EXPECT_EQ(injective.fiber(y).size(), 1);
}

TEST(Disintegration, Reassembles)
{
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    // lattice atoms: fibers hold several atoms
    Matrix pts(3, 6);
    std::uniform_int_distribution<int> cell(-1, 1);
    for (Eigen::Index j = 0; j < 6; ++j)
      for (Eigen::Index i = 0; i < 3; ++i)
        pts(i, j) = cell(rng) + (i == 2 ? 0.1 * j : 0.0);
    auto nu = DiscreteMeasure::make(pts, test::simplex_weights(6, rng));
    Matrix v(2, 3);
    v << 1, 0, 0, 0, 1, 0;
    auto d = disintegrate(nu, AffineProjection::make(v));
    EXPECT_TRUE(same_measure(d.reassemble(), nu, 1e-15));
  }
}

TEST(WitnessWp, HandExample)
{
  auto nu = DiscreteMeasure::dirac(Vector::Zero(2));
  Matrix v(1, 2);
  v << 1, 0;
  auto r = witness_wp(DiscreteMeasure::dirac(Vector::Ones(1)), nu, AffineProjection::make(v), 2.0);
  ASSERT_EQ(r.alpha.size(), 1);
  EXPECT_NEAR((r.alpha.point(0) - Vector(Eigen::Vector2d(1, 0))).norm(), 0.0, 1e-15);
  EXPECT_NEAR(r.lhs, 1.0, 1e-15);
  EXPECT_NEAR(r.rhs, 1.0, 1e-15);
}

TEST(WitnessWp, EqualityOnRandomInstances)
{
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    auto nu = test::random_discrete(4, 5, rng);
    auto mu = test::random_discrete(2, 4, rng);
    auto map = AffineProjection::make(haar_sample(2, 4, 90 + trial), test::gaussian_matrix(2, 1, rng).col(0));
    for (double p : {1.0, 2.0}) {
      auto r = witness_wp(mu, nu, map, p);
      EXPECT_NEAR(r.lhs, r.rhs, 1e-8);
      EXPECT_TRUE(same_measure(pushforward(r.alpha, map), mu, 1e-12));
    }
    auto self = witness_wp(pushforward(nu, map), nu, map, 2.0);
    EXPECT_NEAR(self.lhs, 0.0, 1e-7);
  }
}

TEST(WitnessTv, EqualityAndSupportGate)
{
  Matrix pts(2, 4);
  pts << 0, 0, 1, 1, 0, 1, 0, 1;
  std::mt19937_64 rng(4);
  auto nu = DiscreteMeasure::make(pts, test::simplex_weights(4, rng));
  Matrix v(1, 2);
  v << 1, 0;
  auto map = AffineProjection::make(v);
  Matrix line(1, 2);
  line << 0, 1;
  Vector w(2);
  w << 0.8, 0.2;
  auto r = witness_tv(DiscreteMeasure::make(line, w), nu, map);
  EXPECT_NEAR(r.lhs, r.rhs, 1e-10);
  EXPECT_GT(r.rhs, 0.0);

  auto same = witness_tv(pushforward(nu, map), nu, map);
  EXPECT_NEAR(same.lhs, 0.0, 1e-15);
  EXPECT_TRUE(same_measure(same.alpha, nu, 1e-15));

  Matrix off(1, 1);
  off << 0.5;
  EXPECT_EQ(error_code_of([&] { witness_tv(DiscreteMeasure::uniform(off), nu, map); }),
            ErrorCode::SupportViolation);
  EXPECT_EQ(error_code_of([&] { witness_wp(test::random_discrete(3, 2, rng), nu, map, 2.0); }),
            ErrorCode::DimensionMismatch);
}

TEST(Quadrature, BallGaussianKl)
{
  EXPECT_NEAR(ball_gauss_kl_quadrature(1.0), -std::log(2.0) + 0.5 * std::log(2.0 * std::numbers::pi) + 1.0 / 6.0,
              1e-10);
  EXPECT_NEAR(ball_gauss_kl_quadrature(1.0 / 3.0), 0.5 * std::log(std::numbers::pi / 6.0) + 0.5, 1e-10);
  EXPECT_LT(ball_gauss_kl_quadrature(10.0), ball_gauss_kl_quadrature(100.0));
  EXPECT_LT(ball_gauss_kl_quadrature(100.0), ball_gauss_kl_quadrature(1000.0));
  EXPECT_EQ(error_code_of([] { ball_gauss_kl_quadrature(0.0); }), ErrorCode::InvalidArgument);
}

TEST(Quadrature, GaussianTvMatchesErfOracle)
{
  for (auto [v1, v2] : {std::pair{1.0, 2.0}, std::pair{0.3, 5.0}, std::pair{4.0, 1.0}}) {
    const double lo = std::min(v1, v2), hi = std::max(v1, v2);
    const double x = std::sqrt(std::log(hi / lo) * lo * hi / (hi - lo));
    const double oracle = std::erf(x / std::sqrt(2.0 * lo)) - std::erf(x / std::sqrt(2.0 * hi));
    EXPECT_NEAR(gaussian_tv_quadrature(v1, v2), oracle, 1e-10);
  }
  EXPECT_EQ(gaussian_tv_quadrature(2.0, 2.0), 0.0);
}

TEST(BruteForce, SingleSampleAndForcedProjection)
{
  std::mt19937_64 rng(5);
  auto nu = test::random_discrete(3, 4, rng);
  auto mu = test::random_discrete(2, 3, rng);
  std::function<double(const DiscreteMeasure &, const DiscreteMeasure &)> w2 =
      [](const DiscreteMeasure &a, const DiscreteMeasure &b) { return wp_discrete(a, b, 2.0).value; };

  SearchOptions one;
  one.samples = 1;
  one.seed = 8;
  auto single = brute_force_search(w2, mu, nu, one);
  ASSERT_TRUE(single.projection);
  EXPECT_EQ(single.value, w2(mu, pushforward(nu, *single.projection)));

  auto map = AffineProjection::make(haar_sample(2, 3, 4), Vector::Ones(2));
  SearchOptions forced;
  forced.samples = 5;
  forced.forced = map;
  EXPECT_NEAR(brute_force_search(w2, pushforward(nu, map), nu, forced).value, 0.0, 1e-12);
}

TEST(BruteForce, MoreSamplesNeverWorse)
{
  std::mt19937_64 rng(6);
  auto nu = test::random_discrete(3, 4, rng);
  auto mu = test::random_discrete(1, 3, rng);
  std::function<double(const DiscreteMeasure &, const DiscreteMeasure &)> w1 =
      [](const DiscreteMeasure &a, const DiscreteMeasure &b) { return wp_discrete(a, b, 1.0).value; };
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t samples : {1u, 10u, 100u}) {
    SearchOptions options;
    options.samples = samples;
    const double value = brute_force_search(w1, mu, nu, options).value;
    EXPECT_LE(value, previous);
    previous = value;
  }
}

TEST(BruteForce, BracketsGaussianClosedForm)
{
  std::mt19937_64 rng(7);
  std::function<double(const GaussianMeasure &, const GaussianMeasure &)> w2 = w2_gaussian;
  for (Eigen::Index n : {2, 3}) {
    auto second = test::random_gaussian(n, rng);
    auto first = GaussianMeasure::make(Vector::Constant(1, 0.2), Matrix::Constant(1, 1, 0.1));
    const double closed = aug_w2_gauss_1d_nd(first, second).value;
    SearchOptions options;
    options.samples = 2000;
    const double searched = brute_force_search(w2, first, second, options).value;
    EXPECT_GE(searched, closed - 1e-6);
    EXPECT_LE(searched, closed + 1e-2);
  }
}

TEST(BruteForce, SerialAndParallelAgree)
{
  std::mt19937_64 rng(8);
  auto nu = test::random_discrete(3, 4, rng);
  auto mu = test::random_discrete(2, 3, rng);
  std::function<double(const DiscreteMeasure &, const DiscreteMeasure &)> w2 =
      [](const DiscreteMeasure &a, const DiscreteMeasure &b) { return wp_discrete(a, b, 2.0).value; };
  SearchOptions options;
  options.samples = 50;
  options.threads = 1;
  auto serial = brute_force_search(w2, mu, nu, options);
  options.threads = 4;
  auto parallel = brute_force_search(w2, mu, nu, options);
  EXPECT_EQ(serial.value, parallel.value);
  EXPECT_EQ(serial.best_sample, parallel.best_sample);
}

} // namespace
} // namespace augdist
