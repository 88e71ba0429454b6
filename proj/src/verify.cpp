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

#include "augdist/verify.hpp"
#include "augdist/augmented.hpp"
#include "augdist/error.hpp"
#include "augdist/witness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace augdist::verify {

namespace {

using Rng = std::mt19937_64;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

int uniform_int(Rng &rng, int lo, int hi)
{
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double uniform(Rng &rng, double lo, double hi)
{
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double log_uniform(Rng &rng, double lo, double hi)
{
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

Vector normal_vector(Rng &rng, Eigen::Index d)
{
  std::normal_distribution<double> g;
  Vector out(d);
  for (Eigen::Index i = 0; i < d; ++i)
    out[i] = g(rng);
  return out;
}

Matrix normal_matrix(Rng &rng, Eigen::Index r, Eigen::Index c)
{
  std::normal_distribution<double> g;
  Matrix out(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i)
      out(i, j) = g(rng);
  return out;
}

// strictly positive weights summing to one
Vector random_simplex(Rng &rng, Eigen::Index k)
{
  Vector w(k);
  for (Eigen::Index i = 0; i < k; ++i)
    w[i] = uniform(rng, 0.05, 1.0);
  return w / w.sum();
}

DiscreteMeasure random_discrete(Rng &rng, Eigen::Index k, Eigen::Index d)
{
  Matrix pts = normal_matrix(rng, d, k);
  return DiscreteMeasure::make(pts, random_simplex(rng, k));
}

Matrix random_spd(Rng &rng, Eigen::Index n, double lo = 0.2, double hi = 5.0)
{
  Matrix q = haar_sample(n, n, rng());
  Vector lambda(n);
  for (Eigen::Index i = 0; i < n; ++i)
    lambda[i] = log_uniform(rng, lo, hi);
  return symmetrize(q * lambda.asDiagonal() * q.transpose());
}

GaussianMeasure random_gaussian(Rng &rng, Eigen::Index n)
{
  Vector mean = normal_vector(rng, n);
  return GaussianMeasure::make(mean, random_spd(rng, n));
}

AffineProjection random_projection(Rng &rng, Eigen::Index m, Eigen::Index n)
{
  Matrix v = haar_sample(m, n, rng());
  return AffineProjection::make(v, normal_vector(rng, m));
}

// variance below, inside or above the eigenvalue range of cov, by turns
double branch_variance(Rng &rng, const Matrix &cov, int instance)
{
  auto eig = symmetric_eigen(cov);
  const double lo = eig.values.minCoeff();
  const double hi = eig.values.maxCoeff();
  switch (instance % 3) {
  case 0: return lo * uniform(rng, 0.1, 0.9);
  case 1: return uniform(rng, lo, hi);
  default: return hi * uniform(rng, 1.1, 4.0);
  }
}

io::Json discrete_json(const DiscreteMeasure &m) { return io::measure_to_json(m); }

// Pushforward agrees with target atom-for-atom: same atom count, each atom
// within merge tolerance of a distinct target atom, weights within wtol.
double atom_mismatch(const DiscreteMeasure &got, const DiscreteMeasure &want)
{
  if (got.size() != want.size() || got.dim() != want.dim())
    return kInf;
  const double tol = merge_tolerance(want.points());
  std::vector<bool> used(static_cast<std::size_t>(want.size()), false);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < got.size(); ++i) {
    Eigen::Index hit = -1;
    for (Eigen::Index j = 0; j < want.size(); ++j)
      if (!used[static_cast<std::size_t>(j)] && (got.point(i) - want.point(j)).norm() <= tol) {
        hit = j;
        break;
      }
    if (hit < 0)
      return kInf;
    used[static_cast<std::size_t>(hit)] = true;
    worst = std::max(worst, std::abs(got.weight(i) - want.weight(hit)));
  }
  return worst;
}

OptimizerParams optimizer_params(Rng &rng, const VerifyOptions &options)
{
  OptimizerParams params;
  params.seed = rng();
  params.threads = options.threads;
  return params;
}

struct Context
{
  SuiteReport &report;
  const VerifyOptions &options;
  std::uint64_t seed = 0; // seed of the current instance
  int instance = 0;

  void le(double lhs, double rhs, double tol, const std::string &what, const io::Json &detail = {})
  {
    report.expect_le(lhs, rhs, tol, seed, instance, what, detail);
  }
  void near(double a, double b, double tol, const std::string &what, const io::Json &detail = {})
  {
    report.expect_le(std::abs(a - b), 0.0, tol, seed, instance, what, detail);
  }
};

using Body = std::function<void(Context &, Rng &)>;

struct SuiteDef
{
  std::string name;
  std::string description;
  int instances;
  Body body;
};

// ---- base distances -----------------------------------------------------

void ot_exactness(Context &c, Rng &rng)
{
  const int k = uniform_int(rng, 1, 6);
  Matrix cost(k, k);
  if (c.instance % 2 == 0) {
    const int d = uniform_int(rng, 1, 3);
    cost = power_distance_cost(normal_matrix(rng, d, k), normal_matrix(rng, d, k), uniform_int(rng, 1, 2));
  } else {
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        cost(i, j) = uniform(rng, 0.0, 1.0);
  }
  const Vector w = Vector::Constant(k, 1.0 / k);
  auto solved = ot_solve(cost, w, w);

  std::vector<int> perm(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    perm[static_cast<std::size_t>(i)] = i;
  double best = kInf;
  do {
    double total = 0.0;
    for (int i = 0; i < k; ++i)
      total += cost(i, perm[static_cast<std::size_t>(i)]);
    best = std::min(best, total / k);
  } while (std::next_permutation(perm.begin(), perm.end()));

  io::Json detail = {{"cost", io::matrix_to_json(cost)}};
  c.near(solved.value, best, 1e-9, "simplex value = permutation minimum", detail);
  c.le(solved.coupling.marginal_residual(), 0.0, 1e-12, "plan marginals", detail);
  c.le(-solved.coupling.plan.minCoeff(), 0.0, 0.0, "plan nonnegative", detail);
  const auto support = (solved.coupling.plan.array() > 0.0).count();
  c.le(static_cast<double>(support), 2.0 * k - 1.0, 0.0, "basic plan support", detail);

  // unequal sizes, non-uniform weights: marginals only
  const int l = uniform_int(rng, 1, 6);
  const Vector p = random_simplex(rng, k);
  const Vector q = random_simplex(rng, l);
  Matrix rect(k, l);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < l; ++j)
      rect(i, j) = uniform(rng, 0.0, 1.0);
  auto general = ot_solve(rect, p, q);
  c.le(general.coupling.marginal_residual(), 0.0, 1e-12, "plan marginals (general)");
  c.le(-general.coupling.plan.minCoeff(), 0.0, 0.0, "plan nonnegative (general)");
}

void wp_metric(Context &c, Rng &rng)
{
  const int d = uniform_int(rng, 1, 3);
  const double p = uniform_int(rng, 1, 2);
  auto a = random_discrete(rng, uniform_int(rng, 1, 6), d);
  auto b = random_discrete(rng, uniform_int(rng, 1, 6), d);
  auto e = random_discrete(rng, uniform_int(rng, 1, 6), d);
  const double ab = wp_discrete(a, b, p).value;
  const double ba = wp_discrete(b, a, p).value;
  const double ae = wp_discrete(a, e, p).value;
  const double eb = wp_discrete(e, b, p).value;
  c.near(ab, ba, 1e-10, "symmetry");
  c.le(ab, ae + eb, 1e-8, "triangle inequality");
  c.le(wp_discrete(a, a, p).value, 0.0, 1e-12, "identity");
}

void wp_monotone_p(Context &c, Rng &rng)
{
  const int d = uniform_int(rng, 1, 3);
  auto a = random_discrete(rng, uniform_int(rng, 1, 6), d);
  auto b = random_discrete(rng, uniform_int(rng, 1, 6), d);
  const double p = uniform(rng, 1.0, 3.0);
  const double q = p + uniform(rng, 0.0, 2.0);
  c.le(wp_discrete(a, b, p).value, wp_discrete(a, b, q).value, 1e-9, "W_p <= W_q for p <= q",
       {{"p", p}, {"q", q}});
}

void wp_translation(Context &c, Rng &rng)
{
  const int d = uniform_int(rng, 1, 3);
  auto a = random_discrete(rng, uniform_int(rng, 1, 4), d);
  const Vector t = normal_vector(rng, d);
  auto shifted = pushforward(a, AffineProjection::make(Matrix::Identity(d, d), t));
  for (double p : {1.0, 2.0, 3.0})
    c.near(wp_discrete(a, shifted, p).value, t.norm(), 1e-9, "translation by t gives |t|");
}

void dpi_wasserstein(Context &c, Rng &rng)
{
  const int n = uniform_int(rng, 1, 4);
  const int m = uniform_int(rng, 1, n);
  const double p = uniform_int(rng, 1, 2);
  auto a = random_discrete(rng, uniform_int(rng, 1, 6), n);
  auto b = random_discrete(rng, uniform_int(rng, 1, 6), n);
  auto phi = random_projection(rng, m, n);
  c.le(wp_discrete(pushforward(a, phi), pushforward(b, phi), p).value, wp_discrete(a, b, p).value, 1e-9,
       "W_p after projection <= W_p before");
}

// two measures on a shared random support; some atoms may carry zero mass in one of them
std::pair<DiscreteMeasure, DiscreteMeasure> overlapping_pair(Rng &rng, int k, int d, bool full_support)
{
  Matrix pts = normal_matrix(rng, d, k);
  Vector p = random_simplex(rng, k);
  Vector q = random_simplex(rng, k);
  if (!full_support && k > 1) {
    p[uniform_int(rng, 0, k - 1)] = 0.0;
    q[uniform_int(rng, 0, k - 1)] = 0.0;
    p /= p.sum();
    q /= q.sum();
  }
  return {DiscreteMeasure::make(pts, p), DiscreteMeasure::make(pts, q)};
}

// Half of the instances use lattice atoms and a projection whose kernel
// contains lattice directions, so projected atoms merge.
AffineProjection collapsing_projection(Rng &rng, Matrix &pts, int m, int n)
{
  if (rng() % 2 == 0 || m == n)
    return random_projection(rng, m, n);
  Matrix v = haar_sample(m, n, rng());
  Matrix w = complete_basis(v);
  for (Eigen::Index j = 0; j < pts.cols(); ++j) {
    const double level = uniform_int(rng, 0, 1);
    pts.col(j) = v.transpose() * Vector::Constant(m, level) + w.transpose() * normal_vector(rng, n - m);
  }
  return AffineProjection::make(v, normal_vector(rng, m));
}

void dpi_js(Context &c, Rng &rng)
{
  const int n = uniform_int(rng, 1, 4);
  const int m = uniform_int(rng, 1, n);
  const int k = uniform_int(rng, 2, 6);
  Matrix pts = normal_matrix(rng, n, k);
  auto phi = collapsing_projection(rng, pts, m, n);
  auto a = DiscreteMeasure::make(pts, random_simplex(rng, k));
  auto b = DiscreteMeasure::make(pts, random_simplex(rng, k));
  const double theta = uniform(rng, 0.05, 0.95);
  c.le(js_discrete(pushforward(a, phi), pushforward(b, phi), theta), js_discrete(a, b, theta), 1e-9,
       "JS after projection <= JS before", {{"theta", theta}});
}

void dpi_tv(Context &c, Rng &rng)
{
  const int n = uniform_int(rng, 1, 4);
  const int m = uniform_int(rng, 1, n);
  const int k = uniform_int(rng, 2, 6);
  Matrix pts = normal_matrix(rng, n, k);
  auto phi = collapsing_projection(rng, pts, m, n);
  auto a = DiscreteMeasure::make(pts, random_simplex(rng, k));
  auto b = random_discrete(rng, uniform_int(rng, 1, 6), n);
  if (rng() % 2 == 0)
    b = DiscreteMeasure::make(pts, random_simplex(rng, k));
  c.le(tv_discrete(pushforward(a, phi), pushforward(b, phi)).value, tv_discrete(a, b).value, 1e-9,
       "TV after projection <= TV before");
}

std::vector<DivergenceGenerator> all_generators(Rng &rng)
{
  const double theta = uniform(rng, 0.1, 0.9);
  const double phi = uniform(rng, 0.1, 0.9);
  return {DivergenceGenerator::make(DivergenceKind::KL),
          DivergenceGenerator::make(DivergenceKind::Exponential),
          DivergenceGenerator::make(DivergenceKind::Pearson),
          DivergenceGenerator::make(DivergenceKind::Hellinger),
          DivergenceGenerator::make(DivergenceKind::Jeffreys),
          DivergenceGenerator::make(DivergenceKind::Renyi, theta),
          DivergenceGenerator::make(DivergenceKind::Chernoff, theta),
          DivergenceGenerator::make(DivergenceKind::AlphaBeta, theta, phi),
          DivergenceGenerator::make(DivergenceKind::JensenShannon, theta),
          DivergenceGenerator::make(DivergenceKind::TotalVariation)};
}

// product measure of (a, p) and (c, q) on R^{m} x R^{n-m}
DiscreteMeasure product(const Matrix &a, const Vector &p, const Matrix &b, const Vector &q)
{
  Matrix pts(a.rows() + b.rows(), a.cols() * b.cols());
  Vector w(a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.cols(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      const Eigen::Index k = i * b.cols() + j;
      pts.col(k) << a.col(i), b.col(j);
      w[k] = p[i] * q[j];
    }
  return DiscreteMeasure::make(pts, w);
}

void dpi_f(Context &c, Rng &rng)
{
  const int m = uniform_int(rng, 1, 2);
  const int r = uniform_int(rng, 1, 2);
  const int ka = uniform_int(rng, 1, 3);
  const int kb = uniform_int(rng, 2, 3);
  const Matrix a = normal_matrix(rng, m, ka);
  const Matrix b = normal_matrix(rng, r, kb);
  const Vector pa = random_simplex(rng, ka);
  const Vector pb = random_simplex(rng, kb);
  const Vector qa = random_simplex(rng, ka);
  const Vector qb = random_simplex(rng, kb);
  auto mu = product(a, pa, b, pb);
  auto nu = product(a, qa, b, qb);
  Matrix v = Matrix::Zero(m, m + r);
  v.leftCols(m) = Matrix::Identity(m, m);
  auto phi = AffineProjection::make(v);
  for (const auto &g : all_generators(rng)) {
    const double before = f_divergence_discrete(mu, nu, g);
    const double after = f_divergence_discrete(pushforward(mu, phi), pushforward(nu, phi), g);
    c.le(after, before, 1e-9, "D_f after projection <= D_f before [" + g.name() + "]");
  }
}

void js_symmetry(Context &c, Rng &rng)
{
  auto [a, b] = overlapping_pair(rng, uniform_int(rng, 1, 6), uniform_int(rng, 1, 3), false);
  const double theta = uniform(rng, 0.05, 0.95);
  c.near(js_discrete(a, b, theta), js_discrete(b, a, theta), 1e-12, "js(mu,nu) = js(nu,mu)", {{"theta", theta}});
}

void tv_generator(Context &c, Rng &rng)
{
  auto [a, b] = overlapping_pair(rng, uniform_int(rng, 1, 6), uniform_int(rng, 1, 3), false);
  const double direct = tv_discrete(a, b).value;
  c.near(f_divergence_discrete(a, b, DivergenceGenerator::make(DivergenceKind::TotalVariation)), direct, 1e-12,
         "TV generator = sup definition");
  const double js_half = js_discrete(a, b, 0.5);
  c.near(f_divergence_discrete(a, b, DivergenceGenerator::make(DivergenceKind::JensenShannon, 0.5)), js_half, 1e-12,
         "JS generator = JS definition");
}

std::pair<DiscreteMeasure, DiscreteMeasure> same_support_pair(Rng &rng)
{
  return overlapping_pair(rng, uniform_int(rng, 2, 8), uniform_int(rng, 1, 3), true);
}

void pinsker(Context &c, Rng &rng)
{
  auto [a, b] = same_support_pair(rng);
  const double tv = tv_discrete(a, b).value;
  const double kl = f_divergence_discrete(a, b, DivergenceGenerator::make(DivergenceKind::KL));
  c.le(tv * tv, 0.5 * kl, 1e-12, "tv^2 <= KL/2", {{"mu", discrete_json(a)}, {"nu", discrete_json(b)}});
}

void hellinger(Context &c, Rng &rng)
{
  auto [a, b] = same_support_pair(rng);
  const double tv = tv_discrete(a, b).value;
  const double h2 = f_divergence_discrete(a, b, DivergenceGenerator::make(DivergenceKind::Hellinger));
  io::Json detail = {{"mu", discrete_json(a)}, {"nu", discrete_json(b)}, {"tv", tv}, {"hellinger_squared", h2}};
  c.le(h2, 2.0 * tv, 1e-12, "Hl^2 <= 2 tv", detail);
  c.le(2.0 * tv, std::sqrt(2.0) * std::sqrt(h2), 1e-12, "2 tv <= sqrt(2) Hl", detail);
}

// ---- measures / optimizer ----------------------------------------------

void pushforward_laws(Context &c, Rng &rng)
{
  const int n = uniform_int(rng, 1, 5);
  const int k = uniform_int(rng, 1, 6);
  const int mid = uniform_int(rng, 1, n);
  const int m = uniform_int(rng, 1, mid);
  auto nu = random_discrete(rng, k, n);
  auto inner = random_projection(rng, mid, n);
  auto outer = random_projection(rng, m, mid);
  auto direct = pushforward(nu, compose(outer, inner));
  auto chained = pushforward(pushforward(nu, inner), outer);
  c.near(direct.weights().sum(), 1.0, 1e-12, "pushforward mass");
  c.le(atom_mismatch(direct, chained), 0.0, 1e-10, "composition law");

  auto g = random_gaussian(rng, n);
  auto pg = pushforward(g, inner);
  auto eig = symmetric_eigen(pg.cov());
  c.le(-eig.values.minCoeff(), 1e-10 * std::max(eig.values.maxCoeff(), 0.0), 0.0, "projected covariance PSD");
  c.le((pg.cov() - pg.cov().transpose()).cwiseAbs().maxCoeff(), 0.0, 0.0, "projected covariance symmetric");
}

void stiefel_invariants(Context &c, Rng &rng)
{
  const int n = uniform_int(rng, 1, 6);
  const int m = uniform_int(rng, 1, n);
  Matrix v = haar_sample(m, n, rng());
  c.le(orthonormality_residual(v), 0.0, 1e-12, "haar sample orthonormal");
  Matrix g = normal_matrix(rng, m, n);
  Matrix t = tangent_project(v, g);
  c.le(max_abs(tangent_project(v, t) - t), 0.0, 1e-12, "tangent projection idempotent");
  c.le(orthonormality_residual(retract_qr(v, t, uniform(rng, 0.01, 1.0))), 0.0, 1e-10, "retraction orthonormal");

  // nonconvex test objective: match a projected covariance to a target
  auto gauss = random_gaussian(rng, n);
  StiefelProblem problem;
  problem.m = m;
  problem.n = n;
  const Matrix cov = gauss.cov();
  const Matrix target = random_spd(rng, m);
  problem.objective = [cov, target](const Matrix &x, const Vector &) {
    return (x * cov * x.transpose() - target).squaredNorm();
  };
  OptimizerParams params;
  params.restarts = 1;
  params.seed = rng();
  auto out = descend(problem, {haar_sample(m, n, params.seed), Vector()}, params);
  c.le(orthonormality_residual(out.v), 0.0, 1e-10, "final iterate orthonormal");
  for (std::size_t i = 1; i < out.trace.size(); ++i)
    c.le(out.trace[i], out.trace[i - 1], 0.0, "trace non-increasing");
}

// ---- closed forms -------------------------------------------------------

void ball_closed_form(Context &c, Rng &rng)
{
  if (c.instance == 0) {
    auto value = aug_kl_ball_gauss(UniformBallMeasure::make(1), GaussianMeasure::make(Vector::Zero(3),
                                                                                       Matrix::Identity(3, 3)));
    c.near(value.value, ball_gauss_kl_quadrature(1.0), 1e-9, "U[-1,1] vs N3(0,I) against quadrature");
    c.near(value.value, 0.5 * std::log(std::numbers::pi / 2.0) + 1.0 / 6.0, 1e-12, "U[-1,1] vs N3(0,I) exact");
    Vector diag(3);
    diag << 2.0, 0.5, 0.1;
    auto interior = aug_kl_ball_gauss(UniformBallMeasure::make(1), GaussianMeasure::make(Vector::Zero(3),
                                                                                          diag.asDiagonal()));
    c.near(interior.value, 0.5 * std::log(std::numbers::pi / 6.0) + 0.5, 1e-12, "interior branch exact");
    return;
  }
  const int n = uniform_int(rng, 2, 5);
  Vector mean = normal_vector(rng, n);
  auto g = GaussianMeasure::make(mean, random_spd(rng, n, 0.05, 3.0));
  auto value = aug_kl_ball_gauss(UniformBallMeasure::make(1), g);
  auto eig = symmetric_eigen(g.cov());
  const double var = std::clamp(1.0 / 3.0, eig.values.minCoeff(), eig.values.maxCoeff());
  c.near(value.value, ball_gauss_kl_quadrature(var), 1e-9, "1-d ball closed form against quadrature");
  c.near(kl_ball_gaussian(UniformBallMeasure::make(1), pushforward(g, *value.projection)), value.value, 1e-10,
         "certificate attains the value");

  const int m = uniform_int(rng, 2, 3);
  const int big = 2 * m + 1;
  Vector centre = normal_vector(rng, big);
  auto h = GaussianMeasure::make(centre, random_spd(rng, big, 0.05, 3.0));
  auto closed = aug_kl_ball_gauss(UniformBallMeasure::make(m), h);
  auto searched = aug_kl_ball_gauss_multistart(UniformBallMeasure::make(m), h, optimizer_params(rng, c.options));
  c.near(closed.value, searched.value, 1e-6, "m-ball closed form against multistart");
  c.near(kl_ball_gaussian(UniformBallMeasure::make(m), pushforward(h, *closed.projection)), closed.value, 1e-10,
         "m-ball certificate attains the value");
}

GaussianMeasure one_dim(Rng &rng, double variance)
{
  return GaussianMeasure::make(normal_vector(rng, 1), Matrix::Constant(1, 1, variance));
}

void closed_form_w2(Context &c, Rng &rng)
{
  const int n = uniform_int(rng, 2, 6);
  auto second = random_gaussian(rng, n);
  auto first = one_dim(rng, branch_variance(rng, second.cov(), c.instance));
  auto closed = aug_w2_gauss_1d_nd(first, second);
  auto searched = aug_w2_gauss_gauss(first, second, optimizer_params(rng, c.options));
  io::Json detail = {{"first", io::measure_to_json(first)}, {"second", io::measure_to_json(second)}};
  c.near(closed.value, searched.value, 1e-6, "closed form = multistart (W2)", detail);
  const double attained = w2_gaussian(first, pushforward(second, *closed.projection));
  c.near(attained * attained, closed.value * closed.value, 1e-10, "certificate attains W2", detail);
}

void closed_form_kl(Context &c, Rng &rng)
{
  const int n = uniform_int(rng, 2, 6);
  auto second = random_gaussian(rng, n);
  auto first = one_dim(rng, branch_variance(rng, second.cov(), c.instance));
  auto closed = aug_kl_gauss_1d_nd(first, second);
  auto searched = aug_kl_gauss_gauss(first, second, optimizer_params(rng, c.options));
  io::Json detail = {{"first", io::measure_to_json(first)}, {"second", io::measure_to_json(second)}};
  c.near(closed.value, searched.value, 1e-6, "closed form = multistart (KL)", detail);
  c.near(kl_gaussian(first, pushforward(second, *closed.projection)), closed.value, 1e-10, "certificate attains KL",
         detail);
}

void knot_continuity(Context &c, Rng &rng)
{
  const double lo = log_uniform(rng, 0.05, 1.0);
  const double hi = lo * log_uniform(rng, 1.0, 20.0);
  const double eps = 1e-15;
  for (double knot : {std::sqrt(lo), std::sqrt(hi)}) {
    PiecewiseSpec below{hi, lo, knot * (1.0 - eps)};
    PiecewiseSpec above{hi, lo, knot * (1.0 + eps)};
    c.near(w2_piecewise(below), w2_piecewise(above), 1e-12, "W2 branches meet at knot");
    c.near(kl_piecewise(below), kl_piecewise(above), 1e-12, "KL branches meet at knot");
  }
  const int m = uniform_int(rng, 1, 5);
  const double knot = 1.0 / (m + 2.0);
  const double d = 1e-8;
  c.near(gm_value(m, knot - d, knot - 2 * d), gm_value(m, knot + 2 * d, knot + d), 1e-12, "g_m meets at knot");
}

void pinsker_gaussian(Context &c, Rng &rng)
{
  const int n = uniform_int(rng, 2, 6);
  const Matrix cov = random_spd(rng, n);
  const double var = branch_variance(rng, cov, c.instance);
  auto first = GaussianMeasure::make(Vector::Zero(1), Matrix::Constant(1, 1, var));
  auto second = GaussianMeasure::make(Vector::Zero(n), cov);
  const double kl = aug_kl_gauss_1d_nd(first, second).value;
  auto eig = symmetric_eigen(cov);
  const double clamped = std::clamp(var, eig.values.minCoeff(), eig.values.maxCoeff());
  const double tv = gaussian_tv_quadrature(var, clamped);
  c.le(tv * tv, 0.5 * kl, 1e-8, "augmented tv^2 <= augmented KL / 2", {{"variance", var}, {"clamped", clamped}});
}

// ---- augmented -----------------------------------------------------------

void dirac_alternating(Context &c, Rng &rng)
{
  const int n = uniform_int(rng, 1, 5);
  const int m = uniform_int(rng, 1, n);
  auto nu = random_discrete(rng, uniform_int(rng, 1, 8), n);
  const Vector y = normal_vector(rng, m);
  auto closed = aug_w2_dirac_discrete(y, nu);
  auto searched = aug_w2_discrete_discrete(DiscreteMeasure::dirac(y), nu, 2.0, optimizer_params(rng, c.options));
  io::Json detail = {{"nu", discrete_json(nu)}, {"y", io::vector_to_json(y)}};
  c.near(closed.value, searched.value, 1e-6, "eigenvalue formula = alternating solver", detail);
  const double attained = wp_discrete(DiscreteMeasure::dirac(y), pushforward(nu, *closed.projection), 2.0).value;
  c.near(attained * attained, closed.value * closed.value, 1e-10, "certificate attains the value", detail);
}

void augmented_monotone_p(Context &c, Rng &rng)
{
  const int n = uniform_int(rng, 2, 3);
  const int m = uniform_int(rng, 1, n - 1);
  auto mu = random_discrete(rng, uniform_int(rng, 1, 5), m);
  auto nu = random_discrete(rng, uniform_int(rng, 1, 5), n);
  auto params = optimizer_params(rng, c.options);
  const double w1 = aug_w2_discrete_discrete(mu, nu, 1.0, params).value;
  const double w2 = aug_w2_discrete_discrete(mu, nu, 2.0, params).value;
  c.le(w1, w2, 1e-6, "augmented W1 <= augmented W2",
       {{"mu", discrete_json(mu)}, {"nu", discrete_json(nu)}});
}

void zero_distance(Context &c, Rng &rng)
{
  const int n = uniform_int(rng, 2, 4);
  const int m = uniform_int(rng, 1, n - 1);
  auto phi = random_projection(rng, m, n);
  auto nu = random_discrete(rng, uniform_int(rng, 1, 5), n);
  // larger search budget than the defaults
  auto params = optimizer_params(rng, c.options);
  params.restarts = 128;
  params.max_iters = 5000;
  auto discrete = aug_w2_discrete_discrete(pushforward(nu, phi), nu, 2.0, params);
  c.le(discrete.value, 0.0, 1e-6, "discrete: projection of nu is at distance 0",
       {{"nu", discrete_json(nu)}, {"projection", io::projection_to_json(phi)}});
  auto g = random_gaussian(rng, n);
  auto gauss = aug_w2_gauss_gauss(pushforward(g, phi), g, params);
  c.le(gauss.value, 0.0, 1e-6, "gaussian: projection of nu is at distance 0",
       {{"nu", io::measure_to_json(g)}, {"projection", io::projection_to_json(phi)}});
}

void upper_bound(Context &c, Rng &rng)
{
  const int samples = 100;
  const int n = uniform_int(rng, 2, 4);
  auto params = optimizer_params(rng, c.options);
  std::function<double(const AffineProjection &)> feasible;
  double value = 0.0;
  int m = 1;
  switch (c.instance % 6) {
  case 0: {
    auto second = random_gaussian(rng, n);
    auto first = one_dim(rng, branch_variance(rng, second.cov(), c.instance / 6));
    value = aug_w2_gauss_1d_nd(first, second).value;
    feasible = [=](const AffineProjection &phi) { return w2_gaussian(first, pushforward(second, phi)); };
    break;
  }
  case 1: {
    auto second = random_gaussian(rng, n);
    auto first = one_dim(rng, branch_variance(rng, second.cov(), c.instance / 6));
    value = aug_kl_gauss_1d_nd(first, second).value;
    feasible = [=](const AffineProjection &phi) { return kl_gaussian(first, pushforward(second, phi)); };
    break;
  }
  case 2: {
    auto second = random_gaussian(rng, n);
    m = uniform_int(rng, 1, n);
    auto ball = UniformBallMeasure::make(m);
    value = aug_kl_ball_gauss(ball, second, params).value;
    feasible = [=](const AffineProjection &phi) { return kl_ball_gaussian(ball, pushforward(second, phi)); };
    break;
  }
  case 3: {
    auto nu = random_discrete(rng, uniform_int(rng, 1, 6), n);
    m = uniform_int(rng, 1, n);
    auto dirac = DiscreteMeasure::dirac(normal_vector(rng, m));
    value = aug_w2_dirac_discrete(dirac.point(0), nu).value;
    feasible = [=](const AffineProjection &phi) { return wp_discrete(dirac, pushforward(nu, phi), 2.0).value; };
    break;
  }
  case 4: {
    auto nu = random_discrete(rng, uniform_int(rng, 1, 5), n);
    m = uniform_int(rng, 1, n);
    auto mu = random_discrete(rng, uniform_int(rng, 1, 5), m);
    value = aug_w2_discrete_discrete(mu, nu, 2.0, params).value;
    feasible = [=](const AffineProjection &phi) { return wp_discrete(mu, pushforward(nu, phi), 2.0).value; };
    break;
  }
  default: {
    auto second = random_gaussian(rng, n);
    m = uniform_int(rng, 1, n);
    auto first = random_gaussian(rng, m);
    value = aug_kl_gauss_gauss(first, second, params).value;
    feasible = [=](const AffineProjection &phi) { return kl_gaussian(first, pushforward(second, phi)); };
    break;
  }
  }
  double best = kInf;
  for (int s = 0; s < samples; ++s)
    best = std::min(best, feasible(random_projection(rng, m, n)));
  c.le(value, best, 1e-8, "augmented value <= value at a feasible projection", {{"case", c.instance % 6}});
}

void rotation_invariance(Context &c, Rng &rng)
{
  const int n = uniform_int(rng, 2, 5);
  auto rotation = AffineProjection::make(haar_sample(n, n, rng()));
  auto params = optimizer_params(rng, c.options);
  auto second = random_gaussian(rng, n);
  auto rotated = pushforward(second, rotation);
  auto first = one_dim(rng, branch_variance(rng, second.cov(), c.instance));
  c.near(aug_w2_gauss_1d_nd(first, second).value, aug_w2_gauss_1d_nd(first, rotated).value, 1e-8,
         "rotation invariance (W2 closed form)");
  c.near(aug_kl_gauss_1d_nd(first, second).value, aug_kl_gauss_1d_nd(first, rotated).value, 1e-8,
         "rotation invariance (KL closed form)");
  auto ball = UniformBallMeasure::make(1);
  c.near(aug_kl_ball_gauss(ball, second, params).value, aug_kl_ball_gauss(ball, rotated, params).value, 1e-8,
         "rotation invariance (ball closed form)");
  auto nu = random_discrete(rng, uniform_int(rng, 1, 6), n);
  const Vector y = normal_vector(rng, 1);
  c.near(aug_w2_dirac_discrete(y, nu).value, aug_w2_dirac_discrete(y, pushforward(nu, rotation)).value, 1e-8,
         "rotation invariance (dirac closed form)");
  auto low = random_gaussian(rng, 1);
  c.near(aug_kl_gauss_gauss(low, second, params).value, aug_kl_gauss_gauss(low, rotated, params).value, 1e-8,
         "rotation invariance (KL multistart)");
}

// ---- witnesses -----------------------------------------------------------

void witness_wp_suite(Context &c, Rng &rng)
{
  const int n = uniform_int(rng, 2, 4);
  const int m = uniform_int(rng, 1, n - 1);
  const double p = uniform_int(rng, 1, 2);
  auto mu = random_discrete(rng, uniform_int(rng, 1, 6), m);
  auto nu = random_discrete(rng, uniform_int(rng, 1, 6), n);
  auto phi = random_projection(rng, m, n);
  auto w = witness_wp(mu, nu, phi, p);
  io::Json detail = {{"mu", discrete_json(mu)}, {"nu", discrete_json(nu)}, {"projection", io::projection_to_json(phi)},
                     {"p", p}};
  c.near(w.lhs, w.rhs, 1e-8, "W_p(alpha, nu) = W_p(mu, phi(nu))", detail);
  c.le(w.rhs, w.lhs, 1e-9, "witness cost not below rhs", detail);
  c.le(atom_mismatch(pushforward(w.alpha, phi), mu), 0.0, 1e-12, "phi(alpha) = mu", detail);
}

void witness_tv_suite(Context &c, Rng &rng)
{
  const int n = uniform_int(rng, 2, 4);
  const int m = uniform_int(rng, 1, n - 1);
  const int k = uniform_int(rng, 1, 6);
  Matrix pts = normal_matrix(rng, n, k);
  auto phi = collapsing_projection(rng, pts, m, n);
  auto nu = DiscreteMeasure::make(pts, random_simplex(rng, k));
  auto beta = pushforward(nu, phi);
  Vector w = random_simplex(rng, beta.size());
  if (beta.size() > 1 && rng() % 2 == 0) {
    w[uniform_int(rng, 0, static_cast<int>(beta.size()) - 1)] = 0.0;
    w /= w.sum();
  }
  auto mu = DiscreteMeasure::make(beta.points(), w);
  auto result = witness_tv(mu, nu, phi);
  io::Json detail = {{"mu", discrete_json(mu)}, {"nu", discrete_json(nu)},
                     {"projection", io::projection_to_json(phi)}};
  c.near(result.lhs, result.rhs, 1e-10, "tv(alpha, nu) = tv(mu, phi(nu))", detail);
  c.le(atom_mismatch(pushforward(result.alpha, phi), mu), 0.0, 1e-12, "phi(alpha) = mu", detail);
}

void disintegration(Context &c, Rng &rng)
{
  const int n = uniform_int(rng, 2, 4);
  const int m = uniform_int(rng, 1, n - 1);
  const int k = uniform_int(rng, 1, 8);
  Matrix pts = normal_matrix(rng, n, k);
  auto phi = collapsing_projection(rng, pts, m, n);
  auto nu = DiscreteMeasure::make(pts, random_simplex(rng, k));
  auto parts = disintegrate(nu, phi);
  auto back = parts.reassemble();
  c.le(atom_mismatch(back, nu), 0.0, 1e-12, "reassembled measure = original");
  for (Eigen::Index y = 0; y < parts.base.size(); ++y)
    c.near(parts.conditional[static_cast<std::size_t>(y)].sum(), 1.0, 1e-12, "fiber is a probability measure");
}

const std::vector<SuiteDef> &registry()
{
  static const std::vector<SuiteDef> defs = {
      {"ot-exactness", "network simplex vs permutation brute force; plan marginals", 100, ot_exactness},
      {"wp-metric", "W_p symmetry, identity, triangle inequality", 50, wp_metric},
      {"wp-monotone-p", "W_p nondecreasing in p", 50, wp_monotone_p},
      {"wp-translation", "W_p of a translate equals the shift length", 20, wp_translation},
      {"js-symmetry", "js(mu,nu,theta) = js(nu,mu,theta)", 100, js_symmetry},
      {"f-generators", "TV and JS generators agree with their direct definitions", 20, tv_generator},
      {"dpi-wasserstein", "W_p data processing under Haar projections", 200, dpi_wasserstein},
      {"dpi-js", "JS data processing under Haar projections", 200, dpi_js},
      {"dpi-tv", "TV data processing under Haar projections", 200, dpi_tv},
      {"dpi-f", "f-divergence data processing, ten generators, product measures", 200, dpi_f},
      {"pinsker", "tv^2 <= KL/2 on same-support pairs", 500, pinsker},
      {"hellinger", "Hl^2 <= 2 tv <= sqrt(2) Hl on same-support pairs", 500, hellinger},
      {"pushforward", "pushforward mass, composition, PSD covariance", 50, pushforward_laws},
      {"stiefel", "Haar/tangent/retraction invariants and monotone descent", 50, stiefel_invariants},
      {"ball-closed-form", "uniform ball vs gaussian closed form against quadrature and multistart", 20,
       ball_closed_form},
      {"closed-form-w2", "1-d vs n-d gaussian W2 closed form against multistart", 50, closed_form_w2},
      {"closed-form-kl", "1-d vs n-d gaussian KL closed form against multistart", 50, closed_form_kl},
      {"knot-continuity", "closed-form branches agree at their knots", 50, knot_continuity},
      {"pinsker-gaussian", "Pinsker on augmented gaussians via TV quadrature", 50, pinsker_gaussian},
      {"dirac", "Dirac vs discrete eigenvalue formula against alternating solver", 30, dirac_alternating},
      {"augmented-monotone-p", "augmented W1 <= augmented W2", 30, augmented_monotone_p},
      {"zero-distance", "projections of nu are at augmented distance 0", 30, zero_distance},
      {"upper-bound", "augmented value below every sampled feasible projection", 12, upper_bound},
      {"rotation-invariance", "augmented values unchanged by rotating the larger measure", 10,
       rotation_invariance},
      {"witness-wp", "W_p witness equality and phi(alpha) = mu", 100, witness_wp_suite},
      {"witness-tv", "TV witness equality on support-compatible instances", 100, witness_tv_suite},
      {"disintegration", "disintegrate/reassemble round trip", 50, disintegration},
  };
  return defs;
}

} // namespace

void SuiteReport::expect_le(double lhs, double rhs, double tol, std::uint64_t seed, int instance,
                            const std::string &what, const io::Json &detail)
{
  ++checks;
  const double excess = lhs - rhs - tol;
  const bool bad = std::isnan(lhs) || std::isnan(rhs) || excess > 0.0;
  if (!std::isnan(excess))
    worst_excess = std::max(worst_excess, excess);
  if (!bad)
    return;
  ++violations;
  if (failure.is_null()) {
    failure = {{"suite", name},     {"seed", seed},          {"instance", instance},     {"check", what},
               {"lhs", io::number_or_inf(lhs)}, {"rhs", io::number_or_inf(rhs)}, {"tolerance", tol}};
    if (!detail.is_null())
      failure["detail"] = detail;
  }
}

std::uint64_t instance_seed(std::uint64_t seed, const std::string &name, int index)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : name)
    h = (h ^ ch) * 0x100000001b3ULL;
  return splitmix(splitmix(seed ^ h) + static_cast<std::uint64_t>(index));
}

const std::vector<SuiteInfo> &suites()
{
  static const std::vector<SuiteInfo> infos = [] {
    std::vector<SuiteInfo> out;
    for (const auto &d : registry())
      out.push_back({d.name, d.description});
    return out;
  }();
  return infos;
}

SuiteReport run_suite(const std::string &name, const VerifyOptions &options)
{
  const auto &defs = registry();
  auto it = std::find_if(defs.begin(), defs.end(), [&](const SuiteDef &d) { return d.name == name; });
  if (it == defs.end())
    throw Error(ErrorCode::Unsupported, "unknown suite \"" + name + "\"");

  SuiteReport report;
  report.name = it->name;
  report.description = it->description;
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < it->instances; ++i) {
    if (options.instance && *options.instance != i)
      continue;
    Context ctx{report, options, instance_seed(options.seed, name, i), i};
    Rng rng(ctx.seed);
    try {
      it->body(ctx, rng);
    } catch (const std::exception &e) {
      ctx.le(kInf, 0.0, 0.0, std::string("exception: ") + e.what());
    }
    ++report.instances;
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<SuiteReport> run_verify(const VerifyOptions &options)
{
  std::vector<std::string> names = options.suites;
  if (names.empty())
    for (const auto &s : suites())
      names.push_back(s.name);
  std::vector<SuiteReport> out;
  for (const auto &n : names)
    out.push_back(run_suite(n, options));
  return out;
}

} // namespace augdist::verify
