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

#include "augdist/measures.hpp"
#include "augdist/transport.hpp"

#include <string>
#include <vector>

namespace augdist {

/// Generator families for D_f(mu || nu) = sum_x nu(x) f(mu(x)/nu(x)).
enum class DivergenceKind
{
  KL,
  Exponential,
  Pearson,
  Hellinger,
  Jeffreys,
  Renyi,
  Chernoff,
  AlphaBeta,
  JensenShannon,
  TotalVariation,
};

class DivergenceGenerator
{
public:
  static DivergenceGenerator make(DivergenceKind kind, double theta = 0.5, double phi = 0.5);

  DivergenceKind kind() const { return kind_; }
  double theta() const { return theta_; }
  double phi() const { return phi_; }
  std::string name() const;

  /// f(t) for t > 0.
  double operator()(double t) const;
  /// lim_{t -> 0+} f(t); may be +inf.
  double at_zero() const;
  /// lim_{t -> inf} f(t) / t; may be +inf.
  double slope_at_infinity() const;

private:
  DivergenceGenerator(DivergenceKind kind, double theta, double phi) : kind_(kind), theta_(theta), phi_(phi) {}

  DivergenceKind kind_;
  double theta_;
  double phi_;
};

/// Masses of two measures on the union of their supports. Atoms are matched
/// with the merge tolerance of the combined point cloud; first-measure atoms
/// come first in their original order.
struct AlignedMasses
{
  Matrix points;
  Vector first;
  Vector second;
  std::vector<Eigen::Index> first_index;  // union index of each atom of the first measure
  std::vector<Eigen::Index> second_index; // union index of each atom of the second measure
};

AlignedMasses align_supports(const DiscreteMeasure &mu, const DiscreteMeasure &nu);

/// Hahn-decomposition certificate: value = mu(S) - nu(S).
struct TvCertificate
{
  double value = 0.0;
  std::vector<Eigen::Index> positive_set; // indices into mu's atoms
};

struct WassersteinResult
{
  double value = 0.0;
  Coupling coupling;
};

/// Cost matrix ||x_i - y_j||^p between atoms of mu (rows) and nu (columns).
Matrix power_distance_cost(const Matrix &mu_points, const Matrix &nu_points, double p);

WassersteinResult wp_discrete(const DiscreteMeasure &mu, const DiscreteMeasure &nu, double p);

double w2_gaussian(const GaussianMeasure &first, const GaussianMeasure &second);
double kl_gaussian(const GaussianMeasure &first, const GaussianMeasure &second);

TvCertificate tv_discrete(const DiscreteMeasure &mu, const DiscreteMeasure &nu);
double js_discrete(const DiscreteMeasure &mu, const DiscreteMeasure &nu, double theta);
double f_divergence_discrete(const DiscreteMeasure &mu, const DiscreteMeasure &nu, const DivergenceGenerator &g);

/// Same routines on already aligned mass vectors.
double tv_masses(const Vector &p, const Vector &q);
double js_masses(const Vector &p, const Vector &q, double theta);
double f_divergence_masses(const Vector &p, const Vector &q, const DivergenceGenerator &g);

} // namespace augdist
