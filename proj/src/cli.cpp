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

#include "augdist/cli.hpp"
#include "augdist/augmented.hpp"
#include "augdist/error.hpp"
#include "augdist/verify.hpp"
#include "augdist/witness.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace augdist::cli {

namespace {

[[noreturn]] void unsupported(const std::string &what)
{
  throw Error(ErrorCode::Unsupported, what);
}

[[noreturn]] void dimension_order(const std::string &what)
{
  throw Error(ErrorCode::DimensionMismatch, what);
}

double parse_number(const std::string &text, const std::string &metric)
{
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(value))
    throw Error(ErrorCode::InvalidArgument, "bad parameter \"" + text + "\" in metric " + metric);
  return value;
}

std::vector<std::string> split(const std::string &text, char sep)
{
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, sep))
    parts.push_back(part);
  if (!text.empty() && text.back() == sep)
    parts.emplace_back();
  return parts;
}

int exit_code(const Error &e)
{
  switch (e.code()) {
  case ErrorCode::Unsupported: return kUnsupported;
  case ErrorCode::DimensionMismatch: return kDimensionOrder;
  case ErrorCode::SupportViolation: return kSupportViolation;
  case ErrorCode::NonFiniteEntry:
  case ErrorCode::WeightSumViolation:
  case ErrorCode::NotPositiveSemidefinite:
  case ErrorCode::SingularCovariance:
  case ErrorCode::InfeasibleMarginals:
  case ErrorCode::InvalidArgument: return kInvalidSpec;
  default: return kFailure;
  }
}

template <class Fn>
int guarded(std::ostream &err, Fn &&fn)
{
  try {
    return fn();
  } catch (const Error &e) {
    err << "augdist: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception &e) {
    err << "augdist: " << e.what() << '\n';
    return kFailure;
  }
}

void emit(const io::Json &report, const std::optional<std::string> &path, std::ostream &out)
{
  out << report.dump(2) << '\n';
  if (path)
    io::save_json(*path, report);
}

// Shape errors inside a spec file map to InvalidArgument.
template <class Fn>
auto spec_errors(Fn &&fn)
{
  try {
    return fn();
  } catch (const Error &e) {
    if (e.code() == ErrorCode::DimensionMismatch) {
      const std::string text = e.what();
      const auto prefix = std::string(to_string(e.code())) + ": ";
      throw Error(ErrorCode::InvalidArgument, text.rfind(prefix, 0) == 0 ? text.substr(prefix.size()) : text);
    }
    throw;
  }
}

Measure load(const std::string &path)
{
  return spec_errors([&] { return io::load_measure(path); });
}

AffineProjection load_projection(const std::string &path)
{
  return spec_errors([&] { return io::projection_from_json(io::load_json(path)); });
}

const char *family_name(const Measure &m)
{
  switch (m.index()) {
  case 0: return "gaussian";
  case 1: return "discrete";
  default: return "uniform_ball";
  }
}

bool is_kl(const Metric &metric)
{
  return metric.family == Metric::Family::Divergence && metric.generator.kind() == DivergenceKind::KL;
}

bool is_w2(const Metric &metric)
{
  return metric.family == Metric::Family::Wasserstein && metric.p == 2.0;
}

// metric between two measures of equal dimension
double base_value(const Metric &metric, const Measure &a, const Measure &b, std::optional<Coupling> *plan = nullptr)
{
  if (const auto *x = std::get_if<DiscreteMeasure>(&a)) {
    if (const auto *y = std::get_if<DiscreteMeasure>(&b)) {
      switch (metric.family) {
      case Metric::Family::Wasserstein: {
        auto result = wp_discrete(*x, *y, metric.p);
        if (plan)
          *plan = std::move(result.coupling);
        return result.value;
      }
      case Metric::Family::TotalVariation: return tv_discrete(*x, *y).value;
      case Metric::Family::JensenShannon: return js_discrete(*x, *y, metric.theta);
      case Metric::Family::Divergence: return f_divergence_discrete(*x, *y, metric.generator);
      }
    }
  }
  if (const auto *x = std::get_if<GaussianMeasure>(&a)) {
    if (const auto *y = std::get_if<GaussianMeasure>(&b)) {
      if (is_w2(metric))
        return w2_gaussian(*x, *y);
      if (is_kl(metric))
        return kl_gaussian(*x, *y);
    }
  }
  if (const auto *x = std::get_if<UniformBallMeasure>(&a)) {
    if (const auto *y = std::get_if<GaussianMeasure>(&b))
      if (is_kl(metric))
        return kl_ball_gaussian(*x, *y);
  }
  unsupported(std::string("metric ") + metric.label + " is not available for " + family_name(a) + " vs " +
              family_name(b));
}

Measure project(const Measure &m, const AffineProjection &map)
{
  if (const auto *d = std::get_if<DiscreteMeasure>(&m))
    return pushforward(*d, map);
  if (const auto *g = std::get_if<GaussianMeasure>(&m))
    return pushforward(*g, map);
  unsupported("a uniform ball cannot be the projected measure");
}

DistanceReport fixed_projection(const Metric &metric, const Measure &a, const Measure &b,
                                const AffineProjection &map)
{
  if (map.out_dim() != dim(a) || map.in_dim() != dim(b))
    throw Error(ErrorCode::InvalidArgument, "projection shape does not match the measures");
  DistanceReport report;
  report.method = Method::FixedProjection;
  report.projection = map;
  report.value = base_value(metric, a, project(b, map), &report.plan);
  return report;
}

DistanceReport same_dimension(const Metric &metric, const Measure &a, const Measure &b)
{
  auto report = fixed_projection(metric, a, b, AffineProjection::identity(dim(b)));
  report.method = Method::SameDimension;
  return report;
}

OptimizerParams params_from(const DistRequest &request)
{
  OptimizerParams params;
  params.restarts = request.restarts;
  params.seed = request.seed;
  params.threads = request.threads;
  params.validate();
  return params;
}

std::optional<DistanceReport> closed_form(const Metric &metric, const Measure &a, const Measure &b)
{
  const auto m = dim(a);
  const auto n = dim(b);
  const auto *ga = std::get_if<GaussianMeasure>(&a);
  const auto *gb = std::get_if<GaussianMeasure>(&b);
  if (ga && gb && m == 1) {
    if (is_w2(metric))
      return aug_w2_gauss_1d_nd(*ga, *gb);
    if (is_kl(metric))
      return aug_kl_gauss_1d_nd(*ga, *gb);
  }
  const auto *ball = std::get_if<UniformBallMeasure>(&a);
  if (ball && gb && is_kl(metric) && (2 * m < n || m == 1))
    return aug_kl_ball_gauss(*ball, *gb);
  const auto *da = std::get_if<DiscreteMeasure>(&a);
  const auto *db = std::get_if<DiscreteMeasure>(&b);
  if (da && db && da->size() == 1 && is_w2(metric))
    return aug_w2_dirac_discrete(da->point(0), *db);
  return std::nullopt;
}

std::optional<DistanceReport> optimized(const Metric &metric, const Measure &a, const Measure &b,
                                        const OptimizerParams &params)
{
  const auto *ga = std::get_if<GaussianMeasure>(&a);
  const auto *gb = std::get_if<GaussianMeasure>(&b);
  if (ga && gb) {
    if (is_w2(metric))
      return aug_w2_gauss_gauss(*ga, *gb, params);
    if (is_kl(metric))
      return aug_kl_gauss_gauss(*ga, *gb, params);
  }
  const auto *ball = std::get_if<UniformBallMeasure>(&a);
  if (ball && gb && is_kl(metric))
    return aug_kl_ball_gauss_multistart(*ball, *gb, params);
  const auto *da = std::get_if<DiscreteMeasure>(&a);
  const auto *db = std::get_if<DiscreteMeasure>(&b);
  if (da && db && metric.family == Metric::Family::Wasserstein)
    return aug_w2_discrete_discrete(*da, *db, metric.p, params);
  return std::nullopt;
}

template <class T>
DistanceReport brute_force_typed(const Metric &metric, const T &a, const T &b, const DistRequest &request)
{
  SearchOptions options;
  options.samples = static_cast<std::size_t>(request.samples);
  options.seed = request.seed;
  options.threads = request.threads;
  std::function<double(const T &, const T &)> distance = [&metric](const T &x, const T &y) {
    return base_value(metric, Measure(x), Measure(y));
  };
  // fail early on unsupported combinations
  base_value(metric, Measure(a), project(Measure(b), AffineProjection::make(haar_sample(a.dim(), b.dim(), 0))));
  auto found = brute_force_search<T, T>(distance, a, b, options);
  DistanceReport report;
  report.value = found.value;
  report.method = Method::BruteForce;
  report.projection = found.projection;
  if (found.projection && metric.family == Metric::Family::Wasserstein)
    base_value(metric, Measure(a), project(Measure(b), *found.projection), &report.plan);
  return report;
}

DistanceReport brute_force(const Metric &metric, const Measure &a, const Measure &b, const DistRequest &request)
{
  if (request.samples < 1)
    throw Error(ErrorCode::InvalidArgument, "--samples must be positive");
  if (const auto *da = std::get_if<DiscreteMeasure>(&a))
    if (const auto *db = std::get_if<DiscreteMeasure>(&b))
      return brute_force_typed(metric, *da, *db, request);
  if (const auto *ga = std::get_if<GaussianMeasure>(&a))
    if (const auto *gb = std::get_if<GaussianMeasure>(&b))
      return brute_force_typed(metric, *ga, *gb, request);
  unsupported(std::string("brute force is not available for ") + family_name(a) + " vs " + family_name(b));
}

DistanceReport dispatch(const Metric &metric, const Measure &a, const Measure &b, const DistRequest &request)
{
  if (request.projection)
    return fixed_projection(metric, a, b, load_projection(*request.projection));

  const auto &method = request.method;
  const bool equal = dim(a) == dim(b);
  if (method == "auto") {
    if (equal)
      return same_dimension(metric, a, b);
    if (auto r = closed_form(metric, a, b))
      return *r;
    if (auto r = optimized(metric, a, b, params_from(request)))
      return *r;
  } else if (method == "closed-form") {
    if (auto r = closed_form(metric, a, b))
      return *r;
  } else if (method == "optimize") {
    if (auto r = optimized(metric, a, b, params_from(request)))
      return *r;
  } else if (method == "brute-force") {
    return brute_force(metric, a, b, request);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown method \"" + method + "\"");
  }
  unsupported("no " + method + " route for " + metric.label + " between " + family_name(a) + " and " +
              family_name(b));
}

} // namespace

bool Metric::symmetric() const
{
  switch (family) {
  case Family::Wasserstein:
  case Family::TotalVariation:
  case Family::JensenShannon: return true;
  case Family::Divergence:
    return generator.kind() == DivergenceKind::Hellinger || generator.kind() == DivergenceKind::Jeffreys;
  }
  return false;
}

Metric Metric::parse(const std::string &text)
{
  const auto parts = split(text, ':');
  const std::string head = parts.empty() ? std::string() : parts[0];
  auto arity = [&](std::size_t count) {
    if (parts.size() != count + 1)
      throw Error(ErrorCode::InvalidArgument, "metric " + head + " takes " + std::to_string(count) + " parameter(s)");
  };
  auto param = [&](std::size_t i) { return parse_number(parts[i], text); };

  Metric metric;
  metric.label = text;
  if (head == "w1" || head == "w2") {
    arity(0);
    metric.p = head == "w1" ? 1.0 : 2.0;
  } else if (head == "wp") {
    arity(1);
    metric.p = param(1);
    if (!(metric.p >= 1.0))
      throw Error(ErrorCode::InvalidArgument, "wp requires p >= 1");
  } else if (head == "tv") {
    arity(0);
    metric.family = Family::TotalVariation;
  } else if (head == "js") {
    arity(1);
    metric.family = Family::JensenShannon;
    metric.theta = param(1);
    if (!(metric.theta > 0.0 && metric.theta < 1.0))
      throw Error(ErrorCode::InvalidArgument, "js requires theta in (0,1)");
  } else {
    metric.family = Family::Divergence;
    if (head == "kl" || head == "hellinger" || head == "pearson" || head == "jeffreys" || head == "exponential") {
      arity(0);
      const DivergenceKind kind = head == "kl"          ? DivergenceKind::KL
                                  : head == "hellinger" ? DivergenceKind::Hellinger
                                  : head == "pearson"   ? DivergenceKind::Pearson
                                  : head == "jeffreys"  ? DivergenceKind::Jeffreys
                                                        : DivergenceKind::Exponential;
      metric.generator = DivergenceGenerator::make(kind);
    } else if (head == "renyi" || head == "chernoff") {
      arity(1);
      metric.generator =
          DivergenceGenerator::make(head == "renyi" ? DivergenceKind::Renyi : DivergenceKind::Chernoff, param(1));
    } else if (head == "alphabeta") {
      arity(2);
      metric.generator = DivergenceGenerator::make(DivergenceKind::AlphaBeta, param(1), param(2));
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown metric \"" + text + "\"");
    }
  }
  return metric;
}

io::Json dist_report(const DistRequest &request)
{
  const auto start = std::chrono::steady_clock::now();
  const Metric metric = Metric::parse(request.metric);
  Measure a = load(request.first);
  Measure b = load(request.second);
  bool swapped = false;
  if (dim(a) > dim(b)) {
    if (!metric.symmetric())
      dimension_order("metric " + metric.label + " needs dim(first) <= dim(second)");
    std::swap(a, b);
    swapped = true;
  }

  const DistanceReport report = dispatch(metric, a, b, request);
  io::Json out = {{"value", io::number_or_inf(report.value)},
                  {"method", std::string(to_string(report.method))},
                  {"metric", metric.label},
                  {"seed", request.seed},
                  {"restarts_agreeing", report.restarts_agreeing},
                  {"iterations", report.iterations}};
  if (report.projection)
    out["projection"] = io::projection_to_json(*report.projection);
  if (report.plan)
    out["plan"] = io::plan_to_json(*report.plan);
  if (swapped)
    out["swapped"] = true;
  if (request.timing)
    out["wall_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

int run_dist(const DistRequest &request, std::ostream &out, std::ostream &err)
{
  return guarded(err, [&] {
    emit(dist_report(request), request.output, out);
    return kOk;
  });
}

int run_witness(const WitnessRequest &request, std::ostream &out, std::ostream &err)
{
  return guarded(err, [&] {
    const Metric metric = Metric::parse(request.metric);
    if (metric.family != Metric::Family::Wasserstein && metric.family != Metric::Family::TotalVariation)
      unsupported("witness supports w1, w2, wp:<p> and tv");
    Measure a = load(request.first);
    Measure b = load(request.second);
    const auto *mu = std::get_if<DiscreteMeasure>(&a);
    const auto *nu = std::get_if<DiscreteMeasure>(&b);
    if (!mu || !nu)
      unsupported("witness needs two discrete measures");
    if (mu->dim() > nu->dim())
      dimension_order("witness needs dim(first) <= dim(second)");

    std::optional<AffineProjection> map;
    if (request.projection) {
      map = load_projection(*request.projection);
      if (map->out_dim() != mu->dim() || map->in_dim() != nu->dim())
        throw Error(ErrorCode::InvalidArgument, "projection shape does not match the measures");
    } else {
      Matrix v = haar_sample(mu->dim(), nu->dim(), request.seed);
      map = AffineProjection::make(v, mu->mean() - v * nu->mean());
    }

    const WitnessResult w = metric.family == Metric::Family::TotalVariation ? witness_tv(*mu, *nu, *map)
                                                                            : witness_wp(*mu, *nu, *map, metric.p);
    io::Json alpha = io::measure_to_json(w.alpha);
    io::Json report = {{"metric", metric.label},
                       {"lhs", w.lhs},
                       {"rhs", w.rhs},
                       {"difference", w.lhs - w.rhs},
                       {"projection", io::projection_to_json(*map)},
                       {"alpha", alpha},
                       {"seed", request.seed}};
    if (request.alpha_output)
      io::save_json(*request.alpha_output, alpha);
    emit(report, request.output, out);
    return kOk;
  });
}

int run_verify(const VerifyRequest &request, std::ostream &out, std::ostream &err)
{
  return guarded(err, [&] {
    if (request.list) {
      for (const auto &s : verify::suites())
        out << std::left << std::setw(22) << s.name << s.description << '\n';
      return kOk;
    }
    verify::VerifyOptions options;
    options.seed = request.seed;
    options.suites = request.suites;
    options.instance = request.instance;
    options.threads = request.threads;
    // validate names before running anything
    for (const auto &name : options.suites) {
      bool known = false;
      for (const auto &s : verify::suites())
        known = known || s.name == name;
      if (!known)
        throw Error(ErrorCode::InvalidArgument, "unknown suite \"" + name + "\"");
    }

    io::Json suites = io::Json::array();
    bool all = true;
    out << std::left << std::setw(22) << "suite" << std::right << std::setw(10) << "instances" << std::setw(9)
        << "checks" << std::setw(11) << "violations" << std::setw(14) << "worst excess"
        << "  result" << (request.timing ? "   seconds" : "") << '\n';
    std::vector<std::string> names = options.suites;
    if (names.empty())
      for (const auto &s : verify::suites())
        names.push_back(s.name);
    for (const auto &name : names) {
      const auto r = verify::run_suite(name, options);
      all = all && r.passed();
      std::ostringstream worst;
      if (r.checks > 0)
        worst << std::scientific << std::setprecision(2) << r.worst_excess + 0.0;
      else
        worst << "-";
      out << std::left << std::setw(22) << r.name << std::right << std::setw(10) << r.instances << std::setw(9)
          << r.checks << std::setw(11) << r.violations << std::setw(14) << worst.str() << "  "
          << (r.passed() ? "pass" : "FAIL");
      if (request.timing)
        out << std::setw(10) << std::fixed << std::setprecision(2) << r.seconds << std::defaultfloat;
      out << '\n';
      io::Json entry = {{"name", r.name},
                        {"description", r.description},
                        {"instances", r.instances},
                        {"checks", r.checks},
                        {"violations", r.violations},
                        {"passed", r.passed()}};
      if (r.checks > 0)
        entry["worst_excess"] = r.worst_excess;
      if (!r.failure.is_null()) {
        entry["failure"] = r.failure;
        err << "violation: " << r.failure.dump() << '\n';
      }
      if (request.timing)
        entry["seconds"] = r.seconds;
      suites.push_back(std::move(entry));
    }
    out << (all ? "all suites passed" : "property violations found") << '\n';
    if (request.output)
      io::save_json(*request.output, {{"seed", request.seed}, {"passed", all}, {"suites", suites}});
    return all ? kOk : kFailure;
  });
}

int run_sample_stiefel(const SampleRequest &request, std::ostream &out, std::ostream &err)
{
  return guarded(err, [&] {
    if (request.m < 1 || request.m > request.n)
      throw Error(ErrorCode::InvalidArgument, "sample-stiefel needs 1 <= m <= n");
    const Matrix v = haar_sample(request.m, request.n, request.seed);
    io::Json report = {{"V", io::matrix_to_json(v)},
                       {"b", io::vector_to_json(Vector::Zero(request.m))},
                       {"seed", request.seed},
                       {"orthonormality_residual", orthonormality_residual(v)}};
    emit(report, request.output, out);
    return kOk;
  });
}

} // namespace augdist::cli
