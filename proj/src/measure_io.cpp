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

#include "augdist/measure_io.hpp"
#include "augdist/error.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace augdist::io {

namespace {

[[noreturn]] void bad_spec(const std::string &what)
{
  throw Error(ErrorCode::InvalidArgument, "invalid spec: " + what);
}

const Json &field(const Json &spec, const char *name)
{
  if (!spec.is_object() || !spec.contains(name))
    bad_spec(std::string("missing field \"") + name + "\"");
  return spec.at(name);
}

} // namespace

Json number_or_inf(double value)
{
  if (value == std::numeric_limits<double>::infinity())
    return "inf";
  return value;
}

double number_from_json(const Json &value)
{
  if (value.is_string() && value.get<std::string>() == "inf")
    return std::numeric_limits<double>::infinity();
  if (!value.is_number())
    bad_spec("expected a number");
  return value.get<double>();
}

Vector vector_from_json(const Json &values)
{
  if (!values.is_array())
    bad_spec("expected an array of numbers");
  Vector out(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = number_from_json(values[i]);
  return out;
}

Matrix matrix_from_json(const Json &rows)
{
  if (!rows.is_array() || rows.empty())
    bad_spec("expected a non-empty array of rows");
  const std::size_t cols = rows[0].is_array() ? rows[0].size() : 0;
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != cols)
      bad_spec("ragged matrix");
    out.row(static_cast<Eigen::Index>(i)) = vector_from_json(rows[i]).transpose();
  }
  return out;
}

Json vector_to_json(const Vector &v)
{
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back(v[i] + 0.0); // no negative zero
  return out;
}

Json matrix_to_json(const Matrix &m)
{
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    out.push_back(vector_to_json(m.row(i).transpose()));
  return out;
}

Measure measure_from_json(const Json &spec)
{
  const auto &type = field(spec, "type");
  if (!type.is_string())
    bad_spec("\"type\" must be a string");
  const auto kind = type.get<std::string>();
  if (kind == "gaussian")
    return GaussianMeasure::make(vector_from_json(field(spec, "mean")), matrix_from_json(field(spec, "cov")));
  if (kind == "discrete") {
    // rows of the file are atoms; atoms are columns internally
    Matrix points = matrix_from_json(field(spec, "points")).transpose();
    return DiscreteMeasure::make(points, vector_from_json(field(spec, "weights")));
  }
  if (kind == "uniform_ball") {
    const auto &dim = field(spec, "dim");
    if (!dim.is_number_integer())
      bad_spec("\"dim\" must be an integer");
    return UniformBallMeasure::make(dim.get<Eigen::Index>());
  }
  bad_spec("unknown measure type \"" + kind + "\"");
}

Json measure_to_json(const Measure &measure)
{
  return std::visit(
      [](const auto &m) -> Json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GaussianMeasure>)
          return {{"type", "gaussian"}, {"mean", vector_to_json(m.mean())}, {"cov", matrix_to_json(m.cov())}};
        else if constexpr (std::is_same_v<T, DiscreteMeasure>)
          return {{"type", "discrete"},
                  {"points", matrix_to_json(m.points().transpose())},
                  {"weights", vector_to_json(m.weights())}};
        else
          return {{"type", "uniform_ball"}, {"dim", m.dim()}};
      },
      measure);
}

Json load_json(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error &e) {
    throw Error(ErrorCode::InvalidArgument, path.string() + ": " + e.what());
  }
}

void save_json(const std::filesystem::path &path, const Json &value)
{
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << value.dump(2) << '\n';
}

Measure load_measure(const std::filesystem::path &path)
{
  return measure_from_json(load_json(path));
}

AffineProjection projection_from_json(const Json &spec)
{
  if (spec.is_object() && spec.contains("projection"))
    return projection_from_json(spec.at("projection"));
  Matrix v = matrix_from_json(field(spec, "V"));
  Vector b = spec.contains("b") ? vector_from_json(spec.at("b")) : Vector::Zero(v.rows());
  return AffineProjection::make(v, b);
}

Json projection_to_json(const AffineProjection &map)
{
  return {{"V", matrix_to_json(map.v())}, {"b", vector_to_json(map.b())}};
}

Json plan_to_json(const Coupling &coupling)
{
  Json out = Json::array();
  for (Eigen::Index i = 0; i < coupling.plan.rows(); ++i)
    for (Eigen::Index j = 0; j < coupling.plan.cols(); ++j)
      if (coupling.plan(i, j) > 0.0)
        out.push_back(Json::array({i, j, coupling.plan(i, j)}));
  return out;
}

} // namespace augdist::io
