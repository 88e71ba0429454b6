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

#include <json.hpp>

#include <filesystem>

namespace augdist::io {

using Json = nlohmann::json;

/// Measure-spec files:
///   {"type": "gaussian", "mean": [...], "cov": [[...], ...]}
///   {"type": "discrete", "points": [[...], ...], "weights": [...]}
///   {"type": "uniform_ball", "dim": m}
Measure measure_from_json(const Json &spec);
Json measure_to_json(const Measure &measure);
Measure load_measure(const std::filesystem::path &path);

/// Accepts {"V": [[...]], "b": [...]} or any object holding such a value
/// under "projection" (e.g. a distance report).
AffineProjection projection_from_json(const Json &spec);
Json projection_to_json(const AffineProjection &map);

/// Nonzero plan entries as [row, col, mass] triplets.
Json plan_to_json(const Coupling &coupling);

/// Finite numbers pass through; +inf becomes the string "inf".
Json number_or_inf(double value);
double number_from_json(const Json &value);

Json load_json(const std::filesystem::path &path);
void save_json(const std::filesystem::path &path, const Json &value);

Json matrix_to_json(const Matrix &m);
Json vector_to_json(const Vector &v);
Matrix matrix_from_json(const Json &rows);
Vector vector_from_json(const Json &values);

} // namespace augdist::io
