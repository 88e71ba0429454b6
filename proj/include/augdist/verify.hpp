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

#include "augdist/measure_io.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace augdist::verify {

/// Outcome of one randomized property battery.
struct SuiteReport
{
  std::string name;
  std::string description;
  int instances = 0;
  int checks = 0;
  int violations = 0;
  /// Largest observed (lhs - rhs - tolerance) over all checks; <= 0 when clean.
  double worst_excess = -std::numeric_limits<double>::infinity();
  /// First violating instance, serialized for replay; null when clean.
  io::Json failure;
  double seconds = 0.0;

  bool passed() const { return violations == 0; }

  /// Records the check lhs <= rhs + tol. NaN on either side is a violation.
  void expect_le(double lhs, double rhs, double tol, std::uint64_t seed, int instance, const std::string &what,
                 const io::Json &detail = {});
};

struct VerifyOptions
{
  std::uint64_t seed = 20260101;
  /// Empty runs every suite.
  std::vector<std::string> suites;
  /// Replays a single instance index of the selected suites.
  std::optional<int> instance;
  int threads = 0;
};

struct SuiteInfo
{
  std::string name;
  std::string description;
};

const std::vector<SuiteInfo> &suites();

/// Throws Error(Unsupported) for an unknown name.
SuiteReport run_suite(const std::string &name, const VerifyOptions &options);

std::vector<SuiteReport> run_verify(const VerifyOptions &options);

/// Seed of instance `index` of suite `name`.
std::uint64_t instance_seed(std::uint64_t seed, const std::string &name, int index);

} // namespace augdist::verify
