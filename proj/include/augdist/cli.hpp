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
#include "augdist/measure_io.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace augdist::cli {

/// Process exit codes.
enum Exit : int
{
  kOk = 0,
  kFailure = 1,
  kInvalidSpec = 2,
  kUnsupported = 3,
  kDimensionOrder = 4,
  kSupportViolation = 5,
};

/// Parsed --metric value.
struct Metric
{
  enum class Family
  {
    Wasserstein,
    TotalVariation,
    JensenShannon,
    Divergence, // f-divergence with `generator`
  };

  Family family = Family::Wasserstein;
  double p = 2.0;
  double theta = 0.5;
  DivergenceGenerator generator = DivergenceGenerator::make(DivergenceKind::KL);
  std::string label;

  /// Symmetric metrics may take their arguments in either dimension order.
  bool symmetric() const;

  /// w1, w2, wp:<p>, kl, tv, js:<t>, hellinger, pearson, jeffreys, renyi:<t>,
  /// chernoff:<t>, alphabeta:<t>:<f>, exponential. Throws Error(InvalidArgument).
  static Metric parse(const std::string &text);
};

struct DistRequest
{
  std::string metric;
  std::string method = "auto"; // auto | closed-form | optimize | brute-force
  std::string first;
  std::string second;
  std::optional<std::string> projection;
  std::optional<std::string> output;
  std::uint64_t seed = 0;
  int restarts = 32;
  int samples = 2000;
  int threads = 0;
  bool timing = false;
};

struct WitnessRequest
{
  std::string metric = "w2"; // w1 | w2 | wp:<p> | tv
  std::string first;
  std::string second;
  std::optional<std::string> projection;
  std::optional<std::string> output;
  std::optional<std::string> alpha_output;
  std::uint64_t seed = 0;
};

struct VerifyRequest
{
  std::vector<std::string> suites;
  std::uint64_t seed = 20260101;
  std::optional<int> instance;
  std::optional<std::string> output;
  int threads = 0;
  bool timing = false;
  bool list = false;
};

struct SampleRequest
{
  int m = 1;
  int n = 1;
  std::uint64_t seed = 0;
  std::optional<std::string> output;
};

/// Reports go to `out` (and to the output file when given); diagnostics to `err`.
int run_dist(const DistRequest &request, std::ostream &out, std::ostream &err);
int run_witness(const WitnessRequest &request, std::ostream &out, std::ostream &err);
int run_verify(const VerifyRequest &request, std::ostream &out, std::ostream &err);
int run_sample_stiefel(const SampleRequest &request, std::ostream &out, std::ostream &err);

/// The JSON report `dist` emits, without file I/O. Throws augdist::Error.
io::Json dist_report(const DistRequest &request);

} // namespace augdist::cli
