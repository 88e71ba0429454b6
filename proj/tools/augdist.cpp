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

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv)
{
  using namespace augdist::cli;

  CLI::App app{"Distances between probability measures of different dimensions"};
  app.require_subcommand(1);

  DistRequest dist;
  auto *dist_cmd = app.add_subcommand("dist", "augmented distance between two measure specs");
  dist_cmd->add_option("--metric", dist.metric, "w1, w2, wp:<p>, kl, tv, js:<t>, hellinger, pearson, jeffreys, "
                                                "renyi:<t>, chernoff:<t>, alphabeta:<t>:<f>, exponential")
      ->required();
  dist_cmd->add_option("--method", dist.method, "auto, closed-form, optimize or brute-force")
      ->check(CLI::IsMember({"auto", "closed-form", "optimize", "brute-force"}));
  dist_cmd->add_option("first", dist.first, "measure on the lower-dimensional space")->required();
  dist_cmd->add_option("second", dist.second, "measure on the higher-dimensional space")->required();
  dist_cmd->add_option("--projection", dist.projection, "evaluate at a fixed projection (JSON with V and b)");
  dist_cmd->add_option("-o,--output", dist.output, "also write the report here");
  dist_cmd->add_option("--seed", dist.seed, "seed for restarts and sampling");
  dist_cmd->add_option("--restarts", dist.restarts, "multistart restarts");
  dist_cmd->add_option("--samples", dist.samples, "brute-force samples");
  dist_cmd->add_option("--threads", dist.threads, "worker threads (0 = AUGDIST_THREADS or all)");
  dist_cmd->add_flag("--timing", dist.timing, "include wall_ms in the report");

  WitnessRequest witness;
  auto *witness_cmd = app.add_subcommand("witness", "embed the lower-dimensional measure and check the equality");
  witness_cmd->add_option("--metric", witness.metric, "w1, w2, wp:<p> or tv");
  witness_cmd->add_option("first", witness.first, "discrete measure on R^m")->required();
  witness_cmd->add_option("second", witness.second, "discrete measure on R^n")->required();
  witness_cmd->add_option("--projection", witness.projection, "projection file; Haar sample from --seed otherwise");
  witness_cmd->add_option("--seed", witness.seed, "seed for the Haar projection");
  witness_cmd->add_option("-o,--output", witness.output, "also write the report here");
  witness_cmd->add_option("--alpha-output", witness.alpha_output, "write the embedded measure as a measure spec");

  VerifyRequest verify;
  auto *verify_cmd = app.add_subcommand("verify", "run the randomized property suites");
  verify_cmd->add_option("--suite", verify.suites, "run only these suites (repeatable)");
  verify_cmd->add_option("--seed", verify.seed, "master seed");
  verify_cmd->add_option("--instance", verify.instance, "replay one instance index");
  verify_cmd->add_option("-o,--output", verify.output, "write the JSON report here");
  verify_cmd->add_option("--threads", verify.threads, "worker threads (0 = AUGDIST_THREADS or all)");
  verify_cmd->add_flag("--timing", verify.timing, "print per-suite seconds");
  verify_cmd->add_flag("--list", verify.list, "list suites and exit");

  SampleRequest sample;
  auto *sample_cmd = app.add_subcommand("sample-stiefel", "Haar-distributed m x n matrix with orthonormal rows");
  sample_cmd->add_option("--m", sample.m, "rows")->required();
  sample_cmd->add_option("--n", sample.n, "columns")->required();
  sample_cmd->add_option("--seed", sample.seed, "seed");
  sample_cmd->add_option("-o,--output", sample.output, "also write the projection here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalidSpec;
  }

  if (*dist_cmd)
    return run_dist(dist, std::cout, std::cerr);
  if (*witness_cmd)
    return run_witness(witness, std::cout, std::cerr);
  if (*verify_cmd)
    return run_verify(verify, std::cout, std::cerr);
  return run_sample_stiefel(sample, std::cout, std::cerr);
}
