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
#include "augdist/stiefel.hpp"
#include "test_util.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace augdist {
namespace {

namespace fs = std::filesystem;
using cli::Metric;
using test::error_code_of;

class CliTest : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir_ = fs::temp_directory_path() /
           ("augdist_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string &name, const io::Json &value)
  {
    const auto path = dir_ / name;
    io::save_json(path, value);
    return path.string();
  }

  std::string write_text(const std::string &name, const std::string &text)
  {
    const auto path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }

  std::string gaussian(const std::string &name, const Vector &mean, const Matrix &cov)
  {
    return write(name, io::measure_to_json(Measure(GaussianMeasure::make(mean, cov))));
  }

  std::string discrete(const std::string &name, const Matrix &points, const Vector &weights)
  {
    return write(name, io::measure_to_json(Measure(DiscreteMeasure::make(points, weights))));
  }

  std::string ball(const std::string &name, int dim)
  {
    return write(name, {{"type", "uniform_ball"}, {"dim", dim}});
  }

  int dist(cli::DistRequest request, io::Json *report = nullptr)
  {
    std::ostringstream out, err;
    const int code = cli::run_dist(request, out, err);
    last_err_ = err.str();
    if (report && code == cli::kOk)
      *report = io::Json::parse(out.str());
    return code;
  }

  fs::path dir_;
  std::string last_err_;
};

TEST(Metric, Parses)
{
  EXPECT_EQ(Metric::parse("w1").p, 1.0);
  EXPECT_EQ(Metric::parse("wp:3").p, 3.0);
  EXPECT_EQ(Metric::parse("js:0.25").theta, 0.25);
  EXPECT_EQ(Metric::parse("tv").family, Metric::Family::TotalVariation);
  auto ab = Metric::parse("alphabeta:0.2:0.4");
  EXPECT_EQ(ab.generator.kind(), DivergenceKind::AlphaBeta);
  EXPECT_EQ(ab.generator.phi(), 0.4);
  EXPECT_TRUE(Metric::parse("hellinger").symmetric());
  EXPECT_TRUE(Metric::parse("w2").symmetric());
  EXPECT_FALSE(Metric::parse("kl").symmetric());
  for (const char *bad : {"w3", "wp", "wp:0.5", "js:1", "renyi", "alphabeta:0.2", "kl:1", "wp:abc"})
    EXPECT_EQ(error_code_of([&] { Metric::parse(bad); }), ErrorCode::InvalidArgument) << bad;
}

TEST_F(CliTest, BallExampleAndGaussianClosedForm)
{
  cli::DistRequest r;
  r.metric = "kl";
  r.first = ball("ball.json", 1);
  r.second = gaussian("n3.json", Vector::Zero(3), Matrix::Identity(3, 3));
  io::Json report;
  ASSERT_EQ(dist(r, &report), cli::kOk) << last_err_;
  EXPECT_NEAR(report["value"].get<double>(), 0.5 * std::log(M_PI / 2.0) + 1.0 / 6.0, 1e-12);
  EXPECT_EQ(report["method"], "closed_form");
  EXPECT_FALSE(report.contains("wall_ms"));

  r.metric = "w2";
  r.first = gaussian("n1.json", Vector::Zero(1), Matrix::Identity(1, 1));
  Matrix cov = Matrix::Zero(2, 2);
  cov.diagonal() << 1.0, 4.0;
  r.second = gaussian("n2.json", Vector::Zero(2), cov);
  r.timing = true;
  ASSERT_EQ(dist(r, &report), cli::kOk) << last_err_;
  EXPECT_EQ(report["value"].get<double>(), 0.0);
  EXPECT_TRUE(report.contains("wall_ms"));
}

TEST_F(CliTest, ExitCodes)
{
  Matrix pts(2, 2);
  pts << 0, 1, 0, 1;
  Matrix line(1, 2);
  line << 0, 1;
  const auto low = discrete("low.json", line, Vector::Constant(2, 0.5));
  const auto high = discrete("high.json", pts, Vector::Constant(2, 0.5));

  cli::DistRequest r;
  r.metric = "kl";
  r.first = low;
  r.second = high;
  EXPECT_EQ(dist(r), cli::kUnsupported);
  EXPECT_EQ(last_err_.rfind("augdist: Unsupported: ", 0), 0u) << last_err_;

  r.first = gaussian("g2.json", Vector::Zero(2), Matrix::Identity(2, 2));
  r.second = gaussian("g1.json", Vector::Zero(1), Matrix::Identity(1, 1));
  EXPECT_EQ(dist(r), cli::kDimensionOrder);

  r.metric = "w2";
  io::Json report;
  ASSERT_EQ(dist(r, &report), cli::kOk);
  EXPECT_EQ(report["swapped"], true);

  r.first = write_text("broken.json", "{not json");
  EXPECT_EQ(dist(r), cli::kInvalidSpec);
  r.first = write("mismatch.json", {{"type", "discrete"}, {"points", {{0.0}, {1.0}}}, {"weights", {1.0}}});
  EXPECT_EQ(dist(r), cli::kInvalidSpec);
  r.first = write("weights.json", {{"type", "discrete"}, {"points", {{0.0}, {1.0}}}, {"weights", {0.7, 0.7}}});
  EXPECT_EQ(dist(r), cli::kInvalidSpec);
  r.first = write("psd.json", {{"type", "gaussian"}, {"mean", {0.0, 0.0}}, {"cov", {{1.0, 2.0}, {2.0, 1.0}}}});
  EXPECT_EQ(dist(r), cli::kInvalidSpec);
  r.first = (dir_ / "missing.json").string();
  EXPECT_EQ(dist(r), cli::kInvalidSpec);

  std::ostringstream out, err;
  cli::WitnessRequest w;
  w.metric = "tv";
  w.first = discrete("off.json", Matrix::Constant(1, 1, 0.5), Vector::Ones(1));
  w.second = high;
  w.projection = write("v.json", {{"V", {{1.0, 0.0}}}, {"b", {0.0}}});
  EXPECT_EQ(cli::run_witness(w, out, err), cli::kSupportViolation);
  w.metric = "kl";
  EXPECT_EQ(cli::run_witness(w, out, err), cli::kUnsupported);
}

TEST_F(CliTest, FixedProjectionRoundTrip)
{
  std::mt19937_64 rng(1);
  auto mu = test::random_discrete(2, 3, rng);
  auto nu = test::random_discrete(3, 4, rng);
  cli::DistRequest r;
  r.metric = "w2";
  r.first = write("mu.json", io::measure_to_json(Measure(mu)));
  r.second = write("nu.json", io::measure_to_json(Measure(nu)));
  r.output = (dir_ / "report.json").string();
  io::Json report;
  ASSERT_EQ(dist(r, &report), cli::kOk) << last_err_;
  EXPECT_EQ(io::load_json(*r.output), report);

  cli::DistRequest fixed = r;
  fixed.output.reset();
  fixed.projection = *r.output;
  io::Json again;
  ASSERT_EQ(dist(fixed, &again), cli::kOk) << last_err_;
  EXPECT_EQ(again["method"], "fixed_projection");
  EXPECT_NEAR(again["value"].get<double>(), report["value"].get<double>(), 1e-10);
}

TEST_F(CliTest, BruteForceUpperBoundsOptimizer)
{
  auto second = gaussian("g3.json", Vector::Zero(3), Matrix::Identity(3, 3) * 2.0);
  cli::DistRequest r;
  r.metric = "w2";
  r.first = gaussian("g1.json", Vector::Constant(1, 1.0), Matrix::Constant(1, 1, 9.0));
  r.second = second;
  io::Json closed, brute;
  ASSERT_EQ(dist(r, &closed), cli::kOk);
  r.method = "brute-force";
  r.samples = 200;
  ASSERT_EQ(dist(r, &brute), cli::kOk) << last_err_;
  EXPECT_EQ(brute["method"], "brute_force");
  EXPECT_GE(brute["value"].get<double>(), closed["value"].get<double>() - 1e-9);
}

TEST_F(CliTest, WitnessReport)
{
  std::mt19937_64 rng(2);
  cli::WitnessRequest w;
  w.first = write("mu.json", io::measure_to_json(Measure(test::random_discrete(1, 3, rng))));
  w.second = write("nu.json", io::measure_to_json(Measure(test::random_discrete(3, 4, rng))));
  w.alpha_output = (dir_ / "alpha.json").string();
  std::ostringstream out, err;
  ASSERT_EQ(cli::run_witness(w, out, err), cli::kOk) << err.str();
  auto report = io::Json::parse(out.str());
  EXPECT_NEAR(report["lhs"].get<double>(), report["rhs"].get<double>(), 1e-8);
  auto alpha = io::load_measure(*w.alpha_output);
  EXPECT_EQ(dim(alpha), 3);
}

TEST_F(CliTest, VerifyAndSample)
{
  cli::VerifyRequest v;
  v.suites = {"ot-exactness", "js-symmetry"};
  v.output = (dir_ / "verify.json").string();
  std::ostringstream out, err;
  EXPECT_EQ(cli::run_verify(v, out, err), cli::kOk) << err.str();
  auto report = io::load_json(*v.output);
  EXPECT_EQ(report["passed"], true);
  EXPECT_EQ(report["suites"].size(), 2u);

  v.suites = {"no-such-suite"};
  EXPECT_EQ(cli::run_verify(v, out, err), cli::kInvalidSpec);

  cli::VerifyRequest list;
  list.list = true;
  std::ostringstream listed;
  EXPECT_EQ(cli::run_verify(list, listed, err), cli::kOk);
  EXPECT_NE(listed.str().find("zero-distance"), std::string::npos);

  cli::SampleRequest s;
  s.m = 2;
  s.n = 4;
  s.seed = 3;
  std::ostringstream sampled;
  ASSERT_EQ(cli::run_sample_stiefel(s, sampled, err), cli::kOk);
  auto map = io::projection_from_json(io::Json::parse(sampled.str()));
  EXPECT_LT(orthonormality_residual(map.v()), 1e-12);
  EXPECT_TRUE(map.v() == haar_sample(2, 4, 3));
  s.m = 5;
  EXPECT_EQ(cli::run_sample_stiefel(s, sampled, err), cli::kInvalidSpec);
}

TEST_F(CliTest, BinaryExitCodes)
{
  const std::string exe = AUGDIST_CLI_PATH;
  auto run = [&](const std::string &args) {
    const int status = std::system((exe + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  EXPECT_EQ(run("sample-stiefel --m 2 --n 3 --seed 1"), 0);
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run("dist --metric w2"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  const auto g1 = gaussian("g1.json", Vector::Zero(1), Matrix::Identity(1, 1));
  const auto g2 = gaussian("g2.json", Vector::Zero(2), Matrix::Identity(2, 2));
  EXPECT_EQ(run("dist --metric kl " + g2 + " " + g1), 4);
  EXPECT_EQ(run("dist --metric kl " + g1 + " " + g2), 0);
}

} // namespace
} // namespace augdist
