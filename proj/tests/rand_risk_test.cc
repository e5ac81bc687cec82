// Copyright 2026 The pacbound Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pacbound/rand_risk.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.h"
#include "pacbound/error.h"
#include "pacbound/synthetic.h"

namespace pacbound {
namespace {

// A one-point model whose margin at x = (0) is exactly `f`.
SvmModel constant_model(double f) {
  Matrix x(1, 1);
  x << 0.0;
  const double a = std::abs(f);
  return SvmModel(x, {f >= 0 ? 1 : -1}, {a}, KernelSpec(1.0), 1.0 / std::max(a, 1e-300), 1);
}

Dataset origin(int label = 1) {
  Matrix x(1, 1);
  x << 0.0;
  return Dataset(x, {label});
}

TEST(GaussianCdf, Values) {
  EXPECT_EQ(gaussian_cdf(0.0), 0.5);
  for (double x : {0.5, 1.0, 2.0}) {
    EXPECT_NEAR(gaussian_cdf(x) + gaussian_cdf(-x), 1.0, 1e-15);
  }
  EXPECT_NEAR(gaussian_cdf(1.959964), 0.975, 1e-6);
  for (double x = -6.0; x <= 6.0; x += 0.25) {
    EXPECT_NEAR(gaussian_cdf(x), oracle::normal_cdf(x), 1e-12) << x;
  }
  EXPECT_EQ(gaussian_sf(3.0), gaussian_cdf(-3.0));
  EXPECT_GT(gaussian_sf(30.0), 0.0);
}

TEST(AverageRisk, ZeroMarginsGiveHalf) {
  const std::vector<double> m(7, 0.0);
  EXPECT_EQ(average_risk_from_margins(m, 0.3), 0.5);
}

TEST(AverageRisk, Limits) {
  const Dataset d = SyntheticSampler({}).draw_dataset(50, 1);
  const SvmModel m = train(d, KernelSpec(1.0), {FormulationStyle::kCStyle, 1.0});
  EXPECT_NEAR(average_risk(RandomizedClassifier(m, 1e18), d), 0.5, 1e-6);

  std::vector<double> margins = m.signed_margins(d);
  for (double& v : margins) {
    if (std::abs(v) < 0.1) v = v < 0 ? -0.1 : 0.1;
  }
  const double err = losses_from_margins(margins).err01;
  EXPECT_NEAR(average_risk_from_margins(margins, 1e-4), err, 1e-12);
}

TEST(AverageRisk, InUnitIntervalAndMonotoneTowardHalf) {
  const std::vector<double> rows{-3.0, -0.5, 0.0, 0.2, 1.0, 4.0};
  for (double m : rows) {
    double prev = std::abs(average_risk_from_margins(std::vector<double>{m}, 0.01) - 0.5);
    for (double s = 0.02; s < 100.0; s *= 1.7) {
      const double r = average_risk_from_margins(std::vector<double>{m}, s);
      EXPECT_GE(r, 0.0);
      EXPECT_LE(r, 1.0);
      EXPECT_LE(std::abs(r - 0.5), prev + 1e-15);
      prev = std::abs(r - 0.5);
    }
  }
}

TEST(AverageRisk, ScaleCoupling) {
  const Dataset d = SyntheticSampler({}).draw_dataset(40, 2);
  const SvmModel m = train(d, KernelSpec(1.0), {FormulationStyle::kCStyle, 0.5});
  const double base = average_risk(RandomizedClassifier(m, 0.04), d);
  for (double c : {0.5, 3.0, 10.0}) {
    const SvmModel s = m.scaled(c);
    EXPECT_NEAR(average_risk(RandomizedClassifier(s, 0.04 * c * c), d), base, 1e-12);
  }
}

TEST(AverageRisk, RejectsBadInputs) {
  const SvmModel m = constant_model(1.0);
  EXPECT_THROW(RandomizedClassifier(m, 0.0), InvalidArgument);
  EXPECT_THROW(average_risk_from_margins(std::vector<double>{}, 1.0), EmptyDatasetError);
}

TEST(SamplePredict, VanishingNoise) {
  const SvmModel m = constant_model(1.0);
  const RandomizedClassifier q(m, 1e-24);
  const std::vector<double> x{0.0};
  for (std::uint64_t s = 0; s < 100; ++s) EXPECT_EQ(sample_predict(q, x, s), 1);
}

TEST(SamplePredict, ZeroMarginIsFair) {
  const SvmModel m = constant_model(0.0);
  const RandomizedClassifier q(m, 1.0);
  Rng rng(5);
  const std::vector<double> x{0.0};
  int plus = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) plus += sample_predict(q, x, rng) == 1;
  EXPECT_NEAR(plus / static_cast<double>(draws), 0.5, 0.005);
}

TEST(SamplePredict, ErrorFrequencyMatchesTail) {
  const SvmModel m = constant_model(1.0);
  const RandomizedClassifier q(m, 1.0);
  Rng rng(6);
  const std::vector<double> x{0.0};
  const int draws = 1000000;
  int errors = 0;
  for (int i = 0; i < draws; ++i) errors += sample_predict(q, x, rng) != 1;
  const double p = gaussian_sf(1.0);
  EXPECT_NEAR(p, 0.158655, 1e-6);
  const double se = std::sqrt(p * (1 - p) / draws);
  EXPECT_NEAR(errors / static_cast<double>(draws), p, 3 * se);
}

TEST(MonteCarlo, VanishingNoiseIsExact) {
  const Dataset d = SyntheticSampler({}).draw_dataset(30, 3);
  const SvmModel m = train(d, KernelSpec(1.0), {FormulationStyle::kCStyle, 1.0});
  const MonteCarloRisk r = mc_average_risk(RandomizedClassifier(m, 1e-24), d, 50, 1);
  EXPECT_EQ(r.estimate, losses(m, d).err01);
}

TEST(MonteCarlo, AgreesWithClosedForm) {
  const Dataset d = SyntheticSampler({}).draw_dataset(60, 4);
  const SvmModel m = train(d, KernelSpec(1.0), {FormulationStyle::kCStyle, 1.0});
  const RandomizedClassifier q(m, 0.05);
  const MonteCarloRisk r = mc_average_risk(q, d, 10000, 9);
  EXPECT_NEAR(r.estimate, average_risk(q, d), 3 * r.std_err);
}

TEST(MonteCarlo, DeterministicAndJobIndependent) {
  const Dataset d = SyntheticSampler({}).draw_dataset(25, 5);
  const SvmModel m = train(d, KernelSpec(1.0), {FormulationStyle::kCStyle, 1.0});
  const RandomizedClassifier q(m, 0.1);
  const MonteCarloRisk a = mc_average_risk(q, d, 1, 77);
  const MonteCarloRisk b = mc_average_risk(q, d, 1, 77);
  const MonteCarloRisk c = mc_average_risk(q, d, 1, 77, 4);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.estimate, c.estimate);
  EXPECT_THROW(mc_average_risk(q, d, 0, 1), InvalidArgument);
}

}  // namespace
}  // namespace pacbound
