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

#include "pacbound/tuning.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.h"
#include "pacbound/error.h"
#include "pacbound/io.h"
#include "pacbound/rand_risk.h"
#include "pacbound/synthetic.h"

namespace pacbound {
namespace {

CertificateInputs random_inputs(std::size_t n, double lambda, double w2,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.5, 1.0);
  CertificateInputs in;
  in.n = n;
  in.lambda = lambda;
  in.weight_norm_sq = w2;
  for (std::size_t i = 0; i < n; ++i) in.train_signed_margins.push_back(g(rng));
  return in;
}

TEST(Sigma, PoFlatWithZeroWeight) {
  CertificateInputs in = random_inputs(200, 1.0, 0.0, 1);
  std::fill(in.train_signed_margins.begin(), in.train_signed_margins.end(), 0.0);
  SigmaSearchSpec spec;
  spec.target = BoundKind::kPo;
  const SigmaSearchResult r = optimize_sigma(in, spec, 0.05);
  EXPECT_TRUE(r.flat);
  EXPECT_EQ(r.sigma2, spec.sigma2_max);
  EXPECT_EQ(r.union_penalty, 0.0);
  EXPECT_DOUBLE_EQ(r.report.inputs.delta_eval, 0.05);
}

TEST(Sigma, PewSpendsExactlyTau) {
  const CertificateInputs in = random_inputs(300, 0.01, 5.0, 2);
  for (int tau : {11, 12, 30, 60, 101}) {
    SigmaSearchSpec spec;
    spec.tau = tau;
    const SigmaSearchResult r = optimize_sigma(in, spec, 0.05);
    EXPECT_EQ(static_cast<int>(r.evaluations.size()), tau);
    EXPECT_FALSE(r.budget_exhausted);
    const double t = tau;
    EXPECT_DOUBLE_EQ(r.report.inputs.delta_eval, 0.025 / (t * (t + 1)));
    EXPECT_EQ(r.report.inputs.tau, tau);
  }
}

TEST(Sigma, ReturnedPointIsArgminOfEvaluations) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const CertificateInputs in = random_inputs(250, 0.02 * (s + 1), 3.0 * s, 10 + s);
    for (BoundKind k : {BoundKind::kPew, BoundKind::kPo}) {
      SigmaSearchSpec spec;
      spec.target = k;
      const SigmaSearchResult r = optimize_sigma(in, spec, 0.05);
      for (const SigmaEvaluation& e : r.evaluations) {
        EXPECT_GE(e.risk_bound, r.report.risk_bound);
      }
      EXPECT_GE(r.report.risk_bound, r.emp_risk_randomized);
      EXPECT_GE(r.sigma2, spec.sigma2_min);
      EXPECT_LE(r.sigma2, spec.sigma2_max);
    }
  }
}

TEST(Sigma, SmallBudgetIsFlagged) {
  const CertificateInputs in = random_inputs(100, 0.1, 1.0, 3);
  SigmaSearchSpec spec;
  spec.tau = 7;
  const SigmaSearchResult r = optimize_sigma(in, spec, 0.05);
  EXPECT_TRUE(r.budget_exhausted);
  EXPECT_EQ(r.evaluations.size(), 7u);
}

TEST(Sigma, UnionPenaltyAccounting) {
  // Huge lambda: the first PEW term is negligible, leaving the log term.
  const CertificateInputs in = random_inputs(1000, 1e6, 0.0, 4);
  SigmaSearchSpec spec;
  spec.tau = 60;
  const SigmaSearchResult r = optimize_sigma(in, spec, 0.05);
  EXPECT_NEAR(r.kl_budget_penalty, std::log(60.0 * 61.0) / 1000.0, 1e-6);
  const BoundReport plain =
      bound_pew(1000, 1e6, r.sigma2, 0.025, r.emp_risk_randomized, 0);
  EXPECT_NEAR(r.union_penalty, r.report.risk_bound - plain.risk_bound, 1e-15);
  EXPECT_GT(r.union_penalty, 0.0);
}

TEST(Sigma, PenaltyDecomposesForModerateLambda) {
  const CertificateInputs in = random_inputs(1000, 0.05, 0.0, 5);
  const SigmaSearchResult r = optimize_sigma(in, {}, 0.05);
  const double d = 0.025, dp = d / 3660.0;
  const double s2 = r.sigma2;
  const double expected = oracle::pew_budget(1000, 0.05, s2, dp) -
                          oracle::pew_budget(1000, 0.05, s2, d);
  EXPECT_NEAR(r.kl_budget_penalty, expected, 1e-12);
  EXPECT_GE(r.kl_budget_penalty, std::log(3660.0) / 1000.0);
}

TEST(Sigma, RejectsBadSpecs) {
  const CertificateInputs in = random_inputs(50, 0.1, 1.0, 6);
  SigmaSearchSpec spec;
  spec.sigma2_min = 10.0;
  spec.sigma2_max = 1.0;
  EXPECT_THROW(optimize_sigma(in, spec, 0.05), InvalidArgument);
  spec = {};
  spec.target = BoundKind::kLiu;
  EXPECT_THROW(optimize_sigma(in, spec, 0.05), InvalidArgument);
  spec = {};
  spec.tau = 0;
  EXPECT_THROW(optimize_sigma(in, spec, 0.05), InvalidArgument);
}

TEST(Sigma, ModelOverloadMatchesInputs) {
  const Dataset d = SyntheticSampler({}).draw_dataset(80, 7);
  const SvmModel m = train(d, KernelSpec(1.0), {FormulationStyle::kCStyle, 1.0});
  const CertificateInputs in = certificate_inputs(m, d);
  EXPECT_NEAR(in.weight_norm_sq, weight_norm_sq(m), 1e-12);
  EXPECT_EQ(in.lambda, m.lambda_ours());
  const SigmaSearchResult a = optimize_sigma(m, d, {}, 0.05);
  const SigmaSearchResult b = optimize_sigma(in, {}, 0.05);
  EXPECT_EQ(a.sigma2, b.sigma2);
  EXPECT_NEAR(a.emp_risk_randomized,
              average_risk(RandomizedClassifier(m, a.sigma2), d), 1e-12);
  const Dataset other = SyntheticSampler({}).draw_dataset(81, 7);
  EXPECT_THROW(certificate_inputs(m, other), InvalidArgument);
}

TEST(TestCorrection, Examples) {
  EXPECT_NEAR(test_confidence_correction(0.2, 154, 0.05), 0.29863, 1e-5);
  EXPECT_EQ(test_confidence_correction(0.2, 154, 1.0), 0.2);
  const double a = test_confidence_correction(0.0, 100, 0.1);
  const double b = test_confidence_correction(0.0, 400, 0.1);
  EXPECT_NEAR(b, a / 2.0, 1e-15);
  EXPECT_EQ(test_confidence_correction(0.99, 10, 0.01), 1.0);
  EXPECT_THROW(test_confidence_correction(0.1, 0, 0.05), InvalidArgument);
}

TEST(Grid, Exponents) {
  const std::vector<double> e = grid_exponents(-8.0, 2.0, 7);
  ASSERT_EQ(e.size(), 7u);
  for (int k = 0; k < 7; ++k) EXPECT_NEAR(e[k], -8.0 + k * 10.0 / 6.0, 1e-14);
  EXPECT_EQ(grid_exponents(-3, 3, 7)[3], 0.0);
  EXPECT_EQ(grid_exponents(1.5, 1.5, 1)[0], 1.5);
  EXPECT_THROW(grid_exponents(0, 1, 0), InvalidArgument);
}

GridResult small_grid(int jobs, std::uint64_t seed = 3) {
  const Dataset d = SyntheticSampler({}).draw_dataset(150, seed);
  GridSpec g;
  g.c_count = 3;
  g.sigma_count = 3;
  GridOptions opt;
  opt.jobs = jobs;
  SigmaSearchSpec spec;
  spec.tau = 20;
  return run_grid(d, {0.8, seed}, g, 0.05, spec, opt);
}

TEST(Grid, ShapeOrderingAndInvariants) {
  const GridResult r = small_grid(1);
  ASSERT_EQ(r.rows.size(), 9u);
  EXPECT_EQ(r.n_train, 120u);
  EXPECT_EQ(r.n_test, 30u);
  for (int ci = 0; ci < 3; ++ci) {
    for (int si = 0; si < 3; ++si) {
      const GridRow& row = r.at(ci, si);
      EXPECT_EQ(row.c_index, ci);
      EXPECT_EQ(row.sigma_index, si);
      EXPECT_DOUBLE_EQ(row.c, r.c0 * std::exp2(-8.0 + 5.0 * ci));
      EXPECT_DOUBLE_EQ(row.sigma_rbf, r.sigma0 * std::exp2(-3.0 + 3.0 * si));
      EXPECT_EQ(row.status, "ok");
      EXPECT_DOUBLE_EQ(row.lambda, 1.0 / (row.c * 120.0));
      EXPECT_GE(row.pew.report.risk_bound, row.rand_train_err_pew);
      EXPECT_GE(row.po.report.risk_bound, row.rand_train_err_po);
      EXPECT_EQ(static_cast<int>(row.pew.evaluations.size()), 20);
      EXPECT_NEAR(row.advantage, row.po.report.risk_bound - row.pew.report.risk_bound, 0);
      EXPECT_NEAR(row.pew_gap, row.pew.report.risk_bound - row.rand_test_err_pew, 0);
      EXPECT_GE(row.rand_test_err_pew_corrected, row.rand_test_err_pew);
    }
  }
  EXPECT_GE(r.c0, 1.0);
}

TEST(Grid, HingeBoundsVacuousWhereLambdaTermsExceedOne) {
  const GridResult r = small_grid(1, 4);
  for (const GridRow& row : r.rows) {
    const double n = static_cast<double>(r.n_train);
    const double liu_term = 8.0 / (row.lambda * n) * std::sqrt(2.0 * std::log(2.0 / 0.025));
    const double be_term = 4.0 / row.lambda * std::sqrt(std::log(1.0 / 0.05) / (2.0 * n));
    if (liu_term > 1.0) EXPECT_EQ(row.liu.risk_bound, 1.0);
    if (be_term > 1.0) EXPECT_EQ(row.be.risk_bound, 1.0);
  }
}

TEST(Grid, DeterministicAcrossRunsAndJobs) {
  const std::string a = grid_to_csv(small_grid(1));
  const std::string b = grid_to_csv(small_grid(1));
  const std::string c = grid_to_csv(small_grid(3));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
}

TEST(Grid, CellFailureIsRecorded) {
  const Dataset d = SyntheticSampler({}).draw_dataset(100, 5);
  GridSpec g;
  g.c_count = 2;
  g.c_exp_lo = 4.0;
  g.c_exp_hi = 6.0;
  g.sigma_count = 1;
  g.sigma_exp_lo = g.sigma_exp_hi = -3.0;
  GridOptions opt;
  opt.kkt_tol = 1e-14;
  opt.max_passes = 1;
  SigmaSearchSpec spec;
  spec.tau = 12;
  const GridResult r = run_grid(d, {0.8, 5}, g, 0.05, spec, opt);
  ASSERT_EQ(r.rows.size(), 2u);
  for (const GridRow& row : r.rows) {
    EXPECT_EQ(row.status, "smo_not_converged");
    EXPECT_TRUE(std::isnan(row.pew.report.risk_bound));
  }
  const std::string csv = grid_to_csv(r);
  EXPECT_NE(csv.find("smo_not_converged"), std::string::npos);
}

}  // namespace
}  // namespace pacbound
