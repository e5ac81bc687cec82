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

#ifndef PACBOUND_VERIFY_H_
#define PACBOUND_VERIFY_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pacbound/data.h"
#include "pacbound/kernel.h"
#include "pacbound/synthetic.h"

namespace pacbound {

// Generic report shared by every Monte Carlo check.
struct VerificationReport {
  std::string quantity;
  double measured = 0.0;
  double bound = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  bool pass = false;
};

// Trials of single-example substitutions on datasets drawn from `sampler`.
struct StabilityProbe {
  SyntheticSpec sampler;
  std::size_t n = 50;
  std::size_t replacements = 1;
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  double kkt_tol = 1e-7;
  int jobs = 1;
};

struct BetaEstimate {
  double beta_hat = 0.0;
  double bound = 0.0;
  std::size_t trials_run = 0;
  std::size_t skipped = 0;
  bool pass = false;
};

// Largest |W_n - W'_n|_H over trials, against 2 / (lambda n).
BetaEstimate estimate_beta(const StabilityProbe& probe, double lambda,
                           const KernelSpec& kernel);

struct ConcentrationCheck {
  // Empirical (1 - delta)-quantile of |W_n - mean W|.
  double quantile = 0.0;
  // Standard error of the trial mean as an estimate of E W_n.
  double mean_std_err = 0.0;
  double mean_deviation = 0.0;
  double radius = 0.0;
  std::size_t trials = 0;
  std::size_t skipped = 0;
  bool pass = false;
};

inline constexpr std::size_t kMinConcentrationTrials = 200;

// E W_n is replaced by the trial mean in the span of all sampled support
// points. The check passes when quantile + mean_std_err <= radius.
ConcentrationCheck check_weight_concentration(const StabilityProbe& probe,
                                              double lambda, double delta,
                                              const KernelSpec& kernel);

enum class TestbedMap {
  // z -> (1/n) sum phi(z_i) with |phi| = 1 in R^dim.
  kCoordinateMean,
  kConstant,
};

struct McDiarmidSpec {
  TestbedMap map = TestbedMap::kCoordinateMean;
  std::size_t n = 100;
  std::size_t dim = 16;
  // phi(z) = e_1 with this probability, else uniform on the unit sphere.
  double anchor_probability = 0.3;
  std::uint64_t seed = 0;
};

struct McDiarmidCheck {
  double quantile = 0.0;
  double bound = 0.0;
  double mean_deviation = 0.0;
  double mean_bound = 0.0;
  std::size_t trials = 0;
  bool pass = false;
};

// Difference bounds c_i for the testbed map.
double testbed_difference_bound(const McDiarmidSpec& spec);

// Deviation bound sqrt(sum c^2) + sqrt(sum c^2 / 2 log(1/delta)).
double vector_mcdiarmid_bound(double sum_c_sq, double delta);

McDiarmidCheck check_vector_mcdiarmid(const McDiarmidSpec& spec, double delta,
                                      std::size_t trials);

// |sum_i a_i phi(x_i)|^2 = a' K a in the RKHS of `kernel`.
template <typename KernelFn>
double hilbert_norm_sq(const Matrix& x, std::span<const double> a,
                       KernelFn&& kernel) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (a[i] == 0.0) continue;
    double inner = 0.5 * a[i] * kernel(row_span(x, i), row_span(x, i));
    for (Eigen::Index j = i + 1; j < x.rows(); ++j) {
      if (a[j] == 0.0) continue;
      inner += a[j] * kernel(row_span(x, i), row_span(x, j));
    }
    s += 2.0 * a[i] * inner;
  }
  return s > 0.0 ? s : 0.0;
}

// W - W' for two models trained on samples that differ only at `index`:
// the shared rows followed by the two differing rows, with signed
// coefficients alpha_i y_i - alpha'_i y'_i.
struct SubstitutionDifference {
  Matrix points;
  std::vector<double> coef;
};

SubstitutionDifference substitution_difference(
    const Matrix& x, std::span<const int> y, std::span<const double> alpha,
    std::span<const double> x_new_row, int y_new,
    std::span<const double> alpha_new, std::size_t index);

}  // namespace pacbound

#endif  // PACBOUND_VERIFY_H_
