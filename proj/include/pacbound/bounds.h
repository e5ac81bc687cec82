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

#ifndef PACBOUND_BOUNDS_H_
#define PACBOUND_BOUNDS_H_

#include <cstddef>
#include <optional>
#include <string>

namespace pacbound {

enum class BoundKind { kPew, kPo, kLiu, kBe };

std::string to_string(BoundKind kind);

// Number of delta-sized failure events a bound spends: 2 for PEW and LIU,
// 1 for PO and BE.
int failure_events(BoundKind kind);

// Maps a user-facing total failure budget onto the per-bound delta so that
// every certificate holds with probability 1 - delta_total.
double per_bound_delta(BoundKind kind, double delta_total);

// Inputs echoed into every report. Fields that do not apply stay NaN / 0.
struct BoundInputs {
  std::size_t n = 0;
  double lambda = 0.0;
  double sigma2_noise = 0.0;
  double weight_norm_sq = 0.0;
  double emp_risk = 0.0;
  // Number of bound evaluations the delta was split over (0: none).
  int tau = 0;
  double delta_eval = 0.0;
};

struct BoundReport {
  BoundKind bound = BoundKind::kPew;
  double delta_nominal = 0.0;
  double confidence = 0.0;
  std::optional<double> kl_budget;
  // Before capping at 1; equals risk_bound for the KL-based bounds.
  double raw_bound = 0.0;
  double risk_bound = 0.0;
  BoundInputs inputs;

  bool vacuous() const { return risk_bound >= 1.0; }
};

// KL(q || q0) between Bernoulli distributions, with 0 log 0 = 0. Returns
// +infinity when q0 is 0 or 1 and q differs from it.
double kl_bernoulli(double q, double q0);

// Largest q in [p, 1] with KL(p || q) <= budget, by bisection to 1e-12.
double kl_inverse_upper(double p, double budget);

double pew_kl_budget(std::size_t n, double lambda, double sigma2,
                     double delta);
double po_kl_budget(std::size_t n, double sigma2, double delta,
                    double weight_norm_sq);

// Stability-based PAC-Bayes certificate with the prior centred at the
// expected weight. Holds w.p. 1 - 2 delta. With tau > 0 the formula is
// evaluated at delta / (tau (tau + 1)), which keeps the certificate valid
// after tau evaluations of a search over sigma2.
BoundReport bound_pew(std::size_t n, double lambda, double sigma2,
                      double delta, double emp_risk_randomized, int tau = 0);

// Prior at the origin. Holds w.p. 1 - delta, uniformly over sigma2.
BoundReport bound_po(std::size_t n, double sigma2, double delta,
                     double weight_norm_sq, double emp_risk_randomized);

// Hinge-loss stability bounds on the deterministic SVM.
BoundReport bound_liu(std::size_t n, double lambda, double delta,
                      double emp_clipped_hinge);
BoundReport bound_be(std::size_t n, double lambda, double delta,
                     double emp_clipped_hinge);

// With probability 1 - delta, |W_n - E W_n| is at most this radius.
double concentration_radius(std::size_t n, double lambda, double feature_bound,
                            double delta);

// KL(N(a, s2 I) || N(b, s2 I)) = |a - b|^2 / (2 s2).
double kl_gaussian_shift(double distance_sq, double sigma2);

}  // namespace pacbound

#endif  // PACBOUND_BOUNDS_H_
