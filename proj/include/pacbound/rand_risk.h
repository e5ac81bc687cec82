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

#ifndef PACBOUND_RAND_RISK_H_
#define PACBOUND_RAND_RISK_H_

#include <cstdint>
#include <random>
#include <span>

#include "pacbound/data.h"
#include "pacbound/svm.h"

namespace pacbound {

using Rng = std::mt19937_64;

// Standard normal CDF, via erfc.
double gaussian_cdf(double x);
// 1 - F(x), evaluated as F(-x).
double gaussian_sf(double x);

// Gibbs classifier Q = N(W_n, noise_var I) around a trained SVM. Holds a
// reference: the center must outlive it.
class RandomizedClassifier {
 public:
  RandomizedClassifier(const SvmModel& center, double noise_var);

  const SvmModel& center() const { return *center_; }
  double noise_var() const { return noise_var_; }
  double noise_sd() const { return noise_sd_; }

 private:
  const SvmModel* center_;
  double noise_var_;
  double noise_sd_;
};

// Closed-form average empirical risk: mean of F~(y f(x) / (sigma sqrt k(x,x))).
double average_risk(const RandomizedClassifier& q, const Dataset& data);

// Same expectation from precomputed signed margins y f(x); the kernel
// diagonal is 1.
double average_risk_from_margins(std::span<const double> signed_margins,
                                 double noise_sd);

// sign(f(x) + sigma sqrt(k(x,x)) xi) with a fresh xi ~ N(0, 1).
int sample_predict(const RandomizedClassifier& q, std::span<const double> x,
                   Rng& rng);
int sample_predict(const RandomizedClassifier& q, std::span<const double> x,
                   std::uint64_t rng_seed);

struct MonteCarloRisk {
  double estimate = 0.0;
  double std_err = 0.0;
};

// Each row gets its own stream seeded from (rng_seed, row), so the result
// does not depend on `jobs`.
MonteCarloRisk mc_average_risk(const RandomizedClassifier& q,
                               const Dataset& data, std::size_t draws,
                               std::uint64_t rng_seed, int jobs = 1);

}  // namespace pacbound

#endif  // PACBOUND_RAND_RISK_H_
