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

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pacbound/error.h"
#include "pacbound/parallel.h"

namespace pacbound {

double gaussian_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double gaussian_sf(double x) { return gaussian_cdf(-x); }

RandomizedClassifier::RandomizedClassifier(const SvmModel& center,
                                           double noise_var)
    : center_(&center), noise_var_(noise_var), noise_sd_(std::sqrt(noise_var)) {
  if (!(noise_var > 0.0) || !std::isfinite(noise_var)) {
    throw InvalidArgument("noise variance must be positive and finite");
  }
}

namespace {

double feature_norm(const KernelSpec& kernel, std::span<const double> x) {
  const double kxx = kernel.eval(x, x);
  // Only normalised kernels are supported; flag anything else loudly.
  if (std::abs(kxx - 1.0) > 1e-12) {
    throw std::logic_error("kernel diagonal is not 1");
  }
  return std::sqrt(kxx);
}

}  // namespace

double average_risk(const RandomizedClassifier& q, const Dataset& data) {
  const SvmModel& m = q.center();
  double s = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = data.row(i);
    const double scale = q.noise_sd() * feature_norm(m.kernel(), x);
    s += gaussian_sf(data.label(i) * m.margin(x) / scale);
  }
  return s / static_cast<double>(data.size());
}

double average_risk_from_margins(std::span<const double> signed_margins,
                                 double noise_sd) {
  if (signed_margins.empty()) {
    throw EmptyDatasetError("average risk needs at least one example");
  }
  if (!(noise_sd > 0.0)) throw InvalidArgument("noise sd must be positive");
  double s = 0.0;
  for (double m : signed_margins) s += gaussian_sf(m / noise_sd);
  return s / static_cast<double>(signed_margins.size());
}

int sample_predict(const RandomizedClassifier& q, std::span<const double> x,
                   Rng& rng) {
  const SvmModel& m = q.center();
  std::normal_distribution<double> normal(0.0, 1.0);
  const double score =
      m.margin(x) + q.noise_sd() * feature_norm(m.kernel(), x) * normal(rng);
  return score > 0.0 ? 1 : -1;
}

int sample_predict(const RandomizedClassifier& q, std::span<const double> x,
                   std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  return sample_predict(q, x, rng);
}

MonteCarloRisk mc_average_risk(const RandomizedClassifier& q,
                               const Dataset& data, std::size_t draws,
                               std::uint64_t rng_seed, int jobs) {
  if (draws < 1) throw InvalidArgument("draws must be at least 1");
  const SvmModel& m = q.center();
  std::vector<std::size_t> errors(data.size(), 0);
  parallel_for(data.size(), jobs, [&](std::size_t i) {
    std::seed_seq seq{static_cast<std::uint32_t>(rng_seed),
                      static_cast<std::uint32_t>(rng_seed >> 32),
                      static_cast<std::uint32_t>(i),
                      static_cast<std::uint32_t>(i >> 32)};
    Rng rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto x = data.row(i);
    const double f = m.margin(x);
    const double scale = q.noise_sd() * feature_norm(m.kernel(), x);
    std::size_t wrong = 0;
    for (std::size_t d = 0; d < draws; ++d) {
      const int pred = f + scale * normal(rng) > 0.0 ? 1 : -1;
      if (pred != data.label(i)) ++wrong;
    }
    errors[i] = wrong;
  });
  std::size_t total = 0;
  for (std::size_t e : errors) total += e;
  const double trials = static_cast<double>(draws) * data.size();
  const double p = static_cast<double>(total) / trials;
  return {p, std::sqrt(p * (1.0 - p) / trials)};
}

}  // namespace pacbound
