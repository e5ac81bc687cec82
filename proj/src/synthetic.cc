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

#include "pacbound/synthetic.h"

#include <utility>

#include "pacbound/error.h"

namespace pacbound {

SyntheticSampler::SyntheticSampler(SyntheticSpec spec) : spec_(spec) {
  if (spec_.dim < 1) throw InvalidArgument("synthetic dim must be >= 1");
  if (!(spec_.spread_pos > 0.0 && spec_.spread_neg > 0.0)) {
    throw InvalidArgument("cluster spreads must be positive");
  }
  if (!(spec_.positive_fraction >= 0.0 && spec_.positive_fraction <= 1.0)) {
    throw InvalidArgument("positive_fraction must lie in [0, 1]");
  }
  if (!(spec_.label_noise >= 0.0 && spec_.label_noise <= 0.5)) {
    throw InvalidArgument("label_noise must lie in [0, 0.5]");
  }
}

int SyntheticSampler::draw(std::mt19937_64& rng, std::span<double> x) const {
  if (x.size() != spec_.dim) throw InvalidArgument("output row has wrong size");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const bool positive = unif(rng) < spec_.positive_fraction;
  const double spread = positive ? spec_.spread_pos : spec_.spread_neg;
  for (double& v : x) v = spread * normal(rng);
  x[0] += (positive ? 0.5 : -0.5) * spec_.separation;
  int label = positive ? 1 : -1;
  if (spec_.label_noise > 0.0 && unif(rng) < spec_.label_noise) label = -label;
  return label;
}

Dataset SyntheticSampler::draw_dataset(std::size_t n,
                                       std::mt19937_64& rng) const {
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(spec_.dim));
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = draw(rng, std::span<double>(x.row(static_cast<Eigen::Index>(i)).data(),
                                       spec_.dim));
  }
  return Dataset(std::move(x), std::move(y), "synthetic", false);
}

Dataset SyntheticSampler::draw_dataset(std::size_t n,
                                       std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  return draw_dataset(n, rng);
}

}  // namespace pacbound
