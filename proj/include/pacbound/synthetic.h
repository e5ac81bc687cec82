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

#ifndef PACBOUND_SYNTHETIC_H_
#define PACBOUND_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "pacbound/data.h"

namespace pacbound {

// Two spherical Gaussian clusters centred at +/- separation/2 along the first
// axis. The label is the cluster, flipped with probability label_noise.
struct SyntheticSpec {
  std::size_t dim = 4;
  double separation = 2.0;
  double spread_pos = 1.0;
  double spread_neg = 1.0;
  double positive_fraction = 0.5;
  double label_noise = 0.0;
};

class SyntheticSampler {
 public:
  explicit SyntheticSampler(SyntheticSpec spec);

  const SyntheticSpec& spec() const { return spec_; }

  // Writes one example into `x` (size dim) and returns its label.
  int draw(std::mt19937_64& rng, std::span<double> x) const;
  Dataset draw_dataset(std::size_t n, std::mt19937_64& rng) const;
  Dataset draw_dataset(std::size_t n, std::uint64_t seed) const;

 private:
  SyntheticSpec spec_;
};

}  // namespace pacbound

#endif  // PACBOUND_SYNTHETIC_H_
