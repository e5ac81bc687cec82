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

#ifndef PACBOUND_KERNEL_H_
#define PACBOUND_KERNEL_H_

#include <cstdint>
#include <span>

#include "pacbound/data.h"

namespace pacbound {

// Gaussian RBF kernel exp(-|x - y|^2 / (2 width^2)). Unit diagonal, so the
// feature map is bounded by B = 1.
class KernelSpec {
 public:
  explicit KernelSpec(double width);

  double width() const { return width_; }
  double eval(std::span<const double> x, std::span<const double> y) const;

 private:
  double width_;
  double inv_two_width_sq_;
};

// Full Gram matrix. Entry (i, j) is bit-identical to eval(row i, row j).
// `jobs` > 1 computes rows in parallel without changing the result.
Matrix gram(const KernelSpec& kernel, const Matrix& x, int jobs = 1);

// Kernel row k(x_i, x_j) for all j.
void kernel_row(const KernelSpec& kernel, const Matrix& x, std::size_t i,
                std::span<double> out);

struct MedianOptions {
  // Rows beyond this count are subsampled (seeded) before the O(n^2) pass.
  std::size_t max_rows = 20000;
  std::uint64_t seed = 0;
};

// Lower median of |x_i - x_j| over i < j.
double median_heuristic(const Matrix& x, const MedianOptions& options = {});

// 1 / (1 - mean(G)): reciprocal of the empirical feature-space variance.
double c0_heuristic(const KernelSpec& kernel, const Matrix& x);

}  // namespace pacbound

#endif  // PACBOUND_KERNEL_H_
