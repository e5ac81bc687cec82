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

#include "pacbound/kernel.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "pacbound/error.h"
#include "pacbound/parallel.h"

namespace pacbound {

KernelSpec::KernelSpec(double width)
    : width_(width), inv_two_width_sq_(0.5 / (width * width)) {
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw InvalidArgument("RBF width must be positive and finite");
  }
}

double KernelSpec::eval(std::span<const double> x,
                        std::span<const double> y) const {
  if (x.size() != y.size()) {
    throw InvalidArgument("kernel arguments differ in dimension (" +
                          std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()) + ")");
  }
  double d2 = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double diff = x[k] - y[k];
    d2 += diff * diff;
  }
  return std::exp(-d2 * inv_two_width_sq_);
}

void kernel_row(const KernelSpec& kernel, const Matrix& x, std::size_t i,
                std::span<double> out) {
  const auto xi = row_span(x, static_cast<Eigen::Index>(i));
  for (Eigen::Index j = 0; j < x.rows(); ++j) {
    out[static_cast<std::size_t>(j)] = kernel.eval(xi, row_span(x, j));
  }
}

Matrix gram(const KernelSpec& kernel, const Matrix& x, int jobs) {
  const Eigen::Index n = x.rows();
  Matrix g(n, n);
  // (x - y)^2 == (y - x)^2 exactly, so mirroring keeps every entry equal to
  // eval(row i, row j).
  parallel_for(static_cast<std::size_t>(n), jobs, [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    const auto xi = row_span(x, i);
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = kernel.eval(xi, row_span(x, j));
      g(i, j) = v;
      g(j, i) = v;
    }
  });
  return g;
}

double median_heuristic(const Matrix& x, const MedianOptions& options) {
  if (x.rows() < 2) {
    throw InvalidArgument("median heuristic needs at least two rows");
  }
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(x.rows()));
  std::iota(rows.begin(), rows.end(), Eigen::Index{0});
  if (options.max_rows >= 2 && rows.size() > options.max_rows) {
    std::mt19937_64 rng(options.seed);
    for (std::size_t i = 0; i < options.max_rows; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, rows.size() - 1);
      std::swap(rows[i], rows[pick(rng)]);
    }
    rows.resize(options.max_rows);
    std::sort(rows.begin(), rows.end());
  }
  const std::size_t m = rows.size();
  std::vector<double> d2;
  d2.reserve(m * (m - 1) / 2);
  for (std::size_t a = 0; a < m; ++a) {
    const auto xa = row_span(x, rows[a]);
    for (std::size_t b = a + 1; b < m; ++b) {
      const auto xb = row_span(x, rows[b]);
      double s = 0.0;
      for (std::size_t k = 0; k < xa.size(); ++k) {
        const double diff = xa[k] - xb[k];
        s += diff * diff;
      }
      d2.push_back(s);
    }
  }
  // Lower median; sqrt is monotone so squared distances select the same pair.
  const auto mid = d2.begin() + static_cast<long>((d2.size() - 1) / 2);
  std::nth_element(d2.begin(), mid, d2.end());
  const double median = std::sqrt(*mid);
  if (!(median > 0.0)) {
    throw InvalidArgument(
        "median pairwise distance is zero; points are (mostly) identical");
  }
  return median;
}

double c0_heuristic(const KernelSpec& kernel, const Matrix& x) {
  const Eigen::Index n = x.rows();
  if (n < 2) throw InvalidArgument("C0 heuristic needs at least two rows");
  double off_diagonal = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto xi = row_span(x, i);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      off_diagonal += kernel.eval(xi, row_span(x, j));
    }
  }
  const double nn = static_cast<double>(n);
  double diagonal = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    diagonal += kernel.eval(row_span(x, i), row_span(x, i));
  }
  const double mean_g = (diagonal + 2.0 * off_diagonal) / (nn * nn);
  const double variance = diagonal / nn - mean_g;
  if (variance <= 1e-12) {
    throw InvalidArgument("feature-space variance is zero; points coincide");
  }
  return 1.0 / variance;
}

}  // namespace pacbound
