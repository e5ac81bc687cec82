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

// Reference implementations used only by the tests. They are deliberately
// naive and share no code with the library.

#ifndef PACBOUND_TESTS_ORACLES_H_
#define PACBOUND_TESTS_ORACLES_H_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

// Dual objective 1'a - 1/2 a'Qa.
inline double dual(const Eigen::MatrixXd& q, const Eigen::VectorXd& a) {
  return a.sum() - 0.5 * a.dot(q * a);
}

// Projected gradient ascent on the box [0, c]^n with step 1 / lambda_max.
inline Eigen::VectorXd box_qp(const Eigen::MatrixXd& q, double c,
                              long iterations = 1000000) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
  const double step = 1.0 / es.eigenvalues().maxCoeff();
  Eigen::VectorXd a = Eigen::VectorXd::Zero(q.rows());
  for (long it = 0; it < iterations; ++it) {
    Eigen::VectorXd next =
        (a + step * (Eigen::VectorXd::Ones(q.rows()) - q * a)).cwiseMax(0.0).cwiseMin(c);
    if ((next - a).lpNorm<Eigen::Infinity>() == 0.0) break;
    a = next;
  }
  return a;
}

inline double rbf(const std::vector<double>& x, const std::vector<double>& y,
                  double width) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
  return std::exp(-s / (2.0 * width * width));
}

// Composite Simpson rule for the standard normal density on [0, |x|].
inline double normal_cdf(double x, int intervals = 20000) {
  const double b = std::abs(x);
  const double h = b / intervals;
  auto phi = [](double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI); };
  double s = phi(0.0) + phi(b);
  for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * phi(i * h);
  const double half = s * h / 3.0;
  return x >= 0 ? 0.5 + half : 0.5 - half;
}

inline long double kl(long double q, long double p) {
  long double s = 0.0L;
  if (q > 0) s += q * std::log(q / p);
  if (q < 1) s += (1 - q) * std::log((1 - q) / (1 - p));
  return s;
}

// Upper inverse by a fixed number of long-double bisection steps.
inline double kl_upper(double p, double budget) {
  long double lo = p, hi = 1.0L;
  for (int i = 0; i < 400; ++i) {
    const long double mid = 0.5L * (lo + hi);
    if (kl(p, mid) <= budget) lo = mid; else hi = mid;
  }
  return static_cast<double>(lo);
}

inline double pew_budget(double n, double lambda, double sigma2, double delta) {
  const long double t = 1.0L + std::sqrt(0.5L * std::log(1.0L / delta));
  return static_cast<double>(2.0L / (sigma2 * lambda * lambda * n * n) * t * t +
                             std::log((n + 1.0L) / delta) / n);
}

inline double po_budget(double n, double w2, double sigma2, double delta) {
  return static_cast<double>(w2 / (2.0L * sigma2 * n) +
                             std::log((n + 1.0L) / delta) / n);
}

inline double liu(double n, double lambda, double delta, double r) {
  return std::min(1.0, r + 8.0 / (lambda * n) * std::sqrt(2.0 * std::log(2.0 / delta)) +
                           std::sqrt(std::log(1.0 / delta) / (2.0 * n)));
}

inline double be(double n, double lambda, double delta, double r) {
  return std::min(1.0, r + 2.0 / (lambda * n) +
                           (1.0 + 4.0 / lambda) * std::sqrt(std::log(1.0 / delta) / (2.0 * n)));
}

}  // namespace oracle

#endif  // PACBOUND_TESTS_ORACLES_H_
