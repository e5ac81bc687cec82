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

#include "pacbound/bounds.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pacbound/error.h"

namespace pacbound {
namespace {

void check_common(std::size_t n, double delta) {
  if (n == 0) throw InvalidArgument("sample size must be positive");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidArgument("delta must lie in (0, 1)");
  }
}

void check_positive(double v, const char* what) {
  if (!(v > 0.0)) throw InvalidArgument(std::string(what) + " must be positive");
}

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InvalidArgument(std::string(what) + " must lie in [0, 1]");
  }
}

// (1/n) log((n + 1) / delta): the part shared by both PAC-Bayes budgets.
double confidence_term(std::size_t n, double delta) {
  const double nn = static_cast<double>(n);
  return std::log((nn + 1.0) / delta) / nn;
}

double hoeffding_term(std::size_t n, double delta) {
  return std::sqrt(std::log(1.0 / delta) / (2.0 * static_cast<double>(n)));
}

}  // namespace

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::kPew: return "PEW";
    case BoundKind::kPo: return "PO";
    case BoundKind::kLiu: return "LIU";
    case BoundKind::kBe: return "BE";
  }
  return "?";
}

int failure_events(BoundKind kind) {
  return kind == BoundKind::kPew || kind == BoundKind::kLiu ? 2 : 1;
}

double per_bound_delta(BoundKind kind, double delta_total) {
  if (!(delta_total > 0.0 && delta_total < 1.0)) {
    throw InvalidArgument("delta must lie in (0, 1)");
  }
  return delta_total / failure_events(kind);
}

double kl_bernoulli(double q, double q0) {
  check_unit(q, "q");
  check_unit(q0, "q0");
  if (q0 == 0.0 || q0 == 1.0) {
    return q == q0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  double kl = 0.0;
  if (q > 0.0) kl += q * std::log(q / q0);
  if (q < 1.0) kl += (1.0 - q) * std::log((1.0 - q) / (1.0 - q0));
  return std::max(0.0, kl);
}

double kl_inverse_upper(double p, double budget) {
  check_unit(p, "p");
  if (!(budget >= 0.0)) throw InvalidArgument("budget must be nonnegative");
  if (budget == 0.0 || p == 1.0) return p;
  const double below_one = std::nextafter(1.0, 0.0);
  if (kl_bernoulli(p, below_one) <= budget) return 1.0;
  double lo = p;
  double hi = below_one;
  // Bisect to full resolution; far below the 1e-12 target in most cases.
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (kl_bernoulli(p, mid) <= budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double pew_kl_budget(std::size_t n, double lambda, double sigma2,
                     double delta) {
  check_common(n, delta);
  check_positive(lambda, "lambda");
  check_positive(sigma2, "sigma2");
  const double nn = static_cast<double>(n);
  const double conc = 1.0 + std::sqrt(0.5 * std::log(1.0 / delta));
  return 2.0 / (sigma2 * lambda * lambda * nn * nn) * conc * conc +
         confidence_term(n, delta);
}

double po_kl_budget(std::size_t n, double sigma2, double delta,
                    double weight_norm_sq) {
  check_common(n, delta);
  check_positive(sigma2, "sigma2");
  if (!(weight_norm_sq >= 0.0)) {
    throw InvalidArgument("weight norm must be nonnegative");
  }
  return weight_norm_sq / (2.0 * sigma2 * static_cast<double>(n)) +
         confidence_term(n, delta);
}

BoundReport bound_pew(std::size_t n, double lambda, double sigma2,
                      double delta, double emp_risk_randomized, int tau) {
  check_unit(emp_risk_randomized, "empirical risk");
  if (tau < 0) throw InvalidArgument("tau must be nonnegative");
  check_common(n, delta);
  const double t = static_cast<double>(tau);
  const double delta_eval = tau > 0 ? delta / (t * (t + 1.0)) : delta;
  BoundReport r;
  r.bound = BoundKind::kPew;
  r.delta_nominal = delta;
  r.confidence = 1.0 - 2.0 * delta;
  r.kl_budget = pew_kl_budget(n, lambda, sigma2, delta_eval);
  r.risk_bound = kl_inverse_upper(emp_risk_randomized, *r.kl_budget);
  r.raw_bound = r.risk_bound;
  r.inputs = {n, lambda, sigma2, 0.0, emp_risk_randomized, tau, delta_eval};
  return r;
}

BoundReport bound_po(std::size_t n, double sigma2, double delta,
                     double weight_norm_sq, double emp_risk_randomized) {
  check_unit(emp_risk_randomized, "empirical risk");
  BoundReport r;
  r.bound = BoundKind::kPo;
  r.delta_nominal = delta;
  r.confidence = 1.0 - delta;
  r.kl_budget = po_kl_budget(n, sigma2, delta, weight_norm_sq);
  r.risk_bound = kl_inverse_upper(emp_risk_randomized, *r.kl_budget);
  r.raw_bound = r.risk_bound;
  r.inputs = {n, 0.0, sigma2, weight_norm_sq, emp_risk_randomized, 0, delta};
  return r;
}

BoundReport bound_liu(std::size_t n, double lambda, double delta,
                      double emp_clipped_hinge) {
  check_common(n, delta);
  check_positive(lambda, "lambda");
  check_unit(emp_clipped_hinge, "clipped hinge risk");
  const double nn = static_cast<double>(n);
  BoundReport r;
  r.bound = BoundKind::kLiu;
  r.delta_nominal = delta;
  r.confidence = 1.0 - 2.0 * delta;
  r.raw_bound = emp_clipped_hinge +
                8.0 / (lambda * nn) * std::sqrt(2.0 * std::log(2.0 / delta)) +
                hoeffding_term(n, delta);
  r.risk_bound = std::min(1.0, r.raw_bound);
  r.inputs = {n, lambda, 0.0, 0.0, emp_clipped_hinge, 0, delta};
  return r;
}

BoundReport bound_be(std::size_t n, double lambda, double delta,
                     double emp_clipped_hinge) {
  check_common(n, delta);
  check_positive(lambda, "lambda");
  check_unit(emp_clipped_hinge, "clipped hinge risk");
  const double nn = static_cast<double>(n);
  BoundReport r;
  r.bound = BoundKind::kBe;
  r.delta_nominal = delta;
  r.confidence = 1.0 - delta;
  r.raw_bound = emp_clipped_hinge + 2.0 / (lambda * nn) +
                (1.0 + 4.0 / lambda) * hoeffding_term(n, delta);
  r.risk_bound = std::min(1.0, r.raw_bound);
  r.inputs = {n, lambda, 0.0, 0.0, emp_clipped_hinge, 0, delta};
  return r;
}

double concentration_radius(std::size_t n, double lambda, double feature_bound,
                            double delta) {
  if (n == 0) throw InvalidArgument("sample size must be positive");
  check_positive(lambda, "lambda");
  check_positive(feature_bound, "feature bound");
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw InvalidArgument("delta must lie in (0, 1]");
  }
  return 2.0 * feature_bound / (lambda * std::sqrt(static_cast<double>(n))) *
         (1.0 + std::sqrt(0.5 * std::log(1.0 / delta)));
}

double kl_gaussian_shift(double distance_sq, double sigma2) {
  if (!(distance_sq >= 0.0)) {
    throw InvalidArgument("squared distance must be nonnegative");
  }
  check_positive(sigma2, "sigma2");
  return distance_sq / (2.0 * sigma2);
}

}  // namespace pacbound
