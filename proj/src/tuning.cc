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

#include "pacbound/tuning.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pacbound/error.h"
#include "pacbound/kernel.h"
#include "pacbound/parallel.h"
#include "pacbound/rand_risk.h"

namespace pacbound {
namespace {

constexpr int kScanPoints = 9;
constexpr double kGolden = 0.6180339887498949;

BoundReport evaluate(const CertificateInputs& in, BoundKind target,
                     double sigma2, double delta, int tau,
                     double* emp_risk = nullptr) {
  const double emp =
      average_risk_from_margins(in.train_signed_margins, std::sqrt(sigma2));
  if (emp_risk) *emp_risk = emp;
  if (target == BoundKind::kPew) {
    return bound_pew(in.n, in.lambda, sigma2, delta, emp, tau);
  }
  return bound_po(in.n, sigma2, delta, in.weight_norm_sq, emp);
}

}  // namespace

CertificateInputs certificate_inputs(const SvmModel& model,
                                     const Dataset& train) {
  if (train.size() != model.n_train()) {
    throw InvalidArgument("training set size does not match the model");
  }
  CertificateInputs in;
  in.n = model.n_train();
  in.lambda = model.lambda_ours();
  in.train_signed_margins = model.signed_margins(train);
  double w = 0.0;
  for (std::size_t i = 0; i < model.alphas().size(); ++i) {
    w += model.alphas()[i] * model.labels()[i] *
         model.margin(row_span(model.support(), static_cast<Eigen::Index>(i)));
  }
  in.weight_norm_sq = std::max(0.0, w);
  return in;
}

SigmaSearchResult optimize_sigma(const CertificateInputs& in,
                                 const SigmaSearchSpec& spec,
                                 double delta_total) {
  if (spec.target != BoundKind::kPew && spec.target != BoundKind::kPo) {
    throw InvalidArgument("sigma2 search applies to PEW and PO only");
  }
  if (!(spec.sigma2_min > 0.0 && spec.sigma2_min < spec.sigma2_max)) {
    throw InvalidArgument("sigma2 range must satisfy 0 < min < max");
  }
  if (spec.tau < 1) throw InvalidArgument("tau must be at least 1");
  const double delta = per_bound_delta(spec.target, delta_total);
  // PO is uniform in sigma2, so only PEW pays for the search.
  const int tau = spec.target == BoundKind::kPew ? spec.tau : 0;

  SigmaSearchResult out;
  auto eval_log = [&](double log_s2) {
    const double s2 = std::exp(log_s2);
    const double v = evaluate(in, spec.target, s2, delta, tau).risk_bound;
    out.evaluations.push_back({s2, v});
    return v;
  };

  const double lo = std::log(spec.sigma2_min);
  const double hi = std::log(spec.sigma2_max);
  const int scan = spec.tau < kScanPoints + 2 ? spec.tau : kScanPoints;
  std::vector<double> grid(static_cast<std::size_t>(scan));
  for (int k = 0; k < scan; ++k) {
    grid[k] = scan == 1 ? hi : lo + (hi - lo) * k / (scan - 1);
  }
  int best_k = 0;
  double best_v = std::numeric_limits<double>::infinity();
  for (int k = 0; k < scan; ++k) {
    // Exact endpoints rather than exp(log(x)).
    const double s2 = k == 0 && scan > 1 ? spec.sigma2_min
                      : k == scan - 1   ? spec.sigma2_max
                                        : std::exp(grid[k]);
    const double v = evaluate(in, spec.target, s2, delta, tau).risk_bound;
    out.evaluations.push_back({s2, v});
    if (v < best_v) {
      best_v = v;
      best_k = k;
    }
  }

  if (spec.tau - scan >= 2) {
    double a = grid[std::max(best_k - 1, 0)];
    double b = grid[std::min(best_k + 1, scan - 1)];
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = eval_log(x1);
    double f2 = eval_log(x2);
    while (static_cast<int>(out.evaluations.size()) < spec.tau) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kGolden * (b - a);
        f1 = eval_log(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kGolden * (b - a);
        f2 = eval_log(x2);
      }
    }
  } else {
    out.budget_exhausted = true;
  }

  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -vmin;
  std::size_t arg = 0;
  for (std::size_t k = 0; k < out.evaluations.size(); ++k) {
    const double v = out.evaluations[k].risk_bound;
    if (v < vmin) {
      vmin = v;
      arg = k;
    }
    vmax = std::max(vmax, v);
  }
  out.flat = vmax - vmin <= 1e-15 * std::max(1.0, std::abs(vmin));
  out.sigma2 = out.flat ? spec.sigma2_max : out.evaluations[arg].sigma2;
  out.report = evaluate(in, spec.target, out.sigma2, delta, tau,
                        &out.emp_risk_randomized);
  if (spec.target == BoundKind::kPew) {
    const BoundReport plain = bound_pew(in.n, in.lambda, out.sigma2, delta,
                                        out.emp_risk_randomized, 0);
    out.union_penalty = out.report.risk_bound - plain.risk_bound;
    out.kl_budget_penalty = *out.report.kl_budget - *plain.kl_budget;
  }
  return out;
}

SigmaSearchResult optimize_sigma(const SvmModel& model, const Dataset& train,
                                 const SigmaSearchSpec& spec,
                                 double delta_total) {
  return optimize_sigma(certificate_inputs(model, train), spec, delta_total);
}

double test_confidence_correction(double test_risk, std::size_t n_test,
                                  double delta) {
  if (n_test < 1) throw InvalidArgument("n_test must be at least 1");
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw InvalidArgument("delta must lie in (0, 1]");
  }
  return std::min(1.0, test_risk + std::sqrt(std::log(1.0 / delta) /
                                             (2.0 * static_cast<double>(n_test))));
}

std::vector<double> grid_exponents(double lo, double hi, int count) {
  if (count < 1) throw InvalidArgument("grid needs at least one point");
  std::vector<double> e(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    e[k] = count == 1 ? lo : lo + (hi - lo) * k / (count - 1);
  }
  return e;
}

const GridRow& GridResult::at(int c_index, int sigma_index) const {
  return rows.at(static_cast<std::size_t>(c_index) * sigma_values.size() +
                 static_cast<std::size_t>(sigma_index));
}

namespace {

void fill_failed(GridRow& row) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  row.train_losses = {nan, nan, nan};
  row.test_err01 = row.weight_norm_sq = row.kkt_residual = nan;
  row.pew.sigma2 = row.po.sigma2 = nan;
  row.pew.report.risk_bound = row.po.report.risk_bound = nan;
  row.liu.risk_bound = row.be.risk_bound = nan;
  row.pew.union_penalty = nan;
  row.rand_train_err_pew = row.rand_train_err_po = nan;
  row.rand_test_err_pew = row.rand_test_err_po = nan;
  row.rand_test_err_pew_corrected = row.rand_test_err_po_corrected = nan;
  row.pew_gap = row.po_gap = row.advantage = nan;
}

void run_cell(GridRow& row, const Dataset& train, const Dataset& test,
              double delta_total, const SigmaSearchSpec& sigma_spec,
              const GridOptions& options) {
  const KernelSpec kernel(row.sigma_rbf);
  const SvmFormulation form{FormulationStyle::kCStyle, row.c};
  row.lambda = to_lambda_ours(form, train.size());
  TrainOptions topt;
  topt.kkt_tol = options.kkt_tol;
  topt.max_passes = options.max_passes;
  const SvmModel model = pacbound::train(train, kernel, form, topt);
  row.kkt_residual = model.kkt_residual();
  row.iterations = model.iterations();
  row.support_count = model.support_count();

  CertificateInputs in = certificate_inputs(model, train);
  row.weight_norm_sq = in.weight_norm_sq;
  row.train_losses = losses_from_margins(in.train_signed_margins);
  const std::vector<double> test_margins = model.signed_margins(test);
  row.test_err01 = losses_from_margins(test_margins).err01;

  SigmaSearchSpec spec = sigma_spec;
  spec.target = BoundKind::kPew;
  row.pew = optimize_sigma(in, spec, delta_total);
  spec.target = BoundKind::kPo;
  row.po = optimize_sigma(in, spec, delta_total);
  row.liu = bound_liu(in.n, row.lambda,
                      per_bound_delta(BoundKind::kLiu, delta_total),
                      row.train_losses.clipped_hinge);
  row.be = bound_be(in.n, row.lambda,
                    per_bound_delta(BoundKind::kBe, delta_total),
                    row.train_losses.clipped_hinge);

  row.rand_train_err_pew = row.pew.emp_risk_randomized;
  row.rand_train_err_po = row.po.emp_risk_randomized;
  row.rand_test_err_pew =
      average_risk_from_margins(test_margins, std::sqrt(row.pew.sigma2));
  row.rand_test_err_po =
      average_risk_from_margins(test_margins, std::sqrt(row.po.sigma2));
  row.rand_test_err_pew_corrected =
      test_confidence_correction(row.rand_test_err_pew, test.size(), delta_total);
  row.rand_test_err_po_corrected =
      test_confidence_correction(row.rand_test_err_po, test.size(), delta_total);
  row.pew_gap = row.pew.report.risk_bound - row.rand_test_err_pew;
  row.po_gap = row.po.report.risk_bound - row.rand_test_err_po;
  row.advantage = row.po.report.risk_bound - row.pew.report.risk_bound;
}

}  // namespace

GridResult run_grid(const Dataset& data, const SplitSpec& split_spec,
                    const GridSpec& grid, double delta_total,
                    const SigmaSearchSpec& sigma_spec,
                    const GridOptions& options) {
  auto [raw_train, raw_test] = split(data, split_spec);
  Dataset train = raw_train;
  Dataset test = raw_test;
  if (options.standardize) {
    StandardizedPair s = standardize(raw_train, raw_test);
    train = std::move(s.train);
    test = std::move(s.test);
  }

  GridResult result;
  result.n_train = train.size();
  result.n_test = test.size();
  result.delta_total = delta_total;
  result.sigma0 = median_heuristic(train.features(), {20000, split_spec.seed});
  result.c0 = c0_heuristic(KernelSpec(result.sigma0), train.features());
  for (double e : grid_exponents(grid.c_exp_lo, grid.c_exp_hi, grid.c_count)) {
    result.c_values.push_back(result.c0 * std::exp2(e));
  }
  for (double e : grid_exponents(grid.sigma_exp_lo, grid.sigma_exp_hi,
                                 grid.sigma_count)) {
    result.sigma_values.push_back(result.sigma0 * std::exp2(e));
  }

  const std::size_t ns = result.sigma_values.size();
  result.rows.resize(result.c_values.size() * ns);
  parallel_for(result.rows.size(), options.jobs, [&](std::size_t k) {
    GridRow& row = result.rows[k];
    row.c_index = static_cast<int>(k / ns);
    row.sigma_index = static_cast<int>(k % ns);
    row.c = result.c_values[k / ns];
    row.sigma_rbf = result.sigma_values[k % ns];
    row.lambda = to_lambda_ours({FormulationStyle::kCStyle, row.c}, train.size());
    try {
      run_cell(row, train, test, delta_total, sigma_spec, options);
    } catch (const ConvergenceError&) {
      row.status = "smo_not_converged";
      fill_failed(row);
    } catch (const Error&) {
      row.status = "error";
      fill_failed(row);
    }
  });
  return result;
}

}  // namespace pacbound
