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

#ifndef PACBOUND_TUNING_H_
#define PACBOUND_TUNING_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pacbound/bounds.h"
#include "pacbound/data.h"
#include "pacbound/svm.h"

namespace pacbound {

struct SigmaSearchSpec {
  double sigma2_min = 1e-4;
  double sigma2_max = 1e4;
  // Number of bound evaluations, fixed before the search starts.
  int tau = 60;
  BoundKind target = BoundKind::kPew;
};

struct SigmaEvaluation {
  double sigma2;
  double risk_bound;
};

struct SigmaSearchResult {
  double sigma2 = 0.0;
  BoundReport report;
  // Inverted bound at the adjusted delta minus the inverted bound at the
  // unadjusted delta, both at sigma2. Zero for PO.
  double union_penalty = 0.0;
  // The same difference before inversion, in KL units.
  double kl_budget_penalty = 0.0;
  double emp_risk_randomized = 0.0;
  bool flat = false;
  bool budget_exhausted = false;
  std::vector<SigmaEvaluation> evaluations;
};

// Everything the sigma2 search needs from a trained model.
struct CertificateInputs {
  std::size_t n = 0;
  double lambda = 0.0;
  double weight_norm_sq = 0.0;
  std::vector<double> train_signed_margins;
};

CertificateInputs certificate_inputs(const SvmModel& model,
                                     const Dataset& train);

// Log-scale 9-point scan followed by golden-section refinement around the
// best scanned point, minimising the inverted risk bound. PEW spends exactly
// tau evaluations at delta / (tau (tau + 1)); PO holds uniformly in sigma2
// and keeps delta unadjusted.
SigmaSearchResult optimize_sigma(const CertificateInputs& inputs,
                                 const SigmaSearchSpec& spec,
                                 double delta_total);
SigmaSearchResult optimize_sigma(const SvmModel& model, const Dataset& train,
                                 const SigmaSearchSpec& spec,
                                 double delta_total);

// Hoeffding correction for a test error measured on n_test points, capped
// at 1.
double test_confidence_correction(double test_risk, std::size_t n_test,
                                  double delta);

struct GridSpec {
  double c_exp_lo = -8.0;
  double c_exp_hi = 2.0;
  int c_count = 7;
  double sigma_exp_lo = -3.0;
  double sigma_exp_hi = 3.0;
  int sigma_count = 7;
};

// count geometric exponents spanning [lo, hi].
std::vector<double> grid_exponents(double lo, double hi, int count);

struct GridOptions {
  bool standardize = true;
  int jobs = 1;
  double kkt_tol = 1e-3;
  std::size_t max_passes = 0;
};

struct GridRow {
  int c_index = 0;
  int sigma_index = 0;
  double c = 0.0;
  double sigma_rbf = 0.0;
  double lambda = 0.0;
  std::string status = "ok";

  Losses train_losses;
  double test_err01 = 0.0;
  double weight_norm_sq = 0.0;
  double kkt_residual = 0.0;
  std::size_t iterations = 0;
  std::size_t support_count = 0;

  SigmaSearchResult pew;
  SigmaSearchResult po;
  BoundReport liu;
  BoundReport be;

  double rand_train_err_pew = 0.0;
  double rand_train_err_po = 0.0;
  double rand_test_err_pew = 0.0;
  double rand_test_err_po = 0.0;
  double rand_test_err_pew_corrected = 0.0;
  double rand_test_err_po_corrected = 0.0;
  // bound - randomized test error.
  double pew_gap = 0.0;
  double po_gap = 0.0;
  // PO bound - PEW bound; positive where PEW is tighter.
  double advantage = 0.0;
};

struct GridResult {
  double c0 = 0.0;
  double sigma0 = 0.0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  double delta_total = 0.0;
  std::vector<double> c_values;
  std::vector<double> sigma_values;
  // Ordered by (c_index, sigma_index).
  std::vector<GridRow> rows;

  const GridRow& at(int c_index, int sigma_index) const;
};

GridResult run_grid(const Dataset& data, const SplitSpec& split,
                    const GridSpec& grid, double delta_total,
                    const SigmaSearchSpec& sigma_spec,
                    const GridOptions& options = {});

}  // namespace pacbound

#endif  // PACBOUND_TUNING_H_
