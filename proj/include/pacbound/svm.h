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

#ifndef PACBOUND_SVM_H_
#define PACBOUND_SVM_H_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pacbound/data.h"
#include "pacbound/kernel.h"

namespace pacbound {

// The three equivalent ways of writing the soft-margin objective:
//   kCStyle:     1/2 |w|^2 + C sum xi_i
//   kOursLambda: lambda/2 |w|^2 + 1/n sum xi_i      (C = 1 / (n lambda))
//   kBeLambda:   lambda |w|^2 + 1/n sum xi_i        (C = 1 / (2 n lambda))
enum class FormulationStyle { kCStyle, kOursLambda, kBeLambda };

struct SvmFormulation {
  FormulationStyle style = FormulationStyle::kOursLambda;
  double value = 1.0;
};

SvmFormulation convert(const SvmFormulation& f, FormulationStyle target,
                       std::size_t n);
double to_c(const SvmFormulation& f, std::size_t n);
double to_lambda_ours(const SvmFormulation& f, std::size_t n);

enum class KernelCache { kAuto, kFull, kOnDemand };

// One SMO pair update, reported after the box clip.
struct SmoStep {
  std::size_t iteration;
  std::size_t first;
  std::size_t second;  // == first for a single-coordinate step
  double objective;
  double c;
  std::span<const double> alphas;
};

struct TrainOptions {
  double kkt_tol = 1e-3;
  // Budget of pair updates is max_passes * n; 0 selects 10 * n passes.
  std::size_t max_passes = 0;
  KernelCache cache = KernelCache::kAuto;
  // Full Gram caching under kAuto up to this many rows.
  std::size_t full_cache_limit = 8192;
  std::function<void(const SmoStep&)> observer;
};

// Offset-free kernel SVM: f(x) = sum_i alpha_i y_i k(x_i, x).
class SvmModel {
 public:
  SvmModel(Matrix support, std::vector<int> labels, std::vector<double> alphas,
           KernelSpec kernel, double lambda_ours, std::size_t n_train);

  const Matrix& support() const { return support_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<double>& alphas() const { return alphas_; }
  const KernelSpec& kernel() const { return kernel_; }
  double lambda_ours() const { return lambda_ours_; }
  double c_equiv() const { return c_equiv_; }
  std::size_t n_train() const { return n_train_; }

  double dual_objective() const { return dual_objective_; }
  double kkt_residual() const { return kkt_residual_; }
  std::size_t iterations() const { return iterations_; }
  void set_diagnostics(double dual_objective, double kkt_residual,
                       std::size_t iterations);

  // Standardization fitted on the training split, if any.
  const Standardizer& standardizer() const { return standardizer_; }
  void set_standardizer(Standardizer s) { standardizer_ = std::move(s); }

  double margin(std::span<const double> x) const;
  // y_i * f(x_i) for every row of `data`.
  std::vector<double> signed_margins(const Dataset& data, int jobs = 1) const;
  std::size_t support_count() const;

  // Copy with every alpha multiplied by `factor`.
  SvmModel scaled(double factor) const;

 private:
  Matrix support_;
  std::vector<int> labels_;
  std::vector<double> alphas_;
  KernelSpec kernel_;
  double lambda_ours_;
  double c_equiv_;
  std::size_t n_train_;
  double dual_objective_ = 0.0;
  double kkt_residual_ = 0.0;
  std::size_t iterations_ = 0;
  Standardizer standardizer_;
};

// Maximises sum(alpha) - 1/2 alpha' Q alpha over the box [0, C]^n with
// Q_ij = y_i y_j k(x_i, x_j). There is no equality constraint because the
// model has no offset. Throws ConvergenceError if the pair budget runs out.
SvmModel train(const Dataset& data, const KernelSpec& kernel,
               const SvmFormulation& formulation,
               const TrainOptions& options = {});

// Largest KKT violation of `alphas` given the dual gradient 1 - Q alpha.
double kkt_residual(std::span<const double> alphas,
                    std::span<const double> gradient, double c);

double margin(const SvmModel& model, std::span<const double> x);
double weight_norm_sq(const SvmModel& model);

struct Losses {
  double err01 = 0.0;
  double hinge = 0.0;
  double clipped_hinge = 0.0;
};

// A signed margin of exactly zero counts as a classification error.
Losses losses_from_margins(std::span<const double> signed_margins);
Losses losses(const SvmModel& model, const Dataset& data);

}  // namespace pacbound

#endif  // PACBOUND_SVM_H_
