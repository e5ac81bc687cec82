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

#include "pacbound/svm.h"

#include <algorithm>
#include <cmath>
#include <list>
#include <memory>
#include <string>
#include <unordered_map>

#include "pacbound/error.h"
#include "pacbound/parallel.h"

namespace pacbound {

SvmFormulation convert(const SvmFormulation& f, FormulationStyle target,
                       std::size_t n) {
  if (n == 0) throw InvalidArgument("sample size must be positive");
  if (!(f.value > 0.0) || !std::isfinite(f.value)) {
    throw InvalidArgument("formulation value must be positive and finite");
  }
  // Extended precision keeps the round trip within one ulp.
  const long double v = f.value;
  const long double nn = static_cast<long double>(n);
  long double lambda_ours = 0.0L;
  switch (f.style) {
    case FormulationStyle::kOursLambda: lambda_ours = v; break;
    case FormulationStyle::kBeLambda: lambda_ours = 2.0L * v; break;
    case FormulationStyle::kCStyle: lambda_ours = 1.0L / (nn * v); break;
  }
  if (target == f.style) return f;
  long double out = 0.0L;
  switch (target) {
    case FormulationStyle::kOursLambda: out = lambda_ours; break;
    case FormulationStyle::kBeLambda:
      out = f.style == FormulationStyle::kCStyle ? 1.0L / (2.0L * nn * v)
                                                 : lambda_ours / 2.0L;
      break;
    case FormulationStyle::kCStyle:
      out = f.style == FormulationStyle::kBeLambda ? 1.0L / (2.0L * nn * v)
                                                   : 1.0L / (nn * v);
      break;
  }
  return {target, static_cast<double>(out)};
}

double to_c(const SvmFormulation& f, std::size_t n) {
  return convert(f, FormulationStyle::kCStyle, n).value;
}

double to_lambda_ours(const SvmFormulation& f, std::size_t n) {
  return convert(f, FormulationStyle::kOursLambda, n).value;
}

SvmModel::SvmModel(Matrix support, std::vector<int> labels,
                   std::vector<double> alphas, KernelSpec kernel,
                   double lambda_ours, std::size_t n_train)
    : support_(std::move(support)),
      labels_(std::move(labels)),
      alphas_(std::move(alphas)),
      kernel_(kernel),
      lambda_ours_(lambda_ours),
      c_equiv_(to_c({FormulationStyle::kOursLambda, lambda_ours}, n_train)),
      n_train_(n_train) {
  if (static_cast<std::size_t>(support_.rows()) != labels_.size() ||
      labels_.size() != alphas_.size()) {
    throw InvalidArgument("support rows, labels and alphas differ in count");
  }
  for (std::size_t i = 0; i < alphas_.size(); ++i) {
    if (!(alphas_[i] >= 0.0 && alphas_[i] <= c_equiv_ * (1.0 + 1e-12))) {
      throw InvalidArgument("alpha " + std::to_string(i) +
                            " outside the box [0, C]");
    }
    if (labels_[i] != 1 && labels_[i] != -1) {
      throw LabelError("labels must be -1 or +1");
    }
  }
}

void SvmModel::set_diagnostics(double dual_objective, double kkt_residual,
                               std::size_t iterations) {
  dual_objective_ = dual_objective;
  kkt_residual_ = kkt_residual;
  iterations_ = iterations;
}

double SvmModel::margin(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(support_.cols())) {
    throw InvalidArgument("input dimension " + std::to_string(x.size()) +
                          " does not match model dimension " +
                          std::to_string(support_.cols()));
  }
  double f = 0.0;
  for (std::size_t i = 0; i < alphas_.size(); ++i) {
    if (alphas_[i] == 0.0) continue;
    f += alphas_[i] * labels_[i] *
         kernel_.eval(row_span(support_, static_cast<Eigen::Index>(i)), x);
  }
  return f;
}

std::vector<double> SvmModel::signed_margins(const Dataset& data,
                                             int jobs) const {
  std::vector<double> out(data.size());
  parallel_for(data.size(), jobs, [&](std::size_t i) {
    out[i] = data.label(i) * margin(data.row(i));
  });
  return out;
}

std::size_t SvmModel::support_count() const {
  return static_cast<std::size_t>(
      std::count_if(alphas_.begin(), alphas_.end(),
                    [](double a) { return a != 0.0; }));
}

SvmModel SvmModel::scaled(double factor) const {
  std::vector<double> a = alphas_;
  for (double& v : a) v *= factor;
  // lambda shrinks so the scaled alphas stay inside the box.
  SvmModel out(support_, labels_, std::move(a), kernel_,
               lambda_ours_ / std::max(factor, 1.0), n_train_);
  out.set_standardizer(standardizer_);
  return out;
}

double kkt_residual(std::span<const double> alphas,
                    std::span<const double> gradient, double c) {
  double worst = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double g = gradient[i];
    double v = 0.0;
    if (g > 0.0 && alphas[i] < c) v = g;
    if (g < 0.0 && alphas[i] > 0.0) v = -g;
    worst = std::max(worst, v);
  }
  return worst;
}

namespace {

// Kernel rows K(x_i, .), either from a full Gram matrix or computed on
// demand with a small LRU cache. Both paths produce identical values.
class KernelRows {
 public:
  KernelRows(const KernelSpec& kernel, const Matrix& x, bool full)
      : kernel_(kernel), x_(x), n_(static_cast<std::size_t>(x.rows())) {
    if (full) gram_ = gram(kernel, x);
  }

  std::span<const double> row(std::size_t i) {
    if (gram_.size() != 0) {
      return {gram_.data() + i * n_, n_};
    }
    auto it = index_.find(i);
    if (it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->values;
    }
    if (lru_.size() >= kCapacity) {
      index_.erase(lru_.back().index);
      lru_.pop_back();
    }
    lru_.push_front({i, std::vector<double>(n_)});
    kernel_row(kernel_, x_, i, lru_.front().values);
    index_[i] = lru_.begin();
    return lru_.front().values;
  }

 private:
  struct Entry {
    std::size_t index;
    std::vector<double> values;
  };
  static constexpr std::size_t kCapacity = 64;

  const KernelSpec& kernel_;
  const Matrix& x_;
  std::size_t n_;
  Matrix gram_;
  std::list<Entry> lru_;
  std::unordered_map<std::size_t, std::list<Entry>::iterator> index_;
};

struct PairMove {
  double ai;
  double aj;
  double gain;
};

double pair_gain(double gi, double gj, double qii, double qjj, double qij,
                 double di, double dj) {
  return gi * di + gj * dj -
         0.5 * (qii * di * di + 2.0 * qij * di * dj + qjj * dj * dj);
}

// Exact maximiser of the dual restricted to coordinates (i, j) over the box.
PairMove solve_pair(double alpha_i, double alpha_j, double gi, double gj,
                    double qii, double qjj, double qij, double c) {
  const double det = qii * qjj - qij * qij;
  if (det > 1e-12 * qii * qjj) {
    const double di = (qjj * gi - qij * gj) / det;
    const double dj = (qii * gj - qij * gi) / det;
    const double ai = alpha_i + di;
    const double aj = alpha_j + dj;
    if (ai >= 0.0 && ai <= c && aj >= 0.0 && aj <= c) {
      return {ai, aj, pair_gain(gi, gj, qii, qjj, qij, di, dj)};
    }
  }
  // Otherwise a maximiser lies on an edge of the box.
  PairMove best{alpha_i, alpha_j, 0.0};
  bool have = false;
  auto consider = [&](double ai, double aj) {
    const double gain =
        pair_gain(gi, gj, qii, qjj, qij, ai - alpha_i, aj - alpha_j);
    if (!have || gain > best.gain) {
      best = {ai, aj, gain};
      have = true;
    }
  };
  for (double ai : {0.0, c}) {
    const double di = ai - alpha_i;
    consider(ai, std::clamp(alpha_j + (gj - qij * di) / qjj, 0.0, c));
  }
  for (double aj : {0.0, c}) {
    const double dj = aj - alpha_j;
    consider(std::clamp(alpha_i + (gi - qij * dj) / qii, 0.0, c), aj);
  }
  return best;
}

}  // namespace

SvmModel train(const Dataset& data, const KernelSpec& kernel,
               const SvmFormulation& formulation,
               const TrainOptions& options) {
  const std::size_t n = data.size();
  const double lambda = to_lambda_ours(formulation, n);
  const double c = to_c(formulation, n);
  if (!(options.kkt_tol > 0.0)) {
    throw InvalidArgument("kkt_tol must be positive");
  }
  const bool full =
      options.cache == KernelCache::kFull ||
      (options.cache == KernelCache::kAuto && n <= options.full_cache_limit);
  KernelRows rows(kernel, data.features(), full);
  const std::vector<int>& y = data.labels();

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, 1.0);  // 1 - Q alpha
  double objective = 0.0;
  const std::size_t passes = options.max_passes ? options.max_passes : 10 * n;
  const std::size_t budget = passes * n;

  auto recompute_gradient = [&] {
    std::fill(grad.begin(), grad.end(), 1.0);
    for (std::size_t k = 0; k < n; ++k) {
      if (alpha[k] == 0.0) continue;
      const auto kr = rows.row(k);
      const double s = alpha[k] * y[k];
      for (std::size_t m = 0; m < n; ++m) grad[m] -= s * y[m] * kr[m];
    }
  };

  std::size_t iter = 0;
  bool converged = false;
  bool refreshed = false;
  while (iter < budget) {
    // Two largest violations, ties to the lowest index.
    std::size_t i = n, j = n;
    double vi = 0.0, vj = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double g = grad[k];
      double v = 0.0;
      if (g > 0.0 && alpha[k] < c) v = g;
      if (g < 0.0 && alpha[k] > 0.0) v = -g;
      if (v > vi) {
        j = i;
        vj = vi;
        i = k;
        vi = v;
      } else if (v > vj) {
        j = k;
        vj = v;
      }
    }
    if (vi <= options.kkt_tol) {
      // Confirm against an exact gradient before stopping.
      if (refreshed) {
        converged = true;
        break;
      }
      recompute_gradient();
      refreshed = true;
      continue;
    }
    refreshed = false;

    const auto ki = rows.row(i);
    const double qii = ki[i];
    double ai = alpha[i];
    double aj = 0.0;
    double gain = 0.0;
    bool pair = false;
    if (j < n && vj > options.kkt_tol) {
      const auto kj = rows.row(j);
      const double qij = y[i] * y[j] * ki[j];
      const PairMove mv =
          solve_pair(alpha[i], alpha[j], grad[i], grad[j], qii, kj[j], qij, c);
      if (mv.gain > 0.0) {
        ai = mv.ai;
        aj = mv.aj;
        gain = mv.gain;
        pair = true;
      }
    }
    if (!pair) {
      ai = std::clamp(alpha[i] + grad[i] / qii, 0.0, c);
      const double di = ai - alpha[i];
      gain = grad[i] * di - 0.5 * qii * di * di;
      if (!(gain > 0.0)) break;  // no representable progress
    }

    const double di = ai - alpha[i];
    alpha[i] = ai;
    {
      const double s = di * y[i];
      const auto kr = rows.row(i);
      for (std::size_t m = 0; m < n; ++m) grad[m] -= s * y[m] * kr[m];
    }
    if (pair) {
      const double dj = aj - alpha[j];
      alpha[j] = aj;
      const double s = dj * y[j];
      const auto kr = rows.row(j);
      for (std::size_t m = 0; m < n; ++m) grad[m] -= s * y[m] * kr[m];
    }
    objective += gain;
    ++iter;
    if (options.observer) {
      options.observer(SmoStep{iter, i, pair ? j : i, objective, c, alpha});
    }
  }

  recompute_gradient();
  const double residual = kkt_residual(alpha, grad, c);
  if (!converged && residual > options.kkt_tol) {
    throw ConvergenceError("SMO did not converge after " +
                               std::to_string(iter) +
                               " pair updates (KKT residual " +
                               std::to_string(residual) + ")",
                           alpha, residual);
  }
  double dual = 0.0;
  for (std::size_t k = 0; k < n; ++k) dual += 0.5 * alpha[k] * (1.0 + grad[k]);

  SvmModel model(data.features(), y, std::move(alpha), kernel, lambda, n);
  model.set_diagnostics(dual, residual, iter);
  return model;
}

double margin(const SvmModel& model, std::span<const double> x) {
  return model.margin(x);
}

double weight_norm_sq(const SvmModel& model) {
  const auto& a = model.alphas();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    s += a[i] * model.labels()[i] *
         model.margin(row_span(model.support(), static_cast<Eigen::Index>(i)));
  }
  return std::max(0.0, s);
}

Losses losses_from_margins(std::span<const double> signed_margins) {
  if (signed_margins.empty()) {
    throw EmptyDatasetError("losses need at least one example");
  }
  Losses l;
  for (double m : signed_margins) {
    if (m <= 0.0) l.err01 += 1.0;
    const double h = std::max(0.0, 1.0 - m);
    l.hinge += h;
    l.clipped_hinge += std::min(1.0, h);
  }
  const double n = static_cast<double>(signed_margins.size());
  l.err01 /= n;
  l.hinge /= n;
  l.clipped_hinge /= n;
  return l;
}

Losses losses(const SvmModel& model, const Dataset& data) {
  const std::vector<double> m = model.signed_margins(data);
  return losses_from_margins(m);
}

}  // namespace pacbound
