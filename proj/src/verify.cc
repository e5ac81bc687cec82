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

#include "pacbound/verify.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "pacbound/bounds.h"
#include "pacbound/error.h"
#include "pacbound/parallel.h"
#include "pacbound/svm.h"

namespace pacbound {
namespace {

std::mt19937_64 trial_rng(std::uint64_t seed, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(trial) >> 32)};
  return std::mt19937_64(seq);
}

// Order statistic at ceil(level * m) after sorting.
double empirical_quantile(std::vector<double> v, double level) {
  if (v.empty()) throw InvalidArgument("quantile of an empty sample");
  std::sort(v.begin(), v.end());
  const double pos = std::ceil(level * static_cast<double>(v.size()) - 1e-9);
  const std::size_t k = static_cast<std::size_t>(
      std::clamp(pos, 1.0, static_cast<double>(v.size())));
  return v[k - 1];
}

SvmModel fit(const Dataset& d, double lambda, const KernelSpec& kernel,
             double kkt_tol) {
  TrainOptions opt;
  opt.kkt_tol = kkt_tol;
  opt.cache = KernelCache::kFull;
  return train(d, kernel, {FormulationStyle::kOursLambda, lambda}, opt);
}

void check_probe(const StabilityProbe& probe, double lambda) {
  if (probe.n < 2) throw InvalidArgument("probe needs n >= 2");
  if (probe.trials < 1) throw InvalidArgument("probe needs at least one trial");
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
}

}  // namespace

SubstitutionDifference substitution_difference(
    const Matrix& x, std::span<const int> y, std::span<const double> alpha,
    std::span<const double> x_new_row, int y_new,
    std::span<const double> alpha_new, std::size_t index) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (y.size() != n || alpha.size() != n || alpha_new.size() != n) {
    throw InvalidArgument("substitution inputs differ in length");
  }
  if (index >= n) throw InvalidArgument("substitution index out of range");
  if (x_new_row.size() != static_cast<std::size_t>(x.cols())) {
    throw InvalidArgument("replacement row has wrong dimension");
  }
  SubstitutionDifference out;
  out.points.resize(x.rows() + 1, x.cols());
  out.points.topRows(x.rows()) = x;
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    out.points(x.rows(), k) = x_new_row[static_cast<std::size_t>(k)];
  }
  out.coef.resize(n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    out.coef[j] = (alpha[j] - alpha_new[j]) * y[j];
  }
  out.coef[index] = alpha[index] * y[index];
  out.coef[n] = -alpha_new[index] * y_new;
  return out;
}

BetaEstimate estimate_beta(const StabilityProbe& probe, double lambda,
                           const KernelSpec& kernel) {
  check_probe(probe, lambda);
  const SyntheticSampler sampler(probe.sampler);
  std::vector<double> worst(probe.trials, -1.0);
  parallel_for(probe.trials, probe.jobs, [&](std::size_t t) {
    std::mt19937_64 rng = trial_rng(probe.seed, t);
    const Dataset base = sampler.draw_dataset(probe.n, rng);
    try {
      const SvmModel m = fit(base, lambda, kernel, probe.kkt_tol);
      double w = 0.0;
      std::uniform_int_distribution<std::size_t> pick(0, probe.n - 1);
      std::vector<double> fresh(probe.sampler.dim);
      for (std::size_t r = 0; r < probe.replacements; ++r) {
        const std::size_t idx = pick(rng);
        const int y_new = sampler.draw(rng, fresh);
        Matrix x2 = base.features();
        std::vector<int> y2 = base.labels();
        for (std::size_t k = 0; k < fresh.size(); ++k) {
          x2(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(k)) = fresh[k];
        }
        y2[idx] = y_new;
        const SvmModel m2 =
            fit(Dataset(std::move(x2), std::move(y2)), lambda, kernel, probe.kkt_tol);
        const SubstitutionDifference d = substitution_difference(
            base.features(), base.labels(), m.alphas(), fresh, y_new,
            m2.alphas(), idx);
        const double sq = hilbert_norm_sq(
            d.points, d.coef,
            [&](auto a, auto b) { return kernel.eval(a, b); });
        w = std::max(w, std::sqrt(sq));
      }
      worst[t] = w;
    } catch (const ConvergenceError&) {
      worst[t] = -1.0;
    }
  });
  BetaEstimate out;
  out.bound = 2.0 / (lambda * static_cast<double>(probe.n));
  for (double w : worst) {
    if (w < 0.0) {
      ++out.skipped;
      continue;
    }
    ++out.trials_run;
    out.beta_hat = std::max(out.beta_hat, w);
  }
  out.pass = out.trials_run > 0 && out.beta_hat <= out.bound;
  return out;
}

ConcentrationCheck check_weight_concentration(const StabilityProbe& probe,
                                              double lambda, double delta,
                                              const KernelSpec& kernel) {
  check_probe(probe, lambda);
  if (probe.trials < kMinConcentrationTrials) {
    throw InvalidArgument("weight concentration needs at least " +
                          std::to_string(kMinConcentrationTrials) + " trials");
  }
  const SyntheticSampler sampler(probe.sampler);
  const std::size_t n = probe.n;
  const auto d = static_cast<Eigen::Index>(probe.sampler.dim);

  struct Trial {
    Matrix x;
    std::vector<double> coef;
    double norm_sq = 0.0;
    bool ok = false;
  };
  std::vector<Trial> trials(probe.trials);
  parallel_for(probe.trials, probe.jobs, [&](std::size_t t) {
    std::mt19937_64 rng = trial_rng(probe.seed, t);
    Dataset s = sampler.draw_dataset(n, rng);
    try {
      const SvmModel m = fit(s, lambda, kernel, probe.kkt_tol);
      Trial& tr = trials[t];
      tr.x = s.features();
      tr.coef.resize(n);
      for (std::size_t i = 0; i < n; ++i) tr.coef[i] = m.alphas()[i] * s.label(i);
      tr.norm_sq = hilbert_norm_sq(
          tr.x, tr.coef, [&](auto a, auto b) { return kernel.eval(a, b); });
      tr.ok = true;
    } catch (const ConvergenceError&) {
    }
  });

  ConcentrationCheck out;
  std::vector<const Trial*> kept;
  for (const Trial& t : trials) {
    if (t.ok) {
      kept.push_back(&t);
    } else {
      ++out.skipped;
    }
  }
  out.trials = kept.size();
  out.radius = concentration_radius(n, lambda, 1.0, delta);
  if (kept.size() < 2) return out;

  // Landmarks: every sampled point, weighted by alpha y / T.
  const auto total = static_cast<Eigen::Index>(kept.size() * n);
  Matrix pts(total, d);
  Eigen::VectorXd c(total);
  const double inv_t = 1.0 / static_cast<double>(kept.size());
  for (std::size_t t = 0; t < kept.size(); ++t) {
    const auto off = static_cast<Eigen::Index>(t * n);
    pts.middleRows(off, static_cast<Eigen::Index>(n)) = kept[t]->x;
    for (std::size_t i = 0; i < n; ++i) {
      c(off + static_cast<Eigen::Index>(i)) = kept[t]->coef[i] * inv_t;
    }
  }
  const Eigen::VectorXd sq = pts.rowwise().squaredNorm();
  // mean_at(p) = <mean W, phi(p)> for every landmark p.
  Eigen::VectorXd mean_at = Eigen::VectorXd::Zero(total);
  const double g = 1.0 / (2.0 * kernel.width() * kernel.width());
  constexpr Eigen::Index kTile = 256;
  const Eigen::Index tiles = (total + kTile - 1) / kTile;
  parallel_for(static_cast<std::size_t>(tiles), probe.jobs, [&](std::size_t b) {
    const Eigen::Index r0 = static_cast<Eigen::Index>(b) * kTile;
    const Eigen::Index rows = std::min(kTile, total - r0);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(rows);
    for (Eigen::Index c0 = 0; c0 < total; c0 += 4096) {
      const Eigen::Index cols = std::min<Eigen::Index>(4096, total - c0);
      Eigen::MatrixXd dist = -2.0 * pts.middleRows(r0, rows) *
                             pts.middleRows(c0, cols).transpose();
      dist.colwise() += sq.segment(r0, rows);
      dist.rowwise() += sq.segment(c0, cols).transpose();
      const Eigen::MatrixXd k = (-g * dist.array().max(0.0)).exp().matrix();
      acc.noalias() += k * c.segment(c0, cols);
    }
    mean_at.segment(r0, rows) = acc;
  });
  const double mean_norm_sq = c.dot(mean_at);

  std::vector<double> dev(kept.size());
  double sum_sq = 0.0;
  for (std::size_t t = 0; t < kept.size(); ++t) {
    const auto off = static_cast<Eigen::Index>(t * n);
    double cross = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cross += kept[t]->coef[i] * mean_at(off + static_cast<Eigen::Index>(i));
    }
    const double v = kept[t]->norm_sq - 2.0 * cross + mean_norm_sq;
    dev[t] = std::sqrt(std::max(v, 0.0));
    sum_sq += dev[t] * dev[t];
    out.mean_deviation += dev[t];
  }
  out.mean_deviation /= static_cast<double>(kept.size());
  out.mean_std_err = std::sqrt(sum_sq / static_cast<double>(kept.size()) /
                               static_cast<double>(kept.size() - 1));
  out.quantile = empirical_quantile(dev, 1.0 - delta);
  out.pass = out.quantile + out.mean_std_err <= out.radius;
  return out;
}

double testbed_difference_bound(const McDiarmidSpec& spec) {
  if (spec.n < 1) throw InvalidArgument("testbed needs n >= 1");
  return spec.map == TestbedMap::kConstant ? 0.0
                                           : 2.0 / static_cast<double>(spec.n);
}

double vector_mcdiarmid_bound(double sum_c_sq, double delta) {
  if (!(sum_c_sq >= 0.0)) throw InvalidArgument("sum of c^2 must be >= 0");
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw InvalidArgument("delta must lie in (0, 1]");
  }
  return std::sqrt(sum_c_sq) +
         std::sqrt(0.5 * sum_c_sq * std::log(1.0 / delta));
}

McDiarmidCheck check_vector_mcdiarmid(const McDiarmidSpec& spec, double delta,
                                      std::size_t trials) {
  if (spec.dim < 1) throw InvalidArgument("testbed needs dim >= 1");
  if (trials < 1) throw InvalidArgument("need at least one trial");
  if (!(spec.anchor_probability >= 0.0 && spec.anchor_probability <= 1.0)) {
    throw InvalidArgument("anchor_probability must lie in [0, 1]");
  }
  const double c = testbed_difference_bound(spec);
  const double sum_c_sq = static_cast<double>(spec.n) * c * c;
  McDiarmidCheck out;
  out.trials = trials;
  out.bound = vector_mcdiarmid_bound(sum_c_sq, delta);
  out.mean_bound = std::sqrt(sum_c_sq);

  std::vector<double> dev(trials, 0.0);
  if (spec.map == TestbedMap::kCoordinateMean) {
    for (std::size_t t = 0; t < trials; ++t) {
      std::mt19937_64 rng = trial_rng(spec.seed, t);
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      std::normal_distribution<double> normal(0.0, 1.0);
      Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec.dim));
      Eigen::VectorXd z(static_cast<Eigen::Index>(spec.dim));
      for (std::size_t i = 0; i < spec.n; ++i) {
        if (unif(rng) < spec.anchor_probability) {
          f(0) += 1.0;
          continue;
        }
        double norm = 0.0;
        do {
          for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = normal(rng);
          norm = z.norm();
        } while (norm == 0.0);
        f += z / norm;
      }
      f /= static_cast<double>(spec.n);
      // The sphere part has mean zero.
      f(0) -= spec.anchor_probability;
      dev[t] = f.norm();
    }
  }
  for (double v : dev) out.mean_deviation += v;
  out.mean_deviation /= static_cast<double>(trials);
  out.quantile = empirical_quantile(dev, 1.0 - delta);
  out.pass = out.quantile <= out.bound && out.mean_deviation <= out.mean_bound;
  return out;
}

}  // namespace pacbound
