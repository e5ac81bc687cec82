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

#include "cli.h"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <tuple>
#include <utility>

#include "CLI11.hpp"
#include "pacbound/bounds.h"
#include "pacbound/data.h"
#include "pacbound/error.h"
#include "pacbound/kernel.h"
#include "pacbound/rand_risk.h"
#include "pacbound/svm.h"
#include "pacbound/synthetic.h"
#include "pacbound/tuning.h"
#include "pacbound/verify.h"

namespace pacbound::cli {
namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

std::pair<double, double> parse_range(const std::string& s,
                                      const std::string& flag) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) {
    throw UsageError(flag + " expects LO:HI, got '" + s + "'");
  }
  try {
    std::size_t used = 0;
    const double lo = std::stod(s.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument(s);
    const std::string rest = s.substr(colon + 1);
    const double hi = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(s);
    if (!(lo <= hi)) throw UsageError(flag + " needs LO <= HI");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError(flag + " expects LO:HI, got '" + s + "'");
  }
}

std::pair<int, int> parse_grid(const std::string& s) {
  const auto x = s.find('x');
  int r = 0;
  int c = 0;
  if (x != std::string::npos) {
    const char* b = s.data();
    auto [p1, e1] = std::from_chars(b, b + x, r);
    auto [p2, e2] = std::from_chars(b + x + 1, b + s.size(), c);
    if (e1 == std::errc() && e2 == std::errc() && p1 == b + x &&
        p2 == b + s.size() && r >= 1 && c >= 1) {
      return {r, c};
    }
  }
  throw UsageError("--grid expects RxS with positive integers, got '" + s + "'");
}

std::uint64_t parse_seed(const char* s) {
  std::uint64_t v = 0;
  const char* end = s + std::char_traits<char>::length(s);
  auto [p, ec] = std::from_chars(s, end, v);
  if (ec != std::errc() || p != end || p == s) {
    throw UsageError(std::string("PACBOUND_SEED is not an unsigned integer: ") + s);
  }
  return v;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json envelope(const RunConfig& config) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["config"] = to_json(config);
  return j;
}

std::string out_path(const RunConfig& config, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) throw IoError(config.out_dir, "cannot create directory: " + ec.message());
  return (std::filesystem::path(config.out_dir) / name).string();
}

Dataset load(const RunConfig& config) {
  if (config.synthetic > 0) {
    if (!config.data_path.empty()) {
      throw UsageError("--data and --synthetic are mutually exclusive");
    }
    return SyntheticSampler(SyntheticSpec{})
        .draw_dataset(config.synthetic, config.seed);
  }
  if (config.data_path.empty()) throw UsageError("--data or --synthetic is required");
  LoadOptions opt;
  opt.format = parse_data_format(config.format);
  opt.header = config.header;
  return load_dataset(config.data_path, opt);
}

struct Prepared {
  Dataset train;
  Dataset test;
  Standardizer standardizer;
};

Prepared prepare(const RunConfig& config, const Dataset& data) {
  auto [train, test] = split(data, {config.train_fraction, config.seed});
  if (!config.standardize) return {std::move(train), std::move(test), {}};
  StandardizedPair s = standardize(train, test);
  return {std::move(s.train), std::move(s.test), std::move(s.standardizer)};
}

Json losses_json(const Losses& l) {
  return {{"err01", l.err01}, {"hinge", l.hinge}, {"clipped_hinge", l.clipped_hinge}};
}

int cmd_train(const RunConfig& config, std::ostream& out) {
  const Prepared p = prepare(config, load(config));
  const double width = config.sigma_rbf > 0.0
                           ? config.sigma_rbf
                           : median_heuristic(p.train.features(), {20000, config.seed});
  const KernelSpec kernel(width);
  const double c = config.c > 0.0 ? config.c : c0_heuristic(kernel, p.train.features());
  TrainOptions opt;
  opt.kkt_tol = config.kkt_tol;
  SvmModel model = train(p.train, kernel, {FormulationStyle::kCStyle, c}, opt);
  model.set_standardizer(p.standardizer);

  Json mj = model_to_json(model);
  mj["config"] = to_json(config);
  write_file(out_path(config, "model.json"), dump(mj));

  Json j = envelope(config);
  j["n_train"] = p.train.size();
  j["n_test"] = p.test.size();
  j["c"] = c;
  j["lambda"] = model.lambda_ours();
  j["sigma_rbf"] = width;
  j["support_count"] = model.support_count();
  j["kkt_residual"] = model.kkt_residual();
  j["iterations"] = model.iterations();
  j["dual_objective"] = model.dual_objective();
  j["weight_norm_sq"] = weight_norm_sq(model);
  j["train"] = losses_json(losses(model, p.train));
  j["test"] = losses_json(losses(model, p.test));
  write_file(out_path(config, "train.json"), dump(j));
  out << "train err01 " << j["train"]["err01"].get<double>() << ", test err01 "
      << j["test"]["err01"].get<double>() << "\n";
  return kExitOk;
}

int cmd_certify(const RunConfig& config, std::ostream& out) {
  if (config.model_path.empty()) throw UsageError("certify requires --model");
  const SvmModel model = model_from_json(Json::parse(read_file(config.model_path)));
  const Dataset data = load(config);
  auto [train, test] = split(data, {config.train_fraction, config.seed});
  if (!model.standardizer().empty()) {
    train = Dataset(model.standardizer().apply(train.features()), train.labels(),
                    train.name(), true);
    test = Dataset(model.standardizer().apply(test.features()), test.labels(),
                   test.name(), true);
  }
  if (train.size() != model.n_train()) {
    throw InvalidArgument("model was trained on " + std::to_string(model.n_train()) +
                          " rows but the split has " + std::to_string(train.size()));
  }
  const CertificateInputs in = certificate_inputs(model, train);
  const std::vector<double> test_margins = model.signed_margins(test);
  const Losses train_l = losses_from_margins(in.train_signed_margins);

  SigmaSearchSpec spec{config.sigma2_min, config.sigma2_max, config.tau, BoundKind::kPew};
  const SigmaSearchResult pew = optimize_sigma(in, spec, config.delta);
  spec.target = BoundKind::kPo;
  const SigmaSearchResult po = optimize_sigma(in, spec, config.delta);
  const BoundReport liu =
      bound_liu(in.n, in.lambda, per_bound_delta(BoundKind::kLiu, config.delta),
                train_l.clipped_hinge);
  const BoundReport be =
      bound_be(in.n, in.lambda, per_bound_delta(BoundKind::kBe, config.delta),
               train_l.clipped_hinge);

  Json j = envelope(config);
  j["model"] = config.model_path;
  j["n_train"] = in.n;
  j["n_test"] = test.size();
  j["lambda"] = in.lambda;
  j["weight_norm_sq"] = in.weight_norm_sq;
  j["train"] = losses_json(train_l);
  j["test"] = losses_json(losses_from_margins(test_margins));
  auto search = [&](const SigmaSearchResult& s) {
    Json r = to_json(s);
    const double test_risk = average_risk_from_margins(test_margins, std::sqrt(s.sigma2));
    r["rand_train_err"] = s.emp_risk_randomized;
    r["rand_test_err"] = test_risk;
    r["rand_test_err_corrected"] =
        test_confidence_correction(test_risk, test.size(), config.delta);
    return r;
  };
  j["pew"] = search(pew);
  j["po"] = search(po);
  j["liu"] = to_json(liu);
  j["be"] = to_json(be);
  write_file(out_path(config, "certify.json"), dump(j));
  out << "PEW " << pew.report.risk_bound << " PO " << po.report.risk_bound
      << " LIU " << liu.risk_bound << " BE " << be.risk_bound << "\n";
  return kExitOk;
}

int cmd_grid(const RunConfig& config, std::ostream& out) {
  const Dataset data = load(config);
  GridSpec grid{config.c_exp_lo, config.c_exp_hi, config.grid_c,
                config.sigma_exp_lo, config.sigma_exp_hi, config.grid_sigma};
  GridOptions opt;
  opt.standardize = config.standardize;
  opt.jobs = config.jobs;
  opt.kkt_tol = config.kkt_tol;
  const SigmaSearchSpec spec{config.sigma2_min, config.sigma2_max, config.tau,
                             BoundKind::kPew};
  const GridResult result =
      run_grid(data, {config.train_fraction, config.seed}, grid, config.delta, spec, opt);
  write_file(out_path(config, "grid.csv"),
             grid_to_csv(result, envelope(config).dump()));
  Json j = envelope(config);
  j["grid"] = grid_to_json(result);
  write_file(out_path(config, "grid.json"), dump(j));
  std::size_t failed = 0;
  for (const GridRow& r : result.rows) failed += r.status != "ok";
  out << result.rows.size() << " cells, " << failed << " failed\n";
  return kExitOk;
}

int cmd_verify(const RunConfig& config, std::ostream& out) {
  if (config.trials < kMinConcentrationTrials) {
    throw UsageError("verify needs --trials >= " +
                     std::to_string(kMinConcentrationTrials));
  }
  const KernelSpec kernel(config.verify_width);
  StabilityProbe probe;
  probe.trials = config.trials;
  probe.seed = config.seed;
  probe.jobs = config.jobs;

  probe.n = 50;
  const BetaEstimate beta = estimate_beta(probe, config.lambda, kernel);
  probe.n = 100;
  const ConcentrationCheck conc =
      check_weight_concentration(probe, config.lambda, config.delta, kernel);
  McDiarmidSpec ms;
  ms.seed = config.seed;
  const McDiarmidCheck mc = check_vector_mcdiarmid(ms, config.delta, config.trials);

  const VerificationReport reports[] = {
      {"stability_beta", beta.beta_hat, beta.bound, beta.trials_run, config.seed,
       beta.pass},
      {"weight_concentration_quantile", conc.quantile + conc.mean_std_err,
       conc.radius, conc.trials, config.seed, conc.pass},
      {"vector_mcdiarmid_quantile", mc.quantile, mc.bound, mc.trials, config.seed,
       mc.pass}};
  Json j = envelope(config);
  Json list = Json::array();
  bool ok = true;
  for (const VerificationReport& r : reports) {
    list.push_back(to_json(r));
    ok = ok && r.pass;
    out << (r.pass ? "PASS " : "FAIL ") << r.quantity << " " << r.measured
        << " <= " << r.bound << "\n";
  }
  j["reports"] = std::move(list);
  j["details"] = {
      {"beta", {{"n", 50}, {"skipped", beta.skipped}}},
      {"concentration",
       {{"n", 100},
        {"quantile", conc.quantile},
        {"mean_std_err", conc.mean_std_err},
        {"mean_deviation", conc.mean_deviation},
        {"skipped", conc.skipped}}},
      {"mcdiarmid",
       {{"n", ms.n},
        {"dim", ms.dim},
        {"mean_deviation", mc.mean_deviation},
        {"mean_bound", mc.mean_bound}}}};
  write_file(out_path(config, "verify.json"), dump(j));
  return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_invert_kl(const RunConfig& config, std::ostream& out) {
  Json j = envelope(config);
  j["p"] = config.kl_p;
  j["budget"] = config.kl_budget;
  j["q"] = kl_inverse_upper(config.kl_p, config.kl_budget);
  out << j.dump() << "\n";
  return kExitOk;
}

}  // namespace

Json to_json(const RunConfig& c) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["subcommand"] = c.subcommand;
  if (c.synthetic > 0) {
    j["data"] = {{"synthetic", c.synthetic}};
  } else {
    j["data"] = {{"path", c.data_path}, {"format", c.format}, {"header", c.header}};
  }
  j["seed"] = c.seed;
  j["seed_from_env"] = c.seed_from_env;
  j["train_fraction"] = c.train_fraction;
  j["standardize"] = c.standardize;
  j["delta"] = c.delta;
  j["tau"] = c.tau;
  j["sigma2_range"] = {c.sigma2_min, c.sigma2_max};
  j["grid"] = {{"c", c.grid_c}, {"sigma", c.grid_sigma}};
  j["c_range"] = {c.c_exp_lo, c.c_exp_hi};
  j["sigma_range"] = {c.sigma_exp_lo, c.sigma_exp_hi};
  j["out"] = c.out_dir;
  j["jobs"] = c.jobs;
  j["kkt_tol"] = c.kkt_tol;
  if (c.subcommand == "train") {
    j["c"] = c.c;
    j["sigma_rbf"] = c.sigma_rbf;
  } else if (c.subcommand == "certify") {
    j["model"] = c.model_path;
  } else if (c.subcommand == "verify") {
    j["trials"] = c.trials;
    j["lambda"] = c.lambda;
    j["kernel_width"] = c.verify_width;
  } else if (c.subcommand == "invert-kl") {
    j["p"] = c.kl_p;
    j["budget"] = c.kl_budget;
  }
  return j;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  RunConfig config;
  std::string grid = "7x7";
  std::string c_range = "-8:2";
  std::string sigma_range = "-3:3";
  std::string sigma2_range = "1e-4:1e4";
  bool no_standardize = false;

  CLI::App app{"Kernel SVM risk certificates", "pacbound"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--data", config.data_path, "Dataset file");
  app.add_option("--format", config.format, "csv or libsvm")
      ->check(CLI::IsMember({"csv", "libsvm"}));
  app.add_flag("--header", config.header, "CSV has a header line");
  app.add_option("--synthetic", config.synthetic,
                 "Use N points from the two-cluster generator instead of --data");
  app.add_option("--seed", config.seed, "Split and sampling seed");
  app.add_option("--train-fraction", config.train_fraction)
      ->check(CLI::Range(0.0, 1.0));
  app.add_flag("--no-standardize", no_standardize);
  app.add_option("--delta", config.delta, "Total failure probability")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--tau", config.tau, "sigma2 search evaluations")
      ->check(CLI::PositiveNumber);
  app.add_option("--sigma2-range", sigma2_range, "sigma2 search range LO:HI");
  app.add_option("--grid", grid, "Grid size RxS");
  app.add_option("--c-range", c_range, "log2 exponents of C / C0, LO:HI");
  app.add_option("--sigma-range", sigma_range,
                 "log2 exponents of sigma_rbf / sigma0, LO:HI");
  app.add_option("--out", config.out_dir, "Output directory");
  app.add_option("--jobs", config.jobs)->check(CLI::PositiveNumber);
  app.add_option("--kkt-tol", config.kkt_tol)->check(CLI::PositiveNumber);

  CLI::App* train_cmd = app.add_subcommand("train", "Train one SVM");
  train_cmd->add_option("--c", config.c, "C (default: C0 heuristic)");
  train_cmd->add_option("--sigma-rbf", config.sigma_rbf,
                        "Kernel width (default: median heuristic)");
  CLI::App* certify_cmd = app.add_subcommand("certify", "Bounds for a trained model");
  certify_cmd->add_option("--model", config.model_path, "model.json from train");
  app.add_subcommand("grid", "(C, sigma_rbf) grid experiment");
  CLI::App* verify_cmd = app.add_subcommand("verify", "Monte Carlo checks");
  verify_cmd->add_option("--trials", config.trials);
  verify_cmd->add_option("--lambda", config.lambda)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--kernel-width", config.verify_width)
      ->check(CLI::PositiveNumber);
  CLI::App* kl_cmd = app.add_subcommand("invert-kl", "Upper KL inverse");
  kl_cmd->add_option("--p", config.kl_p)->required();
  kl_cmd->add_option("--budget", config.kl_budget)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    config.subcommand = app.get_subcommands().front()->get_name();
    config.standardize = !no_standardize;
    if (const char* env = std::getenv("PACBOUND_SEED"); env && *env) {
      config.seed = parse_seed(env);
      config.seed_from_env = true;
    }
    std::tie(config.grid_c, config.grid_sigma) = parse_grid(grid);
    std::tie(config.c_exp_lo, config.c_exp_hi) = parse_range(c_range, "--c-range");
    std::tie(config.sigma_exp_lo, config.sigma_exp_hi) =
        parse_range(sigma_range, "--sigma-range");
    std::tie(config.sigma2_min, config.sigma2_max) =
        parse_range(sigma2_range, "--sigma2-range");
    if (config.grid_c > 1 && !(config.c_exp_lo < config.c_exp_hi)) {
      throw UsageError("--c-range needs LO < HI for more than one C value");
    }
    if (config.grid_sigma > 1 && !(config.sigma_exp_lo < config.sigma_exp_hi)) {
      throw UsageError("--sigma-range needs LO < HI for more than one width");
    }

    if (config.subcommand == "train") return cmd_train(config, out);
    if (config.subcommand == "certify") return cmd_certify(config, out);
    if (config.subcommand == "grid") return cmd_grid(config, out);
    if (config.subcommand == "verify") return cmd_verify(config, out);
    return cmd_invert_kl(config, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}

}  // namespace pacbound::cli
