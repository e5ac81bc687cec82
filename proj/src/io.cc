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

#include "pacbound/io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pacbound/error.h"

namespace pacbound {
namespace {

BoundKind kind_from_string(const std::string& s) {
  for (BoundKind k : {BoundKind::kPew, BoundKind::kPo, BoundKind::kLiu,
                      BoundKind::kBe}) {
    if (to_string(k) == s) return k;
  }
  throw InvalidArgument("unknown bound kind: " + s);
}

double number(const Json& j) {
  return j.is_null() ? std::nan("") : j.get<double>();
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

Json to_json(const BoundReport& r) {
  Json j;
  j["bound"] = to_string(r.bound);
  j["delta_nominal"] = r.delta_nominal;
  j["confidence"] = r.confidence;
  j["kl_budget"] = r.kl_budget ? Json(*r.kl_budget) : Json(nullptr);
  j["raw_bound"] = r.raw_bound;
  j["risk_bound"] = r.risk_bound;
  j["vacuous"] = r.vacuous();
  Json in;
  in["n"] = r.inputs.n;
  in["lambda"] = r.inputs.lambda;
  in["sigma2_noise"] = r.inputs.sigma2_noise;
  in["weight_norm_sq"] = r.inputs.weight_norm_sq;
  in["emp_risk"] = r.inputs.emp_risk;
  in["tau"] = r.inputs.tau;
  in["delta_eval"] = r.inputs.delta_eval;
  j["inputs"] = std::move(in);
  return j;
}

BoundReport bound_report_from_json(const Json& j) {
  try {
    BoundReport r;
    r.bound = kind_from_string(j.at("bound").get<std::string>());
    r.delta_nominal = number(j.at("delta_nominal"));
    r.confidence = number(j.at("confidence"));
    if (!j.at("kl_budget").is_null()) r.kl_budget = j["kl_budget"].get<double>();
    r.raw_bound = number(j.at("raw_bound"));
    r.risk_bound = number(j.at("risk_bound"));
    const Json& in = j.at("inputs");
    r.inputs.n = in.at("n").get<std::size_t>();
    r.inputs.lambda = number(in.at("lambda"));
    r.inputs.sigma2_noise = number(in.at("sigma2_noise"));
    r.inputs.weight_norm_sq = number(in.at("weight_norm_sq"));
    r.inputs.emp_risk = number(in.at("emp_risk"));
    r.inputs.tau = in.at("tau").get<int>();
    r.inputs.delta_eval = number(in.at("delta_eval"));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed bound report: ") + e.what());
  }
}

Json to_json(const SigmaSearchResult& s) {
  Json j;
  j["sigma2"] = s.sigma2;
  j["report"] = to_json(s.report);
  j["union_penalty"] = s.union_penalty;
  j["kl_budget_penalty"] = s.kl_budget_penalty;
  j["emp_risk_randomized"] = s.emp_risk_randomized;
  j["flat"] = s.flat;
  j["budget_exhausted"] = s.budget_exhausted;
  j["evaluations"] = s.evaluations.size();
  return j;
}

Json model_to_json(const SvmModel& m) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["kernel"] = {{"type", "rbf"}, {"width", m.kernel().width()}};
  j["lambda"] = m.lambda_ours();
  j["c"] = m.c_equiv();
  j["n_train"] = m.n_train();
  j["dim"] = m.support().cols();
  j["dual_objective"] = m.dual_objective();
  j["kkt_residual"] = m.kkt_residual();
  j["iterations"] = m.iterations();
  Json sv = Json::array();
  for (std::size_t i = 0; i < m.alphas().size(); ++i) {
    if (m.alphas()[i] == 0.0) continue;
    const auto row = row_span(m.support(), static_cast<Eigen::Index>(i));
    sv.push_back({{"alpha", m.alphas()[i]},
                  {"label", m.labels()[i]},
                  {"x", std::vector<double>(row.begin(), row.end())}});
  }
  j["support"] = std::move(sv);
  if (!m.standardizer().empty()) {
    j["standardizer"] = {{"mean", m.standardizer().mean},
                         {"inv_scale", m.standardizer().inv_scale}};
  } else {
    j["standardizer"] = nullptr;
  }
  return j;
}

SvmModel model_from_json(const Json& j) {
  try {
    if (j.at("format_version").get<int>() != kFormatVersion) {
      throw InvalidArgument("unsupported model format_version");
    }
    const auto dim = j.at("dim").get<Eigen::Index>();
    const Json& sv = j.at("support");
    Matrix x(static_cast<Eigen::Index>(sv.size()), dim);
    std::vector<int> y;
    std::vector<double> a;
    for (std::size_t i = 0; i < sv.size(); ++i) {
      const auto row = sv[i].at("x").get<std::vector<double>>();
      if (static_cast<Eigen::Index>(row.size()) != dim) {
        throw InvalidArgument("support row has wrong dimension");
      }
      for (Eigen::Index k = 0; k < dim; ++k) {
        x(static_cast<Eigen::Index>(i), k) = row[static_cast<std::size_t>(k)];
      }
      y.push_back(sv[i].at("label").get<int>());
      a.push_back(sv[i].at("alpha").get<double>());
    }
    SvmModel m(std::move(x), std::move(y), std::move(a),
               KernelSpec(j.at("kernel").at("width").get<double>()),
               j.at("lambda").get<double>(), j.at("n_train").get<std::size_t>());
    m.set_diagnostics(number(j.at("dual_objective")),
                      number(j.at("kkt_residual")),
                      j.at("iterations").get<std::size_t>());
    if (!j.at("standardizer").is_null()) {
      Standardizer s;
      s.mean = j["standardizer"].at("mean").get<std::vector<double>>();
      s.inv_scale = j["standardizer"].at("inv_scale").get<std::vector<double>>();
      m.set_standardizer(std::move(s));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed model file: ") + e.what());
  }
}

Json to_json(const VerificationReport& r) {
  Json j;
  j["quantity"] = r.quantity;
  j["measured"] = r.measured;
  j["bound"] = r.bound;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["pass"] = r.pass;
  return j;
}

std::string grid_to_csv(const GridResult& result, const std::string& preamble) {
  std::ostringstream out;
  if (!preamble.empty()) out << "# " << preamble << '\n';
  out << kGridCsvHeader << '\n';
  for (const GridRow& r : result.rows) {
    const double cells[] = {r.c,
                            r.sigma_rbf,
                            r.lambda,
                            r.train_losses.err01,
                            r.test_err01,
                            r.train_losses.hinge,
                            r.train_losses.clipped_hinge,
                            r.pew.report.risk_bound,
                            r.pew.sigma2,
                            r.pew_gap,
                            r.po.report.risk_bound,
                            r.po.sigma2,
                            r.po_gap,
                            r.liu.risk_bound,
                            r.be.risk_bound,
                            r.rand_test_err_pew,
                            r.rand_test_err_po,
                            r.pew.union_penalty};
    for (double v : cells) out << fmt(v) << ',';
    out << r.status << '\n';
  }
  return out.str();
}

Json grid_to_json(const GridResult& result) {
  Json j;
  j["c0"] = result.c0;
  j["sigma0"] = result.sigma0;
  j["n_train"] = result.n_train;
  j["n_test"] = result.n_test;
  j["delta_total"] = result.delta_total;
  j["c_values"] = result.c_values;
  j["sigma_values"] = result.sigma_values;
  Json rows = Json::array();
  for (const GridRow& r : result.rows) {
    Json row;
    row["c_index"] = r.c_index;
    row["sigma_index"] = r.sigma_index;
    row["c"] = r.c;
    row["sigma_rbf"] = r.sigma_rbf;
    row["lambda"] = r.lambda;
    row["status"] = r.status;
    row["train_err01"] = r.train_losses.err01;
    row["hinge"] = r.train_losses.hinge;
    row["clipped_hinge"] = r.train_losses.clipped_hinge;
    row["test_err01"] = r.test_err01;
    row["weight_norm_sq"] = r.weight_norm_sq;
    row["kkt_residual"] = r.kkt_residual;
    row["iterations"] = r.iterations;
    row["support_count"] = r.support_count;
    if (r.status == "ok") {
      row["pew"] = to_json(r.pew);
      row["po"] = to_json(r.po);
      row["liu"] = to_json(r.liu);
      row["be"] = to_json(r.be);
    }
    row["rand_train_err_pew"] = r.rand_train_err_pew;
    row["rand_train_err_po"] = r.rand_train_err_po;
    row["rand_test_err_pew"] = r.rand_test_err_pew;
    row["rand_test_err_po"] = r.rand_test_err_po;
    row["rand_test_err_pew_corrected"] = r.rand_test_err_pew_corrected;
    row["rand_test_err_po_corrected"] = r.rand_test_err_po_corrected;
    row["pew_gap"] = r.pew_gap;
    row["po_gap"] = r.po_gap;
    row["advantage"] = r.advantage;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError(path, "read failed");
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out << content;
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

}  // namespace pacbound
