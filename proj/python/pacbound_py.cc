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

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pacbound/bounds.h"
#include "pacbound/data.h"
#include "pacbound/error.h"
#include "pacbound/io.h"
#include "pacbound/kernel.h"
#include "pacbound/rand_risk.h"
#include "pacbound/svm.h"
#include "pacbound/synthetic.h"
#include "pacbound/tuning.h"
#include "pacbound/verify.h"

namespace py = pybind11;
using namespace pacbound;

namespace {

Dataset make_dataset(Matrix x, std::vector<int> y) {
  return Dataset(std::move(x), std::move(y));
}

py::dict report_dict(const BoundReport& r) {
  return py::module_::import("json").attr("loads")(to_json(r).dump());
}

py::dict search_dict(const SigmaSearchResult& s) {
  py::dict d = py::module_::import("json").attr("loads")(to_json(s).dump());
  d["union_penalty"] = s.union_penalty;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Kernel SVM risk certificates";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init(&make_dataset), py::arg("features"), py::arg("labels"))
      .def_property_readonly("features", &Dataset::features)
      .def_property_readonly("labels", &Dataset::labels)
      .def_property_readonly("standardized", &Dataset::standardized)
      .def("__len__", &Dataset::size)
      .def_property_readonly("dim", &Dataset::dim);

  m.def(
      "parse_dataset",
      [](const std::string& text, const std::string& format, bool header) {
        return parse_dataset(text, {parse_data_format(format), header});
      },
      py::arg("text"), py::arg("format") = "csv", py::arg("header") = false);
  m.def(
      "load_dataset",
      [](const std::string& path, const std::string& format, bool header) {
        return load_dataset(path, {parse_data_format(format), header});
      },
      py::arg("path"), py::arg("format") = "csv", py::arg("header") = false);
  m.def(
      "split",
      [](const Dataset& d, double fraction, std::uint64_t seed) {
        return split(d, {fraction, seed});
      },
      py::arg("data"), py::arg("train_fraction") = 0.8, py::arg("seed") = 0);
  m.def(
      "standardize",
      [](const Dataset& train, const Dataset& test) {
        StandardizedPair p = standardize(train, test);
        return std::make_pair(std::move(p.train), std::move(p.test));
      },
      py::arg("train"), py::arg("test"));
  m.def(
      "synthetic",
      [](std::size_t n, std::uint64_t seed, std::size_t dim, double separation) {
        SyntheticSpec s;
        s.dim = dim;
        s.separation = separation;
        return SyntheticSampler(s).draw_dataset(n, seed);
      },
      py::arg("n"), py::arg("seed") = 0, py::arg("dim") = 4,
      py::arg("separation") = 2.0);

  py::class_<KernelSpec>(m, "KernelSpec")
      .def(py::init<double>(), py::arg("width"))
      .def_property_readonly("width", &KernelSpec::width)
      .def("__call__", [](const KernelSpec& k, std::vector<double> a,
                          std::vector<double> b) { return k.eval(a, b); });
  m.def("gram", &gram, py::arg("kernel"), py::arg("x"), py::arg("jobs") = 1);
  m.def(
      "median_heuristic",
      [](const Matrix& x, std::uint64_t seed) {
        return median_heuristic(x, {20000, seed});
      },
      py::arg("x"), py::arg("seed") = 0);
  m.def("c0_heuristic", &c0_heuristic, py::arg("kernel"), py::arg("x"));

  py::class_<SvmModel>(m, "SvmModel")
      .def_property_readonly("alphas", &SvmModel::alphas)
      .def_property_readonly("lambda_ours", &SvmModel::lambda_ours)
      .def_property_readonly("c", &SvmModel::c_equiv)
      .def_property_readonly("n_train", &SvmModel::n_train)
      .def_property_readonly("dual_objective", &SvmModel::dual_objective)
      .def_property_readonly("kkt_residual", &SvmModel::kkt_residual)
      .def_property_readonly("support_count", &SvmModel::support_count)
      .def("margin", [](const SvmModel& s, std::vector<double> x) { return s.margin(x); })
      .def("signed_margins", &SvmModel::signed_margins, py::arg("data"),
           py::arg("jobs") = 1)
      .def("weight_norm_sq", [](const SvmModel& s) { return weight_norm_sq(s); })
      .def("to_json", [](const SvmModel& s) { return model_to_json(s).dump(); });
  m.def(
      "train",
      [](const Dataset& d, double width, double c, double lambda_ours,
         double kkt_tol) {
        if ((c > 0.0) == (lambda_ours > 0.0)) {
          throw InvalidArgument("give exactly one of c and lambda_ours");
        }
        const SvmFormulation f = c > 0.0
                                     ? SvmFormulation{FormulationStyle::kCStyle, c}
                                     : SvmFormulation{FormulationStyle::kOursLambda,
                                                      lambda_ours};
        TrainOptions opt;
        opt.kkt_tol = kkt_tol;
        return train(d, KernelSpec(width), f, opt);
      },
      py::arg("data"), py::arg("width"), py::arg("c") = 0.0,
      py::arg("lambda_ours") = 0.0, py::arg("kkt_tol") = 1e-3);
  m.def(
      "losses",
      [](const SvmModel& s, const Dataset& d) {
        const Losses l = losses(s, d);
        return py::dict(py::arg("err01") = l.err01, py::arg("hinge") = l.hinge,
                        py::arg("clipped_hinge") = l.clipped_hinge);
      },
      py::arg("model"), py::arg("data"));

  m.def("gaussian_cdf", &gaussian_cdf);
  m.def(
      "average_risk",
      [](const SvmModel& s, const Dataset& d, double noise_var) {
        return average_risk(RandomizedClassifier(s, noise_var), d);
      },
      py::arg("model"), py::arg("data"), py::arg("noise_var"));
  m.def(
      "mc_average_risk",
      [](const SvmModel& s, const Dataset& d, double noise_var, std::size_t draws,
         std::uint64_t seed) {
        const MonteCarloRisk r =
            mc_average_risk(RandomizedClassifier(s, noise_var), d, draws, seed);
        return std::make_pair(r.estimate, r.std_err);
      },
      py::arg("model"), py::arg("data"), py::arg("noise_var"),
      py::arg("draws") = 10000, py::arg("seed") = 0);

  m.def("kl_bernoulli", &kl_bernoulli, py::arg("q"), py::arg("q0"));
  m.def("kl_inverse_upper", &kl_inverse_upper, py::arg("p"), py::arg("budget"));
  m.def(
      "bound_pew",
      [](std::size_t n, double lambda, double sigma2, double delta, double emp,
         int tau) { return report_dict(bound_pew(n, lambda, sigma2, delta, emp, tau)); },
      py::arg("n"), py::arg("lam"), py::arg("sigma2"), py::arg("delta"),
      py::arg("emp_risk"), py::arg("tau") = 0);
  m.def(
      "bound_po",
      [](std::size_t n, double sigma2, double delta, double w, double emp) {
        return report_dict(bound_po(n, sigma2, delta, w, emp));
      },
      py::arg("n"), py::arg("sigma2"), py::arg("delta"), py::arg("weight_norm_sq"),
      py::arg("emp_risk"));
  m.def(
      "bound_liu",
      [](std::size_t n, double lambda, double delta, double r) {
        return report_dict(bound_liu(n, lambda, delta, r));
      },
      py::arg("n"), py::arg("lam"), py::arg("delta"), py::arg("emp_clipped_hinge"));
  m.def(
      "bound_be",
      [](std::size_t n, double lambda, double delta, double r) {
        return report_dict(bound_be(n, lambda, delta, r));
      },
      py::arg("n"), py::arg("lam"), py::arg("delta"), py::arg("emp_clipped_hinge"));
  m.def("concentration_radius", &concentration_radius, py::arg("n"), py::arg("lam"),
        py::arg("feature_bound"), py::arg("delta"));
  m.def("test_confidence_correction", &test_confidence_correction,
        py::arg("test_risk"), py::arg("n_test"), py::arg("delta"));

  m.def(
      "optimize_sigma",
      [](const SvmModel& s, const Dataset& train_data, const std::string& target,
         double delta_total, int tau) {
        SigmaSearchSpec spec;
        spec.tau = tau;
        if (target == "PEW") {
          spec.target = BoundKind::kPew;
        } else if (target == "PO") {
          spec.target = BoundKind::kPo;
        } else {
          throw InvalidArgument("target must be PEW or PO");
        }
        return search_dict(optimize_sigma(s, train_data, spec, delta_total));
      },
      py::arg("model"), py::arg("train"), py::arg("target") = "PEW",
      py::arg("delta_total") = 0.05, py::arg("tau") = 60);

  m.def(
      "run_grid",
      [](const Dataset& d, std::uint64_t seed, int c_count, int sigma_count,
         double delta_total, int tau, int jobs) {
        GridSpec g;
        g.c_count = c_count;
        g.sigma_count = sigma_count;
        SigmaSearchSpec spec;
        spec.tau = tau;
        GridOptions opt;
        opt.jobs = jobs;
        py::gil_scoped_release release;
        return grid_to_csv(run_grid(d, {0.8, seed}, g, delta_total, spec, opt));
      },
      py::arg("data"), py::arg("seed") = 0, py::arg("c_count") = 7,
      py::arg("sigma_count") = 7, py::arg("delta_total") = 0.05,
      py::arg("tau") = 60, py::arg("jobs") = 1,
      "Runs the grid experiment and returns the CSV table.");

  m.def(
      "estimate_beta",
      [](std::size_t n, double lambda, double width, std::size_t trials,
         std::uint64_t seed) {
        StabilityProbe p;
        p.n = n;
        p.trials = trials;
        p.seed = seed;
        const BetaEstimate b = estimate_beta(p, lambda, KernelSpec(width));
        return py::dict(py::arg("beta_hat") = b.beta_hat, py::arg("bound") = b.bound,
                        py::arg("skipped") = b.skipped, py::arg("pass") = b.pass);
      },
      py::arg("n") = 50, py::arg("lam") = 1.0, py::arg("width") = 2.0,
      py::arg("trials") = 200, py::arg("seed") = 0);
  m.def(
      "check_vector_mcdiarmid",
      [](std::size_t n, double delta, std::size_t trials, std::uint64_t seed) {
        McDiarmidSpec s;
        s.n = n;
        s.seed = seed;
        const McDiarmidCheck c = check_vector_mcdiarmid(s, delta, trials);
        return py::dict(py::arg("quantile") = c.quantile, py::arg("bound") = c.bound,
                        py::arg("mean_deviation") = c.mean_deviation,
                        py::arg("pass") = c.pass);
      },
      py::arg("n") = 100, py::arg("delta") = 0.05, py::arg("trials") = 2000,
      py::arg("seed") = 0);
}
