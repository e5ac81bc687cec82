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

#ifndef PACBOUND_TOOLS_CLI_H_
#define PACBOUND_TOOLS_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pacbound/io.h"

namespace pacbound::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

// Everything that determines a run. Serialized into every output.
struct RunConfig {
  std::string subcommand;
  std::string data_path;
  std::string format = "csv";
  bool header = false;
  std::size_t synthetic = 0;
  std::uint64_t seed = 0;
  bool seed_from_env = false;
  double train_fraction = 0.8;
  bool standardize = true;
  double delta = 0.05;
  int tau = 60;
  double sigma2_min = 1e-4;
  double sigma2_max = 1e4;
  int grid_c = 7;
  int grid_sigma = 7;
  double c_exp_lo = -8.0;
  double c_exp_hi = 2.0;
  double sigma_exp_lo = -3.0;
  double sigma_exp_hi = 3.0;
  std::string out_dir = ".";
  int jobs = 1;
  // train
  double c = 0.0;
  double sigma_rbf = 0.0;
  double kkt_tol = 1e-3;
  // certify
  std::string model_path;
  // verify
  std::size_t trials = 500;
  double lambda = 1.0;
  double verify_width = 2.0;
  // invert-kl
  double kl_p = 0.0;
  double kl_budget = 0.0;
};

Json to_json(const RunConfig& config);

// Parses `args` (without the program name), runs the subcommand and returns
// the process exit code. Reports go to files under --out; a short summary
// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace pacbound::cli

#endif  // PACBOUND_TOOLS_CLI_H_
