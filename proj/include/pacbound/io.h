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

#ifndef PACBOUND_IO_H_
#define PACBOUND_IO_H_

#include <string>

#include "json.hpp"
#include "pacbound/bounds.h"
#include "pacbound/svm.h"
#include "pacbound/tuning.h"
#include "pacbound/verify.h"

namespace pacbound {

inline constexpr int kFormatVersion = 1;

using Json = nlohmann::ordered_json;

// Report schema. Field names are frozen; see README.
Json to_json(const BoundReport& report);
BoundReport bound_report_from_json(const Json& j);

Json to_json(const SigmaSearchResult& result);

// Rows with alpha == 0 are dropped.
Json model_to_json(const SvmModel& model);
SvmModel model_from_json(const Json& j);

Json to_json(const VerificationReport& report);

inline constexpr const char* kGridCsvHeader =
    "c,sigma_rbf,lambda,train_err01,test_err01,hinge,clipped_hinge,"
    "pew_bound,pew_sigma2,pew_gap,po_bound,po_sigma2,po_gap,liu_bound,"
    "be_bound,rand_test_err_pew,rand_test_err_po,union_penalty,status";

// `preamble`, when non-empty, is written as a leading "# " comment line.
std::string grid_to_csv(const GridResult& result,
                        const std::string& preamble = "");
Json grid_to_json(const GridResult& result);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace pacbound

#endif  // PACBOUND_IO_H_
