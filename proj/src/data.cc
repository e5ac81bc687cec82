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

#include "pacbound/data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string_view>

#include "pacbound/error.h"

namespace pacbound {
namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

int parse_label(std::string_view s, std::size_t line) {
  double v = 0.0;
  if (!parse_double(s, v)) {
    throw ParseError(line, "cannot parse label '" + std::string(trim(s)) + "'");
  }
  if (v == 1.0) return 1;
  if (v == -1.0 || v == 0.0) return -1;
  throw LabelError("line " + std::to_string(line) + ": label " +
                   std::string(trim(s)) + " is not in {-1, 0, +1}");
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

struct Records {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
};

Records parse_csv(const std::string& text, bool header) {
  Records r;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (header && line_no == 1) continue;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = view.find(',', start);
      cells.push_back(view.substr(start, comma == std::string_view::npos
                                             ? std::string_view::npos
                                             : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cells.size() < 2) {
      throw ParseError(line_no, "expected at least one feature and a label");
    }
    if (width == 0) width = cells.size();
    if (cells.size() != width) {
      throw ParseError(line_no, "expected " + std::to_string(width) +
                                    " columns, got " +
                                    std::to_string(cells.size()));
    }
    std::vector<double> row(width - 1);
    for (std::size_t k = 0; k + 1 < width; ++k) {
      if (!parse_double(cells[k], row[k])) {
        throw ParseError(line_no, "cannot parse value '" +
                                      std::string(trim(cells[k])) + "'");
      }
    }
    r.labels.push_back(parse_label(cells.back(), line_no));
    r.rows.push_back(std::move(row));
  }
  return r;
}

Records parse_libsvm(const std::string& text) {
  Records r;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  std::vector<std::vector<std::pair<std::size_t, double>>> sparse;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    std::istringstream tokens{std::string(view)};
    std::string token;
    tokens >> token;
    r.labels.push_back(parse_label(token, line_no));
    std::vector<std::pair<std::size_t, double>> entries;
    std::size_t last_index = 0;
    while (tokens >> token) {
      const std::size_t colon = token.find(':');
      if (colon == std::string::npos) {
        throw ParseError(line_no, "expected idx:val, got '" + token + "'");
      }
      std::size_t index = 0;
      const auto [ptr, ec] =
          std::from_chars(token.data(), token.data() + colon, index);
      if (ec != std::errc() || ptr != token.data() + colon || index == 0) {
        throw ParseError(line_no, "bad feature index in '" + token + "'");
      }
      if (index <= last_index) {
        throw ParseError(line_no, "feature indices must be increasing");
      }
      double value = 0.0;
      if (!parse_double(std::string_view(token).substr(colon + 1), value)) {
        throw ParseError(line_no, "bad feature value in '" + token + "'");
      }
      last_index = index;
      dim = std::max(dim, index);
      entries.emplace_back(index - 1, value);
    }
    sparse.push_back(std::move(entries));
  }
  for (const auto& entries : sparse) {
    std::vector<double> row(dim, 0.0);
    for (const auto& [k, v] : entries) row[k] = v;
    r.rows.push_back(std::move(row));
  }
  return r;
}

}  // namespace

DataFormat parse_data_format(const std::string& name) {
  if (name == "csv") return DataFormat::kCsv;
  if (name == "libsvm") return DataFormat::kLibsvm;
  throw InvalidArgument("unknown data format '" + name + "'");
}

std::string to_string(DataFormat format) {
  return format == DataFormat::kCsv ? "csv" : "libsvm";
}

Dataset::Dataset(Matrix features, std::vector<int> labels, std::string name,
                 bool standardized)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      name_(std::move(name)),
      standardized_(standardized) {
  if (labels_.empty()) throw EmptyDatasetError("dataset has no examples");
  if (static_cast<std::size_t>(features_.rows()) != labels_.size()) {
    throw InvalidArgument("feature rows and labels differ in count");
  }
  for (int y : labels_) {
    if (y != 1 && y != -1) throw LabelError("labels must be -1 or +1");
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices,
                        std::string name) const {
  Matrix f(static_cast<Eigen::Index>(indices.size()), features_.cols());
  std::vector<int> y(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    f.row(static_cast<Eigen::Index>(k)) =
        features_.row(static_cast<Eigen::Index>(indices[k]));
    y[k] = labels_[indices[k]];
  }
  return Dataset(std::move(f), std::move(y), std::move(name), standardized_);
}

Dataset parse_dataset(const std::string& text, const LoadOptions& options,
                      const std::string& name) {
  Records r = options.format == DataFormat::kCsv
                  ? parse_csv(text, options.header)
                  : parse_libsvm(text);
  if (r.labels.empty()) throw EmptyDatasetError("no records in " + name);
  const std::size_t d = r.rows.front().size();
  Matrix f(static_cast<Eigen::Index>(r.rows.size()),
           static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          r.rows[i][k];
    }
  }
  return Dataset(std::move(f), std::move(r.labels), name);
}

Dataset load_dataset(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open dataset");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), options, path);
}

std::string format_dataset(const Dataset& data, DataFormat format) {
  std::string out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto row = data.row(i);
    const std::string label = data.label(i) > 0 ? "+1" : "-1";
    if (format == DataFormat::kCsv) {
      for (double v : row) {
        out += format_double(v);
        out += ',';
      }
      out += label;
    } else {
      out += label;
      for (std::size_t k = 0; k < row.size(); ++k) {
        // The last column is always written so the dimension survives.
        if (row[k] == 0.0 && k + 1 != row.size()) continue;
        out += ' ';
        out += std::to_string(k + 1);
        out += ':';
        out += format_double(row[k]);
      }
    }
    out += '\n';
  }
  return out;
}

void save_dataset(const Dataset& data, const std::string& path,
                  DataFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot write dataset");
  out << format_dataset(data, format);
}

SplitIndices split_indices(std::size_t n, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw InvalidArgument("train_fraction must lie in (0, 1)");
  }
  // The epsilon absorbs representation error such as 0.29 * 100.
  const auto n_train = static_cast<std::size_t>(
      std::floor(spec.train_fraction * static_cast<double>(n) + 1e-9));
  if (n_train < 1 || n_train >= n) {
    throw InvalidArgument("split of " + std::to_string(n) +
                          " rows leaves an empty part");
  }
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 rng(spec.seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i);
    std::swap(perm[i], perm[pick(rng)]);
  }
  SplitIndices out;
  out.train.assign(perm.begin(), perm.begin() + static_cast<long>(n_train));
  out.test.assign(perm.begin() + static_cast<long>(n_train), perm.end());
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& data, const SplitSpec& spec) {
  const SplitIndices idx = split_indices(data.size(), spec);
  return {data.subset(idx.train, data.name() + ":train"),
          data.subset(idx.test, data.name() + ":test")};
}

Standardizer Standardizer::fit(const Matrix& features) {
  Standardizer s;
  const auto n = static_cast<double>(features.rows());
  for (Eigen::Index k = 0; k < features.cols(); ++k) {
    const double mean = features.col(k).sum() / n;
    const double var = (features.col(k).array() - mean).square().sum() / n;
    const double sd = std::sqrt(var);
    s.mean.push_back(mean);
    s.inv_scale.push_back(sd <= 1e-12 * std::max(1.0, std::abs(mean))
                              ? 0.0
                              : 1.0 / sd);
  }
  return s;
}

void Standardizer::apply_in_place(std::span<double> row) const {
  if (row.size() != mean.size()) {
    throw InvalidArgument("row dimension does not match standardizer");
  }
  for (std::size_t k = 0; k < row.size(); ++k) {
    row[k] = (row[k] - mean[k]) * inv_scale[k];
  }
}

Matrix Standardizer::apply(const Matrix& features) const {
  Matrix out = features;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    apply_in_place({out.data() + i * out.cols(),
                    static_cast<std::size_t>(out.cols())});
  }
  return out;
}

StandardizedPair standardize(const Dataset& train, const Dataset& test) {
  Standardizer s = Standardizer::fit(train.features());
  Dataset tr(s.apply(train.features()), train.labels(), train.name(), true);
  Dataset te(s.apply(test.features()), test.labels(), test.name(), true);
  return {std::move(tr), std::move(te), std::move(s)};
}

}  // namespace pacbound
