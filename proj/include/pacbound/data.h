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

#ifndef PACBOUND_DATA_H_
#define PACBOUND_DATA_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace pacbound {

// Row-major so that each example is a contiguous span.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline std::span<const double> row_span(const Matrix& m, Eigen::Index i) {
  return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}

enum class DataFormat { kCsv, kLibsvm };

DataFormat parse_data_format(const std::string& name);
std::string to_string(DataFormat format);

// Per-column affine map x -> (x - mean) * inv_scale. Constant columns have
// inv_scale == 0 and map to zero.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> inv_scale;

  static Standardizer fit(const Matrix& features);
  Matrix apply(const Matrix& features) const;
  void apply_in_place(std::span<double> row) const;
  bool empty() const { return mean.empty(); }
};

// Labeled examples with labels in {-1, +1}. Immutable after construction.
class Dataset {
 public:
  Dataset(Matrix features, std::vector<int> labels, std::string name = "",
          bool standardized = false);

  const Matrix& features() const { return features_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::string& name() const { return name_; }
  bool standardized() const { return standardized_; }

  std::size_t size() const { return labels_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(features_.cols()); }
  std::span<const double> row(std::size_t i) const {
    return row_span(features_, static_cast<Eigen::Index>(i));
  }
  int label(std::size_t i) const { return labels_[i]; }

  // Rows in the given order; indices may repeat.
  Dataset subset(std::span<const std::size_t> indices,
                 std::string name) const;

 private:
  Matrix features_;
  std::vector<int> labels_;
  std::string name_;
  bool standardized_;
};

struct LoadOptions {
  DataFormat format = DataFormat::kCsv;
  // CSV only: skip the first line.
  bool header = false;
};

Dataset load_dataset(const std::string& path, const LoadOptions& options);
Dataset parse_dataset(const std::string& text, const LoadOptions& options,
                      const std::string& name = "");

std::string format_dataset(const Dataset& data, DataFormat format);
void save_dataset(const Dataset& data, const std::string& path,
                  DataFormat format);

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Seeded Fisher-Yates permutation; the first floor(fraction * n) entries
// form the training part.
SplitIndices split_indices(std::size_t n, const SplitSpec& spec);
std::pair<Dataset, Dataset> split(const Dataset& data, const SplitSpec& spec);

struct StandardizedPair {
  Dataset train;
  Dataset test;
  Standardizer standardizer;
};

// Fits on `train` only and applies the same map to both.
StandardizedPair standardize(const Dataset& train, const Dataset& test);

}  // namespace pacbound

#endif  // PACBOUND_DATA_H_
