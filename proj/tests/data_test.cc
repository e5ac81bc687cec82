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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "pacbound/error.h"

namespace pacbound {
namespace {

LoadOptions csv() { return {DataFormat::kCsv, false}; }
LoadOptions libsvm() { return {DataFormat::kLibsvm, false}; }

TEST(Load, CsvTwoRows) {
  const Dataset d = parse_dataset("1.0,2.0,+1\n-1.0,0.5,-1", csv());
  ASSERT_EQ(d.size(), 2u);
  ASSERT_EQ(d.dim(), 2u);
  EXPECT_EQ(d.label(0), 1);
  EXPECT_EQ(d.label(1), -1);
  EXPECT_EQ(d.features()(1, 1), 0.5);
}

TEST(Load, LibsvmFillsMissingIndices) {
  const Dataset d = parse_dataset("+1 1:0.5 3:2.0", libsvm());
  ASSERT_EQ(d.dim(), 3u);
  EXPECT_EQ(d.features()(0, 0), 0.5);
  EXPECT_EQ(d.features()(0, 1), 0.0);
  EXPECT_EQ(d.features()(0, 2), 2.0);
  EXPECT_EQ(d.label(0), 1);
}

TEST(Load, LibsvmDimensionIsMaxIndex) {
  const Dataset d = parse_dataset("+1 2:1\n-1 5:3\n", libsvm());
  EXPECT_EQ(d.dim(), 5u);
  EXPECT_EQ(d.features()(1, 4), 3.0);
  EXPECT_EQ(d.features()(0, 4), 0.0);
}

TEST(Load, ZeroLabelRemaps) {
  const Dataset d = parse_dataset("1,2,0\n3,4,1\n", csv());
  EXPECT_EQ(d.label(0), -1);
  EXPECT_EQ(d.label(1), 1);
}

TEST(Load, HeaderSkipped) {
  const Dataset d = parse_dataset("a,b,y\n1,2,1\n", {DataFormat::kCsv, true});
  EXPECT_EQ(d.size(), 1u);
}

TEST(Load, MalformedRowNamesLine) {
  try {
    parse_dataset("1,2,1\n1,x,1\n", csv());
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(parse_dataset("1,2,1\n1,2\n", csv()), ParseError);
  EXPECT_THROW(parse_dataset("+1 3:1 2:1\n", libsvm()), ParseError);
}

TEST(Load, BadLabel) {
  EXPECT_THROW(parse_dataset("1,2,2\n", csv()), LabelError);
  EXPECT_THROW(parse_dataset("3 1:1\n", libsvm()), LabelError);
}

TEST(Load, EmptyInput) {
  EXPECT_THROW(parse_dataset("", csv()), EmptyDatasetError);
  EXPECT_THROW(parse_dataset("\n\n", libsvm()), EmptyDatasetError);
}

TEST(Load, MissingFileNamesPath) {
  try {
    load_dataset("/no/such/file.csv", csv());
    FAIL();
  } catch (const IoError& e) {
    EXPECT_EQ(e.path(), "/no/such/file.csv");
  }
}

TEST(Load, RoundTripBitIdentical) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  Matrix x(25, 4);
  std::vector<int> y(25);
  for (int i = 0; i < 25; ++i) {
    for (int k = 0; k < 4; ++k) x(i, k) = (k == 2 && i % 3 == 0) ? 0.0 : u(rng);
    y[i] = i % 2 ? 1 : -1;
  }
  const Dataset d(x, y);
  const auto dir = std::filesystem::temp_directory_path();
  for (DataFormat f : {DataFormat::kCsv, DataFormat::kLibsvm}) {
    const std::string path = (dir / ("pacbound_rt." + to_string(f))).string();
    save_dataset(d, path, f);
    const Dataset back = load_dataset(path, {f, false});
    ASSERT_EQ(back.size(), d.size());
    ASSERT_EQ(back.dim(), d.dim());
    for (int i = 0; i < 25; ++i) {
      for (int k = 0; k < 4; ++k) EXPECT_EQ(back.features()(i, k), x(i, k));
      EXPECT_EQ(back.label(i), y[i]);
    }
    EXPECT_EQ(format_dataset(back, f), format_dataset(d, f));
    std::filesystem::remove(path);
  }
}

TEST(Load, FiniteDecimalTextRoundTrips) {
  const std::string text = "0.1,-2.5,1e-07,+1\n3,0,123.456,-1\n";
  const Dataset d = parse_dataset(text, csv());
  const Dataset again = parse_dataset(format_dataset(d, DataFormat::kCsv), csv());
  EXPECT_EQ(format_dataset(again, DataFormat::kCsv), format_dataset(d, DataFormat::kCsv));
  EXPECT_EQ(again.features(), d.features());
}

Dataset iota(std::size_t n) {
  Matrix x(static_cast<Eigen::Index>(n), 1);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x(static_cast<Eigen::Index>(i), 0) = static_cast<double>(i);
    y[i] = i % 2 ? 1 : -1;
  }
  return Dataset(x, y);
}

TEST(Split, SizesAndDisjoint) {
  const SplitIndices s = split_indices(10, {0.8, 7});
  EXPECT_EQ(s.train.size(), 8u);
  EXPECT_EQ(s.test.size(), 2u);
  std::vector<std::size_t> all = s.train;
  all.insert(all.end(), s.test.begin(), s.test.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(all[i], i);
}

TEST(Split, PaperTestSize) {
  const SplitIndices s = split_indices(768, {0.8, 1});
  EXPECT_EQ(s.train.size(), 614u);
  EXPECT_EQ(s.test.size(), 154u);
}

TEST(Split, Deterministic) {
  const SplitIndices a = split_indices(50, {0.7, 11});
  const SplitIndices b = split_indices(50, {0.7, 11});
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  const SplitIndices c = split_indices(50, {0.7, 12});
  EXPECT_NE(a.train, c.train);
}

TEST(Split, Degenerate) {
  EXPECT_THROW(split_indices(1, {0.8, 0}), InvalidArgument);
  EXPECT_THROW(split_indices(10, {0.05, 0}), InvalidArgument);
  EXPECT_THROW(split_indices(10, {1.0, 0}), InvalidArgument);
}

TEST(Split, RowMultisetPreserved) {
  const Dataset d = iota(37);
  auto [train, test] = split(d, {0.8, 5});
  std::vector<double> rows;
  for (std::size_t i = 0; i < train.size(); ++i) rows.push_back(train.row(i)[0]);
  for (std::size_t i = 0; i < test.size(); ++i) rows.push_back(test.row(i)[0]);
  std::sort(rows.begin(), rows.end());
  for (std::size_t i = 0; i < 37; ++i) EXPECT_EQ(rows[i], static_cast<double>(i));
  // Labels travel with their rows.
  for (std::size_t i = 0; i < train.size(); ++i) {
    EXPECT_EQ(train.label(i), static_cast<int>(train.row(i)[0]) % 2 ? 1 : -1);
  }
}

TEST(Standardize, TwoPointColumn) {
  Matrix x(2, 2);
  x << 1, 5, 3, 5;
  Matrix t(1, 2);
  t << 4, 7;
  const StandardizedPair p = standardize(Dataset(x, {1, -1}), Dataset(t, {1}));
  EXPECT_DOUBLE_EQ(p.train.features()(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(p.train.features()(1, 0), 1.0);
  // Constant column maps to zero on both sides.
  EXPECT_EQ(p.train.features()(0, 1), 0.0);
  EXPECT_EQ(p.test.features()(0, 1), 0.0);
  // Test uses the training statistics.
  EXPECT_DOUBLE_EQ(p.test.features()(0, 0), 2.0);
  EXPECT_TRUE(p.train.standardized());
}

TEST(Standardize, ConstantColumnThree) {
  Matrix x(3, 1);
  x << 5, 5, 5;
  const StandardizedPair p = standardize(Dataset(x, {1, -1, 1}), Dataset(x, {1, 1, 1}));
  for (int i = 0; i < 3; ++i) EXPECT_EQ(p.train.features()(i, 0), 0.0);
}

TEST(Standardize, MomentsAndIdempotence) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(3.0, 7.0);
  Matrix x(200, 3);
  for (int i = 0; i < 200; ++i)
    for (int k = 0; k < 3; ++k) x(i, k) = g(rng) * (k + 1);
  std::vector<int> y(200, 1);
  const Dataset d(x, y);
  const StandardizedPair p = standardize(d, d);
  const Matrix& z = p.train.features();
  for (int k = 0; k < 3; ++k) {
    const double mean = z.col(k).mean();
    const double var = (z.col(k).array() - mean).square().mean();
    EXPECT_NEAR(mean, 0.0, 1e-9);
    EXPECT_NEAR(var, 1.0, 1e-6);
  }
  const StandardizedPair again = standardize(p.train, p.train);
  EXPECT_LE((again.train.features() - z).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(DatasetType, RejectsBadLabelsAndShapes) {
  Matrix x(2, 1);
  x << 1, 2;
  EXPECT_THROW(Dataset(x, {1, 0}), LabelError);
  EXPECT_THROW(Dataset(x, {1}), InvalidArgument);
}

}  // namespace
}  // namespace pacbound
