/*
 * Copyright 2026 The churnpno Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CHURNPNO_DOMAIN_H_
#define CHURNPNO_DOMAIN_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace churnpno {

// Class label. The numeric values are part of the file format: 0 marks a
// churner, 1 a non-churner. Scores produced by every model in this library
// point toward the non-churner class, so a low score means "likely churner".
enum class Label : std::uint8_t { kChurner = 0, kNonChurner = 1 };

inline constexpr int ToInt(Label y) { return static_cast<int>(y); }
inline constexpr bool IsChurner(Label y) { return y == Label::kChurner; }

struct CustomerRecord {
  std::vector<double> features;
  Label label = Label::kNonChurner;
  // Customer lifetime value in euros; strictly positive.
  double clv = 0.0;
};

struct Dataset {
  std::string name;
  std::vector<std::string> schema;  // feature column names, in order
  std::vector<CustomerRecord> records;

  std::size_t size() const { return records.size(); }
  std::size_t width() const { return schema.size(); }
  bool empty() const { return records.empty(); }

  std::vector<double> Clvs() const;
  std::vector<Label> Labels() const;
  double MeanClv() const;
  std::size_t CountLabel(Label y) const;
};

// Checks the record invariants (width, clv > 0). Throws DataError naming the
// offending record (1-based).
void ValidateDataset(const Dataset& ds);

// Same as ValidateDataset plus: nonempty and both classes present.
void ValidateTrainingSet(const Dataset& ds);

// Reads a CSV with header `f1,...,fK,clv,label`. When `schema` is empty every
// column other than `clv` and `label` is a feature, in file order; otherwise
// exactly the listed columns are read as features (extra columns ignored).
// Errors name the 1-based data row (the header is row 0).
Dataset LoadDataset(const std::filesystem::path& path,
                    std::span<const std::string> schema = {});

// Writes `ds` in the format LoadDataset reads. Reals are written with 17
// significant digits so reloading reproduces them exactly.
void WriteDataset(const std::filesystem::path& path, const Dataset& ds);

struct FeatureScaling {
  std::vector<double> mean;
  std::vector<double> stddev;  // population standard deviation
  std::vector<std::size_t> constant_columns;
};

struct StandardizedSplit {
  Dataset train;
  Dataset test;
  FeatureScaling scaling;
  std::vector<std::string> warnings;
};

// Estimates per-column scaling on the training set.
FeatureScaling FitScaling(const Dataset& train);

// z = (x - mean) / stddev; constant columns (stddev == 0) map to 0.
Dataset ApplyScaling(const Dataset& ds, const FeatureScaling& scaling);

// z-score standardization fit on `train` only and applied to both splits.
StandardizedSplit Standardize(const Dataset& train, const Dataset& test);

struct SegmentAssignment {
  int q = 1;
  std::vector<int> segment_of;  // record index -> segment in [0, q)

  std::vector<std::size_t> Sizes() const;
  std::vector<std::vector<std::size_t>> Members() const;
};

// Splits records into q contiguous groups of the CLV ordering (ascending,
// ties by record index). Group sizes are floor(n/q) or ceil(n/q); the
// n mod q lowest-CLV groups receive the extra record. Throws ArgumentError
// unless 1 <= q <= n.
SegmentAssignment SegmentByClv(std::span<const double> clvs, int q);
SegmentAssignment SegmentByClv(const Dataset& ds, int q);

// CLV cut points between consecutive segments (size q-1): the midpoint of
// the largest CLV of segment j and the smallest of segment j+1. Used to route
// unseen customers into the segments fit on a training set.
std::vector<double> SegmentCutPoints(std::span<const double> clvs,
                                     const SegmentAssignment& seg);

// Segment index for `clv` given cut points; a CLV equal to a cut point goes
// to the lower segment.
int SegmentForClv(std::span<const double> cut_points, double clv);

// Drops customers whose CLV cannot cover the campaign: d + f/gamma.
Dataset DropBelowClv(const Dataset& ds, double clv_floor);

}  // namespace churnpno

#endif  // CHURNPNO_DOMAIN_H_
