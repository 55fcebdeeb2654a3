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

#include "churnpno/domain.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "churnpno/csv.h"
#include "churnpno/error.h"

namespace churnpno {

std::vector<double> Dataset::Clvs() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.clv);
  return out;
}

std::vector<Label> Dataset::Labels() const {
  std::vector<Label> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.label);
  return out;
}

double Dataset::MeanClv() const {
  if (records.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : records) sum += r.clv;
  return sum / static_cast<double>(records.size());
}

std::size_t Dataset::CountLabel(Label y) const {
  return static_cast<std::size_t>(std::count_if(
      records.begin(), records.end(),
      [y](const CustomerRecord& r) { return r.label == y; }));
}

void ValidateDataset(const Dataset& ds) {
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    const auto& r = ds.records[i];
    const std::string where =
        "dataset '" + ds.name + "' record " + std::to_string(i + 1);
    if (r.features.size() != ds.schema.size()) {
      throw DataError(where + ": " + std::to_string(r.features.size()) +
                      " features, schema has " +
                      std::to_string(ds.schema.size()));
    }
    if (!(r.clv > 0.0) || !std::isfinite(r.clv)) {
      throw DataError(where + ": clv must be positive and finite");
    }
    if (r.label != Label::kChurner && r.label != Label::kNonChurner) {
      throw DataError(where + ": label must be 0 or 1");
    }
    for (double x : r.features) {
      if (!std::isfinite(x)) throw DataError(where + ": non-finite feature");
    }
  }
}

void ValidateTrainingSet(const Dataset& ds) {
  if (ds.empty()) throw DataError("dataset '" + ds.name + "' is empty");
  ValidateDataset(ds);
  if (ds.CountLabel(Label::kChurner) == 0 ||
      ds.CountLabel(Label::kNonChurner) == 0) {
    throw DataError("dataset '" + ds.name +
                    "' must contain both churners and non-churners");
  }
}

Dataset LoadDataset(const std::filesystem::path& path,
                    std::span<const std::string> schema) {
  const csv::Table table = csv::ReadFile(path);
  const std::string file = path.string();
  if (table.header.empty()) throw DataError(file + ": missing header row");

  const int clv_col = table.ColumnIndex("clv");
  const int label_col = table.ColumnIndex("label");
  if (clv_col < 0) throw DataError(file + ": missing column 'clv'");
  if (label_col < 0) throw DataError(file + ": missing column 'label'");

  Dataset ds;
  ds.name = path.stem().string();
  std::vector<int> feature_cols;
  if (schema.empty()) {
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      const int ci = static_cast<int>(c);
      if (ci == clv_col || ci == label_col) continue;
      feature_cols.push_back(ci);
      ds.schema.push_back(table.header[c]);
    }
  } else {
    for (const auto& name : schema) {
      const int ci = table.ColumnIndex(name);
      if (ci < 0) throw DataError(file + ": missing column '" + name + "'");
      feature_cols.push_back(ci);
      ds.schema.push_back(name);
    }
  }

  ds.records.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = file + ": row " + std::to_string(r + 1);
    if (row.size() != table.header.size()) {
      throw DataError(where + ": expected " +
                      std::to_string(table.header.size()) + " cells, got " +
                      std::to_string(row.size()));
    }
    auto number = [&](int col) {
      double v = 0.0;
      if (!csv::ParseDouble(row[col], &v)) {
        throw DataError(where + ": non-numeric value '" + row[col] +
                        "' in column '" + table.header[col] + "'");
      }
      return v;
    };
    CustomerRecord rec;
    rec.features.reserve(feature_cols.size());
    for (int c : feature_cols) rec.features.push_back(number(c));
    rec.clv = number(clv_col);
    if (!(rec.clv > 0.0)) {
      throw DataError(where + ": clv must be > 0, got " + row[clv_col]);
    }
    const double y = number(label_col);
    if (y == 0.0) {
      rec.label = Label::kChurner;
    } else if (y == 1.0) {
      rec.label = Label::kNonChurner;
    } else {
      throw DataError(where + ": label must be 0 (churner) or 1, got " +
                      row[label_col]);
    }
    ds.records.push_back(std::move(rec));
  }
  return ds;
}

void WriteDataset(const std::filesystem::path& path, const Dataset& ds) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  csv::Row header = ds.schema;
  header.push_back("clv");
  header.push_back("label");
  csv::WriteRow(out, header);
  csv::Row row;
  for (const auto& r : ds.records) {
    row.clear();
    for (double x : r.features) row.push_back(csv::FormatExact(x));
    row.push_back(csv::FormatExact(r.clv));
    row.push_back(std::to_string(ToInt(r.label)));
    csv::WriteRow(out, row);
  }
  if (!out) throw DataError("write failed for " + path.string());
}

FeatureScaling FitScaling(const Dataset& train) {
  if (train.empty()) throw ArgumentError("FitScaling: empty training set");
  const std::size_t k = train.width();
  const double n = static_cast<double>(train.size());
  FeatureScaling s;
  s.mean.assign(k, 0.0);
  s.stddev.assign(k, 0.0);
  for (const auto& r : train.records) {
    for (std::size_t j = 0; j < k; ++j) s.mean[j] += r.features[j];
  }
  for (double& m : s.mean) m /= n;
  for (const auto& r : train.records) {
    for (std::size_t j = 0; j < k; ++j) {
      const double dev = r.features[j] - s.mean[j];
      s.stddev[j] += dev * dev;
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    s.stddev[j] = std::sqrt(s.stddev[j] / n);
    // Relative cutoff: a column whose spread is pure rounding noise is
    // treated as constant.
    if (s.stddev[j] <= 1e-12 * std::max(1.0, std::abs(s.mean[j]))) {
      s.stddev[j] = 0.0;
      s.constant_columns.push_back(j);
    }
  }
  return s;
}

Dataset ApplyScaling(const Dataset& ds, const FeatureScaling& scaling) {
  if (ds.width() != scaling.mean.size()) {
    throw ArgumentError("ApplyScaling: width mismatch");
  }
  Dataset out = ds;
  for (auto& r : out.records) {
    for (std::size_t j = 0; j < r.features.size(); ++j) {
      r.features[j] = scaling.stddev[j] == 0.0
                          ? 0.0
                          : (r.features[j] - scaling.mean[j]) /
                                scaling.stddev[j];
    }
  }
  return out;
}

StandardizedSplit Standardize(const Dataset& train, const Dataset& test) {
  StandardizedSplit out;
  out.scaling = FitScaling(train);
  out.train = ApplyScaling(train, out.scaling);
  out.test = ApplyScaling(test, out.scaling);
  for (std::size_t j : out.scaling.constant_columns) {
    out.warnings.push_back("column '" + train.schema[j] +
                           "' has zero variance on the training set; mapped "
                           "to 0");
  }
  return out;
}

std::vector<std::size_t> SegmentAssignment::Sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(q), 0);
  for (int s : segment_of) ++sizes[static_cast<std::size_t>(s)];
  return sizes;
}

std::vector<std::vector<std::size_t>> SegmentAssignment::Members() const {
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(q));
  for (std::size_t i = 0; i < segment_of.size(); ++i) {
    members[static_cast<std::size_t>(segment_of[i])].push_back(i);
  }
  return members;
}

namespace {

std::vector<std::size_t> ClvOrder(std::span<const double> clvs) {
  std::vector<std::size_t> order(clvs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return clvs[a] < clvs[b];
                   });
  return order;
}

}  // namespace

SegmentAssignment SegmentByClv(std::span<const double> clvs, int q) {
  const std::size_t n = clvs.size();
  if (q < 1 || static_cast<std::size_t>(q) > n) {
    throw ArgumentError("SegmentByClv: q must be in [1, " +
                        std::to_string(n) + "], got " + std::to_string(q));
  }
  const std::vector<std::size_t> order = ClvOrder(clvs);
  const std::size_t base = n / static_cast<std::size_t>(q);
  const std::size_t extra = n % static_cast<std::size_t>(q);

  SegmentAssignment seg;
  seg.q = q;
  seg.segment_of.assign(n, 0);
  std::size_t pos = 0;
  for (std::size_t s = 0; s < static_cast<std::size_t>(q); ++s) {
    const std::size_t size = base + (s < extra ? 1 : 0);
    for (std::size_t i = 0; i < size; ++i) {
      seg.segment_of[order[pos++]] = static_cast<int>(s);
    }
  }
  return seg;
}

SegmentAssignment SegmentByClv(const Dataset& ds, int q) {
  const std::vector<double> clvs = ds.Clvs();
  return SegmentByClv(clvs, q);
}

std::vector<double> SegmentCutPoints(std::span<const double> clvs,
                                     const SegmentAssignment& seg) {
  std::vector<double> lo(static_cast<std::size_t>(seg.q),
                         std::numeric_limits<double>::infinity());
  std::vector<double> hi(static_cast<std::size_t>(seg.q),
                         -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < clvs.size(); ++i) {
    const auto s = static_cast<std::size_t>(seg.segment_of[i]);
    lo[s] = std::min(lo[s], clvs[i]);
    hi[s] = std::max(hi[s], clvs[i]);
  }
  std::vector<double> cuts;
  for (std::size_t s = 0; s + 1 < static_cast<std::size_t>(seg.q); ++s) {
    cuts.push_back(0.5 * (hi[s] + lo[s + 1]));
  }
  return cuts;
}

int SegmentForClv(std::span<const double> cut_points, double clv) {
  const auto it =
      std::lower_bound(cut_points.begin(), cut_points.end(), clv);
  return static_cast<int>(it - cut_points.begin());
}

Dataset DropBelowClv(const Dataset& ds, double clv_floor) {
  Dataset out;
  out.name = ds.name;
  out.schema = ds.schema;
  for (const auto& r : ds.records) {
    if (r.clv > clv_floor) out.records.push_back(r);
  }
  return out;
}

}  // namespace churnpno
