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

#include "churnpno/resampling.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "churnpno/error.h"
#include "test_util.h"

namespace churnpno {
namespace {

double Dist2(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d += (a[j] - b[j]) * (a[j] - b[j]);
  return d;
}

// k nearest minority neighbours of pool[a] (ties by index), as in SMOTE.
std::vector<std::size_t> Neighbours(const Dataset& ds,
                                    const std::vector<std::size_t>& pool,
                                    std::size_t a, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> d;
  for (std::size_t b : pool) {
    if (b != pool[a]) {
      d.emplace_back(Dist2(ds.records[pool[a]].features,
                           ds.records[b].features), b);
    }
  }
  std::sort(d.begin(), d.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k && i < d.size(); ++i) out.push_back(d[i].second);
  return out;
}

// Finds (base, neighbour, u) reproducing a synthetic record, or returns
// false.
bool OnNeighbourSegment(const Dataset& ds, const std::vector<std::size_t>& pool,
                        std::size_t k, const CustomerRecord& syn) {
  for (std::size_t a = 0; a < pool.size(); ++a) {
    const auto& x = ds.records[pool[a]];
    for (std::size_t b : Neighbours(ds, pool, a, k)) {
      const auto& nn = ds.records[b];
      // Recover u from the coordinate with the largest spread.
      std::size_t j_best = 0;
      double spread = 0.0;
      for (std::size_t j = 0; j < x.features.size(); ++j) {
        const double s = std::abs(nn.features[j] - x.features[j]);
        if (s > spread) {
          spread = s;
          j_best = j;
        }
      }
      if (spread == 0.0) continue;
      const double u =
          (syn.features[j_best] - x.features[j_best]) /
          (nn.features[j_best] - x.features[j_best]);
      if (u < -1e-12 || u > 1.0 + 1e-12) continue;
      bool match = true;
      for (std::size_t j = 0; j < x.features.size() && match; ++j) {
        const double expect = x.features[j] + u * (nn.features[j] - x.features[j]);
        match = std::abs(expect - syn.features[j]) < 1e-9;
      }
      const double clv = x.clv + u * (nn.clv - x.clv);
      if (match && std::abs(clv - syn.clv) < 1e-9) return true;
    }
  }
  return false;
}

TEST(Smote, TwoPointMinorityInterpolates) {
  Dataset ds;
  ds.schema = {"a", "b"};
  ds.records = {{{0, 0}, Label::kChurner, 10},
                {{1, 1}, Label::kChurner, 30},
                {{5, 5}, Label::kNonChurner, 1},
                {{6, 5}, Label::kNonChurner, 1},
                {{7, 5}, Label::kNonChurner, 1}};
  SmoteConfig cfg;
  cfg.seed = 3;
  const Dataset out = SmoteBalance(ds, cfg);
  ASSERT_EQ(out.size(), 6u);
  const auto& syn = out.records.back();
  EXPECT_EQ(syn.label, Label::kChurner);
  // On the diagonal between (0,0) and (1,1), CLV interpolated alike.
  EXPECT_DOUBLE_EQ(syn.features[0], syn.features[1]);
  EXPECT_NEAR(syn.clv, 10.0 + 20.0 * syn.features[0], 1e-12);
}

TEST(Smote, AlreadyBalancedIsUnchanged) {
  std::mt19937_64 rng(1);
  Dataset ds = testing::RandomDataset(rng, 20, 2, 0.5);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    ds.records[i].label = i % 2 ? Label::kChurner : Label::kNonChurner;
  }
  const Dataset out = SmoteBalance(ds, SmoteConfig{});
  EXPECT_EQ(out.size(), ds.size());
}

TEST(Smote, Errors) {
  std::mt19937_64 rng(1);
  Dataset ds = testing::RandomDataset(rng, 10, 2);
  for (auto& r : ds.records) r.label = Label::kNonChurner;
  EXPECT_THROW(SmoteBalance(ds, SmoteConfig{}), DataError);
  ds.records[0].label = Label::kChurner;
  EXPECT_THROW(SmoteBalance(ds, SmoteConfig{}), DataError);
  ds.records[1].label = Label::kChurner;
  SmoteConfig bad;
  bad.k_neighbors = 0;
  EXPECT_THROW(SmoteBalance(ds, bad), ArgumentError);
  bad = SmoteConfig{};
  bad.target_ratio = 1.5;
  EXPECT_THROW(SmoteBalance(ds, bad), ArgumentError);
}

TEST(Smote, PropertiesOverRandomData) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 30 + static_cast<std::size_t>(trial) * 3;
    const Dataset ds = testing::RandomDataset(rng, n, 3, 0.2);
    SmoteConfig cfg;
    cfg.k_neighbors = 1 + trial % 6;
    cfg.target_ratio = trial % 3 == 0 ? 0.6 : 1.0;
    cfg.seed = static_cast<std::uint64_t>(trial);
    const Dataset out = SmoteBalance(ds, cfg);

    // Originals first and verbatim.
    for (std::size_t i = 0; i < ds.size(); ++i) {
      ASSERT_EQ(out.records[i].features, ds.records[i].features);
      ASSERT_EQ(out.records[i].clv, ds.records[i].clv);
      ASSERT_EQ(out.records[i].label, ds.records[i].label);
    }
    const std::size_t n_min = ds.CountLabel(Label::kChurner);
    const std::size_t n_maj = ds.size() - n_min;
    ASSERT_LT(n_min, n_maj);
    const double target = cfg.target_ratio * static_cast<double>(n_maj);
    EXPECT_LE(std::abs(static_cast<double>(out.CountLabel(Label::kChurner)) -
                       target),
              1.0);
    EXPECT_EQ(out.CountLabel(Label::kNonChurner), n_maj);

    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (IsChurner(ds.records[i].label)) pool.push_back(i);
    }
    const std::size_t k =
        std::min<std::size_t>(static_cast<std::size_t>(cfg.k_neighbors),
                              pool.size() - 1);
    for (std::size_t i = ds.size(); i < out.size(); ++i) {
      ASSERT_EQ(out.records[i].label, Label::kChurner);
      EXPECT_TRUE(OnNeighbourSegment(ds, pool, k, out.records[i]))
          << "trial " << trial << " synthetic " << i;
    }
    const Dataset again = SmoteBalance(ds, cfg);
    ASSERT_EQ(again.size(), out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      EXPECT_EQ(again.records[i].features, out.records[i].features);
    }
  }
}

TEST(Smote, SyntheticPointsStayInTheMinorityBoundingBox) {
  std::mt19937_64 rng(77);
  const Dataset ds = testing::RandomDataset(rng, 200, 4, 0.15);
  const Dataset out = SmoteBalance(ds, SmoteConfig{});
  std::vector<double> lo(4, 1e300), hi(4, -1e300);
  for (const auto& r : ds.records) {
    if (!IsChurner(r.label)) continue;
    for (std::size_t j = 0; j < 4; ++j) {
      lo[j] = std::min(lo[j], r.features[j]);
      hi[j] = std::max(hi[j], r.features[j]);
    }
  }
  for (std::size_t i = ds.size(); i < out.size(); ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_GE(out.records[i].features[j], lo[j]);
      EXPECT_LE(out.records[i].features[j], hi[j]);
    }
  }
}

}  // namespace
}  // namespace churnpno
