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

#include "churnpno/stats.h"

#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "churnpno/error.h"
#include "reference_data.h"

namespace churnpno {
namespace {

TEST(RankMethods, StrictOrderGivesOneToK) {
  const RankTable t = RankMethods({"a", "b", "c"}, {"d1"}, {{3.0}, {1.0}, {2.0}});
  EXPECT_EQ(t.rank[0][0], 1.0);
  EXPECT_EQ(t.rank[1][0], 3.0);
  EXPECT_EQ(t.rank[2][0], 2.0);
}

TEST(RankMethods, TiesShareTheMeanRank) {
  const RankTable t =
      RankMethods({"a", "b", "c"}, {"d1"}, {{5.0}, {5.0}, {1.0}});
  EXPECT_EQ(t.rank[0][0], 1.5);
  EXPECT_EQ(t.rank[1][0], 1.5);
  EXPECT_EQ(t.rank[2][0], 3.0);
}

TEST(RankMethods, RejectsRaggedOrMissingCells) {
  EXPECT_THROW(RankMethods({"a", "b"}, {"d1", "d2"}, {{1.0, 2.0}, {1.0}}),
               ArgumentError);
  EXPECT_THROW(RankMethods({"a", "b"}, {"d1"}, {{1.0}, {std::nan("")}}),
               ArgumentError);
}

TEST(RankMethods, ColumnsSumToTriangularNumber) {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> v(0, 4);  // frequent ties
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + trial % 9;
    const std::size_t n = 1 + trial % 5;
    std::vector<std::string> methods(k), data(n);
    std::vector<std::vector<double>> profit(k, std::vector<double>(n));
    for (auto& row : profit) {
      for (double& x : row) x = v(rng);
    }
    const RankTable t = RankMethods(methods, data, profit);
    for (std::size_t d = 0; d < n; ++d) {
      double sum = 0.0;
      for (std::size_t m = 0; m < k; ++m) sum += t.rank[m][d];
      EXPECT_DOUBLE_EQ(sum, k * (k + 1) / 2.0);
    }
  }
}

TEST(RankMethods, PublishedJanuaryColumnRanksPnoFirst) {
  const csv::Table t =
      csv::ReadFile(testing::DataPath("reference_profit_matrix.csv"));
  std::vector<std::string> methods;
  std::vector<std::vector<double>> profit;
  for (const auto& row : t.rows) {
    methods.push_back(row[0]);
    double v = 0.0;
    ASSERT_TRUE(csv::ParseDouble(row[1], &v));
    profit.push_back({v});
  }
  const RankTable table = RankMethods(methods, {"jan"}, profit);
  EXPECT_EQ(table.methods[0], "PnO");
  EXPECT_EQ(table.rank[0][0], 1.0);
}

TEST(RankMethods, PublishedProfitMatrixReproducesAverageRanks) {
  const csv::Table t =
      csv::ReadFile(testing::DataPath("reference_profit_matrix.csv"));
  std::vector<std::string> methods;
  std::vector<std::vector<double>> profit;
  for (const auto& row : t.rows) {
    methods.push_back(row[0]);
    std::vector<double> r;
    for (std::size_t c = 1; c < row.size(); ++c) {
      double v = 0.0;
      ASSERT_TRUE(csv::ParseDouble(row[c], &v));
      r.push_back(v);
    }
    profit.push_back(r);
  }
  std::vector<std::string> months(t.header.begin() + 1, t.header.end());
  const RankTable table = RankMethods(methods, months, profit);
  const std::map<std::string, std::string> names{
      {"MSP_rf", "MSP_RF"}, {"MSP_log", "MSP_log"}};
  for (const auto& pub : testing::LoadPublishedRanks()) {
    const auto it = std::find_if(
        methods.begin(), methods.end(), [&](const std::string& m) {
          auto alias = names.find(m);
          return (alias != names.end() ? alias->second : m) == pub.method;
        });
    ASSERT_NE(it, methods.end()) << pub.method;
    const auto m = static_cast<std::size_t>(it - methods.begin());
    EXPECT_NEAR(table.average_rank[m], pub.average_rank, 0.05) << pub.method;
  }
}

TEST(Friedman, PublishedRanksGiveTheReportedStatistic) {
  const auto ranks = testing::AverageRanks(testing::LoadPublishedRanks());
  const FriedmanResult f = FriedmanImanDavenport(ranks, 12);
  EXPECT_NEAR(f.f_stat, 4.1018, 0.06);
  EXPECT_EQ(f.df1, 11.0);
  EXPECT_EQ(f.df2, 121.0);
  EXPECT_LT(f.p_value, 1e-3);
}

TEST(Friedman, EqualRanksGiveZero) {
  const std::vector<double> ranks(5, 3.0);
  const FriedmanResult f = FriedmanImanDavenport(ranks, 10);
  EXPECT_NEAR(f.chi2, 0.0, 1e-12);
  EXPECT_NEAR(f.f_stat, 0.0, 1e-12);
  EXPECT_NEAR(f.p_value, 1.0, 1e-12);
}

// Ranks (1,1,2), (2,3,1), (3,2,3) over three datasets:
//   sum R^2 = 116/9, chi2 = 3 * (116/9 - 12) = 8/3,
//   F = 2 * (8/3) / (6 - 8/3) = 1.6 on (2, 4) df,
//   p = (1 + 2 * 1.6 / 4)^-2 = 1 / 3.24.
TEST(Friedman, HandSizedInstance) {
  const std::vector<double> ranks{4.0 / 3.0, 2.0, 8.0 / 3.0};
  const FriedmanResult f = FriedmanImanDavenport(ranks, 3);
  EXPECT_NEAR(f.chi2, 8.0 / 3.0, 1e-12);
  EXPECT_NEAR(f.f_stat, 1.6, 1e-12);
  EXPECT_NEAR(f.p_value, 1.0 / 3.24, 1e-9);
}

TEST(Friedman, Preconditions) {
  EXPECT_THROW(FriedmanImanDavenport(std::vector<double>{1.0, 2.0}, 5),
               ArgumentError);
  EXPECT_THROW(FriedmanImanDavenport(std::vector<double>{1.0, 2.0, 3.0}, 1),
               ArgumentError);
  // Perfect agreement: N(k-1) == chi2.
  EXPECT_THROW(FriedmanImanDavenport(std::vector<double>{1.0, 2.0, 3.0}, 4),
               ArgumentError);
}

TEST(NormalCdf, TableValues) {
  EXPECT_NEAR(NormalCdf(0.0), 0.5, 1e-15);
  EXPECT_NEAR(NormalCdf(1.0), 0.8413447460685429, 1e-12);
  EXPECT_NEAR(NormalCdf(-1.96), 0.024997895148220435, 1e-12);
  EXPECT_NEAR(NormalCdf(3.0), 0.9986501019683699, 1e-12);
  EXPECT_NEAR(NormalCdf(-8.0), 6.220960574271785e-16, 1e-25);
}

TEST(Nemenyi, PublishedComparisons) {
  EXPECT_NEAR(NemenyiZ(2.7917, 4.4167, 12, 12).p_value, 0.2696, 0.003);
  EXPECT_NEAR(NemenyiZ(2.7917, 5.0833, 12, 12).p_value, 0.1195, 0.003);
}

TEST(Nemenyi, AllPublishedPValues) {
  const auto rows = testing::LoadPublishedRanks();
  for (std::size_t j = 1; j < rows.size(); ++j) {
    EXPECT_NEAR(NemenyiZ(rows[0].average_rank, rows[j].average_rank, 12, 12)
                    .p_value,
                rows[j].p_value, 0.003)
        << rows[j].method;
  }
}

TEST(Nemenyi, EqualRanksAndUnitZ) {
  const NemenyiResult same = NemenyiZ(3.0, 3.0, 10, 5);
  EXPECT_EQ(same.z, 0.0);
  EXPECT_NEAR(same.p_value, 1.0, 1e-15);
  const double se = std::sqrt(5.0 * 6.0 / 60.0);
  const NemenyiResult one = NemenyiZ(2.0, 2.0 + se, 10, 5);
  EXPECT_NEAR(one.z, 1.0, 1e-12);
  EXPECT_NEAR(one.p_value, 0.31731050786291415, 1e-9);
}

TEST(Holm, PublishedPColumnGivesPublishedOutcomes) {
  const auto rows = testing::LoadPublishedRanks();
  std::vector<double> p;
  for (std::size_t j = 1; j < rows.size(); ++j) p.push_back(rows[j].p_value);
  const std::vector<HolmRow> holm = Holm(p, 0.05);
  ASSERT_EQ(holm.size(), 11u);
  for (std::size_t j = 0; j < holm.size(); ++j) {
    EXPECT_NEAR(holm[j].threshold, rows[j + 1].threshold, 5e-5);
    EXPECT_EQ(holm[j].reject ? "reject" : "not reject", rows[j + 1].outcome)
        << rows[j + 1].method;
  }
}

TEST(Holm, ThresholdsAndStepDown) {
  const std::vector<double> p{0.001, 0.2, 0.001};
  const std::vector<HolmRow> holm = Holm(p, 0.05);
  EXPECT_NEAR(holm[0].threshold, 0.05, 1e-15);
  EXPECT_NEAR(holm[1].threshold, 0.025, 1e-15);
  EXPECT_NEAR(holm[2].threshold, 0.05 / 3.0, 1e-15);
  EXPECT_TRUE(holm[0].reject);
  EXPECT_FALSE(holm[1].reject);
  // Judged on its own row, but the step-down procedure has stopped.
  EXPECT_TRUE(holm[2].reject);
  EXPECT_TRUE(holm[0].step_down_reject);
  EXPECT_FALSE(holm[2].step_down_reject);
  for (std::size_t j = 1; j < holm.size(); ++j) {
    EXPECT_LT(holm[j].threshold, holm[j - 1].threshold);
  }
}

TEST(Holm, NothingRejectedWhenEveryPIsOne) {
  const std::vector<double> p(6, 1.0);
  for (const auto& r : Holm(p, 0.05)) EXPECT_FALSE(r.reject);
  EXPECT_THROW(Holm(p, 0.0), ArgumentError);
}

TEST(CompareToBest, IdenticalColumnsRejectNothing) {
  const std::vector<std::vector<double>> profit(4, {1.0, 2.0, 3.0});
  const RankTable t =
      RankMethods({"a", "b", "c", "d"}, {"x", "y", "z"}, profit);
  const HolmReport r = CompareToBest(t, 0.05);
  EXPECT_EQ(r.control, "a");
  for (const auto& row : r.rows) {
    EXPECT_FALSE(row.reject);
    EXPECT_NEAR(row.p_value, 1.0, 1e-12);
  }
}

TEST(CompareToBest, RowsOrderedByRank) {
  const RankTable t = RankMethods({"a", "b", "c"}, {"x", "y"},
                                  {{1.0, 1.0}, {3.0, 3.0}, {2.0, 2.0}});
  const HolmReport r = CompareToBest(t, 0.05);
  EXPECT_EQ(r.control, "b");
  EXPECT_EQ(r.control_rank, 1.0);
  EXPECT_EQ(r.rows[0].method, "c");
  EXPECT_EQ(r.rows[1].method, "a");
}

}  // namespace
}  // namespace churnpno
