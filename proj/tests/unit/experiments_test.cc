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

#include "churnpno/experiments.h"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "churnpno/csv.h"
#include "churnpno/error.h"
#include "churnpno/synthetic.h"
#include "test_util.h"

namespace churnpno {
namespace {

BenchmarkDataset SmallDataset(const std::string& name, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.name = name;
  spec.n_train = 160;
  spec.n_test = 80;
  spec.n_features = 6;
  spec.churn_rate = 0.25;
  spec.signal_strength = 3.0;
  spec.seed = seed;
  SyntheticData data = GenerateSynthetic(spec);
  return {name, std::move(data.train), std::move(data.test)};
}

ExperimentConfig FastConfig() {
  ExperimentConfig cfg;
  cfg.tune = false;
  cfg.train.learning_rate = 0.01;
  cfg.train.epochs = 15;
  cfg.logistic.iterations = 100;
  cfg.threads = 1;
  return cfg;
}

TEST(MethodNames, RoundTripAndRejectUnknown) {
  for (Method m : {Method::kPno, Method::kMlpCrossEntropy, Method::kLogistic,
                   Method::kKnn, Method::kCart, Method::kMspLogistic,
                   Method::kMspKnn, Method::kMspCart, Method::kOracle,
                   Method::kConstant}) {
    EXPECT_EQ(MethodFromName(MethodName(m)), m);
  }
  EXPECT_THROW(MethodFromName("svm"), ArgumentError);
  EXPECT_EQ(DefaultMethods().size(), 7u);
  EXPECT_EQ(DefaultMethods().front(), Method::kPno);
}

TEST(IncentiveSpec, ParsesFractionsAndEuros) {
  const IncentiveSpec a = IncentiveSpec::Parse("1/20");
  EXPECT_TRUE(a.clv_fraction);
  EXPECT_DOUBLE_EQ(a.Resolve(85.0), 4.25);
  const IncentiveSpec b = IncentiveSpec::Parse("CLV/5");
  EXPECT_TRUE(b.clv_fraction);
  EXPECT_DOUBLE_EQ(b.Resolve(100.0), 20.0);
  EXPECT_EQ(b.label, "CLV/5");
  const IncentiveSpec c = IncentiveSpec::Parse("12.5");
  EXPECT_FALSE(c.clv_fraction);
  EXPECT_DOUBLE_EQ(c.Resolve(1000.0), 12.5);
  for (const char* bad : {"", "1/0", "x/3", "-3", "1/", "abc"}) {
    EXPECT_THROW(IncentiveSpec::Parse(bad), ArgumentError) << bad;
  }
}

TEST(IncentiveSpec, StandardGridIncreases) {
  const auto grid = StandardIncentiveGrid();
  ASSERT_EQ(grid.size(), 5u);
  EXPECT_EQ(grid.front().label, "1/20");
  EXPECT_EQ(grid.back().label, "1/3");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    EXPECT_GT(grid[i].Resolve(85.0), grid[i - 1].Resolve(85.0));
  }
}

TEST(MonteCarloCv, SingleCellIsChosen) {
  const BenchmarkDataset ds = SmallDataset("cv", 3);
  CvConfig cv;
  cv.learning_rates = {0.01};
  cv.epochs = {5};
  cv.splits = 2;
  cv.seeds = 1;
  TrainConfig base;
  const CvResult r =
      MonteCarloCv(ds.train, testing::DefaultCampaign(), cv, base, 3, 1);
  ASSERT_EQ(r.cells.size(), 1u);
  EXPECT_EQ(r.cells[0].runs, 2);
  EXPECT_TRUE(std::isfinite(r.cells[0].mean_loss));
  EXPECT_EQ(r.best.learning_rate, 0.01);
  EXPECT_EQ(r.best.epochs, 5);
}

TEST(MonteCarloCv, PicksTheLowestMeanAndIsDeterministic) {
  const BenchmarkDataset ds = SmallDataset("cv", 4);
  CvConfig cv;
  // A learning rate this small barely moves the network in 2 epochs.
  cv.learning_rates = {1e-7, 0.02};
  cv.epochs = {2, 30};
  cv.splits = 2;
  cv.seeds = 2;
  TrainConfig base;
  base.loss = LossKind::kCrossEntropy;
  const CvResult a =
      MonteCarloCv(ds.train, testing::DefaultCampaign(), cv, base, 3, 9);
  ASSERT_EQ(a.cells.size(), 4u);
  EXPECT_EQ(a.cells[0].learning_rate, 1e-7);
  EXPECT_EQ(a.cells[0].epochs, 2);
  EXPECT_EQ(a.cells[3].learning_rate, 0.02);
  EXPECT_EQ(a.cells[3].epochs, 30);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : a.cells) best = std::min(best, c.mean_loss);
  const auto winner = std::find_if(a.cells.begin(), a.cells.end(),
                                   [&](const CvCell& c) {
                                     return c.mean_loss == best;
                                   });
  EXPECT_EQ(a.best.learning_rate, winner->learning_rate);
  EXPECT_EQ(a.best.epochs, winner->epochs);
  EXPECT_EQ(a.best.learning_rate, 0.02);

  const CvResult b =
      MonteCarloCv(ds.train, testing::DefaultCampaign(), cv, base, 3, 9);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].mean_loss, b.cells[i].mean_loss);
  }
}

TEST(MonteCarloCv, RejectsEmptyGrid) {
  const BenchmarkDataset ds = SmallDataset("cv", 4);
  CvConfig cv;
  cv.learning_rates.clear();
  EXPECT_THROW(
      MonteCarloCv(ds.train, testing::DefaultCampaign(), cv, {}, 3, 1),
      ArgumentError);
}

TEST(RunBenchmark, OneCellPerDatasetIncentiveMethod) {
  const std::vector<BenchmarkDataset> data{SmallDataset("a", 1),
                                           SmallDataset("b", 2)};
  const std::vector<Method> methods{Method::kPno, Method::kLogistic,
                                    Method::kMspKnn};
  const std::vector<IncentiveSpec> grid{IncentiveSpec::Parse("1/20"),
                                        IncentiveSpec::Parse("1/5")};
  const auto rows = RunBenchmark(data, methods, grid, FastConfig());
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows[0].dataset, "a");
  EXPECT_EQ(rows[0].d_label, "1/20");
  EXPECT_EQ(rows[0].method, "pno");
  EXPECT_EQ(rows[2].method, "msp_knn");
  EXPECT_EQ(rows[3].d_label, "1/5");
  EXPECT_EQ(rows[6].dataset, "b");
  for (const auto& r : rows) {
    EXPECT_TRUE(r.ok) << r.error;
    EXPECT_LE(r.profit, r.optimal_profit + 1e-9);
    EXPECT_GE(r.eta, 0.0);
    EXPECT_LE(r.eta, 1.0);
    EXPECT_GE(r.accuracy, 0.0);
    EXPECT_LE(r.accuracy, 1.0);
  }
}

TEST(RunBenchmark, OracleHasZeroGapAndConstantIsAllOrNothing) {
  const std::vector<BenchmarkDataset> data{SmallDataset("a", 5)};
  const auto rows =
      RunBenchmark(data, {Method::kOracle, Method::kConstant},
                   StandardIncentiveGrid(), FastConfig());
  for (const auto& r : rows) {
    ASSERT_TRUE(r.ok) << r.error;
    if (r.method == "oracle") {
      EXPECT_NEAR(r.profit, r.optimal_profit, 1e-9);
      EXPECT_NEAR(r.gap, 0.0, 1e-12);
    } else {
      EXPECT_TRUE(r.eta == 0.0 || r.eta == 1.0) << r.eta;
    }
  }
}

TEST(RunBenchmark, FailingDatasetDoesNotStopTheOthers) {
  BenchmarkDataset bad = SmallDataset("bad", 6);
  for (auto& r : bad.train.records) r.label = Label::kNonChurner;
  const std::vector<BenchmarkDataset> data{bad, SmallDataset("good", 7)};
  const auto rows = RunBenchmark(data, {Method::kPno, Method::kLogistic},
                                 {IncentiveSpec::Parse("1/10")}, FastConfig());
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_FALSE(rows[0].ok);
  EXPECT_FALSE(rows[0].error.empty());
  EXPECT_TRUE(std::isnan(rows[0].profit));
  EXPECT_TRUE(rows[2].ok);
  EXPECT_TRUE(rows[3].ok);
}

TEST(RunBenchmark, ThreadCountDoesNotChangeOutput) {
  const std::vector<BenchmarkDataset> data{SmallDataset("a", 8),
                                           SmallDataset("b", 9)};
  const std::vector<Method> methods{Method::kPno, Method::kMlpCrossEntropy,
                                    Method::kMspCart, Method::kKnn};
  const std::vector<IncentiveSpec> grid{IncentiveSpec::Parse("1/15"),
                                        IncentiveSpec::Parse("1/3")};
  ExperimentConfig one = FastConfig();
  ExperimentConfig four = FastConfig();
  four.threads = 4;
  std::ostringstream a;
  std::ostringstream b;
  WriteReportCsv(a, RunBenchmark(data, methods, grid, one));
  WriteReportCsv(b, RunBenchmark(data, methods, grid, four));
  EXPECT_EQ(a.str(), b.str());
}

TEST(RunBenchmark, OptimalProfitFallsAsTheIncentiveGrows) {
  const std::vector<BenchmarkDataset> data{SmallDataset("a", 10),
                                           SmallDataset("b", 11)};
  const auto rows = RunBenchmark(data, {Method::kConstant},
                                 StandardIncentiveGrid(), FastConfig());
  EXPECT_TRUE(OptimalProfitNonIncreasing(rows));
  auto broken = rows;
  broken.back().optimal_profit = broken.front().optimal_profit + 1e6;
  EXPECT_FALSE(OptimalProfitNonIncreasing(broken));
}

ProfitReport Row(const std::string& ds, const std::string& method,
                 double profit) {
  ProfitReport r;
  r.dataset = ds;
  r.d_label = "1/10";
  r.d = 8.5;
  r.method = method;
  r.profit = profit;
  r.optimal_profit = 100.0;
  r.gap = (100.0 - profit) / 100.0;
  return r;
}

TEST(Reports, CsvHasOneLinePerRowAndNanForFailures) {
  std::vector<ProfitReport> rows{Row("a", "pno", 10.0), Row("a", "knn", 5.0)};
  rows[1].ok = false;
  rows[1].profit = std::nan("");
  rows[1].error = "boom, with comma";
  std::ostringstream os;
  WriteReportCsv(os, rows);
  const csv::Table t = csv::Parse(os.str());
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.header[0], "dataset");
  const int profit = t.ColumnIndex("profit");
  const int message = t.ColumnIndex("message");
  ASSERT_GE(profit, 0);
  EXPECT_EQ(t.rows[0][profit], "10.000000");
  EXPECT_EQ(t.rows[1][profit], "nan");
  EXPECT_EQ(t.rows[1][message], "boom, with comma");
}

TEST(Reports, RankTableAndSummary) {
  std::vector<ProfitReport> rows;
  for (const std::string ds : {"a", "b", "c", "d"}) {
    rows.push_back(Row(ds, "pno", 30.0));
    rows.push_back(Row(ds, "logistic", 20.0));
    rows.push_back(Row(ds, "knn", 10.0));
  }
  const RankTable t = RankFromReports(rows, "1/10");
  EXPECT_EQ(t.k(), 3u);
  EXPECT_EQ(t.n(), 4u);
  EXPECT_EQ(t.average_rank[0], 1.0);
  const std::string json = SummaryJson(rows, 0.05);
  EXPECT_NE(json.find("\"1/10\""), std::string::npos);
  EXPECT_NE(json.find("\"friedman\""), std::string::npos);
  EXPECT_NE(json.find("\"holm\""), std::string::npos);
}

TEST(Reports, SummaryWithTwoMethodsReportsWhyFriedmanIsMissing) {
  std::vector<ProfitReport> rows{Row("a", "pno", 3.0), Row("a", "knn", 1.0),
                                 Row("b", "pno", 3.0), Row("b", "knn", 1.0)};
  const std::string json = SummaryJson(rows, 0.05);
  EXPECT_NE(json.find("\"friedman\": null"), std::string::npos);
  EXPECT_NE(json.find("friedman_error"), std::string::npos);
}

TEST(Sweep, TablesIncludeTheOptimumAndPerDatasetPoints) {
  std::vector<ProfitReport> rows{Row("a", "pno", 40.0), Row("b", "pno", 20.0)};
  const SweepTables t = BuildSweepTables(rows);
  bool has_optimal = false;
  for (const auto& c : t.curves) {
    if (c.method == "optimal") {
      has_optimal = true;
      EXPECT_DOUBLE_EQ(c.mean_profit, 100.0);
    }
    if (c.method == "pno") {
      EXPECT_DOUBLE_EQ(c.mean_profit, 30.0);
      EXPECT_NEAR(c.d_fraction, 0.1, 1e-12);
    }
  }
  EXPECT_TRUE(has_optimal);
  EXPECT_EQ(t.points.size(), 2u);

  testing::TempDir dir("sweep");
  WriteSweepTables(dir.path(), t);
  for (const char* f : {"profit_vs_d.csv", "gap_vs_d.csv",
                        "eta_profit_vs_d.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir.path() / f)) << f;
  }
}

}  // namespace
}  // namespace churnpno
