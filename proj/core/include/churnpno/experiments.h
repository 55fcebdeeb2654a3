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

#ifndef CHURNPNO_EXPERIMENTS_H_
#define CHURNPNO_EXPERIMENTS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "churnpno/decision.h"
#include "churnpno/domain.h"
#include "churnpno/models.h"
#include "churnpno/resampling.h"
#include "churnpno/stats.h"

namespace churnpno {

enum class Method {
  kPno,              // smooth-regret network, per-customer midpoints
  kMlpCrossEntropy,  // same network, cross-entropy, class threshold
  kLogistic,
  kKnn,
  kCart,
  kMspLogistic,  // classifier + CLV-segment thresholds fit on train
  kMspKnn,
  kMspCart,
  kOracle,    // true labels as scores
  kConstant,  // one score for everybody
};

std::string MethodName(Method m);
Method MethodFromName(const std::string& name);
// pno, msp_logistic, msp_knn, msp_cart, logistic, knn, cart.
std::vector<Method> DefaultMethods();

// Retention incentive d, either in euros or as a fraction of the training
// set's mean CLV. Parsed from "1/20" or "CLV/20" (fraction) or a plain
// number (euros).
struct IncentiveSpec {
  bool clv_fraction = true;
  double value = 1.0 / 20.0;
  std::string label = "1/20";

  static IncentiveSpec Parse(const std::string& text);
  static IncentiveSpec Fraction(int denominator);
  double Resolve(double mean_clv) const;
};

// d in {CLV/20, CLV/15, CLV/10, CLV/5, CLV/3}.
std::vector<IncentiveSpec> StandardIncentiveGrid();

struct CvConfig {
  std::vector<double> learning_rates{0.01, 0.001, 0.0001};
  std::vector<int> epochs{10, 50, 100};
  int splits = 5;
  double train_fraction = 0.8;
  int seeds = 10;
};

struct CvCell {
  double learning_rate = 0.0;
  int epochs = 0;
  double mean_loss = 0.0;  // +inf when every run failed
  int runs = 0;
  int failures = 0;
};

struct CvResult {
  TrainConfig best;
  std::vector<CvCell> cells;  // ascending learning rate, then epochs
  int failures = 0;
};

// Monte Carlo cross-validation over (learning rate, epochs). Each cell is
// scored by the mean validation loss (base.loss) over `splits` random
// train/validation splits times `seeds` network initializations. The
// lowest mean wins; ties go to the smaller learning rate, then fewer
// epochs. Throws TrainingError if every run of every cell failed.
CvResult MonteCarloCv(const Dataset& train, const CampaignParams& p,
                      const CvConfig& cv, const TrainConfig& base,
                      int hidden_size, std::uint64_t seed);

enum class PnoAccuracyMode { kClassThreshold, kMidpoint };

struct ExperimentConfig {
  // f, gamma and slope; the incentive is set per grid point.
  CampaignParams campaign;
  int segments = 2;
  int hidden_size = 0;  // 0 selects ceil(features / 2)
  TrainConfig train;    // batch size and Adam moments; lr/epochs if !tune
  bool tune = true;
  CvConfig cv;
  SmoteConfig smote;
  LogisticConfig logistic;
  int knn_k = 5;
  CartConfig cart;
  double class_threshold = 0.5;
  PnoAccuracyMode pno_accuracy = PnoAccuracyMode::kClassThreshold;
  // Train the smooth-regret network only on customers above break-even.
  bool exclude_below_break_even = false;
  std::uint64_t seed = 2017;
  int threads = 0;  // 0 = hardware concurrency
};

struct BenchmarkDataset {
  std::string name;
  Dataset train;
  Dataset test;
};

struct ProfitReport {
  std::string dataset;
  std::string d_label;
  double d = 0.0;
  std::string method;
  double profit = 0.0;          // total test profit, euros
  double optimal_profit = 0.0;  // with the true labels
  double accuracy = 0.0;
  double gap = 0.0;  // normalized optimality gap (NaN if undefined)
  double eta = 0.0;  // targeted fraction
  double learning_rate = 0.0;  // network methods only
  int epochs = 0;
  bool ok = true;
  std::string error;
};

// Every (dataset, incentive, method) cell; rows ordered by dataset, then
// incentive, then method, in input order. Features are standardized with
// training statistics; statistical baselines train on SMOTE-balanced data.
// A failing cell is reported with ok = false; the others still run.
// Output is identical for any thread count.
std::vector<ProfitReport> RunBenchmark(
    const std::vector<BenchmarkDataset>& datasets,
    const std::vector<Method>& methods,
    const std::vector<IncentiveSpec>& incentives,
    const ExperimentConfig& cfg);

// CSV: dataset,d_spec,d,method,profit,accuracy,gap,eta,optimal_profit,
// learning_rate,epochs,status,message.
void WriteReportCsv(std::ostream& os, const std::vector<ProfitReport>& rows);

// Profit matrix (methods x datasets) for one incentive label.
RankTable RankFromReports(const std::vector<ProfitReport>& rows,
                          const std::string& d_label);

// Pretty-printed JSON with, per incentive: average ranks and profits,
// Friedman / Iman-Davenport and the Holm table against the best method.
std::string SummaryJson(const std::vector<ProfitReport>& rows, double alpha);

struct SweepTables {
  struct Curve {
    std::string method;  // "optimal" for the attainable optimum
    std::string d_label;
    double d_fraction = 0.0;  // mean d / mean CLV over datasets
    double mean_profit = 0.0;
    double mean_gap = 0.0;
  };
  struct Point {
    std::string dataset;
    std::string method;
    std::string d_label;
    double d = 0.0;
    double eta = 0.0;
    double profit = 0.0;
  };
  std::vector<Curve> curves;  // profit (and gap) vs d, averaged
  std::vector<Point> points;  // per dataset targeted fraction and profit
};

SweepTables BuildSweepTables(const std::vector<ProfitReport>& rows);

// Writes profit_vs_d.csv, gap_vs_d.csv and eta_profit_vs_d.csv into `dir`.
void WriteSweepTables(const std::filesystem::path& dir,
                      const SweepTables& tables);

// True when, for every dataset, the optimal profit never increases as the
// incentive grows.
bool OptimalProfitNonIncreasing(const std::vector<ProfitReport>& rows);

}  // namespace churnpno

#endif  // CHURNPNO_EXPERIMENTS_H_
