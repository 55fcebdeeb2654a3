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

#ifndef CHURNPNO_STATS_H_
#define CHURNPNO_STATS_H_

// Nonparametric comparison of k methods over N datasets: average ranks,
// Friedman statistic with the Iman-Davenport F correction, pairwise z tests
// against the best-ranked method, and Holm thresholds alpha / (j - 1).

#include <span>
#include <string>
#include <vector>

namespace churnpno {

struct RankTable {
  std::vector<std::string> methods;   // k
  std::vector<std::string> datasets;  // N
  // profit[m][d]; higher is better.
  std::vector<std::vector<double>> profit;
  // rank[m][d]; 1 = best, ties share the mean of their positions.
  std::vector<std::vector<double>> rank;
  std::vector<double> average_rank;  // per method

  std::size_t k() const { return methods.size(); }
  std::size_t n() const { return datasets.size(); }
};

// Ranks methods within each dataset by descending profit. Throws
// ArgumentError on a ragged or incomplete (NaN) matrix.
RankTable RankMethods(std::vector<std::string> methods,
                      std::vector<std::string> datasets,
                      std::vector<std::vector<double>> profit);

struct FriedmanResult {
  double chi2 = 0.0;    // Friedman chi-square
  double f_stat = 0.0;  // Iman-Davenport F
  double df1 = 0.0;     // k - 1
  double df2 = 0.0;     // (k - 1)(N - 1)
  double p_value = 1.0;
};

// chi2 = 12N / (k(k+1)) * (sum R_j^2 - k(k+1)^2 / 4),
// F = (N-1) chi2 / (N(k-1) - chi2), p from F(k-1, (k-1)(N-1)).
// Throws ArgumentError unless k >= 3 and N >= 2, or when N(k-1) == chi2.
FriedmanResult FriedmanImanDavenport(std::span<const double> average_ranks,
                                     int n_datasets);

// Standard normal CDF.
double NormalCdf(double x);

struct NemenyiResult {
  double z = 0.0;
  double p_value = 1.0;  // two-sided
};

// z = (R_j - R_best) / sqrt(k(k+1) / (6N)), p = 2(1 - Phi(|z|)).
NemenyiResult NemenyiZ(double rank_best, double rank_j, int n_datasets,
                       int k_methods);

struct HolmRow {
  std::string method;
  double average_rank = 0.0;
  double z = 0.0;
  double p_value = 1.0;
  double threshold = 0.0;  // alpha / (j - 1)
  // p < threshold, judged row by row.
  bool reject = false;
  // Sequential step-down: rejected only if every earlier row was rejected.
  bool step_down_reject = false;
};

struct HolmReport {
  double alpha = 0.05;
  std::string control;  // best-ranked method
  double control_rank = 0.0;
  std::vector<HolmRow> rows;  // j = 2 .. k
};

// Holm thresholds for p-values already ordered as comparisons j = 2, 3, ...
// Throws ArgumentError unless alpha is in (0, 1).
std::vector<HolmRow> Holm(std::span<const double> p_values, double alpha);

// Compares every method against the best-ranked one (lowest average rank;
// ties to the earlier method), rows ordered by ascending average rank.
HolmReport CompareToBest(const RankTable& table, double alpha);

}  // namespace churnpno

#endif  // CHURNPNO_STATS_H_
