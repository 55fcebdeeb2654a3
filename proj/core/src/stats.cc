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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/fisher_f.hpp>

#include "churnpno/error.h"

namespace churnpno {

RankTable RankMethods(std::vector<std::string> methods,
                      std::vector<std::string> datasets,
                      std::vector<std::vector<double>> profit) {
  const std::size_t k = methods.size();
  const std::size_t n = datasets.size();
  if (k == 0 || n == 0) throw ArgumentError("RankMethods: empty matrix");
  if (profit.size() != k) {
    throw ArgumentError("RankMethods: expected one profit row per method");
  }
  for (std::size_t m = 0; m < k; ++m) {
    if (profit[m].size() != n) {
      throw ArgumentError("RankMethods: method '" + methods[m] +
                          "' has a ragged row");
    }
    for (std::size_t d = 0; d < n; ++d) {
      if (!std::isfinite(profit[m][d])) {
        throw ArgumentError("RankMethods: missing cell (" + methods[m] +
                            ", " + datasets[d] + ")");
      }
    }
  }

  RankTable t;
  t.rank.assign(k, std::vector<double>(n, 0.0));
  std::vector<std::size_t> order(k);
  for (std::size_t d = 0; d < n; ++d) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return profit[a][d] > profit[b][d];
                     });
    std::size_t i = 0;
    while (i < k) {
      std::size_t j = i;
      while (j + 1 < k && profit[order[j + 1]][d] == profit[order[i]][d]) ++j;
      // Positions i..j (0-based) share rank mean(i+1 .. j+1).
      const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t p = i; p <= j; ++p) t.rank[order[p]][d] = shared;
      i = j + 1;
    }
  }
  t.average_rank.assign(k, 0.0);
  for (std::size_t m = 0; m < k; ++m) {
    t.average_rank[m] =
        std::accumulate(t.rank[m].begin(), t.rank[m].end(), 0.0) /
        static_cast<double>(n);
  }
  t.methods = std::move(methods);
  t.datasets = std::move(datasets);
  t.profit = std::move(profit);
  return t;
}

FriedmanResult FriedmanImanDavenport(std::span<const double> average_ranks,
                                     int n_datasets) {
  const auto k = static_cast<double>(average_ranks.size());
  const auto n = static_cast<double>(n_datasets);
  if (average_ranks.size() < 3) {
    throw ArgumentError("Friedman test needs k >= 3 methods, got " +
                        std::to_string(average_ranks.size()));
  }
  if (n_datasets < 2) {
    throw ArgumentError("Friedman test needs N >= 2 datasets, got " +
                        std::to_string(n_datasets));
  }
  double sum_sq = 0.0;
  for (double r : average_ranks) sum_sq += r * r;
  FriedmanResult res;
  res.chi2 = 12.0 * n / (k * (k + 1.0)) *
             (sum_sq - k * (k + 1.0) * (k + 1.0) / 4.0);
  const double denom = n * (k - 1.0) - res.chi2;
  if (denom == 0.0) {
    throw ArgumentError(
        "Iman-Davenport correction undefined: N(k-1) equals chi2 "
        "(perfectly consistent rankings)");
  }
  res.f_stat = (n - 1.0) * res.chi2 / denom;
  res.df1 = k - 1.0;
  res.df2 = (k - 1.0) * (n - 1.0);
  if (res.f_stat <= 0.0) {
    res.p_value = 1.0;
  } else {
    const boost::math::fisher_f dist(res.df1, res.df2);
    res.p_value = boost::math::cdf(boost::math::complement(dist, res.f_stat));
  }
  return res;
}

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

NemenyiResult NemenyiZ(double rank_best, double rank_j, int n_datasets,
                       int k_methods) {
  if (n_datasets < 1 || k_methods < 2) {
    throw ArgumentError("NemenyiZ: need N >= 1 and k >= 2");
  }
  const double k = k_methods;
  const double se = std::sqrt(k * (k + 1.0) / (6.0 * n_datasets));
  NemenyiResult res;
  res.z = (rank_j - rank_best) / se;
  // 2(1 - Phi(|z|)) == erfc(|z| / sqrt 2), without cancellation.
  res.p_value = std::erfc(std::abs(res.z) / std::sqrt(2.0));
  return res;
}

std::vector<HolmRow> Holm(std::span<const double> p_values, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ArgumentError("Holm: alpha must be in (0, 1)");
  }
  std::vector<HolmRow> rows;
  bool still_rejecting = true;
  for (std::size_t i = 0; i < p_values.size(); ++i) {
    HolmRow row;
    row.p_value = p_values[i];
    row.threshold = alpha / static_cast<double>(i + 1);  // j - 1 = i + 1
    row.reject = row.p_value < row.threshold;
    still_rejecting = still_rejecting && row.reject;
    row.step_down_reject = still_rejecting;
    rows.push_back(row);
  }
  return rows;
}

HolmReport CompareToBest(const RankTable& table, double alpha) {
  const std::size_t k = table.k();
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return table.average_rank[a] < table.average_rank[b];
                   });
  HolmReport rep;
  rep.alpha = alpha;
  rep.control = table.methods[order[0]];
  rep.control_rank = table.average_rank[order[0]];

  std::vector<double> p;
  std::vector<NemenyiResult> tests;
  for (std::size_t i = 1; i < k; ++i) {
    tests.push_back(NemenyiZ(rep.control_rank, table.average_rank[order[i]],
                             static_cast<int>(table.n()),
                             static_cast<int>(k)));
    p.push_back(tests.back().p_value);
  }
  rep.rows = Holm(p, alpha);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    rep.rows[i].method = table.methods[order[i + 1]];
    rep.rows[i].average_rank = table.average_rank[order[i + 1]];
    rep.rows[i].z = tests[i].z;
  }
  return rep;
}

}  // namespace churnpno
