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

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "churnpno/error.h"

namespace churnpno {

namespace {

double SquaredDistance(const std::vector<double>& a,
                       const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double dx = a[j] - b[j];
    d += dx * dx;
  }
  return d;
}

}  // namespace

Dataset SmoteBalance(const Dataset& train, const SmoteConfig& cfg) {
  if (cfg.k_neighbors < 1) throw ArgumentError("SMOTE: k must be >= 1");
  if (!(cfg.target_ratio > 0.0 && cfg.target_ratio <= 1.0)) {
    throw ArgumentError("SMOTE: target ratio must be in (0, 1]");
  }
  const std::size_t churners = train.CountLabel(Label::kChurner);
  const std::size_t others = train.size() - churners;
  if (churners == 0 || others == 0) {
    throw DataError("SMOTE: training set '" + train.name +
                    "' contains a single class");
  }
  const Label minority =
      churners <= others ? Label::kChurner : Label::kNonChurner;
  const std::size_t n_min = std::min(churners, others);
  const std::size_t n_maj = std::max(churners, others);
  const auto target = static_cast<std::size_t>(
      std::llround(cfg.target_ratio * static_cast<double>(n_maj)));
  if (n_min >= target) return train;
  if (n_min < 2) {
    throw DataError("SMOTE: minority class has a single record");
  }

  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train.records[i].label == minority) pool.push_back(i);
  }
  const std::size_t k =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.k_neighbors),
                            n_min - 1);

  // Neighbour lists, as positions in `pool`.
  std::vector<std::vector<std::size_t>> neighbours(n_min);
  std::vector<std::pair<double, std::size_t>> dist;
  for (std::size_t a = 0; a < n_min; ++a) {
    dist.clear();
    const auto& fa = train.records[pool[a]].features;
    for (std::size_t b = 0; b < n_min; ++b) {
      if (b == a) continue;
      dist.emplace_back(SquaredDistance(fa, train.records[pool[b]].features),
                        b);
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(k),
                      dist.end());
    for (std::size_t i = 0; i < k; ++i) {
      neighbours[a].push_back(dist[i].second);
    }
  }

  Dataset out = train;
  out.records.reserve(train.size() + (target - n_min));
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> pick_base(0, n_min - 1);
  std::uniform_int_distribution<std::size_t> pick_nn(0, k - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t made = n_min; made < target; ++made) {
    const std::size_t a = pick_base(rng);
    const std::size_t b = neighbours[a][pick_nn(rng)];
    const double u = unit(rng);
    const CustomerRecord& x = train.records[pool[a]];
    const CustomerRecord& nn = train.records[pool[b]];
    CustomerRecord s;
    s.label = minority;
    s.features.resize(x.features.size());
    for (std::size_t j = 0; j < x.features.size(); ++j) {
      s.features[j] = x.features[j] + u * (nn.features[j] - x.features[j]);
    }
    s.clv = x.clv + u * (nn.clv - x.clv);
    out.records.push_back(std::move(s));
  }
  return out;
}

}  // namespace churnpno
