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

#include "churnpno/synthetic.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "churnpno/error.h"
#include "churnpno/random.h"

namespace churnpno {

void SyntheticSpec::Validate() const {
  if (n_train < 10 || n_test < 10) {
    throw ArgumentError("synthetic '" + name + "': sizes must be >= 10");
  }
  if (n_features < 1) {
    throw ArgumentError("synthetic '" + name + "': n_features must be >= 1");
  }
  if (!(churn_rate > 0.0 && churn_rate < 1.0)) {
    throw ArgumentError("synthetic '" + name +
                        "': churn_rate must be in (0, 1)");
  }
  if (!(mean_clv > 0.0)) {
    throw ArgumentError("synthetic '" + name + "': mean_clv must be > 0");
  }
  if (!(clv_dispersion >= 0.0) || !(signal_strength >= 0.0)) {
    throw ArgumentError("synthetic '" + name +
                        "': dispersion and signal must be >= 0");
  }
  if (!(std::abs(clv_churn_correlation) < 1.0)) {
    throw ArgumentError("synthetic '" + name +
                        "': clv_churn_correlation must be in (-1, 1)");
  }
  const auto churners = [&](int n) {
    return std::llround(churn_rate * n);
  };
  if (churners(n_train) < 1 || churners(n_train) >= n_train ||
      churners(n_test) < 1 || churners(n_test) >= n_test) {
    throw ArgumentError("synthetic '" + name +
                        "': churn_rate leaves a split with a single class");
  }
}

namespace {

void FillSplit(const SyntheticSpec& spec, int n,
               const std::vector<double>& direction, std::mt19937_64& rng,
               Dataset& out) {
  const auto churners = static_cast<std::size_t>(
      std::llround(spec.churn_rate * n));
  std::vector<Label> labels(static_cast<std::size_t>(n), Label::kNonChurner);
  std::fill(labels.begin(), labels.begin() + static_cast<long>(churners),
            Label::kChurner);
  std::shuffle(labels.begin(), labels.end(), rng);

  std::normal_distribution<double> normal(0.0, 1.0);
  const double rate = spec.churn_rate;
  const double indicator_sd = std::sqrt(rate * (1.0 - rate));
  const double rho = spec.clv_churn_correlation;
  const double rest = std::sqrt(1.0 - rho * rho);
  for (Label y : labels) {
    CustomerRecord r;
    r.label = y;
    const double shift = IsChurner(y) ? spec.signal_strength : 0.0;
    r.features.resize(direction.size());
    for (std::size_t j = 0; j < direction.size(); ++j) {
      r.features[j] = normal(rng) + shift * direction[j];
    }
    const double c = ((IsChurner(y) ? 1.0 : 0.0) - rate) / indicator_sd;
    r.clv = std::exp(spec.clv_dispersion * (rho * c + rest * normal(rng)));
    out.records.push_back(std::move(r));
  }
}

}  // namespace

SyntheticData GenerateSynthetic(const SyntheticSpec& spec) {
  spec.Validate();
  std::mt19937_64 rng(DeriveSeed(spec.seed, spec.name));
  std::normal_distribution<double> normal(0.0, 1.0);

  const auto k = static_cast<std::size_t>(spec.n_features);
  std::vector<double> direction(k);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& a : direction) {
      a = normal(rng);
      norm += a * a;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  for (double& a : direction) a /= norm;

  SyntheticData data;
  std::vector<std::string> schema;
  for (std::size_t j = 0; j < k; ++j) schema.push_back("f" + std::to_string(j + 1));
  data.train.name = spec.name + "_train";
  data.test.name = spec.name + "_test";
  data.train.schema = schema;
  data.test.schema = schema;
  FillSplit(spec, spec.n_train, direction, rng, data.train);
  FillSplit(spec, spec.n_test, direction, rng, data.test);

  double sum = 0.0;
  for (const auto& r : data.train.records) sum += r.clv;
  for (const auto& r : data.test.records) sum += r.clv;
  const double scale =
      spec.mean_clv * static_cast<double>(spec.n_train + spec.n_test) / sum;
  for (auto& r : data.train.records) r.clv *= scale;
  for (auto& r : data.test.records) r.clv *= scale;
  return data;
}

std::vector<SyntheticSpec> MonthlyPresets(std::uint64_t seed) {
  struct Row {
    const char* name;
    int n_train;
    int n_test;
    double churn_rate;
    double mean_clv;
  };
  static constexpr Row kRows[] = {
      {"jan", 786, 197, 0.1699, 85.00}, {"feb", 792, 198, 0.1697, 85.00},
      {"mar", 792, 198, 0.1717, 88.20}, {"apr", 818, 205, 0.1632, 88.40},
      {"may", 844, 211, 0.1725, 86.80}, {"jun", 889, 223, 0.1835, 91.20},
      {"jul", 924, 231, 0.1974, 91.00}, {"aug", 930, 233, 0.1823, 92.20},
      {"sep", 938, 235, 0.1935, 90.60}, {"oct", 961, 241, 0.2038, 87.40},
      {"nov", 972, 244, 0.2146, 87.20}, {"dec", 962, 241, 0.1787, 89.40},
  };
  std::vector<SyntheticSpec> specs;
  for (const Row& row : kRows) {
    SyntheticSpec s;
    s.name = row.name;
    s.n_train = row.n_train;
    s.n_test = row.n_test;
    s.churn_rate = row.churn_rate;
    s.mean_clv = row.mean_clv;
    s.seed = seed;
    specs.push_back(s);
  }
  return specs;
}

}  // namespace churnpno
