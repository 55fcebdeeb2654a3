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

#ifndef CHURNPNO_SYNTHETIC_H_
#define CHURNPNO_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "churnpno/domain.h"

namespace churnpno {

struct SyntheticSpec {
  std::string name = "synthetic";
  int n_train = 800;
  int n_test = 200;
  int n_features = 24;
  double churn_rate = 0.17;
  double mean_clv = 85.0;  // euros
  // Standard deviation of log CLV.
  double clv_dispersion = 1.0;
  // Mahalanobis distance between the churner and non-churner feature means.
  double signal_strength = 1.5;
  // Correlation between the latent log-CLV factor and the churn indicator;
  // positive values make high-CLV customers churn more often.
  double clv_churn_correlation = 0.0;
  std::uint64_t seed = 1;

  // Throws ArgumentError on an infeasible spec.
  void Validate() const;
};

struct SyntheticData {
  Dataset train;
  Dataset test;
};

// Each split gets exactly round(churn_rate * n) churners at random
// positions. Features are N(0, I) plus signal_strength * a for churners,
// with a fixed random unit direction a. log CLV = dispersion * (rho * c +
// sqrt(1 - rho^2) * e) with c the standardized churn indicator and e ~
// N(0, 1); CLVs are then rescaled so the pooled train+test mean equals
// mean_clv exactly. Deterministic per seed.
SyntheticData GenerateSynthetic(const SyntheticSpec& spec);

// Twelve specs mirroring the monthly customer bases used for the benchmark
// (sizes, churn rates and mean CLVs), named jan ... dec.
std::vector<SyntheticSpec> MonthlyPresets(std::uint64_t seed = 2017);

}  // namespace churnpno

#endif  // CHURNPNO_SYNTHETIC_H_
