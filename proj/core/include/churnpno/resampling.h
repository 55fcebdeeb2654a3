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

#ifndef CHURNPNO_RESAMPLING_H_
#define CHURNPNO_RESAMPLING_H_

#include <cstdint>

#include "churnpno/domain.h"

namespace churnpno {

struct SmoteConfig {
  int k_neighbors = 5;
  // Desired minority:majority size ratio after balancing, in (0, 1].
  double target_ratio = 1.0;
  std::uint64_t seed = 0;
};

// SMOTE oversampling. Appends synthetic minority records after the original
// records (which are kept verbatim and in order) until the minority class
// reaches round(target_ratio * majority size). Each synthetic record is
//   x + u * (x_nn - x),  clv + u * (clv_nn - clv)
// for a uniformly drawn minority record x, one of its k nearest minority
// neighbours x_nn (Euclidean in feature space, ties by index) and u ~ U(0,1).
// k is clamped to minority size - 1.
//
// Throws DataError for a single-class input or a minority class of size 1,
// ArgumentError for k < 1 or a ratio outside (0, 1].
Dataset SmoteBalance(const Dataset& train, const SmoteConfig& cfg);

}  // namespace churnpno

#endif  // CHURNPNO_RESAMPLING_H_
