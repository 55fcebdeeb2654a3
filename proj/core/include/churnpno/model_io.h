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

#ifndef CHURNPNO_MODEL_IO_H_
#define CHURNPNO_MODEL_IO_H_

// JSON model files. An MLP is stored as
//   {"format": "churnpno.mlp", "version": 1, "input_dim": K, "hidden_dim": H,
//    "activation": "tanh", "seed": S,
//    "W1": [[...K...] x H], "b1": [...H...], "w2": [...H...], "b2": x,
//    "train": {"learning_rate", "epochs", "batch_size", "loss", "seed",
//              "beta1", "beta2", "epsilon"}}          ("train" optional)
// and a logistic model as
//   {"format": "churnpno.logistic", "version": 1, "weights": [...],
//    "bias": x}.
// Reals are written with round-trip precision.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "churnpno/models.h"

namespace churnpno {

struct MlpFile {
  Mlp model;
  std::optional<TrainConfig> train;
};

std::string MlpToJson(const Mlp& mlp, const TrainConfig* train = nullptr);
MlpFile MlpFromJson(std::string_view text);

std::string LogisticToJson(const LogisticModel& model);
LogisticModel LogisticFromJson(std::string_view text);

void WriteTextFile(const std::filesystem::path& path, std::string_view text);
std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace churnpno

#endif  // CHURNPNO_MODEL_IO_H_
