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

#include "churnpno/model_io.h"

#include <fstream>
#include <sstream>

#include "churnpno/error.h"
#include "json.hpp"

namespace churnpno {

using nlohmann::json;

std::string MlpToJson(const Mlp& mlp, const TrainConfig* train) {
  json j;
  j["format"] = "churnpno.mlp";
  j["version"] = 1;
  j["input_dim"] = mlp.input_dim;
  j["hidden_dim"] = mlp.hidden_dim;
  j["activation"] = "tanh";
  j["seed"] = mlp.seed;
  const auto w1 = mlp.W1();
  json rows = json::array();
  const auto in = static_cast<std::size_t>(mlp.input_dim);
  for (std::size_t h = 0; h < static_cast<std::size_t>(mlp.hidden_dim); ++h) {
    rows.push_back(std::vector<double>(w1.begin() + static_cast<long>(h * in),
                                       w1.begin() +
                                           static_cast<long>((h + 1) * in)));
  }
  j["W1"] = std::move(rows);
  j["b1"] = std::vector<double>(mlp.b1().begin(), mlp.b1().end());
  j["w2"] = std::vector<double>(mlp.w2().begin(), mlp.w2().end());
  j["b2"] = mlp.b2();
  if (train != nullptr) {
    j["train"] = {{"learning_rate", train->learning_rate},
                  {"epochs", train->epochs},
                  {"batch_size", train->batch_size},
                  {"loss", ToString(train->loss)},
                  {"seed", train->seed},
                  {"beta1", train->adam.beta1},
                  {"beta2", train->adam.beta2},
                  {"epsilon", train->adam.epsilon}};
  }
  return j.dump(2) + "\n";
}

namespace {

json ParseModel(std::string_view text, const char* format) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != format) {
    throw DataError(std::string("model file: expected format '") + format +
                    "'");
  }
  return j;
}

}  // namespace

MlpFile MlpFromJson(std::string_view text) {
  const json j = ParseModel(text, "churnpno.mlp");
  try {
    if (j.at("activation").get<std::string>() != "tanh") {
      throw DataError("model file: unsupported activation");
    }
    MlpFile out;
    Mlp& mlp = out.model;
    mlp.input_dim = j.at("input_dim").get<int>();
    mlp.hidden_dim = j.at("hidden_dim").get<int>();
    mlp.seed = j.at("seed").get<std::uint64_t>();
    if (mlp.input_dim < 1 || mlp.hidden_dim < 1) {
      throw DataError("model file: dimensions must be >= 1");
    }
    const auto in = static_cast<std::size_t>(mlp.input_dim);
    const auto hd = static_cast<std::size_t>(mlp.hidden_dim);
    mlp.params.reserve(Mlp::ParamCount(mlp.input_dim, mlp.hidden_dim));
    const auto& rows = j.at("W1");
    if (rows.size() != hd) throw DataError("model file: W1 has wrong shape");
    for (const auto& row : rows) {
      const auto values = row.get<std::vector<double>>();
      if (values.size() != in) {
        throw DataError("model file: W1 has wrong shape");
      }
      mlp.params.insert(mlp.params.end(), values.begin(), values.end());
    }
    for (const char* key : {"b1", "w2"}) {
      const auto values = j.at(key).get<std::vector<double>>();
      if (values.size() != hd) {
        throw DataError(std::string("model file: ") + key +
                        " has wrong length");
      }
      mlp.params.insert(mlp.params.end(), values.begin(), values.end());
    }
    mlp.params.push_back(j.at("b2").get<double>());

    if (j.contains("train")) {
      const auto& t = j.at("train");
      TrainConfig cfg;
      cfg.learning_rate = t.at("learning_rate").get<double>();
      cfg.epochs = t.at("epochs").get<int>();
      cfg.batch_size = t.at("batch_size").get<int>();
      cfg.loss = LossKindFromString(t.at("loss").get<std::string>());
      cfg.seed = t.at("seed").get<std::uint64_t>();
      cfg.adam.beta1 = t.at("beta1").get<double>();
      cfg.adam.beta2 = t.at("beta2").get<double>();
      cfg.adam.epsilon = t.at("epsilon").get<double>();
      out.train = cfg;
    }
    return out;
  } catch (const json::exception& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
}

std::string LogisticToJson(const LogisticModel& model) {
  json j;
  j["format"] = "churnpno.logistic";
  j["version"] = 1;
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  return j.dump(2) + "\n";
}

LogisticModel LogisticFromJson(std::string_view text) {
  const json j = ParseModel(text, "churnpno.logistic");
  try {
    LogisticModel m;
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    return m;
  } catch (const json::exception& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed for " + path.string());
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace churnpno
