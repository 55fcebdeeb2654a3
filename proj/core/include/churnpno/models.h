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

#ifndef CHURNPNO_MODELS_H_
#define CHURNPNO_MODELS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "churnpno/decision.h"
#include "churnpno/domain.h"

namespace churnpno {

enum class Activation { kTanh };
enum class LossKind { kSmoothRegret, kCrossEntropy };

std::string ToString(LossKind kind);
LossKind LossKindFromString(const std::string& name);

// One-hidden-layer scorer: score = sigmoid(w2 . act(W1 x + b1) + b2).
// Parameters live in one flat buffer laid out as [W1 | b1 | w2 | b2], W1
// row-major (hidden x input), so optimizers can treat them as a vector.
struct Mlp {
  int input_dim = 0;
  int hidden_dim = 0;
  Activation activation = Activation::kTanh;
  std::uint64_t seed = 0;
  std::vector<double> params;

  static std::size_t ParamCount(int input_dim, int hidden_dim) {
    const auto in = static_cast<std::size_t>(input_dim);
    const auto h = static_cast<std::size_t>(hidden_dim);
    return h * in + h + h + 1;
  }

  std::span<double> W1() { return {params.data(), W1Size()}; }
  std::span<const double> W1() const { return {params.data(), W1Size()}; }
  std::span<double> b1() { return {params.data() + W1Size(), Hidden()}; }
  std::span<const double> b1() const {
    return {params.data() + W1Size(), Hidden()};
  }
  std::span<double> w2() {
    return {params.data() + W1Size() + Hidden(), Hidden()};
  }
  std::span<const double> w2() const {
    return {params.data() + W1Size() + Hidden(), Hidden()};
  }
  double& b2() { return params.back(); }
  double b2() const { return params.back(); }

 private:
  std::size_t Hidden() const { return static_cast<std::size_t>(hidden_dim); }
  std::size_t W1Size() const {
    return Hidden() * static_cast<std::size_t>(input_dim);
  }
};

// Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
Mlp InitMlp(int input_dim, int hidden_dim, std::uint64_t seed);

// Hidden size used when none is configured: ceil(input_dim / 2).
int DefaultHiddenSize(int input_dim);

// Pre-sigmoid output. Throws ArgumentError on a dimension mismatch.
double ForwardLogit(const Mlp& mlp, std::span<const double> x);
double Forward(const Mlp& mlp, std::span<const double> x);
std::vector<double> ScoreAll(const Mlp& mlp, const Dataset& ds);

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t step = 0;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

// Bias-corrected Adam update applied in place.
void AdamStep(std::span<double> params, std::span<const double> grads,
              AdamState& state, double learning_rate,
              const AdamConfig& cfg = {});

struct TrainConfig {
  double learning_rate = 1e-3;
  int epochs = 50;
  // Mini-batch size, capped at n. 0 selects full batch for n <= 1024 and
  // 128 otherwise.
  int batch_size = 64;
  AdamConfig adam;
  LossKind loss = LossKind::kSmoothRegret;
  std::uint64_t seed = 0;

  void Validate() const;
};

int EffectiveBatchSize(const TrainConfig& cfg, std::size_t n);

// Per-customer loss as a function of the network logit, and its derivative.
// Cross-entropy targets the label value (1 = non-churner).
double LossFromLogit(LossKind kind, Label y, double logit,
                     const CampaignParams& p, double clv);
double LossGradFromLogit(LossKind kind, Label y, double logit,
                         const CampaignParams& p, double clv);

// Mean loss over `batch` (indices into ds). When `grad` is non-empty it
// receives d(mean loss)/d(params), sized like mlp.params.
double BatchLoss(const Mlp& mlp, LossKind kind, const Dataset& ds,
                 std::span<const std::size_t> batch, const CampaignParams& p,
                 std::span<double> grad = {});

double MeanLoss(const Mlp& mlp, LossKind kind, const Dataset& ds,
                const CampaignParams& p);

struct TrainResult {
  Mlp model;
  std::vector<double> epoch_loss;  // mean training loss per epoch
};

// Called after each epoch with the 1-based epoch number.
using EpochObserver = std::function<void(int epoch, const Mlp& model)>;

// Shuffled mini-batch Adam. Deterministic for a given seed; the first e
// epochs of a longer run are identical to a run of e epochs. Throws
// TrainingError naming the epoch and batch on a non-finite loss.
TrainResult Train(const Mlp& init, const Dataset& train,
                  const CampaignParams& p, const TrainConfig& cfg,
                  const EpochObserver& observer = {});

struct GradientCheckResult {
  // |analytic - numeric| / max(|analytic|, |numeric|, kGradientCheckFloor)
  double max_relative_error = 0.0;
  double max_absolute_error = 0.0;
  std::size_t worst_index = 0;
};

inline constexpr double kGradientCheckFloor = 1e-3;

// Compares BatchLoss gradients with central differences of step h over
// every parameter. Throws ArgumentError unless h is in [1e-8, 1e-4].
GradientCheckResult GradientCheck(const Mlp& mlp, LossKind kind,
                                  const Dataset& batch,
                                  const CampaignParams& p, double h);

// Baselines ---------------------------------------------------------------

struct LogisticConfig {
  double learning_rate = 0.1;
  int iterations = 500;
  double l2 = 0.0;
};

struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;

  double Score(std::span<const double> x) const;
};

// Full-batch gradient descent on mean cross-entropy (+ l2/2 |w|^2).
LogisticModel FitLogistic(const Dataset& train, const LogisticConfig& cfg);

// Share of the k nearest training records (Euclidean; ties by index) that
// are non-churners. Throws ArgumentError unless 1 <= k <= train size.
double KnnScore(const Dataset& train, std::span<const double> x, int k);

struct CartConfig {
  int max_depth = 6;
  int min_leaf = 5;
};

struct CartNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // go left when x[feature] <= threshold
  int left = -1;
  int right = -1;
  double value = 0.0;  // non-churner rate of the training records here
  std::size_t count = 0;
};

struct CartTree {
  std::vector<CartNode> nodes;  // nodes[0] is the root

  double Score(std::span<const double> x) const;
  int Depth() const;
};

// Greedy Gini splits on single features, thresholds at midpoints between
// consecutive distinct values. A split must leave min_leaf records on each
// side and strictly reduce impurity.
CartTree FitCart(const Dataset& train, const CartConfig& cfg);

}  // namespace churnpno

#endif  // CHURNPNO_MODELS_H_
