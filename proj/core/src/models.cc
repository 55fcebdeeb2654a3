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

#include "churnpno/models.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <string>

#include "churnpno/error.h"

namespace churnpno {

std::string ToString(LossKind kind) {
  switch (kind) {
    case LossKind::kSmoothRegret:
      return "smooth_regret";
    case LossKind::kCrossEntropy:
      return "cross_entropy";
  }
  return "unknown";
}

LossKind LossKindFromString(const std::string& name) {
  if (name == "smooth_regret") return LossKind::kSmoothRegret;
  if (name == "cross_entropy") return LossKind::kCrossEntropy;
  throw ArgumentError("unknown loss '" + name +
                      "' (expected smooth_regret or cross_entropy)");
}

Mlp InitMlp(int input_dim, int hidden_dim, std::uint64_t seed) {
  if (input_dim < 1 || hidden_dim < 1) {
    throw ArgumentError("InitMlp: dimensions must be >= 1");
  }
  Mlp mlp;
  mlp.input_dim = input_dim;
  mlp.hidden_dim = hidden_dim;
  mlp.seed = seed;
  mlp.params.assign(Mlp::ParamCount(input_dim, hidden_dim), 0.0);

  std::mt19937_64 rng(seed);
  const double r1 = std::sqrt(6.0 / (input_dim + hidden_dim));
  std::uniform_real_distribution<double> u1(-r1, r1);
  for (double& w : mlp.W1()) w = u1(rng);
  const double r2 = std::sqrt(6.0 / (hidden_dim + 1));
  std::uniform_real_distribution<double> u2(-r2, r2);
  for (double& w : mlp.w2()) w = u2(rng);
  return mlp;
}

int DefaultHiddenSize(int input_dim) {
  return std::max(1, (input_dim + 1) / 2);
}

namespace {

void CheckInput(const Mlp& mlp, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(mlp.input_dim)) {
    throw ArgumentError("Mlp: input has " + std::to_string(x.size()) +
                        " features, network expects " +
                        std::to_string(mlp.input_dim));
  }
}

// Four independent partial sums; the order is fixed, so results do not
// depend on the build.
double Dot(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    s0 += a[j] * b[j];
    s1 += a[j + 1] * b[j + 1];
    s2 += a[j + 2] * b[j + 2];
    s3 += a[j + 3] * b[j + 3];
  }
  for (; j < n; ++j) s0 += a[j] * b[j];
  return (s0 + s1) + (s2 + s3);
}

// Fills `hidden` with the activations and returns the logit.
double ForwardInto(const Mlp& mlp, std::span<const double> x,
                   std::span<double> hidden) {
  const auto in = static_cast<std::size_t>(mlp.input_dim);
  const auto w1 = mlp.W1();
  const auto b1 = mlp.b1();
  const auto w2 = mlp.w2();
  double logit = mlp.b2();
  for (std::size_t h = 0; h < hidden.size(); ++h) {
    const double* row = w1.data() + h * in;
    hidden[h] = std::tanh(b1[h] + Dot(row, x.data(), in));
    logit += w2[h] * hidden[h];
  }
  return logit;
}

double Softplus(double a) {
  return std::max(a, 0.0) + std::log1p(std::exp(-std::abs(a)));
}

}  // namespace

double ForwardLogit(const Mlp& mlp, std::span<const double> x) {
  CheckInput(mlp, x);
  std::vector<double> hidden(static_cast<std::size_t>(mlp.hidden_dim));
  return ForwardInto(mlp, x, hidden);
}

double Forward(const Mlp& mlp, std::span<const double> x) {
  return Sigmoid(ForwardLogit(mlp, x));
}

std::vector<double> ScoreAll(const Mlp& mlp, const Dataset& ds) {
  std::vector<double> scores;
  scores.reserve(ds.size());
  std::vector<double> hidden(static_cast<std::size_t>(mlp.hidden_dim));
  for (const auto& r : ds.records) {
    CheckInput(mlp, r.features);
    scores.push_back(Sigmoid(ForwardInto(mlp, r.features, hidden)));
  }
  return scores;
}

void AdamStep(std::span<double> params, std::span<const double> grads,
              AdamState& state, double learning_rate, const AdamConfig& cfg) {
  if (grads.size() != params.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw ArgumentError("AdamStep: shape mismatch");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;
    params[i] -= learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
  }
}

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0)) {
    throw ArgumentError("train: learning rate must be > 0");
  }
  if (epochs < 1) throw ArgumentError("train: epochs must be >= 1");
  if (batch_size < 0) throw ArgumentError("train: batch size must be >= 0");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0) ||
      !(adam.beta2 >= 0.0 && adam.beta2 < 1.0)) {
    throw ArgumentError("train: Adam betas must be in [0, 1)");
  }
  if (!(adam.epsilon > 0.0)) {
    throw ArgumentError("train: Adam epsilon must be > 0");
  }
}

int EffectiveBatchSize(const TrainConfig& cfg, std::size_t n) {
  if (cfg.batch_size > 0) {
    return static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(cfg.batch_size), n));
  }
  return n <= 1024 ? static_cast<int>(n) : 128;
}

double LossFromLogit(LossKind kind, Label y, double logit,
                     const CampaignParams& p, double clv) {
  switch (kind) {
    case LossKind::kSmoothRegret:
      return SmoothRegret(y, Sigmoid(logit), p, clv);
    case LossKind::kCrossEntropy:
      // -[y log s + (1-y) log(1-s)] with s = sigmoid(logit).
      return Softplus(logit) - ToInt(y) * logit;
  }
  return 0.0;
}

double LossGradFromLogit(LossKind kind, Label y, double logit,
                         const CampaignParams& p, double clv) {
  const double s = Sigmoid(logit);
  switch (kind) {
    case LossKind::kSmoothRegret:
      return SmoothRegretGrad(y, s, p, clv) * s * (1.0 - s);
    case LossKind::kCrossEntropy:
      return s - ToInt(y);
  }
  return 0.0;
}

namespace {

struct LossAndGrad {
  double loss;
  double grad;  // d loss / d logit
};

// LossFromLogit and LossGradFromLogit in one pass: the smooth-regret pair
// shares both sigmoids, halving the exponentials per record.
LossAndGrad LossAndGradFromLogit(LossKind kind, Label y, double logit,
                                 const CampaignParams& p, double clv) {
  const double s = Sigmoid(logit);
  if (kind == LossKind::kCrossEntropy) {
    return {Softplus(logit) - ToInt(y) * logit, s - ToInt(y)};
  }
  const double g = SurrogateDecision(s, Midpoint(p, clv), p.slope);
  const double loss = RelaxedCampaignCost(g, y, p, clv) -
                      CampaignCost(OptimalDecision(y, p, clv), y, p, clv);
  // dg/ds = -slope * g * (1 - g).
  const double grad =
      TargetCost(y, p, clv) * (-p.slope * g * (1.0 - g)) * s * (1.0 - s);
  return {loss, grad};
}

}  // namespace

double BatchLoss(const Mlp& mlp, LossKind kind, const Dataset& ds,
                 std::span<const std::size_t> batch, const CampaignParams& p,
                 std::span<double> grad) {
  if (batch.empty()) return 0.0;
  const bool want_grad = !grad.empty();
  if (want_grad) {
    if (grad.size() != mlp.params.size()) {
      throw ArgumentError("BatchLoss: gradient buffer size mismatch");
    }
    std::fill(grad.begin(), grad.end(), 0.0);
  }
  const auto in = static_cast<std::size_t>(mlp.input_dim);
  const auto hd = static_cast<std::size_t>(mlp.hidden_dim);
  const double scale = 1.0 / static_cast<double>(batch.size());
  std::vector<double> hidden(hd);

  double* g_w1 = want_grad ? grad.data() : nullptr;
  double* g_b1 = want_grad ? grad.data() + hd * in : nullptr;
  double* g_w2 = want_grad ? g_b1 + hd : nullptr;
  const auto w2 = mlp.w2();

  double total = 0.0;
  for (std::size_t idx : batch) {
    const CustomerRecord& r = ds.records[idx];
    CheckInput(mlp, r.features);
    const double logit = ForwardInto(mlp, r.features, hidden);
    if (!want_grad) {
      total += LossFromLogit(kind, r.label, logit, p, r.clv);
      continue;
    }
    const LossAndGrad lg =
        LossAndGradFromLogit(kind, r.label, logit, p, r.clv);
    total += lg.loss;
    const double g = lg.grad * scale;
    grad.back() += g;
    for (std::size_t h = 0; h < hd; ++h) {
      g_w2[h] += g * hidden[h];
      const double delta = g * w2[h] * (1.0 - hidden[h] * hidden[h]);
      g_b1[h] += delta;
      double* row = g_w1 + h * in;
      for (std::size_t j = 0; j < in; ++j) row[j] += delta * r.features[j];
    }
  }
  return total * scale;
}

double MeanLoss(const Mlp& mlp, LossKind kind, const Dataset& ds,
                const CampaignParams& p) {
  std::vector<std::size_t> all(ds.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return BatchLoss(mlp, kind, ds, all, p);
}

TrainResult Train(const Mlp& init, const Dataset& train,
                  const CampaignParams& p, const TrainConfig& cfg,
                  const EpochObserver& observer) {
  cfg.Validate();
  p.Validate();
  if (train.empty()) throw ArgumentError("Train: empty training set");
  if (train.width() != static_cast<std::size_t>(init.input_dim)) {
    throw ArgumentError("Train: dataset width does not match network input");
  }

  TrainResult out{init, {}};
  Mlp& mlp = out.model;
  AdamState adam(mlp.params.size());
  std::vector<double> grad(mlp.params.size());
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(cfg.seed);
  const auto batch = static_cast<std::size_t>(
      EffectiveBatchSize(cfg, train.size()));

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_total = 0.0;
    std::size_t batch_no = 0;
    for (std::size_t start = 0; start < order.size();
         start += batch, ++batch_no) {
      const std::size_t len = std::min(batch, order.size() - start);
      const std::span<const std::size_t> ids(order.data() + start, len);
      const double loss = BatchLoss(mlp, cfg.loss, train, ids, p, grad);
      const bool finite =
          std::isfinite(loss) &&
          std::all_of(grad.begin(), grad.end(),
                      [](double g) { return std::isfinite(g); });
      if (!finite) {
        throw TrainingError("non-finite loss at epoch " +
                            std::to_string(epoch + 1) + ", batch " +
                            std::to_string(batch_no + 1));
      }
      epoch_total += loss * static_cast<double>(len);
      AdamStep(mlp.params, grad, adam, cfg.learning_rate, cfg.adam);
    }
    out.epoch_loss.push_back(epoch_total /
                             static_cast<double>(order.size()));
    if (observer) observer(epoch + 1, mlp);
  }
  return out;
}

GradientCheckResult GradientCheck(const Mlp& mlp, LossKind kind,
                                  const Dataset& batch,
                                  const CampaignParams& p, double h) {
  if (!(h >= 1e-8 && h <= 1e-4)) {
    throw ArgumentError("GradientCheck: h must be in [1e-8, 1e-4]");
  }
  std::vector<std::size_t> all(batch.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<double> analytic(mlp.params.size());
  BatchLoss(mlp, kind, batch, all, p, analytic);

  GradientCheckResult res;
  Mlp probe = mlp;
  for (std::size_t i = 0; i < probe.params.size(); ++i) {
    const double saved = probe.params[i];
    probe.params[i] = saved + h;
    const double up = BatchLoss(probe, kind, batch, all, p);
    probe.params[i] = saved - h;
    const double down = BatchLoss(probe, kind, batch, all, p);
    probe.params[i] = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double abs_err = std::abs(analytic[i] - numeric);
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric),
                                   kGradientCheckFloor});
    res.max_absolute_error = std::max(res.max_absolute_error, abs_err);
    if (abs_err / denom > res.max_relative_error) {
      res.max_relative_error = abs_err / denom;
      res.worst_index = i;
    }
  }
  return res;
}

double LogisticModel::Score(std::span<const double> x) const {
  if (x.size() != weights.size()) {
    throw ArgumentError("LogisticModel: dimension mismatch");
  }
  double a = bias;
  for (std::size_t j = 0; j < x.size(); ++j) a += weights[j] * x[j];
  return Sigmoid(a);
}

LogisticModel FitLogistic(const Dataset& train, const LogisticConfig& cfg) {
  if (train.empty()) throw ArgumentError("FitLogistic: empty training set");
  if (!(cfg.learning_rate > 0.0) || cfg.iterations < 1) {
    throw ArgumentError("FitLogistic: invalid configuration");
  }
  const std::size_t k = train.width();
  const double scale = 1.0 / static_cast<double>(train.size());
  LogisticModel model{std::vector<double>(k, 0.0), 0.0};
  std::vector<double> gw(k);
  for (int it = 0; it < cfg.iterations; ++it) {
    std::fill(gw.begin(), gw.end(), 0.0);
    double gb = 0.0;
    double loss = 0.0;
    for (const auto& r : train.records) {
      double a = model.bias;
      for (std::size_t j = 0; j < k; ++j) a += model.weights[j] * r.features[j];
      loss += Softplus(a) - ToInt(r.label) * a;
      const double err = (Sigmoid(a) - ToInt(r.label)) * scale;
      gb += err;
      for (std::size_t j = 0; j < k; ++j) gw[j] += err * r.features[j];
    }
    if (!std::isfinite(loss)) {
      throw TrainingError("FitLogistic: non-finite loss at iteration " +
                          std::to_string(it + 1));
    }
    for (std::size_t j = 0; j < k; ++j) {
      model.weights[j] -=
          cfg.learning_rate * (gw[j] + cfg.l2 * model.weights[j]);
    }
    model.bias -= cfg.learning_rate * gb;
  }
  return model;
}

double KnnScore(const Dataset& train, std::span<const double> x, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > train.size()) {
    throw ArgumentError("KnnScore: k must be in [1, " +
                        std::to_string(train.size()) + "], got " +
                        std::to_string(k));
  }
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto& f = train.records[i].features;
    if (f.size() != x.size()) {
      throw ArgumentError("KnnScore: dimension mismatch");
    }
    double d2 = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double dx = f[j] - x[j];
      d2 += dx * dx;
    }
    dist.emplace_back(d2, i);
  }
  const auto kk = static_cast<std::size_t>(k);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(kk),
                    dist.end());
  std::size_t non_churners = 0;
  for (std::size_t i = 0; i < kk; ++i) {
    if (!IsChurner(train.records[dist[i].second].label)) ++non_churners;
  }
  return static_cast<double>(non_churners) / static_cast<double>(k);
}

double CartTree::Score(std::span<const double> x) const {
  if (nodes.empty()) throw ArgumentError("CartTree: empty tree");
  int i = 0;
  while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
    const CartNode& n = nodes[static_cast<std::size_t>(i)];
    if (static_cast<std::size_t>(n.feature) >= x.size()) {
      throw ArgumentError("CartTree: dimension mismatch");
    }
    i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                              : n.right;
  }
  return nodes[static_cast<std::size_t>(i)].value;
}

int CartTree::Depth() const {
  if (nodes.empty()) return 0;
  std::function<int(int)> depth = [&](int i) -> int {
    const CartNode& n = nodes[static_cast<std::size_t>(i)];
    if (n.feature < 0) return 0;
    return 1 + std::max(depth(n.left), depth(n.right));
  };
  return depth(0);
}

namespace {

double Gini(double positives, double count) {
  if (count <= 0.0) return 0.0;
  const double p = positives / count;
  return 2.0 * p * (1.0 - p);
}

class CartBuilder {
 public:
  CartBuilder(const Dataset& ds, const CartConfig& cfg) : ds_(ds), cfg_(cfg) {}

  int Build(std::vector<std::size_t> ids, int depth) {
    const int index = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    std::size_t pos = 0;
    for (std::size_t i : ids) pos += IsChurner(ds_.records[i].label) ? 0 : 1;
    const double n = static_cast<double>(ids.size());
    {
      CartNode& node = tree_.nodes.back();
      node.count = ids.size();
      node.value = static_cast<double>(pos) / n;
    }
    const auto min_leaf = static_cast<std::size_t>(std::max(1, cfg_.min_leaf));
    if (depth >= cfg_.max_depth || pos == 0 || pos == ids.size() ||
        ids.size() < 2 * min_leaf) {
      return index;
    }

    const double parent = Gini(static_cast<double>(pos), n);
    double best_impurity = parent;
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::size_t> sorted = ids;
    for (std::size_t f = 0; f < ds_.width(); ++f) {
      std::stable_sort(sorted.begin(), sorted.end(),
                       [&](std::size_t a, std::size_t b) {
                         return ds_.records[a].features[f] <
                                ds_.records[b].features[f];
                       });
      std::size_t left_pos = 0;
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        left_pos += IsChurner(ds_.records[sorted[i]].label) ? 0 : 1;
        const std::size_t left_n = i + 1;
        const std::size_t right_n = sorted.size() - left_n;
        const double v = ds_.records[sorted[i]].features[f];
        const double next = ds_.records[sorted[i + 1]].features[f];
        if (v == next || left_n < min_leaf || right_n < min_leaf) continue;
        const double impurity =
            (static_cast<double>(left_n) *
                 Gini(static_cast<double>(left_pos),
                      static_cast<double>(left_n)) +
             static_cast<double>(right_n) *
                 Gini(static_cast<double>(pos - left_pos),
                      static_cast<double>(right_n))) /
            n;
        if (impurity < best_impurity - 1e-12) {
          best_impurity = impurity;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (v + next);
        }
      }
    }
    if (best_feature < 0) return index;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t i : ids) {
      (ds_.records[i].features[static_cast<std::size_t>(best_feature)] <=
               best_threshold
           ? left
           : right)
          .push_back(i);
    }
    const int l = Build(std::move(left), depth + 1);
    const int r = Build(std::move(right), depth + 1);
    CartNode& node = tree_.nodes[static_cast<std::size_t>(index)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = l;
    node.right = r;
    return index;
  }

  CartTree Take() { return std::move(tree_); }

 private:
  const Dataset& ds_;
  CartConfig cfg_;
  CartTree tree_;
};

}  // namespace

CartTree FitCart(const Dataset& train, const CartConfig& cfg) {
  if (train.empty()) throw ArgumentError("FitCart: empty training set");
  if (cfg.max_depth < 0 || cfg.min_leaf < 1) {
    throw ArgumentError("FitCart: max_depth >= 0 and min_leaf >= 1 required");
  }
  std::vector<std::size_t> ids(train.size());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  CartBuilder builder(train, cfg);
  builder.Build(std::move(ids), 0);
  return builder.Take();
}

}  // namespace churnpno
