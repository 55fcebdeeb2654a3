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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "churnpno/error.h"
#include "churnpno/synthetic.h"
#include "test_util.h"

namespace churnpno {
namespace {

using testing::DefaultCampaign;

Mlp RandomMlp(std::mt19937_64& rng, int in, int hidden, double scale) {
  Mlp mlp = InitMlp(in, hidden, rng());
  std::uniform_real_distribution<double> u(-scale, scale);
  for (double& w : mlp.params) w = u(rng);
  return mlp;
}

TEST(Mlp, LayoutAndInit) {
  const Mlp mlp = InitMlp(24, 12, 5);
  EXPECT_EQ(mlp.params.size(), 24u * 12u + 12u + 12u + 1u);
  EXPECT_EQ(mlp.W1().size(), 288u);
  const double r1 = std::sqrt(6.0 / 36.0);
  for (double w : mlp.W1()) EXPECT_LE(std::abs(w), r1);
  for (double b : mlp.b1()) EXPECT_EQ(b, 0.0);
  EXPECT_EQ(mlp.b2(), 0.0);
  EXPECT_EQ(InitMlp(24, 12, 5).params, mlp.params);
  EXPECT_NE(InitMlp(24, 12, 6).params, mlp.params);
  EXPECT_THROW(InitMlp(0, 3, 1), ArgumentError);
}

TEST(Mlp, DefaultHiddenSizeIsHalfTheInputsRoundedUp) {
  EXPECT_EQ(DefaultHiddenSize(24), 12);
  EXPECT_EQ(DefaultHiddenSize(7), 4);
  EXPECT_EQ(DefaultHiddenSize(1), 1);
}

TEST(Mlp, ForwardHandComputed) {
  Mlp mlp = InitMlp(2, 1, 1);
  // W1 = [0.5, -1], b1 = 0.25, w2 = 2, b2 = -0.5
  mlp.params = {0.5, -1.0, 0.25, 2.0, -0.5};
  const std::vector<double> x{1.0, 0.5};
  const double logit = 2.0 * std::tanh(0.5 - 0.5 + 0.25) - 0.5;
  EXPECT_NEAR(ForwardLogit(mlp, x), logit, 1e-15);
  EXPECT_NEAR(Forward(mlp, x), 1.0 / (1.0 + std::exp(-logit)), 1e-15);
  EXPECT_THROW(Forward(mlp, std::vector<double>{1.0}), ArgumentError);
}

TEST(Mlp, ForwardIsFiniteForBoundedInputsAndWeights) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Mlp mlp = RandomMlp(rng, 6, 3, 10.0);
    std::vector<double> x(6);
    for (double& v : x) v = u(rng);
    const double s = Forward(mlp, x);
    EXPECT_TRUE(std::isfinite(s));
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(Loss, CrossEntropyFromLogitIsStable) {
  const CampaignParams p = DefaultCampaign();
  EXPECT_NEAR(LossFromLogit(LossKind::kCrossEntropy, Label::kNonChurner, 0.0,
                            p, 85.0),
              std::log(2.0), 1e-15);
  EXPECT_NEAR(LossFromLogit(LossKind::kCrossEntropy, Label::kChurner, 800.0,
                            p, 85.0),
              800.0, 1e-9);
  EXPECT_LT(LossFromLogit(LossKind::kCrossEntropy, Label::kNonChurner, 800.0,
                          p, 85.0),
            1e-300);
  EXPECT_NEAR(LossGradFromLogit(LossKind::kCrossEntropy, Label::kChurner, 0.0,
                                p, 85.0),
              0.5, 1e-15);
}

TEST(Loss, NamesRoundTrip) {
  for (LossKind k : {LossKind::kSmoothRegret, LossKind::kCrossEntropy}) {
    EXPECT_EQ(LossKindFromString(ToString(k)), k);
  }
  EXPECT_THROW(LossKindFromString("mse"), ArgumentError);
}

// Central differences over every parameter, 20 random nets and batches per
// loss.
TEST(GradientCheck, BothLossesMatchFiniteDifferences) {
  std::mt19937_64 rng(2718);
  for (LossKind kind : {LossKind::kSmoothRegret, LossKind::kCrossEntropy}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Mlp mlp = RandomMlp(rng, 5, 3, 1.0);
      const Dataset batch = testing::RandomDataset(rng, 8, 5, 0.5);
      const CampaignParams p = DefaultCampaign(2.0 + trial % 5);
      const GradientCheckResult r = GradientCheck(mlp, kind, batch, p, 1e-6);
      EXPECT_LT(r.max_relative_error, 1e-5)
          << ToString(kind) << " trial " << trial << " param "
          << r.worst_index;
    }
  }
}

TEST(GradientCheck, SaturatedNetworkHasVanishingGradients) {
  Mlp mlp = InitMlp(3, 2, 1);
  std::fill(mlp.params.begin(), mlp.params.end(), 0.0);
  mlp.b2() = 40.0;  // sigmoid saturates at 1
  std::mt19937_64 rng(1);
  const Dataset batch = testing::RandomDataset(rng, 6, 3);
  const GradientCheckResult r = GradientCheck(
      mlp, LossKind::kSmoothRegret, batch, DefaultCampaign(), 1e-6);
  EXPECT_LT(r.max_absolute_error, 1e-8);
}

TEST(GradientCheck, RejectsStepOutsideRange) {
  const Mlp mlp = InitMlp(2, 1, 1);
  std::mt19937_64 rng(1);
  const Dataset batch = testing::RandomDataset(rng, 3, 2);
  EXPECT_THROW(GradientCheck(mlp, LossKind::kCrossEntropy, batch,
                             DefaultCampaign(), 1e-3),
               ArgumentError);
}

TEST(Adam, FirstStepMovesEachParameterByTheLearningRate) {
  std::vector<double> w{1.0, -2.0, 0.5};
  const std::vector<double> g{0.3, -4.0, 1e-3};
  AdamState s(3);
  AdamStep(w, g, s, 0.1);
  EXPECT_NEAR(w[0], 0.9, 1e-6);
  EXPECT_NEAR(w[1], -1.9, 1e-6);
  EXPECT_NEAR(w[2], 0.4, 1e-4);
  EXPECT_EQ(s.step, 1);
}

TEST(Train, EffectiveBatchSize) {
  TrainConfig cfg;
  cfg.batch_size = 0;
  EXPECT_EQ(EffectiveBatchSize(cfg, 800), 800);
  EXPECT_EQ(EffectiveBatchSize(cfg, 1024), 1024);
  EXPECT_EQ(EffectiveBatchSize(cfg, 1025), 128);
  cfg.batch_size = 64;
  EXPECT_EQ(EffectiveBatchSize(cfg, 800), 64);
  EXPECT_EQ(EffectiveBatchSize(cfg, 10), 10);
}

TEST(Train, DeterministicAndPrefixConsistent) {
  std::mt19937_64 rng(3);
  const Dataset ds = testing::RandomDataset(rng, 120, 4);
  const CampaignParams p = DefaultCampaign(8.0);
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.epochs = 12;
  cfg.batch_size = 32;
  cfg.seed = 17;
  const Mlp init = InitMlp(4, 2, 9);
  const TrainResult a = Train(init, ds, p, cfg);
  const TrainResult b = Train(init, ds, p, cfg);
  EXPECT_EQ(a.model.params, b.model.params);
  EXPECT_EQ(a.epoch_loss.size(), 12u);

  std::vector<double> at_five;
  Train(init, ds, p, cfg, [&](int epoch, const Mlp& m) {
    if (epoch == 5) at_five = m.params;
  });
  TrainConfig shorter = cfg;
  shorter.epochs = 5;
  EXPECT_EQ(Train(init, ds, p, shorter).model.params, at_five);
}

TEST(Train, ReducesTheSmoothRegret) {
  SyntheticSpec spec;
  spec.signal_strength = 3.0;
  spec.n_features = 6;
  const SyntheticData data = GenerateSynthetic(spec);
  const CampaignParams p = DefaultCampaign(8.5);
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.epochs = 30;
  cfg.seed = 1;
  const Mlp init = InitMlp(6, 3, 2);
  const double before = MeanLoss(init, LossKind::kSmoothRegret, data.train, p);
  const TrainResult r = Train(init, data.train, p, cfg);
  EXPECT_LT(MeanLoss(r.model, LossKind::kSmoothRegret, data.train, p),
            before - 1.0);
}

TEST(Train, BelowBreakEvenNobodyIsTargeted) {
  std::mt19937_64 rng(12);
  Dataset ds = testing::RandomDataset(rng, 80, 3);
  const CampaignParams p = DefaultCampaign();
  for (auto& r : ds.records) r.clv = 1.0 + 7.0 * (r.clv / 205.0);
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.epochs = 20;
  const TrainResult r = Train(InitMlp(3, 2, 1), ds, p, cfg);
  const auto scores = ScoreAll(r.model, ds);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    ASSERT_LT(ds.records[i].clv, BreakEvenClv(p));
    EXPECT_EQ(Prescribe(scores[i], Midpoint(p, ds.records[i].clv)),
              Decision::kSkip);
  }
}

TEST(Train, NonFiniteLossIsReported) {
  std::mt19937_64 rng(12);
  Dataset ds = testing::RandomDataset(rng, 20, 2);
  ds.records[3].features[0] = std::numeric_limits<double>::quiet_NaN();
  TrainConfig cfg;
  cfg.epochs = 2;
  try {
    Train(InitMlp(2, 1, 1), ds, DefaultCampaign(), cfg);
    FAIL() << "NaN input trained";
  } catch (const TrainingError& e) {
    EXPECT_NE(std::string(e.what()).find("epoch 1"), std::string::npos);
  }
}

TEST(Train, RejectsBadConfig) {
  std::mt19937_64 rng(1);
  const Dataset ds = testing::RandomDataset(rng, 10, 2);
  TrainConfig cfg;
  cfg.learning_rate = 0.0;
  EXPECT_THROW(Train(InitMlp(2, 1, 1), ds, DefaultCampaign(), cfg),
               ArgumentError);
  cfg = TrainConfig{};
  EXPECT_THROW(Train(InitMlp(3, 1, 1), ds, DefaultCampaign(), cfg),
               ArgumentError);
}

TEST(Logistic, SeparatesLinearData) {
  SyntheticSpec spec;
  spec.signal_strength = 5.0;
  spec.n_features = 4;
  const SyntheticData data = GenerateSynthetic(spec);
  const LogisticModel m = FitLogistic(data.train, LogisticConfig{});
  std::size_t correct = 0;
  for (const auto& r : data.test.records) {
    const bool churner = m.Score(r.features) <= 0.5;
    correct += churner == IsChurner(r.label);
  }
  EXPECT_GT(static_cast<double>(correct) / data.test.size(), 0.95);
}

TEST(Knn, HandExampleAndIndexTieBreak) {
  Dataset ds;
  ds.schema = {"x"};
  ds.records = {{{0.0}, Label::kChurner, 1},
                {{1.0}, Label::kNonChurner, 1},
                {{-1.0}, Label::kChurner, 1},
                {{5.0}, Label::kNonChurner, 1}};
  const std::vector<double> x{0.0};
  EXPECT_DOUBLE_EQ(KnnScore(ds, x, 1), 0.0);
  // Records 1 and 2 tie at distance 1; the lower index wins.
  EXPECT_DOUBLE_EQ(KnnScore(ds, x, 2), 0.5);
  EXPECT_DOUBLE_EQ(KnnScore(ds, x, 4), 0.5);
  EXPECT_THROW(KnnScore(ds, x, 5), ArgumentError);
  EXPECT_THROW(KnnScore(ds, x, 0), ArgumentError);
}

TEST(Knn, InvariantUnderPermutationOfTrainingRecords) {
  std::mt19937_64 rng(8);
  const Dataset ds = testing::RandomDataset(rng, 60, 3);
  Dataset shuffled = ds;
  std::shuffle(shuffled.records.begin(), shuffled.records.end(), rng);
  const Dataset queries = testing::RandomDataset(rng, 30, 3);
  for (const auto& q : queries.records) {
    EXPECT_DOUBLE_EQ(KnnScore(ds, q.features, 5),
                     KnnScore(shuffled, q.features, 5));
  }
}

TEST(Cart, RespectsDepthAndLeafSize) {
  std::mt19937_64 rng(21);
  const Dataset ds = testing::RandomDataset(rng, 300, 4);
  CartConfig cfg;
  cfg.max_depth = 3;
  cfg.min_leaf = 10;
  const CartTree tree = FitCart(ds, cfg);
  EXPECT_LE(tree.Depth(), 3);
  for (const auto& node : tree.nodes) {
    if (node.feature < 0) {
      EXPECT_GE(node.count, 10u);
    }
    EXPECT_GE(node.value, 0.0);
    EXPECT_LE(node.value, 1.0);
  }
}

TEST(Cart, SplitsAPerfectlySeparableFeature) {
  Dataset ds;
  ds.schema = {"noise", "x"};
  for (int i = 0; i < 20; ++i) {
    ds.records.push_back({{static_cast<double>(i % 3), i < 10 ? -1.0 : 1.0},
                          i < 10 ? Label::kChurner : Label::kNonChurner,
                          1.0});
  }
  const CartTree tree = FitCart(ds, CartConfig{});
  EXPECT_EQ(tree.nodes[0].feature, 1);
  EXPECT_DOUBLE_EQ(tree.nodes[0].threshold, 0.0);
  EXPECT_DOUBLE_EQ(tree.Score(std::vector<double>{0.0, -3.0}), 0.0);
  EXPECT_DOUBLE_EQ(tree.Score(std::vector<double>{0.0, 3.0}), 1.0);
  EXPECT_EQ(tree.Depth(), 1);
}

}  // namespace
}  // namespace churnpno
