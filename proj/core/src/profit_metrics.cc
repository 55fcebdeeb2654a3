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

#include "churnpno/profit_metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "churnpno/error.h"

namespace churnpno {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckSameLength(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw ArgumentError(std::string(what) + ": length mismatch (" +
                        std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

double AverageProfit(const CampaignParams& p, double clv_avg,
                     std::size_t churners_hit, std::size_t non_churners_hit,
                     std::size_t n) {
  if (n == 0) return 0.0;
  return (ChurnerGain(p, clv_avg) * static_cast<double>(churners_hit) +
          NonChurnerLoss(p) * static_cast<double>(non_churners_hit)) /
         static_cast<double>(n);
}

}  // namespace

double ChurnerGain(const CampaignParams& p, double clv) {
  return p.acceptance * (clv - p.incentive) - p.contact_cost;
}

double NonChurnerLoss(const CampaignParams& p) {
  return -(p.incentive + p.contact_cost);
}

ThresholdedEvaluation ProfitAtThreshold(std::span<const double> scores,
                                        std::span<const Label> labels,
                                        double t, const CampaignParams& p,
                                        double clv_avg) {
  CheckSameLength(scores.size(), labels.size(), "ProfitAtThreshold");
  ThresholdedEvaluation ev;
  ev.threshold = t;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool churner = IsChurner(labels[i]);
    (churner ? ev.churners : ev.non_churners)++;
    if (scores[i] <= t) {
      (churner ? ev.targeted_churners : ev.targeted_non_churners)++;
    }
  }
  ev.profit = AverageProfit(p, clv_avg, ev.targeted_churners,
                            ev.targeted_non_churners, scores.size());
  return ev;
}

MpResult MaxProfit(std::span<const double> scores,
                   std::span<const Label> labels, const CampaignParams& p,
                   double clv_avg) {
  CheckSameLength(scores.size(), labels.size(), "MaxProfit");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  double best_value = 0.0;  // empty campaign at t = -inf
  double best_t = -kInf;
  std::size_t churners_hit = 0;
  std::size_t others_hit = 0;
  std::size_t i = 0;
  while (i < n) {
    const double s = scores[order[i]];
    // Admit the whole group of tied scores at once.
    while (i < n && scores[order[i]] == s) {
      (IsChurner(labels[order[i]]) ? churners_hit : others_hit)++;
      ++i;
    }
    const double t = i < n ? 0.5 * (s + scores[order[i]]) : kInf;
    const double value =
        AverageProfit(p, clv_avg, churners_hit, others_hit, n);
    if (value > best_value) {
      best_value = value;
      best_t = t;
    }
  }

  MpResult out;
  out.value = best_value;
  out.threshold = best_t;
  out.eval = ProfitAtThreshold(scores, labels, best_t, p, clv_avg);
  out.eval.profit = best_value;
  return out;
}

MspResult MaxSegmentProfit(std::span<const double> scores,
                           std::span<const Label> labels,
                           std::span<const double> clvs, int q,
                           const CampaignParams& p) {
  CheckSameLength(scores.size(), labels.size(), "MaxSegmentProfit");
  CheckSameLength(scores.size(), clvs.size(), "MaxSegmentProfit");
  MspResult out;
  out.q = q;
  out.segments = SegmentByClv(clvs, q);

  std::vector<double> seg_scores;
  std::vector<Label> seg_labels;
  double total = 0.0;
  for (const auto& members : out.segments.Members()) {
    seg_scores.clear();
    seg_labels.clear();
    double clv_sum = 0.0;
    for (std::size_t i : members) {
      seg_scores.push_back(scores[i]);
      seg_labels.push_back(labels[i]);
      clv_sum += clvs[i];
    }
    const double clv_mean = clv_sum / static_cast<double>(members.size());
    const MpResult mp = MaxProfit(seg_scores, seg_labels, p, clv_mean);
    out.thresholds.push_back(mp.threshold);
    out.segment_clv.push_back(clv_mean);
    out.segment_profit.push_back(mp.value);
    total += mp.value;
  }
  out.value = total / static_cast<double>(q);
  return out;
}

MspResult MaxSegmentProfitOverQ(std::span<const double> scores,
                                std::span<const Label> labels,
                                std::span<const double> clvs, int q_max,
                                const CampaignParams& p) {
  if (q_max < 1) throw ArgumentError("MaxSegmentProfitOverQ: q_max < 1");
  q_max = std::min<int>(q_max, static_cast<int>(scores.size()));
  MspResult best = MaxSegmentProfit(scores, labels, clvs, 1, p);
  for (int q = 2; q <= q_max; ++q) {
    MspResult r = MaxSegmentProfit(scores, labels, clvs, q, p);
    if (r.value > best.value) best = std::move(r);
  }
  return best;
}

SegmentThresholdPolicy SegmentThresholdPolicy::Fit(
    std::span<const double> scores, std::span<const Label> labels,
    std::span<const double> clvs, int q, const CampaignParams& p) {
  const MspResult msp = MaxSegmentProfit(scores, labels, clvs, q, p);
  SegmentThresholdPolicy policy;
  policy.cut_points = SegmentCutPoints(clvs, msp.segments);
  policy.thresholds = msp.thresholds;
  return policy;
}

double SegmentThresholdPolicy::ThresholdFor(double clv) const {
  return thresholds[static_cast<std::size_t>(
      SegmentForClv(cut_points, clv))];
}

Decision SegmentThresholdPolicy::Decide(double score, double clv) const {
  return score <= ThresholdFor(clv) ? Decision::kTarget : Decision::kSkip;
}

double Accuracy(std::span<const double> scores, std::span<const Label> labels,
                double class_threshold) {
  CheckSameLength(scores.size(), labels.size(), "Accuracy");
  if (scores.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if ((scores[i] <= class_threshold) == IsChurner(labels[i])) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(scores.size());
}

double Accuracy(std::span<const Label> predicted,
                std::span<const Label> labels) {
  CheckSameLength(predicted.size(), labels.size(), "Accuracy");
  if (labels.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (predicted[i] == labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

double TargetedFraction(std::span<const Decision> decisions) {
  if (decisions.empty()) {
    throw ArgumentError("TargetedFraction: no decisions");
  }
  const auto targeted = std::count(decisions.begin(), decisions.end(),
                                   Decision::kTarget);
  return static_cast<double>(targeted) /
         static_cast<double>(decisions.size());
}

}  // namespace churnpno
