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

#ifndef CHURNPNO_PROFIT_METRICS_H_
#define CHURNPNO_PROFIT_METRICS_H_

// Threshold-based campaign profit measured on a finite sample with a single
// (average) CLV per group of customers. Customers with score <= t are
// predicted churners and are targeted.

#include <cstddef>
#include <span>
#include <vector>

#include "churnpno/decision.h"
#include "churnpno/domain.h"

namespace churnpno {

struct ThresholdedEvaluation {
  double threshold = 0.0;
  // Average campaign profit per customer, in euros.
  double profit = 0.0;
  std::size_t targeted_churners = 0;
  std::size_t targeted_non_churners = 0;
  std::size_t churners = 0;
  std::size_t non_churners = 0;
};

// Profit contributed by one targeted churner / non-churner at a given CLV:
// gamma*(clv - d) - f and -(d + f).
double ChurnerGain(const CampaignParams& p, double clv);
double NonChurnerLoss(const CampaignParams& p);

// Empirical average profit at threshold t:
//   [gamma*(clv-d) - f] * (#targeted churners)/n - (d+f) * (#targeted
//   non-churners)/n.
ThresholdedEvaluation ProfitAtThreshold(std::span<const double> scores,
                                        std::span<const Label> labels,
                                        double t, const CampaignParams& p,
                                        double clv_avg);

struct MpResult {
  double value = 0.0;      // maximum average profit per customer
  double threshold = 0.0;  // maximizing t; may be +/- infinity
  ThresholdedEvaluation eval;
};

// Maximum profit over the candidate thresholds
//   {-inf} U {midpoints between consecutive distinct scores} U {+inf}.
// Among equal profits the lowest threshold (smallest campaign) wins.
MpResult MaxProfit(std::span<const double> scores,
                   std::span<const Label> labels, const CampaignParams& p,
                   double clv_avg);

struct MspResult {
  int q = 1;
  std::vector<double> thresholds;   // per segment
  std::vector<double> segment_clv;  // per-segment mean CLV
  std::vector<double> segment_profit;
  // Unweighted mean of the per-segment maxima, euros per customer.
  double value = 0.0;
  SegmentAssignment segments;
};

// Maximum segment profit: CLV-quantile segments (SegmentByClv), each
// maximized independently with its own mean CLV. The segment maxima are
// averaged without weighting by segment size.
MspResult MaxSegmentProfit(std::span<const double> scores,
                           std::span<const Label> labels,
                           std::span<const double> clvs, int q,
                           const CampaignParams& p);

// Optional outer maximization over the number of segments, q in [1, q_max].
MspResult MaxSegmentProfitOverQ(std::span<const double> scores,
                                std::span<const Label> labels,
                                std::span<const double> clvs, int q_max,
                                const CampaignParams& p);

// Segment thresholds fit on one sample, applicable to new customers.
struct SegmentThresholdPolicy {
  std::vector<double> cut_points;  // CLV boundaries between segments
  std::vector<double> thresholds;  // score threshold per segment

  static SegmentThresholdPolicy Fit(std::span<const double> scores,
                                    std::span<const Label> labels,
                                    std::span<const double> clvs, int q,
                                    const CampaignParams& p);
  double ThresholdFor(double clv) const;
  Decision Decide(double score, double clv) const;
};

// Fraction of customers whose predicted class (churner iff score <=
// threshold) equals their label.
double Accuracy(std::span<const double> scores, std::span<const Label> labels,
                double class_threshold);

// Fraction of predicted labels equal to the true labels.
double Accuracy(std::span<const Label> predicted,
                std::span<const Label> labels);

// Share of targeted customers (eta). Throws ArgumentError on empty input.
double TargetedFraction(std::span<const Decision> decisions);

}  // namespace churnpno

#endif  // CHURNPNO_PROFIT_METRICS_H_
