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

#ifndef CHURNPNO_DECISION_H_
#define CHURNPNO_DECISION_H_

// Cost model of a retention campaign with individual customer lifetime
// values, the score threshold it induces per customer, and the regret loss
// (exact and sigmoid-smoothed) used to train scorers against it.
//
// Costs are signed: a negative cost is a profit. Scores point toward the
// non-churner class; a customer is targeted when its score falls below its
// own midpoint m.

#include <cstdint>
#include <span>
#include <vector>

#include "churnpno/domain.h"

namespace churnpno {

struct CampaignParams {
  double contact_cost = 1.36;  // f, euros per contacted customer
  double incentive = 4.25;     // d, euros paid when the offer is accepted
  double acceptance = 0.3;     // gamma, share of contacted churners retained
  double slope = 10.0;         // s, steepness of the smoothed prescription

  // Throws ArgumentError unless f >= 0, d > 0, 0 < gamma <= 1, s > 0.
  void Validate() const;
};

enum class Decision : std::uint8_t { kSkip = 0, kTarget = 1 };

inline constexpr double ToDouble(Decision z) {
  return z == Decision::kTarget ? 1.0 : 0.0;
}

// Cost of targeting one customer with known label:
// f + y*d + (1-y)*gamma*(d - clv).
double TargetCost(Label y, const CampaignParams& p, double clv);

// z * TargetCost. Zero for an untargeted customer.
double CampaignCost(Decision z, Label y, const CampaignParams& p, double clv);

// Relaxed cost for z in [0, 1]; linear in z.
double RelaxedCampaignCost(double z, Label y, const CampaignParams& p,
                           double clv);

// CLV at which targeting a churner breaks even: d + f/gamma.
double BreakEvenClv(const CampaignParams& p);

// Per-customer score threshold
//   m = (f + gamma*(d - clv)) / (gamma*(d - clv) - d).
// In (0, 1) above break-even, <= 0 at or below it. Throws ArgumentError when
// the denominator vanishes (only reachable for clv <= 0).
double Midpoint(const CampaignParams& p, double clv);

// Step prescription: target iff score < m (ties are not targeted).
Decision Prescribe(double score, double midpoint);

// Cost-minimizing decision under the true label: target churners whose
// targeting cost is negative, nobody else.
Decision OptimalDecision(Label y, const CampaignParams& p, double clv);

// Realized cost of the prescribed decision minus the optimal cost.
double Regret(Label y, double score, const CampaignParams& p, double clv);

// 1 - sigmoid(slope * (score - m)); a smooth stand-in for Prescribe.
double SurrogateDecision(double score, double midpoint, double slope);

// Regret with the step prescription replaced by SurrogateDecision.
double SmoothRegret(Label y, double score, const CampaignParams& p,
                    double clv);

// d SmoothRegret / d score.
double SmoothRegretGrad(Label y, double score, const CampaignParams& p,
                        double clv);

// Numerically stable logistic function.
double Sigmoid(double x);

// -sum of campaign costs. Throws ArgumentError on length mismatch.
double TotalProfit(std::span<const Decision> decisions,
                   std::span<const Label> labels, const CampaignParams& p,
                   std::span<const double> clvs);

std::vector<Decision> OptimalDecisions(std::span<const Label> labels,
                                       const CampaignParams& p,
                                       std::span<const double> clvs);

// Per-customer step prescriptions for a vector of scores.
std::vector<Decision> PrescribeAll(std::span<const double> scores,
                                   const CampaignParams& p,
                                   std::span<const double> clvs);

double OptimalTotalProfit(std::span<const Label> labels,
                          const CampaignParams& p,
                          std::span<const double> clvs);

// (optimal_cost - model_cost) / optimal_cost. 0 at the optimum, 1 at zero
// profit, above 1 for a loss-making campaign. Throws ArgumentError when the
// optimal cost is zero.
double NormalizedGap(double optimal_cost_sum, double model_cost_sum);

}  // namespace churnpno

#endif  // CHURNPNO_DECISION_H_
