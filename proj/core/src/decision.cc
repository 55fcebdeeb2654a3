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

#include "churnpno/decision.h"

#include <cmath>
#include <string>

#include "churnpno/error.h"

namespace churnpno {

void CampaignParams::Validate() const {
  if (!(contact_cost >= 0.0) || !std::isfinite(contact_cost)) {
    throw ArgumentError("campaign: contact cost f must be >= 0");
  }
  if (!(incentive > 0.0) || !std::isfinite(incentive)) {
    throw ArgumentError("campaign: incentive d must be > 0");
  }
  if (!(acceptance > 0.0 && acceptance <= 1.0)) {
    throw ArgumentError("campaign: acceptance gamma must be in (0, 1]");
  }
  if (!(slope > 0.0) || !std::isfinite(slope)) {
    throw ArgumentError("campaign: slope s must be > 0");
  }
}

double TargetCost(Label y, const CampaignParams& p, double clv) {
  return IsChurner(y)
             ? p.contact_cost + p.acceptance * (p.incentive - clv)
             : p.contact_cost + p.incentive;
}

double CampaignCost(Decision z, Label y, const CampaignParams& p, double clv) {
  return z == Decision::kTarget ? TargetCost(y, p, clv) : 0.0;
}

double RelaxedCampaignCost(double z, Label y, const CampaignParams& p,
                           double clv) {
  return z * TargetCost(y, p, clv);
}

double BreakEvenClv(const CampaignParams& p) {
  return p.incentive + p.contact_cost / p.acceptance;
}

double Midpoint(const CampaignParams& p, double clv) {
  const double churn_term = p.acceptance * (p.incentive - clv);
  const double denom = churn_term - p.incentive;
  if (denom == 0.0) {
    throw ArgumentError("Midpoint: degenerate denominator at clv = " +
                        std::to_string(clv));
  }
  return (p.contact_cost + churn_term) / denom;
}

Decision Prescribe(double score, double midpoint) {
  return score < midpoint ? Decision::kTarget : Decision::kSkip;
}

Decision OptimalDecision(Label y, const CampaignParams& p, double clv) {
  if (!IsChurner(y)) return Decision::kSkip;
  return TargetCost(y, p, clv) < 0.0 ? Decision::kTarget : Decision::kSkip;
}

double Regret(Label y, double score, const CampaignParams& p, double clv) {
  const Decision prescribed = Prescribe(score, Midpoint(p, clv));
  return CampaignCost(prescribed, y, p, clv) -
         CampaignCost(OptimalDecision(y, p, clv), y, p, clv);
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double SurrogateDecision(double score, double midpoint, double slope) {
  // 1 - sigmoid(t) == sigmoid(-t), without cancellation for large t.
  return Sigmoid(-slope * (score - midpoint));
}

double SmoothRegret(Label y, double score, const CampaignParams& p,
                    double clv) {
  const double g = SurrogateDecision(score, Midpoint(p, clv), p.slope);
  return RelaxedCampaignCost(g, y, p, clv) -
         CampaignCost(OptimalDecision(y, p, clv), y, p, clv);
}

double SmoothRegretGrad(Label y, double score, const CampaignParams& p,
                        double clv) {
  const double sig = Sigmoid(p.slope * (score - Midpoint(p, clv)));
  const double dg = -p.slope * sig * (1.0 - sig);
  return TargetCost(y, p, clv) * dg;
}

namespace {

void CheckLengths(std::size_t a, std::size_t b, std::size_t c,
                  const char* what) {
  if (a != b || a != c) {
    throw ArgumentError(std::string(what) + ": length mismatch (" +
                        std::to_string(a) + ", " + std::to_string(b) + ", " +
                        std::to_string(c) + ")");
  }
}

}  // namespace

double TotalProfit(std::span<const Decision> decisions,
                   std::span<const Label> labels, const CampaignParams& p,
                   std::span<const double> clvs) {
  CheckLengths(decisions.size(), labels.size(), clvs.size(), "TotalProfit");
  double cost = 0.0;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    cost += CampaignCost(decisions[i], labels[i], p, clvs[i]);
  }
  return -cost;
}

std::vector<Decision> OptimalDecisions(std::span<const Label> labels,
                                       const CampaignParams& p,
                                       std::span<const double> clvs) {
  CheckLengths(labels.size(), clvs.size(), clvs.size(), "OptimalDecisions");
  std::vector<Decision> z(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    z[i] = OptimalDecision(labels[i], p, clvs[i]);
  }
  return z;
}

std::vector<Decision> PrescribeAll(std::span<const double> scores,
                                   const CampaignParams& p,
                                   std::span<const double> clvs) {
  CheckLengths(scores.size(), clvs.size(), clvs.size(), "PrescribeAll");
  std::vector<Decision> z(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    z[i] = Prescribe(scores[i], Midpoint(p, clvs[i]));
  }
  return z;
}

double OptimalTotalProfit(std::span<const Label> labels,
                          const CampaignParams& p,
                          std::span<const double> clvs) {
  const std::vector<Decision> z = OptimalDecisions(labels, p, clvs);
  return TotalProfit(z, labels, p, clvs);
}

double NormalizedGap(double optimal_cost_sum, double model_cost_sum) {
  if (optimal_cost_sum == 0.0) {
    throw ArgumentError(
        "NormalizedGap: optimal cost is zero, gap is undefined");
  }
  return (optimal_cost_sum - model_cost_sum) / optimal_cost_sum;
}

}  // namespace churnpno
