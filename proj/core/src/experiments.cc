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

#include "churnpno/experiments.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include "churnpno/csv.h"
#include "churnpno/error.h"
#include "churnpno/profit_metrics.h"
#include "churnpno/random.h"
#include "json.hpp"

namespace churnpno {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

struct MethodInfo {
  Method method;
  const char* name;
};

constexpr MethodInfo kMethods[] = {
    {Method::kPno, "pno"},
    {Method::kMlpCrossEntropy, "mlp_ce"},
    {Method::kLogistic, "logistic"},
    {Method::kKnn, "knn"},
    {Method::kCart, "cart"},
    {Method::kMspLogistic, "msp_logistic"},
    {Method::kMspKnn, "msp_knn"},
    {Method::kMspCart, "msp_cart"},
    {Method::kOracle, "oracle"},
    {Method::kConstant, "constant"},
};

// Scoring models shared by the plain and segment-threshold variants.
enum class Classifier { kNone, kMlpCe, kLogistic, kKnn, kCart };

Classifier ClassifierOf(Method m) {
  switch (m) {
    case Method::kMlpCrossEntropy:
      return Classifier::kMlpCe;
    case Method::kLogistic:
    case Method::kMspLogistic:
      return Classifier::kLogistic;
    case Method::kKnn:
    case Method::kMspKnn:
      return Classifier::kKnn;
    case Method::kCart:
    case Method::kMspCart:
      return Classifier::kCart;
    default:
      return Classifier::kNone;
  }
}

bool UsesSegmentThresholds(Method m) {
  return m == Method::kMspLogistic || m == Method::kMspKnn ||
         m == Method::kMspCart;
}

const char* ClassifierTag(Classifier c) {
  switch (c) {
    case Classifier::kMlpCe:
      return "mlp_ce";
    case Classifier::kLogistic:
      return "logistic";
    case Classifier::kKnn:
      return "knn";
    case Classifier::kCart:
      return "cart";
    case Classifier::kNone:
      break;
  }
  return "none";
}

// Runs fn(0..n-1) on up to `threads` workers. Exceptions must be handled by
// fn itself.
template <typename Fn>
void ParallelFor(std::size_t n, int threads, Fn&& fn) {
  std::size_t workers =
      threads > 0 ? static_cast<std::size_t>(threads)
                  : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

int HiddenSizeFor(const ExperimentConfig& cfg, std::size_t width) {
  return cfg.hidden_size > 0 ? cfg.hidden_size
                             : DefaultHiddenSize(static_cast<int>(width));
}

Dataset Subset(const Dataset& ds, std::span<const std::size_t> ids) {
  Dataset out;
  out.name = ds.name;
  out.schema = ds.schema;
  out.records.reserve(ids.size());
  for (std::size_t i : ids) out.records.push_back(ds.records[i]);
  return out;
}

std::vector<double> ScoreWith(const Dataset& ds, auto&& score) {
  std::vector<double> out;
  out.reserve(ds.size());
  for (const auto& r : ds.records) out.push_back(score(r.features));
  return out;
}

}  // namespace

std::string MethodName(Method m) {
  for (const auto& info : kMethods) {
    if (info.method == m) return info.name;
  }
  return "unknown";
}

Method MethodFromName(const std::string& name) {
  for (const auto& info : kMethods) {
    if (name == info.name) return info.method;
  }
  std::string known;
  for (const auto& info : kMethods) {
    known += known.empty() ? "" : ", ";
    known += info.name;
  }
  throw ArgumentError("unknown method '" + name + "' (known: " + known + ")");
}

std::vector<Method> DefaultMethods() {
  return {Method::kPno,      Method::kMspLogistic, Method::kMspKnn,
          Method::kMspCart,  Method::kLogistic,    Method::kKnn,
          Method::kCart};
}

IncentiveSpec IncentiveSpec::Parse(const std::string& text) {
  const auto slash = text.find('/');
  IncentiveSpec spec;
  spec.label = text;
  if (slash == std::string::npos) {
    double v = 0.0;
    if (!csv::ParseDouble(text, &v) || !(v > 0.0)) {
      throw ArgumentError("incentive '" + text +
                          "': expected a positive amount or a CLV fraction "
                          "like 1/20");
    }
    spec.clv_fraction = false;
    spec.value = v;
    return spec;
  }
  std::string num = text.substr(0, slash);
  const std::string den = text.substr(slash + 1);
  if (num == "CLV" || num == "clv") num = "1";
  double a = 0.0;
  double b = 0.0;
  if (!csv::ParseDouble(num, &a) || !csv::ParseDouble(den, &b) ||
      !(a > 0.0) || !(b > 0.0)) {
    throw ArgumentError("incentive '" + text + "': malformed fraction");
  }
  spec.clv_fraction = true;
  spec.value = a / b;
  return spec;
}

IncentiveSpec IncentiveSpec::Fraction(int denominator) {
  return Parse("1/" + std::to_string(denominator));
}

double IncentiveSpec::Resolve(double mean_clv) const {
  return clv_fraction ? value * mean_clv : value;
}

std::vector<IncentiveSpec> StandardIncentiveGrid() {
  return {IncentiveSpec::Fraction(20), IncentiveSpec::Fraction(15),
          IncentiveSpec::Fraction(10), IncentiveSpec::Fraction(5),
          IncentiveSpec::Fraction(3)};
}

CvResult MonteCarloCv(const Dataset& train, const CampaignParams& p,
                      const CvConfig& cv, const TrainConfig& base,
                      int hidden_size, std::uint64_t seed) {
  if (cv.learning_rates.empty() || cv.epochs.empty()) {
    throw ArgumentError("MonteCarloCv: empty grid");
  }
  if (cv.splits < 1 || cv.seeds < 1 ||
      !(cv.train_fraction > 0.0 && cv.train_fraction < 1.0)) {
    throw ArgumentError("MonteCarloCv: invalid split configuration");
  }
  if (train.size() < 2) throw ArgumentError("MonteCarloCv: too few records");

  std::vector<double> rates = cv.learning_rates;
  std::vector<int> epochs = cv.epochs;
  std::sort(rates.begin(), rates.end());
  rates.erase(std::unique(rates.begin(), rates.end()), rates.end());
  std::sort(epochs.begin(), epochs.end());
  epochs.erase(std::unique(epochs.begin(), epochs.end()), epochs.end());
  if (epochs.front() < 1) throw ArgumentError("MonteCarloCv: epochs < 1");

  const std::size_t n_fit = std::clamp<std::size_t>(
      static_cast<std::size_t>(
          std::llround(cv.train_fraction * static_cast<double>(train.size()))),
      1, train.size() - 1);

  CvResult result;
  for (double lr : rates) {
    for (int e : epochs) result.cells.push_back({lr, e, 0.0, 0, 0});
  }
  const int input = static_cast<int>(train.width());

  std::vector<std::size_t> order(train.size());
  for (int s = 0; s < cv.splits; ++s) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 split_rng(DeriveSeed(seed, "cv-split",
                                         static_cast<std::uint64_t>(s)));
    std::shuffle(order.begin(), order.end(), split_rng);
    const Dataset fit =
        Subset(train, std::span<const std::size_t>(order.data(), n_fit));
    const Dataset valid = Subset(
        train, std::span<const std::size_t>(order.data() + n_fit,
                                            order.size() - n_fit));

    for (int r = 0; r < cv.seeds; ++r) {
      const auto run = static_cast<std::uint64_t>(s * cv.seeds + r);
      const Mlp init =
          InitMlp(input, hidden_size, DeriveSeed(seed, "cv-init", run));
      for (std::size_t li = 0; li < rates.size(); ++li) {
        TrainConfig tc = base;
        tc.learning_rate = rates[li];
        tc.epochs = epochs.back();
        tc.seed = DeriveSeed(seed, "cv-shuffle", run);
        std::size_t next_cell = 0;
        CvCell* cells = &result.cells[li * epochs.size()];
        auto observe = [&](int epoch, const Mlp& model) {
          if (next_cell < epochs.size() && epoch == epochs[next_cell]) {
            const double loss = MeanLoss(model, tc.loss, valid, p);
            if (std::isfinite(loss)) {
              cells[next_cell].mean_loss += loss;
              ++cells[next_cell].runs;
            } else {
              ++cells[next_cell].failures;
            }
            ++next_cell;
          }
        };
        try {
          Train(init, fit, p, tc, observe);
        } catch (const TrainingError&) {
          for (; next_cell < epochs.size(); ++next_cell) {
            ++cells[next_cell].failures;
          }
        }
      }
    }
  }

  const CvCell* best = nullptr;
  for (auto& cell : result.cells) {
    result.failures += cell.failures;
    cell.mean_loss = cell.runs > 0 ? cell.mean_loss / cell.runs : kInf;
    if (cell.runs > 0 && (best == nullptr || cell.mean_loss < best->mean_loss)) {
      best = &cell;
    }
  }
  if (best == nullptr) {
    throw TrainingError("MonteCarloCv: every training run failed");
  }
  result.best = base;
  result.best.learning_rate = best->learning_rate;
  result.best.epochs = best->epochs;
  return result;
}

namespace {

struct PreparedDataset {
  Dataset train;     // standardized
  Dataset test;      // standardized with training statistics
  Dataset balanced;  // SMOTE on the standardized training set
  std::string error;
};

struct ClassifierScores {
  std::vector<double> train;
  std::vector<double> test;
  double learning_rate = 0.0;
  int epochs = 0;
  std::string error;
};

struct NetworkScores {
  std::vector<double> test;
  double learning_rate = 0.0;
  int epochs = 0;
  std::string error;
};

TrainConfig TunedOrFixed(const Dataset& train, const CampaignParams& p,
                         const ExperimentConfig& cfg, LossKind loss,
                         int hidden, std::uint64_t seed) {
  TrainConfig base = cfg.train;
  base.loss = loss;
  if (!cfg.tune) return base;
  return MonteCarloCv(train, p, cfg.cv, base, hidden, seed).best;
}

NetworkScores FitNetwork(const Dataset& train, const Dataset& test,
                         const CampaignParams& p, const ExperimentConfig& cfg,
                         LossKind loss, std::uint64_t seed) {
  const int hidden = HiddenSizeFor(cfg, train.width());
  TrainConfig tc = TunedOrFixed(train, p, cfg, loss, hidden,
                                DeriveSeed(seed, "cv"));
  tc.seed = DeriveSeed(seed, "final-shuffle");
  const Mlp init = InitMlp(static_cast<int>(train.width()), hidden,
                           DeriveSeed(seed, "final-init"));
  const TrainResult trained = Train(init, train, p, tc);
  NetworkScores out;
  out.test = ScoreAll(trained.model, test);
  out.learning_rate = tc.learning_rate;
  out.epochs = tc.epochs;
  return out;
}

ClassifierScores FitClassifier(Classifier c, const PreparedDataset& data,
                               const ExperimentConfig& cfg,
                               std::uint64_t seed) {
  ClassifierScores out;
  switch (c) {
    case Classifier::kLogistic: {
      const LogisticModel m = FitLogistic(data.balanced, cfg.logistic);
      auto score = [&](const std::vector<double>& x) { return m.Score(x); };
      out.train = ScoreWith(data.train, score);
      out.test = ScoreWith(data.test, score);
      break;
    }
    case Classifier::kKnn: {
      const int k = std::min<int>(cfg.knn_k,
                                  static_cast<int>(data.balanced.size()));
      auto score = [&](const std::vector<double>& x) {
        return KnnScore(data.balanced, x, k);
      };
      out.train = ScoreWith(data.train, score);
      out.test = ScoreWith(data.test, score);
      break;
    }
    case Classifier::kCart: {
      const CartTree tree = FitCart(data.balanced, cfg.cart);
      auto score = [&](const std::vector<double>& x) { return tree.Score(x); };
      out.train = ScoreWith(data.train, score);
      out.test = ScoreWith(data.test, score);
      break;
    }
    case Classifier::kMlpCe: {
      // The cross-entropy loss ignores the campaign parameters.
      const CampaignParams unused = cfg.campaign;
      const NetworkScores net = FitNetwork(
          data.balanced, data.test, unused, cfg, LossKind::kCrossEntropy,
          seed);
      out.test = net.test;
      out.learning_rate = net.learning_rate;
      out.epochs = net.epochs;
      break;
    }
    case Classifier::kNone:
      break;
  }
  return out;
}

void FillMetrics(ProfitReport& row, std::span<const Decision> z,
                 std::span<const Label> predicted, const Dataset& test,
                 const CampaignParams& p) {
  const std::vector<Label> labels = test.Labels();
  const std::vector<double> clvs = test.Clvs();
  row.profit = TotalProfit(z, labels, p, clvs);
  row.optimal_profit = OptimalTotalProfit(labels, p, clvs);
  row.accuracy = Accuracy(predicted, labels);
  row.eta = TargetedFraction(z);
  row.gap = row.optimal_profit == 0.0
                ? kNaN
                : NormalizedGap(-row.optimal_profit, -row.profit);
}

std::vector<Label> ThresholdPredictions(std::span<const double> scores,
                                        double threshold) {
  std::vector<Label> out;
  out.reserve(scores.size());
  for (double s : scores) {
    out.push_back(s <= threshold ? Label::kChurner : Label::kNonChurner);
  }
  return out;
}

std::vector<Label> DecisionsAsPredictions(std::span<const Decision> z) {
  std::vector<Label> out;
  out.reserve(z.size());
  for (Decision d : z) {
    out.push_back(d == Decision::kTarget ? Label::kChurner
                                         : Label::kNonChurner);
  }
  return out;
}

std::vector<Decision> ThresholdDecisions(std::span<const double> scores,
                                         double threshold) {
  std::vector<Decision> z;
  z.reserve(scores.size());
  for (double s : scores) {
    z.push_back(s <= threshold ? Decision::kTarget : Decision::kSkip);
  }
  return z;
}

}  // namespace

std::vector<ProfitReport> RunBenchmark(
    const std::vector<BenchmarkDataset>& datasets,
    const std::vector<Method>& methods,
    const std::vector<IncentiveSpec>& incentives,
    const ExperimentConfig& cfg) {
  if (datasets.empty() || methods.empty() || incentives.empty()) {
    throw ArgumentError("RunBenchmark: need datasets, methods and incentives");
  }
  const std::size_t n_data = datasets.size();

  // Standardization and SMOTE, once per dataset.
  std::vector<PreparedDataset> prepared(n_data);
  ParallelFor(n_data, cfg.threads, [&](std::size_t i) {
    PreparedDataset& pd = prepared[i];
    try {
      ValidateTrainingSet(datasets[i].train);
      ValidateDataset(datasets[i].test);
      if (datasets[i].test.empty()) {
        throw DataError("dataset '" + datasets[i].name + "' has no test set");
      }
      StandardizedSplit split =
          Standardize(datasets[i].train, datasets[i].test);
      pd.train = std::move(split.train);
      pd.test = std::move(split.test);
      SmoteConfig sc = cfg.smote;
      sc.seed = DeriveSeed(cfg.seed, "smote:" + datasets[i].name);
      pd.balanced = SmoteBalance(pd.train, sc);
    } catch (const std::exception& e) {
      pd.error = e.what();
    }
  });

  // Classifiers that do not depend on the incentive.
  std::vector<Classifier> classifiers;
  for (Method m : methods) {
    const Classifier c = ClassifierOf(m);
    if (c != Classifier::kNone &&
        std::find(classifiers.begin(), classifiers.end(), c) ==
            classifiers.end()) {
      classifiers.push_back(c);
    }
  }
  std::vector<ClassifierScores> base_scores(n_data * classifiers.size());
  ParallelFor(base_scores.size(), cfg.threads, [&](std::size_t job) {
    const std::size_t di = job / classifiers.size();
    const Classifier c = classifiers[job % classifiers.size()];
    ClassifierScores& out = base_scores[job];
    if (!prepared[di].error.empty()) {
      out.error = prepared[di].error;
      return;
    }
    try {
      out = FitClassifier(
          c, prepared[di], cfg,
          DeriveSeed(cfg.seed, std::string(ClassifierTag(c)) + ":" +
                                   datasets[di].name));
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  });
  auto scores_for = [&](std::size_t di, Classifier c) -> const ClassifierScores& {
    const auto ci = static_cast<std::size_t>(
        std::find(classifiers.begin(), classifiers.end(), c) -
        classifiers.begin());
    return base_scores[di * classifiers.size() + ci];
  };

  auto params_for = [&](std::size_t di, std::size_t ii) {
    CampaignParams p = cfg.campaign;
    p.incentive = incentives[ii].Resolve(datasets[di].train.MeanClv());
    return p;
  };

  // The smooth-regret network depends on the incentive through m.
  const bool want_pno =
      std::find(methods.begin(), methods.end(), Method::kPno) != methods.end();
  std::vector<NetworkScores> pno(want_pno ? n_data * incentives.size() : 0);
  ParallelFor(pno.size(), cfg.threads, [&](std::size_t job) {
    const std::size_t di = job / incentives.size();
    const std::size_t ii = job % incentives.size();
    NetworkScores& out = pno[job];
    if (!prepared[di].error.empty()) {
      out.error = prepared[di].error;
      return;
    }
    try {
      const CampaignParams p = params_for(di, ii);
      p.Validate();
      const Dataset fit =
          cfg.exclude_below_break_even
              ? DropBelowClv(prepared[di].train, BreakEvenClv(p))
              : prepared[di].train;
      if (fit.empty()) {
        throw DataError("no training customer above break-even CLV");
      }
      out = FitNetwork(fit, prepared[di].test, p, cfg,
                       LossKind::kSmoothRegret,
                       DeriveSeed(cfg.seed, "pno:" + datasets[di].name + ":" +
                                                incentives[ii].label));
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  });

  std::vector<ProfitReport> rows;
  rows.reserve(n_data * incentives.size() * methods.size());
  for (std::size_t di = 0; di < n_data; ++di) {
    const PreparedDataset& pd = prepared[di];
    for (std::size_t ii = 0; ii < incentives.size(); ++ii) {
      const CampaignParams p = params_for(di, ii);
      for (Method m : methods) {
        ProfitReport row;
        row.dataset = datasets[di].name;
        row.d_label = incentives[ii].label;
        row.d = p.incentive;
        row.method = MethodName(m);
        try {
          if (!pd.error.empty()) throw Error(pd.error);
          p.Validate();
          const Dataset& test = pd.test;
          const std::vector<double> clvs = test.Clvs();
          std::vector<Decision> z;
          std::vector<Label> predicted;
          switch (m) {
            case Method::kPno: {
              const NetworkScores& net = pno[di * incentives.size() + ii];
              if (!net.error.empty()) throw Error(net.error);
              z = PrescribeAll(net.test, p, clvs);
              predicted =
                  cfg.pno_accuracy == PnoAccuracyMode::kMidpoint
                      ? DecisionsAsPredictions(z)
                      : ThresholdPredictions(net.test, cfg.class_threshold);
              row.learning_rate = net.learning_rate;
              row.epochs = net.epochs;
              break;
            }
            case Method::kOracle: {
              std::vector<double> s;
              for (const auto& r : test.records) s.push_back(ToInt(r.label));
              z = PrescribeAll(s, p, clvs);
              predicted = ThresholdPredictions(s, cfg.class_threshold);
              break;
            }
            case Method::kConstant: {
              const std::vector<double> s(test.size(), 0.5);
              z = ThresholdDecisions(s, cfg.class_threshold);
              predicted = ThresholdPredictions(s, cfg.class_threshold);
              break;
            }
            default: {
              const ClassifierScores& cs = scores_for(di, ClassifierOf(m));
              if (!cs.error.empty()) throw Error(cs.error);
              if (UsesSegmentThresholds(m)) {
                const auto policy = SegmentThresholdPolicy::Fit(
                    cs.train, pd.train.Labels(), pd.train.Clvs(),
                    cfg.segments, p);
                for (std::size_t i = 0; i < test.size(); ++i) {
                  z.push_back(policy.Decide(cs.test[i], clvs[i]));
                }
                predicted = DecisionsAsPredictions(z);
              } else {
                z = ThresholdDecisions(cs.test, cfg.class_threshold);
                predicted = ThresholdPredictions(cs.test, cfg.class_threshold);
              }
              row.learning_rate = cs.learning_rate;
              row.epochs = cs.epochs;
              break;
            }
          }
          FillMetrics(row, z, predicted, test, p);
        } catch (const std::exception& e) {
          row.ok = false;
          row.error = e.what();
          row.profit = row.optimal_profit = row.accuracy = row.gap = row.eta =
              kNaN;
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

namespace {

std::string Num(double v, int digits = 6) {
  if (std::isnan(v)) return "nan";
  return csv::FormatFixed(v, digits);
}

}  // namespace

void WriteReportCsv(std::ostream& os, const std::vector<ProfitReport>& rows) {
  csv::WriteRow(os, {"dataset", "d_spec", "d", "method", "profit", "accuracy",
                     "gap", "eta", "optimal_profit", "learning_rate",
                     "epochs", "status", "message"});
  for (const auto& r : rows) {
    csv::WriteRow(
        os, {r.dataset, r.d_label, Num(r.d), r.method, Num(r.profit),
             Num(r.accuracy), Num(r.gap), Num(r.eta), Num(r.optimal_profit),
             r.learning_rate > 0.0 ? csv::FormatExact(r.learning_rate) : "",
             r.epochs > 0 ? std::to_string(r.epochs) : "",
             r.ok ? "ok" : "failed", r.error});
  }
}

RankTable RankFromReports(const std::vector<ProfitReport>& rows,
                          const std::string& d_label) {
  std::vector<std::string> methods;
  std::vector<std::string> datasets;
  for (const auto& r : rows) {
    if (r.d_label != d_label) continue;
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
    if (std::find(datasets.begin(), datasets.end(), r.dataset) ==
        datasets.end()) {
      datasets.push_back(r.dataset);
    }
  }
  std::vector<std::vector<double>> profit(
      methods.size(), std::vector<double>(datasets.size(), kNaN));
  for (const auto& r : rows) {
    if (r.d_label != d_label) continue;
    const auto m = static_cast<std::size_t>(
        std::find(methods.begin(), methods.end(), r.method) - methods.begin());
    const auto d = static_cast<std::size_t>(
        std::find(datasets.begin(), datasets.end(), r.dataset) -
        datasets.begin());
    profit[m][d] = r.ok ? r.profit : kNaN;
  }
  return RankMethods(std::move(methods), std::move(datasets),
                     std::move(profit));
}

std::string SummaryJson(const std::vector<ProfitReport>& rows, double alpha) {
  using ordered_json = nlohmann::ordered_json;
  ordered_json root;
  root["alpha"] = alpha;
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.ok ? 0 : 1;
  root["cells"] = rows.size();
  root["failed_cells"] = failed;

  std::vector<std::string> labels;
  for (const auto& r : rows) {
    if (std::find(labels.begin(), labels.end(), r.d_label) == labels.end()) {
      labels.push_back(r.d_label);
    }
  }
  ordered_json by_d = ordered_json::array();
  for (const auto& label : labels) {
    ordered_json entry;
    entry["d_spec"] = label;
    try {
      const RankTable table = RankFromReports(rows, label);
      ordered_json methods = ordered_json::array();
      for (std::size_t m = 0; m < table.k(); ++m) {
        double sum = 0.0;
        for (double v : table.profit[m]) sum += v;
        methods.push_back(
            {{"method", table.methods[m]},
             {"average_rank", table.average_rank[m]},
             {"average_profit", sum / static_cast<double>(table.n())}});
      }
      entry["datasets"] = table.n();
      entry["methods"] = std::move(methods);
      try {
        const FriedmanResult f =
            FriedmanImanDavenport(table.average_rank,
                                  static_cast<int>(table.n()));
        entry["friedman"] = {{"chi2", f.chi2},
                             {"iman_davenport_f", f.f_stat},
                             {"df1", f.df1},
                             {"df2", f.df2},
                             {"p_value", f.p_value}};
      } catch (const ArgumentError& e) {
        entry["friedman"] = nullptr;
        entry["friedman_error"] = e.what();
      }
      if (table.k() >= 2) {
        const HolmReport holm = CompareToBest(table, alpha);
        ordered_json h;
        h["control"] = holm.control;
        h["control_rank"] = holm.control_rank;
        ordered_json hrows = ordered_json::array();
        for (const auto& row : holm.rows) {
          hrows.push_back({{"method", row.method},
                           {"average_rank", row.average_rank},
                           {"z", row.z},
                           {"p_value", row.p_value},
                           {"threshold", row.threshold},
                           {"outcome", row.reject ? "reject" : "not reject"},
                           {"step_down_reject", row.step_down_reject}});
        }
        h["comparisons"] = std::move(hrows);
        entry["holm"] = std::move(h);
      }
    } catch (const ArgumentError& e) {
      entry["error"] = e.what();
    }
    by_d.push_back(std::move(entry));
  }
  root["by_incentive"] = std::move(by_d);
  return root.dump(2) + "\n";
}

SweepTables BuildSweepTables(const std::vector<ProfitReport>& rows) {
  SweepTables t;
  std::vector<std::string> labels;
  std::vector<std::string> methods;
  for (const auto& r : rows) {
    if (std::find(labels.begin(), labels.end(), r.d_label) == labels.end()) {
      labels.push_back(r.d_label);
    }
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
  }

  for (const auto& label : labels) {
    // Optimal profit and the mean d / mean CLV ratio, once per dataset.
    std::map<std::string, std::pair<double, double>> per_dataset;
    for (const auto& r : rows) {
      if (r.d_label == label && r.ok) {
        per_dataset.emplace(r.dataset, std::make_pair(r.optimal_profit, r.d));
      }
    }
    auto fraction_of = [&] {
      // d values differ across datasets when d is a CLV fraction; the label
      // carries the fraction itself.
      try {
        const IncentiveSpec spec = IncentiveSpec::Parse(label);
        return spec.clv_fraction ? spec.value : kNaN;
      } catch (const ArgumentError&) {
        return kNaN;
      }
    };
    const double frac = fraction_of();

    SweepTables::Curve opt{"optimal", label, frac, 0.0, 0.0};
    for (const auto& [name, v] : per_dataset) opt.mean_profit += v.first;
    if (!per_dataset.empty()) {
      opt.mean_profit /= static_cast<double>(per_dataset.size());
    }
    t.curves.push_back(opt);

    for (const auto& method : methods) {
      SweepTables::Curve c{method, label, frac, 0.0, 0.0};
      std::size_t np = 0;
      std::size_t ng = 0;
      for (const auto& r : rows) {
        if (r.d_label != label || r.method != method || !r.ok) continue;
        c.mean_profit += r.profit;
        ++np;
        if (std::isfinite(r.gap)) {
          c.mean_gap += r.gap;
          ++ng;
        }
      }
      c.mean_profit = np ? c.mean_profit / static_cast<double>(np) : kNaN;
      c.mean_gap = ng ? c.mean_gap / static_cast<double>(ng) : kNaN;
      t.curves.push_back(c);
    }
  }

  for (const auto& r : rows) {
    if (!r.ok) continue;
    t.points.push_back({r.dataset, r.method, r.d_label, r.d, r.eta, r.profit});
  }
  return t;
}

void WriteSweepTables(const std::filesystem::path& dir,
                      const SweepTables& tables) {
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("profit_vs_d.csv");
    csv::WriteRow(out, {"method", "d_spec", "d_fraction", "mean_profit"});
    for (const auto& c : tables.curves) {
      csv::WriteRow(out, {c.method, c.d_label, Num(c.d_fraction),
                          Num(c.mean_profit)});
    }
  }
  {
    auto out = open("gap_vs_d.csv");
    csv::WriteRow(out, {"method", "d_spec", "d_fraction", "mean_gap"});
    for (const auto& c : tables.curves) {
      if (c.method == "optimal") continue;
      csv::WriteRow(out,
                    {c.method, c.d_label, Num(c.d_fraction), Num(c.mean_gap)});
    }
  }
  {
    auto out = open("eta_profit_vs_d.csv");
    csv::WriteRow(out, {"dataset", "method", "d_spec", "d", "eta", "profit"});
    for (const auto& p : tables.points) {
      csv::WriteRow(out, {p.dataset, p.method, p.d_label, Num(p.d),
                          Num(p.eta), Num(p.profit)});
    }
  }
}

bool OptimalProfitNonIncreasing(const std::vector<ProfitReport>& rows) {
  std::map<std::string, std::map<double, double>> by_dataset;
  for (const auto& r : rows) {
    if (r.ok) by_dataset[r.dataset][r.d] = r.optimal_profit;
  }
  for (const auto& [name, curve] : by_dataset) {
    double prev = kInf;
    for (const auto& [d, profit] : curve) {
      if (profit > prev) return false;
      prev = profit;
    }
  }
  return true;
}

}  // namespace churnpno
