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

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "churnpno/csv.h"
#include "churnpno/error.h"
#include "churnpno/model_io.h"
#include "churnpno/profit_metrics.h"
#include "churnpno/random.h"
#include "config.h"
#include "json.hpp"

namespace churnpno::cli {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

fs::path DefaultOutputDir() {
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return "churnpno_out";
}

fs::path ResolveOutputDir(const std::string& flag, const fs::path& from_config) {
  fs::path dir = !flag.empty()             ? fs::path(flag)
                 : !from_config.empty()    ? from_config
                                           : DefaultOutputDir();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw DataError("cannot create output directory " + dir.string());
  }
  return dir;
}

void WriteFile(const fs::path& path, const std::string& text) {
  WriteTextFile(path, text);
}

std::string Fixed(double v, int digits) {
  return std::isfinite(v) ? csv::FormatFixed(v, digits) : "nan";
}

// Options shared by `benchmark` and `sweep`.
struct RunFlags {
  std::string config;
  std::string out;
  int threads = -1;
  std::int64_t seed = -1;
  std::string methods;
  std::string incentives;
  bool no_tune = false;
  double alpha = -1.0;

  void Register(CLI::App* app) {
    app->add_option("-c,--config", config, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("-o,--out", out,
                    std::string("Output directory (default: config "
                                "output_dir, then $") +
                        kOutputDirEnv + ", then ./churnpno_out)");
    app->add_option("-j,--threads", threads,
                    "Worker threads (0 = number of cores)")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--seed", seed, "Master seed")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--methods", methods,
                    "Comma-separated methods (pno, mlp_ce, logistic, knn, "
                    "cart, msp_logistic, msp_knn, msp_cart, oracle, "
                    "constant)");
    app->add_option("--incentives", incentives,
                    "Comma-separated incentives: euros or CLV fractions "
                    "such as 1/20");
    app->add_flag("--no-tune", no_tune,
                  "Skip cross-validation; use model.learning_rate/epochs");
    app->add_option("--alpha", alpha, "Significance level")
        ->check(CLI::Range(0.0, 1.0));
  }

  RunConfig Load() const {
    RunConfig cfg = LoadRunConfig(config);
    if (threads >= 0) cfg.experiment.threads = threads;
    if (seed >= 0) cfg.experiment.seed = static_cast<std::uint64_t>(seed);
    if (!methods.empty()) cfg.methods = ParseMethodList(methods);
    if (!incentives.empty()) cfg.incentives = ParseIncentiveList(incentives);
    if (no_tune) cfg.experiment.tune = false;
    if (alpha >= 0.0) {
      if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ArgumentError("--alpha must be in (0, 1)");
      }
      cfg.alpha = alpha;
    }
    return cfg;
  }
};

void PrintRanks(std::ostream& out, const RankTable& table, double alpha) {
  out << "methods: " << table.k() << ", datasets: " << table.n() << "\n";
  try {
    const FriedmanResult f = FriedmanImanDavenport(
        table.average_rank, static_cast<int>(table.n()));
    out << "Friedman chi2 = " << Fixed(f.chi2, 4)
        << ", Iman-Davenport F = " << Fixed(f.f_stat, 4) << " (df "
        << f.df1 << ", " << f.df2 << "), p = " << Fixed(f.p_value, 6)
        << "\n";
  } catch (const ArgumentError& e) {
    out << "Friedman test skipped: " << e.what() << "\n";
  }
  const HolmReport holm = CompareToBest(table, alpha);
  out << std::left << std::setw(16) << "method" << std::right
      << std::setw(10) << "avg_rank" << std::setw(10) << "z"
      << std::setw(10) << "p" << std::setw(12) << "alpha/(j-1)"
      << "  outcome\n";
  out << std::left << std::setw(16) << holm.control << std::right
      << std::setw(10) << Fixed(holm.control_rank, 4) << std::setw(10) << "-"
      << std::setw(10) << "-" << std::setw(12) << "-" << "  control\n";
  for (const auto& r : holm.rows) {
    out << std::left << std::setw(16) << r.method << std::right
        << std::setw(10) << Fixed(r.average_rank, 4) << std::setw(10)
        << Fixed(r.z, 4) << std::setw(10) << Fixed(r.p_value, 4)
        << std::setw(12) << Fixed(r.threshold, 4) << "  "
        << (r.reject ? "reject" : "not reject") << "\n";
  }
}

bool AnyFailed(const std::vector<ProfitReport>& rows, std::ostream& err) {
  bool failed = false;
  for (const auto& r : rows) {
    if (!r.ok) {
      err << "failed cell " << r.dataset << " / " << r.d_label << " / "
          << r.method << ": " << r.error << "\n";
      failed = true;
    }
  }
  return failed;
}

std::vector<ProfitReport> ExecuteRun(const RunConfig& cfg, std::ostream& err) {
  const std::vector<BenchmarkDataset> data = LoadDatasets(cfg);
  for (const auto& d : data) {
    StandardizedSplit probe = Standardize(d.train, d.test);
    for (const auto& w : probe.warnings) {
      err << "warning: " << d.name << ": " << w << "\n";
    }
  }
  return RunBenchmark(data, cfg.methods, cfg.incentives, cfg.experiment);
}

void WriteReport(const fs::path& dir, const std::vector<ProfitReport>& rows) {
  std::ostringstream csv_text;
  WriteReportCsv(csv_text, rows);
  WriteFile(dir / "report.csv", csv_text.str());
}

int CmdGenerate(const std::vector<std::string>& presets,
                const std::string& spec_file, const std::string& out_flag,
                std::int64_t seed, std::ostream& out) {
  std::vector<SyntheticSpec> specs;
  if (!spec_file.empty()) {
    specs.push_back(ParseSyntheticSpec(ReadTextFile(spec_file)));
    if (seed >= 0) specs.back().seed = static_cast<std::uint64_t>(seed);
  }
  const auto preset_seed = seed >= 0 ? static_cast<std::uint64_t>(seed) : 2017;
  for (const auto& name : presets) {
    bool found = false;
    for (const auto& spec : MonthlyPresets(preset_seed)) {
      if (name == "all" || name == spec.name) {
        specs.push_back(spec);
        found = true;
      }
    }
    if (!found) {
      throw ArgumentError("unknown preset '" + name +
                          "' (use all or jan .. dec)");
    }
  }
  if (specs.empty()) throw ArgumentError("give --spec or --preset");
  const fs::path dir = ResolveOutputDir(out_flag, {});
  for (const auto& spec : specs) {
    const SyntheticData data = GenerateSynthetic(spec);
    const fs::path train = dir / (spec.name + "_train.csv");
    const fs::path test = dir / (spec.name + "_test.csv");
    WriteDataset(train, data.train);
    WriteDataset(test, data.test);
    out << train.string() << " (" << data.train.size() << " rows)\n"
        << test.string() << " (" << data.test.size() << " rows)\n";
  }
  return kExitOk;
}

int CmdBenchmark(const RunFlags& flags, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = flags.Load();
  const fs::path dir = ResolveOutputDir(flags.out, cfg.output_dir);
  const std::vector<ProfitReport> rows = ExecuteRun(cfg, err);
  WriteReport(dir, rows);
  WriteFile(dir / "summary.json", SummaryJson(rows, cfg.alpha));
  for (const auto& inc : cfg.incentives) {
    out << "== d = " << inc.label << "\n";
    try {
      PrintRanks(out, RankFromReports(rows, inc.label), cfg.alpha);
    } catch (const ArgumentError& e) {
      out << "ranking skipped: " << e.what() << "\n";
    }
  }
  out << "wrote " << (dir / "report.csv").string() << " and "
      << (dir / "summary.json").string() << " (" << rows.size()
      << " cells)\n";
  return AnyFailed(rows, err) ? kExitPartial : kExitOk;
}

int CmdSweep(const RunFlags& flags, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = flags.Load();
  const fs::path dir = ResolveOutputDir(flags.out, cfg.output_dir);
  const std::vector<ProfitReport> rows = ExecuteRun(cfg, err);
  WriteReport(dir, rows);
  WriteSweepTables(dir, BuildSweepTables(rows));
  if (!OptimalProfitNonIncreasing(rows)) {
    err << "warning: optimal profit increases with d on some dataset\n";
  }
  out << "wrote report.csv, profit_vs_d.csv, gap_vs_d.csv and "
         "eta_profit_vs_d.csv to "
      << dir.string() << "\n";
  return AnyFailed(rows, err) ? kExitPartial : kExitOk;
}

// Wide format: a `method` column followed by one profit column per
// dataset. Long format: the benchmark report (dataset, method, profit and
// optionally d_spec); each (dataset, d_spec) pair is one block.
RankTable ReadProfitMatrix(const fs::path& path, const std::string& d_filter) {
  const csv::Table t = csv::ReadFile(path);
  const int method_col = t.ColumnIndex("method");
  if (method_col < 0) {
    throw DataError(path.string() + ": no 'method' column");
  }
  auto number = [&](const std::string& cell, std::size_t line) {
    double v = 0.0;
    if (!csv::ParseDouble(cell, &v)) {
      throw DataError(path.string() + ": row " + std::to_string(line) +
                      ": '" + cell + "' is not a number");
    }
    return v;
  };

  std::vector<std::string> methods;
  std::vector<std::string> blocks;
  std::map<std::pair<std::string, std::string>, double> cells;
  const int profit_col = t.ColumnIndex("profit");
  const int dataset_col = t.ColumnIndex("dataset");
  auto add_unique = [](std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
  };

  if (profit_col >= 0 && dataset_col >= 0) {
    const int d_col = t.ColumnIndex("d_spec");
    const int status_col = t.ColumnIndex("status");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const auto& row = t.rows[i];
      std::string block = row[static_cast<std::size_t>(dataset_col)];
      if (d_col >= 0) {
        const std::string& d = row[static_cast<std::size_t>(d_col)];
        if (!d_filter.empty() && d != d_filter) continue;
        if (d_filter.empty()) block += "@" + d;
      }
      if (status_col >= 0 &&
          row[static_cast<std::size_t>(status_col)] != "ok") {
        throw DataError(path.string() + ": row " + std::to_string(i + 1) +
                        " is a failed cell");
      }
      const std::string& m = row[static_cast<std::size_t>(method_col)];
      add_unique(methods, m);
      add_unique(blocks, block);
      if (!cells.emplace(std::make_pair(m, block),
                         number(row[static_cast<std::size_t>(profit_col)],
                                i + 1))
               .second) {
        throw DataError(path.string() + ": duplicate cell " + m + " / " +
                        block);
      }
    }
  } else {
    for (std::size_t c = 0; c < t.header.size(); ++c) {
      if (static_cast<int>(c) != method_col) blocks.push_back(t.header[c]);
    }
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const auto& row = t.rows[i];
      const std::string& m = row[static_cast<std::size_t>(method_col)];
      if (std::find(methods.begin(), methods.end(), m) != methods.end()) {
        throw DataError(path.string() + ": duplicate method " + m);
      }
      methods.push_back(m);
      for (std::size_t c = 0; c < t.header.size(); ++c) {
        if (static_cast<int>(c) == method_col) continue;
        cells[{m, t.header[c]}] = number(row[c], i + 1);
      }
    }
  }
  if (methods.empty() || blocks.empty()) {
    throw DataError(path.string() + ": empty profit matrix");
  }
  std::vector<std::vector<double>> profit(methods.size());
  for (std::size_t m = 0; m < methods.size(); ++m) {
    for (const auto& b : blocks) {
      auto it = cells.find({methods[m], b});
      if (it == cells.end()) {
        throw DataError(path.string() + ": missing cell " + methods[m] +
                        " / " + b);
      }
      profit[m].push_back(it->second);
    }
  }
  return RankMethods(std::move(methods), std::move(blocks), std::move(profit));
}

std::string StatsJson(const RankTable& table, const FriedmanResult& f,
                      const HolmReport& holm) {
  ordered_json root;
  root["datasets"] = table.n();
  ordered_json methods = ordered_json::array();
  for (std::size_t m = 0; m < table.k(); ++m) {
    methods.push_back(
        {{"method", table.methods[m]}, {"average_rank", table.average_rank[m]}});
  }
  root["methods"] = std::move(methods);
  root["friedman"] = {{"chi2", f.chi2},
                      {"iman_davenport_f", f.f_stat},
                      {"df1", f.df1},
                      {"df2", f.df2},
                      {"p_value", f.p_value}};
  ordered_json rows = ordered_json::array();
  for (const auto& r : holm.rows) {
    rows.push_back({{"method", r.method},
                    {"average_rank", r.average_rank},
                    {"z", r.z},
                    {"p_value", r.p_value},
                    {"threshold", r.threshold},
                    {"outcome", r.reject ? "reject" : "not reject"},
                    {"step_down_reject", r.step_down_reject}});
  }
  root["holm"] = {{"alpha", holm.alpha},
                  {"control", holm.control},
                  {"control_rank", holm.control_rank},
                  {"comparisons", std::move(rows)}};
  return root.dump(2) + "\n";
}

int CmdStats(const std::string& profits, double alpha,
             const std::string& json_out, const std::string& d_filter,
             std::ostream& out, std::ostream& err) {
  const RankTable table = ReadProfitMatrix(profits, d_filter);
  if (table.k() < 3) {
    err << "error: the Friedman test needs at least 3 methods (got "
        << table.k() << ")\n";
    return kExitUsage;
  }
  if (table.n() < 2) {
    err << "error: the Friedman test needs at least 2 datasets (got "
        << table.n() << ")\n";
    return kExitUsage;
  }
  const FriedmanResult f =
      FriedmanImanDavenport(table.average_rank, static_cast<int>(table.n()));
  const HolmReport holm = CompareToBest(table, alpha);
  PrintRanks(out, table, alpha);
  if (!json_out.empty()) WriteFile(json_out, StatsJson(table, f, holm));
  return kExitOk;
}

// train / evaluate ---------------------------------------------------------

struct ModelFlags {
  std::string method = "pno";
  std::string d = "1/10";
  double f = CampaignParams{}.contact_cost;
  double gamma = CampaignParams{}.acceptance;
  double slope = CampaignParams{}.slope;
};

CampaignParams MakeCampaign(const ModelFlags& m, double train_mean_clv) {
  CampaignParams p;
  p.contact_cost = m.f;
  p.acceptance = m.gamma;
  p.slope = m.slope;
  p.incentive = IncentiveSpec::Parse(m.d).Resolve(train_mean_clv);
  p.Validate();
  return p;
}

ordered_json ScalingJson(const FeatureScaling& s,
                         const std::vector<std::string>& schema) {
  return {{"schema", schema}, {"mean", s.mean}, {"stddev", s.stddev}};
}

int CmdTrain(const std::string& train_path, const std::string& out_path,
             const ModelFlags& mf, const TrainConfig& tc, int hidden,
             bool smote, std::uint64_t seed, std::ostream& out) {
  const Method method = MethodFromName(mf.method);
  if (method != Method::kPno && method != Method::kMlpCrossEntropy &&
      method != Method::kLogistic) {
    throw ArgumentError("train supports pno, mlp_ce and logistic");
  }
  const Dataset raw = LoadDataset(train_path);
  ValidateTrainingSet(raw);
  const FeatureScaling scaling = FitScaling(raw);
  Dataset train = ApplyScaling(raw, scaling);
  const double mean_clv = raw.MeanClv();
  const CampaignParams p = MakeCampaign(mf, mean_clv);
  if (method != Method::kPno && smote) {
    SmoteConfig sc;
    sc.seed = DeriveSeed(seed, "smote");
    train = SmoteBalance(train, sc);
  }

  std::string model_text;
  if (method == Method::kLogistic) {
    model_text = LogisticToJson(FitLogistic(train, LogisticConfig{}));
  } else {
    TrainConfig cfg = tc;
    cfg.loss = method == Method::kPno ? LossKind::kSmoothRegret
                                      : LossKind::kCrossEntropy;
    cfg.seed = DeriveSeed(seed, "shuffle");
    const int h =
        hidden > 0 ? hidden : DefaultHiddenSize(static_cast<int>(train.width()));
    const Mlp init =
        InitMlp(static_cast<int>(train.width()), h, DeriveSeed(seed, "init"));
    const TrainResult r = Train(init, train, p, cfg);
    model_text = MlpToJson(r.model, &cfg);
    out << "final training loss " << csv::FormatExact(r.epoch_loss.back())
        << "\n";
  }
  auto j = ordered_json::parse(model_text);
  j["method"] = mf.method;
  j["scaling"] = ScalingJson(scaling, raw.schema);
  j["campaign"] = {{"contact_cost", p.contact_cost},
                   {"incentive", p.incentive},
                   {"incentive_spec", mf.d},
                   {"acceptance", p.acceptance},
                   {"slope", p.slope},
                   {"train_mean_clv", mean_clv}};
  WriteFile(out_path, j.dump(2) + "\n");
  out << "wrote " << out_path << "\n";
  return kExitOk;
}

int CmdEvaluate(const std::string& model_path, const std::string& test_path,
                const std::string& d_override, double class_threshold,
                const std::string& decisions_out, std::ostream& out) {
  const std::string text = ReadTextFile(model_path);
  const auto j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.contains("scaling") || !j.contains("campaign")) {
    throw DataError(model_path + ": not a model written by `churnpno train`");
  }
  const std::string method_name = j.value("method", "pno");
  const Method method = MethodFromName(method_name);
  FeatureScaling scaling;
  scaling.mean = j["scaling"]["mean"].get<std::vector<double>>();
  scaling.stddev = j["scaling"]["stddev"].get<std::vector<double>>();
  const auto schema = j["scaling"]["schema"].get<std::vector<std::string>>();
  const Dataset raw = LoadDataset(test_path, schema);
  const Dataset test = ApplyScaling(raw, scaling);

  CampaignParams p;
  const auto& c = j["campaign"];
  p.contact_cost = c["contact_cost"].get<double>();
  p.incentive = c["incentive"].get<double>();
  p.acceptance = c["acceptance"].get<double>();
  p.slope = c["slope"].get<double>();
  if (!d_override.empty()) {
    p.incentive = IncentiveSpec::Parse(d_override)
                      .Resolve(c["train_mean_clv"].get<double>());
  }
  p.Validate();

  std::vector<double> scores;
  if (method == Method::kLogistic) {
    const LogisticModel m = LogisticFromJson(text);
    for (const auto& r : test.records) scores.push_back(m.Score(r.features));
  } else {
    scores = ScoreAll(MlpFromJson(text).model, test);
  }
  const std::vector<double> clvs = test.Clvs();
  const std::vector<Label> labels = test.Labels();
  std::vector<Decision> z;
  if (method == Method::kPno) {
    z = PrescribeAll(scores, p, clvs);
  } else {
    for (double s : scores) {
      z.push_back(s <= class_threshold ? Decision::kTarget : Decision::kSkip);
    }
  }
  const double profit = TotalProfit(z, labels, p, clvs);
  const double optimal = OptimalTotalProfit(labels, p, clvs);
  out << "method " << method_name << ", d = " << Fixed(p.incentive, 4)
      << "\n"
      << "profit " << Fixed(profit, 2) << " (optimal " << Fixed(optimal, 2)
      << ")\n"
      << "accuracy "
      << Fixed(Accuracy(scores, labels, class_threshold), 4) << "\n"
      << "targeted fraction " << Fixed(TargetedFraction(z), 4) << "\n";
  if (optimal != 0.0) {
    out << "normalized gap " << Fixed(NormalizedGap(-optimal, -profit), 4)
        << "\n";
  }
  if (!decisions_out.empty()) {
    std::ostringstream ss;
    csv::WriteRow(ss, {"row", "score", "midpoint", "target", "label", "clv"});
    for (std::size_t i = 0; i < test.size(); ++i) {
      csv::WriteRow(ss, {std::to_string(i + 1), csv::FormatExact(scores[i]),
                         csv::FormatExact(Midpoint(p, clvs[i])),
                         z[i] == Decision::kTarget ? "1" : "0",
                         std::to_string(ToInt(labels[i])),
                         csv::FormatExact(clvs[i])});
    }
    WriteFile(decisions_out, ss.str());
  }
  return kExitOk;
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Profit-driven churn prevention: data generation, training, "
               "benchmarks and rank statistics",
               "churnpno"};
  app.require_subcommand(1, 1);
  app.allow_extras(false);

  auto* gen = app.add_subcommand("generate", "Write synthetic train/test CSVs");
  std::vector<std::string> presets;
  std::string spec_file;
  std::string gen_out;
  std::int64_t gen_seed = -1;
  gen->add_option("--preset", presets,
                  "Monthly preset (jan .. dec, or all); repeatable");
  gen->add_option("--spec", spec_file, "JSON synthetic spec")
      ->check(CLI::ExistingFile);
  gen->add_option("-o,--out", gen_out, "Output directory");
  gen->add_option("--seed", gen_seed, "Override the seed")
      ->check(CLI::NonNegativeNumber);

  RunFlags bench_flags;
  auto* bench = app.add_subcommand(
      "benchmark", "Run every (dataset, d, method) cell; write report.csv "
                   "and summary.json. Exit 2 if any cell failed");
  bench_flags.Register(bench);

  RunFlags sweep_flags;
  auto* sweep = app.add_subcommand(
      "sweep", "Run the d sweep; write profit, gap and targeting tables");
  sweep_flags.Register(sweep);

  auto* stats = app.add_subcommand(
      "stats", "Average ranks, Friedman / Iman-Davenport and Holm table "
               "from a profit matrix");
  std::string profits;
  double alpha = 0.05;
  std::string stats_json;
  std::string d_filter;
  stats->add_option("profits", profits,
                    "CSV: wide (method + one column per dataset) or the "
                    "benchmark report")
      ->required()
      ->check(CLI::ExistingFile);
  stats->add_option("--alpha", alpha, "Significance level")
      ->check(CLI::Range(0.0, 1.0));
  stats->add_option("--json", stats_json, "Also write the result as JSON");
  stats->add_option("--d-spec", d_filter,
                    "Report input: keep only this incentive label");

  auto* train = app.add_subcommand("train", "Train one model on a CSV");
  std::string train_csv;
  std::string model_out;
  ModelFlags mf;
  TrainConfig tc;
  tc.learning_rate = 1e-2;
  tc.epochs = 100;
  int hidden = 0;
  bool no_smote = false;
  std::uint64_t train_seed = 2017;
  train->add_option("--train", train_csv, "Training CSV")
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("--model", model_out, "Output model JSON")->required();
  train->add_option("--method", mf.method, "pno, mlp_ce or logistic")
      ->check(CLI::IsMember({"pno", "mlp_ce", "logistic"}));
  train->add_option("--d", mf.d,
                    "Incentive: euros or a fraction of the training mean "
                    "CLV such as 1/10");
  train->add_option("--f", mf.f, "Contact cost");
  train->add_option("--gamma", mf.gamma, "Acceptance fraction");
  train->add_option("--slope", mf.slope, "Surrogate slope");
  train->add_option("--lr", tc.learning_rate, "Adam learning rate");
  train->add_option("--epochs", tc.epochs, "Epochs")
      ->check(CLI::PositiveNumber);
  train->add_option("--batch", tc.batch_size,
                    "Batch size (0 = full batch up to 1024 records)")
      ->check(CLI::NonNegativeNumber);
  train->add_option("--hidden", hidden, "Hidden units (0 = ceil(K/2))")
      ->check(CLI::NonNegativeNumber);
  train->add_flag("--no-smote", no_smote,
                  "Do not balance the data for mlp_ce / logistic");
  train->add_option("--seed", train_seed, "Seed");

  auto* eval = app.add_subcommand("evaluate", "Score a test CSV with a model");
  std::string eval_model;
  std::string eval_csv;
  std::string eval_d;
  double eval_threshold = 0.5;
  std::string decisions_out;
  eval->add_option("--model", eval_model, "Model JSON from `train`")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--test", eval_csv, "Test CSV")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--d", eval_d, "Override the incentive");
  eval->add_option("--threshold", eval_threshold,
                   "Class threshold for accuracy and threshold methods");
  eval->add_option("--decisions", decisions_out,
                   "Write per-customer scores and decisions to this CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      return CmdGenerate(presets, spec_file, gen_out, gen_seed, out);
    }
    if (bench->parsed()) return CmdBenchmark(bench_flags, out, err);
    if (sweep->parsed()) return CmdSweep(sweep_flags, out, err);
    if (stats->parsed()) {
      return CmdStats(profits, alpha, stats_json, d_filter, out, err);
    }
    if (train->parsed()) {
      return CmdTrain(train_csv, model_out, mf, tc, hidden, !no_smote,
                      train_seed, out);
    }
    if (eval->parsed()) {
      return CmdEvaluate(eval_model, eval_csv, eval_d, eval_threshold,
                         decisions_out, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace churnpno::cli
