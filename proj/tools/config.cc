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

#include "config.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "churnpno/error.h"
#include "churnpno/model_io.h"
#include "json.hpp"

namespace churnpno::cli {

namespace {

using nlohmann::json;

// Typed access to one JSON object that rejects keys nobody asked for.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) Fail("", "expected an object");
  }

  bool Has(const std::string& key) const { return node_.contains(key); }

  const json* Get(const std::string& key) {
    seen_.insert(key);
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  template <typename T>
  void Read(const std::string& key, T& out) {
    const json* v = Get(key);
    if (v == nullptr) return;
    try {
      out = v->get<T>();
    } catch (const json::exception&) {
      Fail(key, "has the wrong type");
    }
  }

  Section Child(const std::string& key) {
    const json* v = Get(key);
    static const json kEmpty = json::object();
    return Section(v ? *v : kEmpty, Join(key));
  }

  // Call after all reads.
  void Finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.count(it.key())) Fail(it.key(), "is not a known key");
    }
  }

  [[noreturn]] void Fail(const std::string& key, const std::string& what) const {
    const std::string where = key.empty() ? path_ : Join(key);
    throw ArgumentError("config: '" + (where.empty() ? "<root>" : where) +
                        "' " + what);
  }

  std::string Join(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

json ParseJson(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // The library message carries "at line L, column C".
    throw ArgumentError(std::string("config: ") + e.what());
  }
}

void ReadSynthetic(Section& s, SyntheticSpec& spec) {
  s.Read("name", spec.name);
  s.Read("n_train", spec.n_train);
  s.Read("n_test", spec.n_test);
  s.Read("n_features", spec.n_features);
  s.Read("churn_rate", spec.churn_rate);
  s.Read("mean_clv", spec.mean_clv);
  s.Read("clv_dispersion", spec.clv_dispersion);
  s.Read("signal_strength", spec.signal_strength);
  s.Read("clv_churn_correlation", spec.clv_churn_correlation);
  s.Read("seed", spec.seed);
  s.Finish();
  spec.Validate();
}

std::vector<std::string> SplitList(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void ReadDatasets(const json& node, const std::filesystem::path& base,
                  RunConfig& cfg) {
  if (!node.is_array() || node.empty()) {
    throw ArgumentError("config: 'datasets' must be a non-empty array");
  }
  for (std::size_t i = 0; i < node.size(); ++i) {
    Section s(node[i], "datasets[" + std::to_string(i) + "]");
    if (s.Has("preset")) {
      std::string which;
      std::uint64_t seed = 2017;
      s.Read("preset", which);
      s.Read("seed", seed);
      s.Finish();
      bool found = false;
      for (const auto& spec : MonthlyPresets(seed)) {
        if (which == "all" || which == spec.name) {
          cfg.datasets.push_back({spec.name, {}, {}, spec});
          found = true;
        }
      }
      if (!found) s.Fail("preset", "names no preset ('all', 'jan' .. 'dec')");
    } else if (s.Has("synthetic")) {
      SyntheticSpec spec;
      Section syn = s.Child("synthetic");
      ReadSynthetic(syn, spec);
      s.Finish();
      cfg.datasets.push_back({spec.name, {}, {}, spec});
    } else {
      DatasetSource src;
      std::string train;
      std::string test;
      s.Read("name", src.name);
      s.Read("train", train);
      s.Read("test", test);
      s.Finish();
      if (src.name.empty() || train.empty() || test.empty()) {
        s.Fail("", "needs 'preset', 'synthetic', or name/train/test");
      }
      src.train = base / train;
      src.test = base / test;
      for (const auto& p : {src.train, src.test}) {
        if (!std::filesystem::is_regular_file(p)) {
          throw DataError("config: dataset file not found: " + p.string());
        }
      }
      cfg.datasets.push_back(std::move(src));
    }
  }
  std::set<std::string> names;
  for (const auto& d : cfg.datasets) {
    if (!names.insert(d.name).second) {
      throw ArgumentError("config: duplicate dataset name '" + d.name + "'");
    }
  }
}

}  // namespace

RunConfig ParseRunConfig(const std::string& text,
                         const std::filesystem::path& base_dir) {
  const json root = ParseJson(text);
  Section s(root, "");
  RunConfig cfg;
  ExperimentConfig& e = cfg.experiment;

  s.Read("seed", e.seed);
  s.Read("threads", e.threads);
  s.Read("alpha", cfg.alpha);
  std::string out_dir;
  s.Read("output_dir", out_dir);
  if (!out_dir.empty()) cfg.output_dir = base_dir / out_dir;

  {
    Section c = s.Child("campaign");
    c.Read("contact_cost", e.campaign.contact_cost);
    c.Read("acceptance", e.campaign.acceptance);
    c.Read("slope", e.campaign.slope);
    c.Finish();
  }
  if (const json* inc = s.Get("incentives")) {
    if (!inc->is_array() || inc->empty()) {
      s.Fail("incentives", "must be a non-empty array");
    }
    cfg.incentives.clear();
    for (const auto& v : *inc) {
      if (v.is_number()) {
        cfg.incentives.push_back(IncentiveSpec::Parse(v.dump()));
      } else if (v.is_string()) {
        cfg.incentives.push_back(IncentiveSpec::Parse(v.get<std::string>()));
      } else {
        s.Fail("incentives", "entries must be numbers or strings like \"1/20\"");
      }
    }
  }
  if (const json* m = s.Get("methods")) {
    if (!m->is_array() || m->empty()) {
      s.Fail("methods", "must be a non-empty array");
    }
    cfg.methods.clear();
    for (const auto& v : *m) {
      if (!v.is_string()) s.Fail("methods", "entries must be strings");
      cfg.methods.push_back(MethodFromName(v.get<std::string>()));
    }
  }
  {
    Section m = s.Child("model");
    m.Read("hidden_size", e.hidden_size);
    m.Read("batch_size", e.train.batch_size);
    m.Read("learning_rate", e.train.learning_rate);
    m.Read("epochs", e.train.epochs);
    m.Read("tune", e.tune);
    m.Read("exclude_below_break_even", e.exclude_below_break_even);
    Section adam = m.Child("adam");
    adam.Read("beta1", e.train.adam.beta1);
    adam.Read("beta2", e.train.adam.beta2);
    adam.Read("epsilon", e.train.adam.epsilon);
    adam.Finish();
    m.Finish();
  }
  {
    Section c = s.Child("cv");
    c.Read("learning_rates", e.cv.learning_rates);
    c.Read("epochs", e.cv.epochs);
    c.Read("splits", e.cv.splits);
    c.Read("train_fraction", e.cv.train_fraction);
    c.Read("seeds", e.cv.seeds);
    c.Finish();
  }
  {
    Section c = s.Child("smote");
    c.Read("k_neighbors", e.smote.k_neighbors);
    c.Read("target_ratio", e.smote.target_ratio);
    c.Finish();
  }
  {
    Section b = s.Child("baselines");
    b.Read("knn_k", e.knn_k);
    b.Read("cart_max_depth", e.cart.max_depth);
    b.Read("cart_min_leaf", e.cart.min_leaf);
    b.Read("logistic_learning_rate", e.logistic.learning_rate);
    b.Read("logistic_iterations", e.logistic.iterations);
    b.Read("logistic_l2", e.logistic.l2);
    b.Finish();
  }
  {
    Section v = s.Child("evaluation");
    v.Read("segments", e.segments);
    v.Read("class_threshold", e.class_threshold);
    std::string mode;
    v.Read("pno_accuracy", mode);
    if (mode == "midpoint") {
      e.pno_accuracy = PnoAccuracyMode::kMidpoint;
    } else if (mode == "threshold" || mode.empty()) {
      e.pno_accuracy = PnoAccuracyMode::kClassThreshold;
    } else {
      v.Fail("pno_accuracy", "must be \"threshold\" or \"midpoint\"");
    }
    v.Finish();
  }
  if (const json* d = s.Get("datasets")) {
    ReadDatasets(*d, base_dir, cfg);
  } else {
    s.Fail("datasets", "is required");
  }
  s.Finish();

  CampaignParams probe = e.campaign;
  probe.Validate();
  e.train.Validate();
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    s.Fail("alpha", "must be in (0, 1)");
  }
  if (e.segments < 1) s.Fail("evaluation.segments", "must be >= 1");
  if (e.knn_k < 1) s.Fail("baselines.knn_k", "must be >= 1");
  if (e.threads < 0) s.Fail("threads", "must be >= 0");
  return cfg;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  const std::string text = ReadTextFile(path);
  try {
    return ParseRunConfig(text, path.parent_path());
  } catch (const Error& e) {
    throw ArgumentError(path.string() + ": " + e.what());
  }
}

SyntheticSpec ParseSyntheticSpec(const std::string& text) {
  const json root = ParseJson(text);
  Section s(root, "");
  SyntheticSpec spec;
  ReadSynthetic(s, spec);
  return spec;
}

std::vector<Method> ParseMethodList(const std::string& csv_list) {
  std::vector<Method> out;
  for (const auto& name : SplitList(csv_list)) {
    out.push_back(MethodFromName(name));
  }
  if (out.empty()) throw ArgumentError("empty method list");
  return out;
}

std::vector<IncentiveSpec> ParseIncentiveList(const std::string& csv_list) {
  std::vector<IncentiveSpec> out;
  for (const auto& item : SplitList(csv_list)) {
    out.push_back(IncentiveSpec::Parse(item));
  }
  if (out.empty()) throw ArgumentError("empty incentive list");
  return out;
}

std::vector<BenchmarkDataset> LoadDatasets(const RunConfig& cfg) {
  std::vector<BenchmarkDataset> out;
  out.reserve(cfg.datasets.size());
  for (const auto& src : cfg.datasets) {
    if (src.synthetic) {
      SyntheticData data = GenerateSynthetic(*src.synthetic);
      out.push_back({src.name, std::move(data.train), std::move(data.test)});
    } else {
      Dataset train = LoadDataset(src.train);
      Dataset test = LoadDataset(src.test, train.schema);
      out.push_back({src.name, std::move(train), std::move(test)});
    }
  }
  return out;
}

}  // namespace churnpno::cli
