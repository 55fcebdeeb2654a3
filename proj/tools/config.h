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

#ifndef CHURNPNO_TOOLS_CONFIG_H_
#define CHURNPNO_TOOLS_CONFIG_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "churnpno/experiments.h"
#include "churnpno/synthetic.h"

namespace churnpno::cli {

// One dataset of a run: either a pair of CSV files or a synthetic spec.
struct DatasetSource {
  std::string name;
  std::filesystem::path train;
  std::filesystem::path test;
  std::optional<SyntheticSpec> synthetic;
};

// Everything `benchmark` and `sweep` need. Relative paths in the file are
// resolved against the file's directory.
struct RunConfig {
  ExperimentConfig experiment;
  std::vector<DatasetSource> datasets;
  std::vector<Method> methods = DefaultMethods();
  std::vector<IncentiveSpec> incentives = StandardIncentiveGrid();
  double alpha = 0.05;
  std::filesystem::path output_dir;  // empty: use the default
};

// Parses the JSON config text. `base_dir` anchors relative paths. Throws
// ArgumentError with the line number for syntax errors and the key path
// for schema errors; unknown keys are errors. Dataset files must exist.
RunConfig ParseRunConfig(const std::string& text,
                         const std::filesystem::path& base_dir);
RunConfig LoadRunConfig(const std::filesystem::path& path);

// A synthetic spec object; missing keys keep their defaults.
SyntheticSpec ParseSyntheticSpec(const std::string& text);

std::vector<Method> ParseMethodList(const std::string& csv_list);
std::vector<IncentiveSpec> ParseIncentiveList(const std::string& csv_list);

// Materializes every dataset of the config.
std::vector<BenchmarkDataset> LoadDatasets(const RunConfig& cfg);

}  // namespace churnpno::cli

#endif  // CHURNPNO_TOOLS_CONFIG_H_
