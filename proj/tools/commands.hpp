/*
 * Copyright 2026 The spamforest Authors.
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

// Subcommands of the spamforest tool. Each writes into its output directory
// and echoes the effective configuration there as config.txt.

#ifndef SPAMFOREST_TOOLS_COMMANDS_HPP_
#define SPAMFOREST_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spamforest/config.hpp"

namespace spamforest::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitInput = 2;

// TrainConfig plus the pipeline settings that sit around training.
struct RunConfig {
  TrainConfig train;
  std::size_t review_cap = 20;
  double train_fraction = 0.5;
  std::string name_list;  // empty: bundled list
  std::string lexicon;    // empty: bundled lexicon
  bool signed_rank = false;
  std::size_t histogram_bins = 20;
  int positive_class = 1;
};

// Throws ConfigError for an unknown key or a bad value.
void apply_run_config_entry(RunConfig& config, const std::string& key, const std::string& value);
RunConfig load_run_config(const fs::path& path);
std::vector<std::pair<std::string, std::string>> run_config_entries(const RunConfig& config);
void write_effective_config(const fs::path& out_dir, const RunConfig& config);

struct ExtractArgs {
  fs::path reviews;
  fs::path scores;
  fs::path out;
  bool delimited = false;  // comma-separated export instead of JSON lines
};

struct FeatureArgs {
  fs::path features;
  fs::path out;
};

struct ModelArgs {
  fs::path features;
  fs::path model;
  fs::path out;
  std::string split = "test";  // test, train or all
};

// Each returns the process exit code; errors propagate as exceptions and
// are mapped by run_command.
int cmd_extract(const ExtractArgs& args, const RunConfig& config, std::ostream& log);
int cmd_analyze(const FeatureArgs& args, const RunConfig& config, std::ostream& log);
int cmd_train(const FeatureArgs& args, const RunConfig& config, std::ostream& log);
int cmd_evaluate(const ModelArgs& args, const RunConfig& config, std::ostream& log);
int cmd_predict(const ModelArgs& args, const RunConfig& config, std::ostream& log);
int cmd_ablate(const FeatureArgs& args, const RunConfig& config, std::ostream& log);

// Full command line, as main() sees it.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spamforest::cli

#endif  // SPAMFOREST_TOOLS_COMMANDS_HPP_
