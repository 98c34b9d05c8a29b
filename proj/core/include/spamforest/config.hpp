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

#ifndef SPAMFOREST_CONFIG_HPP_
#define SPAMFOREST_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spamforest {

enum class Normalization { zscore, minmax, none };

std::string_view to_string(Normalization n);
// Throws ConfigError for anything other than zscore, minmax or none.
Normalization parse_normalization(std::string_view text);

// Hyperparameters of the autoencoder decision forest and its training loop.
// Field names are also the keys of the text config format.
struct TrainConfig {
  std::size_t n_epoch = 400;
  std::size_t n_tree = 5;
  std::size_t n_depth = 3;
  std::size_t batch_size = 50;
  double learning_rate = 0.01;
  double epsilon = 1e-8;
  double leaf_learning_rate = 0.01;
  std::uint64_t seed = 42;
  Normalization normalization = Normalization::zscore;
  std::size_t fc_layer_count = 1;
  std::size_t ae_layer_count = 2;

  // Width of the autoencoder code H; 0 picks max(8, ceil(n/4)).
  std::size_t code_width = 0;
  // Width of every fully connected layer; 0 picks max(4, code width).
  std::size_t fc_width = 0;
  // Standard deviation of the Gaussian parameter initialisation.
  double init_scale = 1.0;
  // Reshuffle before every epoch instead of once up front.
  bool reshuffle_each_epoch = false;

  // Throws ConfigError on any violated bound.
  void validate() const;

  std::size_t resolved_code_width(std::size_t input_width) const;
  std::size_t resolved_fc_width(std::size_t input_width) const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// One `key = value` entry with the line it came from.
struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

// Parses `key = value` lines. Blank lines and lines starting with '#' are
// ignored; anything else without '=' is a ParseError.
std::vector<ConfigEntry> parse_config_entries(std::istream& in);

// Applies one entry if `key` names a TrainConfig field. Returns false for an
// unknown key; throws ConfigError for a malformed value.
bool apply_train_config_entry(TrainConfig& config, std::string_view key,
                              std::string_view value);

// Every TrainConfig field as (key, value) in declaration order. Doubles are
// printed in shortest round-trip form.
std::vector<std::pair<std::string, std::string>> train_config_entries(
    const TrainConfig& config);

// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace spamforest

#endif  // SPAMFOREST_CONFIG_HPP_
