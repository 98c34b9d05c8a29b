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

#include "spamforest/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>

#include "spamforest/errors.hpp"

namespace spamforest {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("config key '" + std::string(key) + "': cannot parse '" +
                      std::string(value) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config key '" + std::string(key) + "': expected true/false, got '" +
                    std::string(value) + "'");
}

}  // namespace

std::string_view to_string(Normalization n) {
  switch (n) {
    case Normalization::zscore:
      return "zscore";
    case Normalization::minmax:
      return "minmax";
    case Normalization::none:
      return "none";
  }
  return "none";
}

Normalization parse_normalization(std::string_view text) {
  if (text == "zscore") return Normalization::zscore;
  if (text == "minmax") return Normalization::minmax;
  if (text == "none") return Normalization::none;
  throw ConfigError("unknown normalization '" + std::string(text) +
                    "' (expected zscore, minmax or none)");
}

void TrainConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(n_tree >= 1, "n_tree must be >= 1");
  require(n_depth >= 1 && n_depth <= 16, "n_depth must be in [1, 16]");
  require(batch_size >= 1, "batch_size must be >= 1");
  require(ae_layer_count >= 1, "ae_layer_count must be >= 1");
  require(learning_rate > 0.0 && std::isfinite(learning_rate), "learning_rate must be > 0");
  require(leaf_learning_rate > 0.0 && std::isfinite(leaf_learning_rate),
          "leaf_learning_rate must be > 0");
  require(epsilon > 0.0 && std::isfinite(epsilon), "epsilon must be > 0");
  require(init_scale > 0.0 && std::isfinite(init_scale), "init_scale must be > 0");
}

std::size_t TrainConfig::resolved_code_width(std::size_t input_width) const {
  if (code_width != 0) return code_width;
  return std::max<std::size_t>(8, (input_width + 3) / 4);
}

std::size_t TrainConfig::resolved_fc_width(std::size_t input_width) const {
  if (fc_width != 0) return fc_width;
  return std::max<std::size_t>(4, resolved_code_width(input_width));
}

std::vector<ConfigEntry> parse_config_entries(std::istream& in) {
  std::vector<ConfigEntry> entries;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected 'key = value', got '" + std::string(body) + "'", number);
    }
    ConfigEntry entry{std::string(trim(body.substr(0, eq))),
                      std::string(trim(body.substr(eq + 1))), number};
    if (entry.key.empty()) throw ParseError("empty config key", number);
    entries.push_back(std::move(entry));
  }
  return entries;
}

bool apply_train_config_entry(TrainConfig& c, std::string_view key, std::string_view value) {
  using size = std::size_t;
  if (key == "n_epoch") c.n_epoch = parse_number<size>(key, value);
  else if (key == "n_tree") c.n_tree = parse_number<size>(key, value);
  else if (key == "n_depth") c.n_depth = parse_number<size>(key, value);
  else if (key == "batch_size") c.batch_size = parse_number<size>(key, value);
  else if (key == "learning_rate") c.learning_rate = parse_number<double>(key, value);
  else if (key == "epsilon") c.epsilon = parse_number<double>(key, value);
  else if (key == "leaf_learning_rate") c.leaf_learning_rate = parse_number<double>(key, value);
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "normalization") c.normalization = parse_normalization(value);
  else if (key == "fc_layer_count") c.fc_layer_count = parse_number<size>(key, value);
  else if (key == "ae_layer_count") c.ae_layer_count = parse_number<size>(key, value);
  else if (key == "code_width") c.code_width = parse_number<size>(key, value);
  else if (key == "fc_width") c.fc_width = parse_number<size>(key, value);
  else if (key == "init_scale") c.init_scale = parse_number<double>(key, value);
  else if (key == "reshuffle_each_epoch") c.reshuffle_each_epoch = parse_bool(key, value);
  else return false;
  return true;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::vector<std::pair<std::string, std::string>> train_config_entries(
    const TrainConfig& c) {
  return {
      {"n_epoch", std::to_string(c.n_epoch)},
      {"n_tree", std::to_string(c.n_tree)},
      {"n_depth", std::to_string(c.n_depth)},
      {"batch_size", std::to_string(c.batch_size)},
      {"learning_rate", format_double(c.learning_rate)},
      {"epsilon", format_double(c.epsilon)},
      {"leaf_learning_rate", format_double(c.leaf_learning_rate)},
      {"seed", std::to_string(c.seed)},
      {"normalization", std::string(to_string(c.normalization))},
      {"fc_layer_count", std::to_string(c.fc_layer_count)},
      {"ae_layer_count", std::to_string(c.ae_layer_count)},
      {"code_width", std::to_string(c.code_width)},
      {"fc_width", std::to_string(c.fc_width)},
      {"init_scale", format_double(c.init_scale)},
      {"reshuffle_each_epoch", c.reshuffle_each_epoch ? "true" : "false"},
  };
}

}  // namespace spamforest
