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

// Model files.
//
// Layout: one header line
//
//   spamforest-model <format_version> <fnv1a-64 of body, hex> <body bytes>
//
// followed by a JSON body. Doubles are written in shortest round-trip form,
// so a load reproduces every parameter bit for bit.

#ifndef SPAMFOREST_MODEL_IO_HPP_
#define SPAMFOREST_MODEL_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "spamforest/config.hpp"
#include "spamforest/data_io.hpp"
#include "spamforest/model.hpp"
#include "spamforest/review.hpp"

namespace spamforest {

inline constexpr int kModelFormatVersion = 1;

struct ModelFile {
  int format_version = kModelFormatVersion;
  TrainConfig config;
  Model model;
  NormalizationStats normalization;
  int manifest_version = 0;
  std::vector<FeatureInfo> features;
  // How the held-out split was drawn, so evaluation can rebuild it.
  double train_fraction = 0.5;
  std::uint64_t split_seed = 0;

  friend bool operator==(const ModelFile&, const ModelFile&) = default;
};

std::string serialize_model(const ModelFile& file);
// Throws IntegrityError for a truncated, corrupt or inconsistent payload and
// VersionError for a format version this build does not read.
ModelFile deserialize_model(std::string_view bytes);

void save_model(const std::filesystem::path& path, const ModelFile& file);
ModelFile load_model(const std::filesystem::path& path);

std::uint64_t fnv1a_64(std::string_view bytes);

}  // namespace spamforest

#endif  // SPAMFOREST_MODEL_IO_HPP_
