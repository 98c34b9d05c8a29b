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

#include "spamforest/model_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "spamforest/errors.hpp"

namespace spamforest {
namespace {

using nlohmann::json;

constexpr std::string_view kMagic = "spamforest-model";

json to_json(const Matrix& m) {
  return {{"rows", m.rows()},
          {"cols", m.cols()},
          {"values", std::vector<double>(m.values().begin(), m.values().end())}};
}

Matrix matrix_from(const json& j) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  auto values = j.at("values").get<std::vector<double>>();
  if (values.size() != rows * cols) {
    throw IntegrityError("matrix holds " + std::to_string(values.size()) + " values for shape " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  }
  return Matrix(rows, cols, std::move(values));
}

json to_json(const std::vector<DenseLayer>& layers) {
  json out = json::array();
  for (const DenseLayer& l : layers) out.push_back({{"weights", to_json(l.weights)}, {"bias", l.bias}});
  return out;
}

std::vector<DenseLayer> layers_from(const json& j) {
  std::vector<DenseLayer> out;
  for (const json& l : j) out.push_back({matrix_from(l.at("weights")), l.at("bias").get<Vector>()});
  return out;
}

json body_json(const ModelFile& f) {
  json config = json::object();
  for (const auto& [key, value] : train_config_entries(f.config)) config[key] = value;

  json trees = json::array();
  for (const TreeParams& t : f.model.forest.trees) {
    trees.push_back({{"depth", t.depth},
                     {"routing", to_json(t.routing)},
                     {"leaf_logits", to_json(t.leaf_logits)}});
  }
  json features = json::array();
  for (const FeatureInfo& c : f.features) {
    features.push_back({{"name", c.name}, {"scope", to_string(c.scope)}, {"kind", to_string(c.kind)}});
  }
  return {{"config", config},
          {"model",
           {{"encoder", to_json(f.model.autoencoder.encoder)},
            {"decoder", to_json(f.model.autoencoder.decoder)},
            {"fc", to_json(f.model.forest.fc_layers)},
            {"trees", trees}}},
          {"normalization",
           {{"method", std::string(to_string(f.normalization.method))},
            {"shift", f.normalization.shift},
            {"scale", f.normalization.scale}}},
          {"manifest_version", f.manifest_version},
          {"features", features},
          {"train_fraction", f.train_fraction},
          {"split_seed", f.split_seed}};
}

ModelFile from_body(const json& j) {
  ModelFile f;
  f.config = TrainConfig{};
  for (const auto& [key, value] : j.at("config").items()) {
    if (!apply_train_config_entry(f.config, key, value.get<std::string>())) {
      throw IntegrityError("unknown config key '" + key + "' in model file");
    }
  }
  const json& m = j.at("model");
  f.model.autoencoder.encoder = layers_from(m.at("encoder"));
  f.model.autoencoder.decoder = layers_from(m.at("decoder"));
  f.model.forest.fc_layers = layers_from(m.at("fc"));
  for (const json& t : m.at("trees")) {
    f.model.forest.trees.push_back(
        {t.at("depth").get<std::size_t>(), matrix_from(t.at("routing")), matrix_from(t.at("leaf_logits"))});
  }
  const json& n = j.at("normalization");
  f.normalization.method = parse_normalization(n.at("method").get<std::string>());
  f.normalization.shift = n.at("shift").get<Vector>();
  f.normalization.scale = n.at("scale").get<Vector>();
  f.manifest_version = j.at("manifest_version").get<int>();
  for (const json& c : j.at("features")) {
    f.features.push_back({c.at("name").get<std::string>(),
                          parse_scope(c.at("scope").get<std::string>()),
                          parse_feature_kind(c.at("kind").get<std::string>())});
  }
  f.train_fraction = j.at("train_fraction").get<double>();
  f.split_seed = j.at("split_seed").get<std::uint64_t>();
  return f;
}

}  // namespace

std::uint64_t fnv1a_64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string serialize_model(const ModelFile& file) {
  file.model.validate();
  const std::string body = body_json(file).dump(1);
  char header[96];
  std::snprintf(header, sizeof header, "%s %d %016" PRIx64 " %zu\n", kMagic.data(),
                file.format_version, fnv1a_64(body), body.size());
  return header + body;
}

ModelFile deserialize_model(std::string_view bytes) {
  const auto newline = bytes.find('\n');
  if (newline == std::string_view::npos) throw IntegrityError("model file has no header line");
  std::istringstream header{std::string(bytes.substr(0, newline))};
  std::string magic, checksum_hex;
  int version = 0;
  std::size_t length = 0;
  if (!(header >> magic >> version >> checksum_hex >> length) || magic != kMagic) {
    throw IntegrityError("not a spamforest model file");
  }
  if (version != kModelFormatVersion) {
    throw VersionError("model format version " + std::to_string(version) +
                       " is not supported (expected " + std::to_string(kModelFormatVersion) + ")");
  }
  const std::string_view body = bytes.substr(newline + 1);
  if (body.size() != length) {
    throw IntegrityError("model body is " + std::to_string(body.size()) + " bytes, header says " +
                         std::to_string(length));
  }
  char expected[17];
  std::snprintf(expected, sizeof expected, "%016" PRIx64, fnv1a_64(body));
  if (checksum_hex != expected) throw IntegrityError("model checksum mismatch");

  ModelFile f;
  try {
    f = from_body(json::parse(body));
    f.model.validate();
  } catch (const json::exception& e) {
    throw IntegrityError(std::string("malformed model body: ") + e.what());
  } catch (const IntegrityError&) {
    throw;
  } catch (const Error& e) {
    throw IntegrityError(std::string("inconsistent model: ") + e.what());
  }
  f.format_version = version;
  if (f.normalization.width() != f.model.input_width() ||
      f.normalization.scale.size() != f.normalization.shift.size()) {
    throw IntegrityError("normalization width does not match the model input");
  }
  if (f.features.size() != f.model.input_width()) {
    throw IntegrityError("feature list does not match the model input");
  }
  return f;
}

void save_model(const std::filesystem::path& path, const ModelFile& file) {
  const std::string bytes = serialize_model(file);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileError("cannot write " + path.string());
  out << bytes;
  if (!out) throw FileError("failed writing " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_model(ss.str());
}

}  // namespace spamforest
