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


#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "spamforest/errors.hpp"
#include "spamforest/model_io.hpp"
#include "spamforest/synthetic.hpp"

namespace spamforest {
namespace {

namespace fs = std::filesystem;

ModelFile trained_file() {
  const LabeledDataset raw = two_gaussians(60, 4);
  const NormalizedFeatures norm = normalize(raw.features, Normalization::zscore);
  TrainConfig c;
  c.n_epoch = 5;
  c.batch_size = 20;
  ModelFile f;
  f.config = c;
  f.model = train(to_dataset(norm.features, raw.labels), c).model;
  f.normalization = norm.stats;
  f.manifest_version = raw.features.manifest_version;
  f.features = raw.features.columns;
  f.train_fraction = 0.75;
  f.split_seed = 99;
  return f;
}

TEST(ModelIo, BitExactRoundTrip) {
  const ModelFile f = trained_file();
  const std::string bytes = serialize_model(f);
  const ModelFile back = deserialize_model(bytes);
  EXPECT_EQ(back, f);
  EXPECT_EQ(serialize_model(back), bytes);

  const fs::path path = fs::temp_directory_path() /
                          ("spamforest_test_model_" + std::to_string(::getpid()) + ".sfm");
  save_model(path, f);
  EXPECT_EQ(load_model(path), f);
}

TEST(ModelIo, PredictionsSurviveSaveAndLoad) {
  const ModelFile f = trained_file();
  const ModelFile back = deserialize_model(serialize_model(f));
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const Vector x = rng_normal_vector(rng, 2, 1.5);
    EXPECT_EQ(predict_proba(x, back.model), predict_proba(x, f.model));
  }
}

TEST(ModelIo, TruncationIsIntegrityError) {
  const std::string bytes = serialize_model(trained_file());
  for (std::size_t keep : {std::size_t{0}, std::size_t{10}, bytes.size() / 2, bytes.size() - 1}) {
    EXPECT_THROW(deserialize_model(bytes.substr(0, keep)), IntegrityError) << keep;
  }
}

TEST(ModelIo, CorruptionIsIntegrityError) {
  std::string bytes = serialize_model(trained_file());
  const std::size_t at = bytes.find("weights");
  ASSERT_NE(at, std::string::npos);
  bytes[at] = 'W';
  EXPECT_THROW(deserialize_model(bytes), IntegrityError);
}

TEST(ModelIo, OtherFormatVersionIsVersionError) {
  ModelFile f = trained_file();
  f.format_version = kModelFormatVersion + 1;
  EXPECT_THROW(deserialize_model(serialize_model(f)), VersionError);
}

TEST(ModelIo, MissingFileIsFileError) {
  EXPECT_THROW(load_model("/nonexistent/model.sfm"), FileError);
}

TEST(ModelIo, FnvReferenceValues) {
  EXPECT_EQ(fnv1a_64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a_64("a"), 0xaf63dc4c8601ec8cull);
}

}  // namespace
}  // namespace spamforest
