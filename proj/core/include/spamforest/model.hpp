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

#ifndef SPAMFOREST_MODEL_HPP_
#define SPAMFOREST_MODEL_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "spamforest/autoencoder.hpp"
#include "spamforest/config.hpp"
#include "spamforest/forest.hpp"

namespace spamforest {

inline constexpr std::size_t kClassCount = 2;

// The full autoencoder decision forest. The same type also carries
// gradients and optimizer accumulators, which have identical shapes.
struct Model {
  AutoencoderParams autoencoder;
  ForestParams forest;

  std::size_t input_width() const { return autoencoder.input_width(); }
  std::size_t class_count() const {
    return forest.trees.empty() ? 0 : forest.trees.front().class_count();
  }
  void validate() const;

  friend bool operator==(const Model&, const Model&) = default;
};

// Builds the structure for `input_width` features and draws every parameter
// (including the leaf logits) from N(0, init_scale^2).
Model init_model(std::size_t input_width, const TrainConfig& config, Rng& rng);

// Same shapes, all zeros.
Model zeros_like(const Model& model);

// Theta covers encoder, decoder, fc and routing weights; leaf blocks are
// the per-tree leaf logits.
enum class BlockKind { theta, leaf };

struct ParamBlock {
  std::string name;  // e.g. "encoder[0].weights", "tree[1].leaf_logits"
  BlockKind kind;
  std::span<double> values;
};

struct ConstParamBlock {
  std::string name;
  BlockKind kind;
  std::span<const double> values;
};

// Every parameter tensor in a fixed order. Two models with equal shapes
// produce blocks that line up one to one.
std::vector<ParamBlock> parameter_blocks(Model& model);
std::vector<ConstParamBlock> parameter_blocks(const Model& model);

std::size_t parameter_count(const Model& model);

struct ForwardResult {
  Vector code;            // H
  Vector reconstruction;  // X_C
  Vector tree_input;      // X_T
  std::vector<Vector> tree_probs;
  Vector forest_probs;
};

// encode -> decode for the reconstruction, encode -> fc -> trees -> average
// for the class distribution.
ForwardResult forward(std::span<const double> x, const Model& model);

// Class distribution only; skips the decoder.
Vector predict_proba(std::span<const double> x, const Model& model);
std::size_t predict(std::span<const double> x, const Model& model);

}  // namespace spamforest

#endif  // SPAMFOREST_MODEL_HPP_
