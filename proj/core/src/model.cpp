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

#include "spamforest/model.hpp"

#include <algorithm>

#include "spamforest/errors.hpp"

namespace spamforest {

void Model::validate() const {
  autoencoder.validate();
  forest.validate(autoencoder.code_width());
}

Model init_model(std::size_t input_width, const TrainConfig& config, Rng& rng) {
  config.validate();
  if (input_width == 0) throw ConfigError("model needs at least one input feature");
  const std::size_t code = config.resolved_code_width(input_width);
  const std::vector<std::size_t> widths =
      encoder_widths(input_width, config.ae_layer_count, code);

  Model model;
  model.autoencoder = make_autoencoder(widths, rng, config.init_scale);
  std::size_t width = code;
  for (std::size_t l = 0; l < config.fc_layer_count; ++l) {
    const std::size_t out = config.resolved_fc_width(input_width);
    model.forest.fc_layers.push_back(make_dense_layer(width, out, rng, config.init_scale));
    width = out;
  }
  for (std::size_t k = 0; k < config.n_tree; ++k) {
    model.forest.trees.push_back(
        make_tree(config.n_depth, width, kClassCount, rng, config.init_scale));
  }
  model.validate();
  return model;
}

Model zeros_like(const Model& model) {
  Model z = model;
  for (ParamBlock& block : parameter_blocks(z)) {
    std::fill(block.values.begin(), block.values.end(), 0.0);
  }
  return z;
}

namespace {

template <typename BlockT, typename ModelT>
std::vector<BlockT> collect_blocks(ModelT& model) {
  std::vector<BlockT> blocks;
  auto add_layers = [&](auto& layers, const std::string& prefix) {
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const std::string base = prefix + "[" + std::to_string(i) + "]";
      blocks.push_back({base + ".weights", BlockKind::theta, layers[i].weights.values()});
      blocks.push_back({base + ".bias", BlockKind::theta, layers[i].bias});
    }
  };
  add_layers(model.autoencoder.encoder, "encoder");
  add_layers(model.autoencoder.decoder, "decoder");
  add_layers(model.forest.fc_layers, "fc");
  for (std::size_t k = 0; k < model.forest.trees.size(); ++k) {
    auto& tree = model.forest.trees[k];
    const std::string base = "tree[" + std::to_string(k) + "]";
    blocks.push_back({base + ".routing", BlockKind::theta, tree.routing.values()});
    blocks.push_back({base + ".leaf_logits", BlockKind::leaf, tree.leaf_logits.values()});
  }
  return blocks;
}

}  // namespace

std::vector<ParamBlock> parameter_blocks(Model& model) {
  return collect_blocks<ParamBlock>(model);
}

std::vector<ConstParamBlock> parameter_blocks(const Model& model) {
  return collect_blocks<ConstParamBlock>(model);
}

std::size_t parameter_count(const Model& model) {
  std::size_t n = 0;
  for (const ConstParamBlock& b : parameter_blocks(model)) n += b.values.size();
  return n;
}

ForwardResult forward(std::span<const double> x, const Model& model) {
  ForwardResult out;
  out.code = encode(x, model.autoencoder);
  out.reconstruction = decode(out.code, model.autoencoder);
  out.tree_input = tree_input(out.code, model.forest.fc_layers);
  if (model.forest.trees.empty()) throw ConfigError("forest has no trees");
  out.forest_probs.assign(model.class_count(), 0.0);
  for (const TreeParams& tree : model.forest.trees) {
    out.tree_probs.push_back(tree_predict(out.tree_input, tree));
    for (std::size_t y = 0; y < out.forest_probs.size(); ++y) {
      out.forest_probs[y] += out.tree_probs.back()[y];
    }
  }
  const double k = static_cast<double>(model.forest.trees.size());
  for (double& p : out.forest_probs) p /= k;
  return out;
}

Vector predict_proba(std::span<const double> x, const Model& model) {
  return forest_predict(tree_input(encode(x, model.autoencoder), model.forest.fc_layers),
                        model.forest);
}

std::size_t predict(std::span<const double> x, const Model& model) {
  return predict_label(predict_proba(x, model));
}

}  // namespace spamforest
