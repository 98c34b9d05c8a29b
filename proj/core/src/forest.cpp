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

#include "spamforest/forest.hpp"

#include <string>

#include "spamforest/errors.hpp"

namespace spamforest {

Vector TreeParams::leaf_distribution(std::size_t leaf) const {
  return softmax(leaf_logits.row(leaf));
}

void TreeParams::validate() const {
  if (depth == 0 || depth > 20) {
    throw ShapeError("tree depth must be in [1, 20], got " + std::to_string(depth));
  }
  const std::size_t leaves = std::size_t{1} << depth;
  if (routing.rows() != leaves - 1) {
    throw ShapeError("tree of depth " + std::to_string(depth) + " needs " +
                     std::to_string(leaves - 1) + " routing rows, has " +
                     shape_string(routing));
  }
  if (leaf_logits.rows() != leaves || leaf_logits.cols() == 0) {
    throw ShapeError("tree of depth " + std::to_string(depth) + " needs " +
                     std::to_string(leaves) + " leaf rows, has " +
                     shape_string(leaf_logits));
  }
}

void ForestParams::validate(std::size_t code_width) const {
  if (trees.empty()) throw ConfigError("forest has no trees");
  validate_chain(fc_layers, code_width, "fully connected");
  const std::size_t width = fc_layers.empty() ? code_width : fc_layers.back().output_width();
  for (std::size_t k = 0; k < trees.size(); ++k) {
    trees[k].validate();
    if (trees[k].input_width() != width || trees[k].depth != trees[0].depth ||
        trees[k].class_count() != trees[0].class_count()) {
      throw ShapeError("tree " + std::to_string(k) + " routing " +
                       shape_string(trees[k].routing) + " / leaves " +
                       shape_string(trees[k].leaf_logits) +
                       " inconsistent with tree input width " + std::to_string(width));
    }
  }
}

TreeParams make_tree(std::size_t depth, std::size_t input_width, std::size_t class_count,
                     Rng& rng, double scale) {
  TreeParams tree;
  tree.depth = depth;
  const std::size_t leaves = std::size_t{1} << depth;
  tree.routing = rng_normal_init(rng, leaves - 1, input_width, scale);
  tree.leaf_logits = rng_normal_init(rng, leaves, class_count, scale);
  tree.validate();
  return tree;
}

Vector tree_input(std::span<const double> h, std::span<const DenseLayer> fc_layers) {
  Vector x(h.begin(), h.end());
  for (const DenseLayer& layer : fc_layers) x = dense_forward(layer, x);
  return x;
}

double decision_probability(std::span<const double> x_t, std::span<const double> w_d) {
  if (x_t.size() != w_d.size()) {
    throw ShapeError("decision node: input length " + std::to_string(x_t.size()) +
                     ", routing weights length " + std::to_string(w_d.size()));
  }
  return sigmoid(dot(w_d, x_t));
}

Vector decision_probabilities(std::span<const double> x_t, const TreeParams& tree) {
  if (x_t.size() != tree.input_width()) {
    throw ShapeError("tree input length " + std::to_string(x_t.size()) +
                     ", routing " + shape_string(tree.routing));
  }
  Vector d(tree.decision_count());
  for (std::size_t n = 0; n < d.size(); ++n) d[n] = sigmoid(dot(tree.routing.row(n), x_t));
  return d;
}

Vector leaf_reach_from_decisions(std::span<const double> decisions, std::size_t depth) {
  const std::size_t leaves = std::size_t{1} << depth;
  if (decisions.size() != leaves - 1) {
    throw ShapeError("depth " + std::to_string(depth) + " needs " +
                     std::to_string(leaves - 1) + " decisions, got " +
                     std::to_string(decisions.size()));
  }
  // reach[i] for every heap position, decision nodes first then leaves.
  Vector reach(2 * leaves - 1);
  reach[0] = 1.0;
  for (std::size_t n = 0; n + 1 < leaves; ++n) {
    reach[2 * n + 1] = reach[n] * decisions[n];
    reach[2 * n + 2] = reach[n] * (1.0 - decisions[n]);
  }
  return Vector(reach.begin() + static_cast<std::ptrdiff_t>(leaves - 1), reach.end());
}

Vector leaf_reach_probabilities(std::span<const double> x_t, const TreeParams& tree) {
  return leaf_reach_from_decisions(decision_probabilities(x_t, tree), tree.depth);
}

Vector tree_predict(std::span<const double> x_t, const TreeParams& tree) {
  const Vector mu = leaf_reach_probabilities(x_t, tree);
  Vector out(tree.class_count(), 0.0);
  for (std::size_t l = 0; l < mu.size(); ++l) {
    const Vector p = tree.leaf_distribution(l);
    for (std::size_t y = 0; y < out.size(); ++y) out[y] += mu[l] * p[y];
  }
  return out;
}

Vector forest_predict(std::span<const double> x_t, const ForestParams& forest) {
  if (forest.trees.empty()) throw ConfigError("forest has no trees");
  Vector out(forest.trees.front().class_count(), 0.0);
  for (const TreeParams& tree : forest.trees) {
    const Vector p = tree_predict(x_t, tree);
    if (p.size() != out.size()) throw ShapeError("trees disagree on class count");
    for (std::size_t y = 0; y < out.size(); ++y) out[y] += p[y];
  }
  const double k = static_cast<double>(forest.trees.size());
  for (double& v : out) v /= k;
  return out;
}

std::size_t predict_label(std::span<const double> probs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i) {
    if (probs[i] > probs[best]) best = i;
  }
  return best;
}

}  // namespace spamforest
