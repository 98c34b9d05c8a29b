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

// Soft decision forest.
//
// Each tree is a complete binary tree of depth D with 2^D - 1 decision nodes
// and 2^D leaves. Decision nodes are stored in heap order: node n has its
// left child at 2n+1 and its right child at 2n+2, and leaf j (counted left
// to right) sits at heap position 2^D - 1 + j. Node n sends a sample left
// with probability sigmoid(w_n . x_t) where w_n is row n of the routing
// matrix; there is no bias term. A leaf's class distribution is the softmax
// of its row of leaf logits.

#ifndef SPAMFOREST_FOREST_HPP_
#define SPAMFOREST_FOREST_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "spamforest/autoencoder.hpp"
#include "spamforest/numerics.hpp"

namespace spamforest {

struct TreeParams {
  std::size_t depth = 0;
  Matrix routing;      // (2^depth - 1) x input width
  Matrix leaf_logits;  // 2^depth x class count

  std::size_t decision_count() const noexcept { return routing.rows(); }
  std::size_t leaf_count() const noexcept { return leaf_logits.rows(); }
  std::size_t input_width() const noexcept { return routing.cols(); }
  std::size_t class_count() const noexcept { return leaf_logits.cols(); }

  // softmax(leaf_logits.row(leaf))
  Vector leaf_distribution(std::size_t leaf) const;

  void validate() const;

  friend bool operator==(const TreeParams&, const TreeParams&) = default;
};

struct ForestParams {
  std::vector<DenseLayer> fc_layers;  // H -> X_T, may be empty
  std::vector<TreeParams> trees;

  // Throws ConfigError for an empty forest, ShapeError for inconsistent
  // trees or an fc chain that does not start at `code_width`.
  void validate(std::size_t code_width) const;

  friend bool operator==(const ForestParams&, const ForestParams&) = default;
};

// Random tree: routing rows and leaf logits drawn from N(0, scale^2).
TreeParams make_tree(std::size_t depth, std::size_t input_width, std::size_t class_count,
                     Rng& rng, double scale);

// X_T = g(W_F h + b_F) through every fc layer; X_T = h with no layers.
Vector tree_input(std::span<const double> h, std::span<const DenseLayer> fc_layers);

// sigmoid(w_d . x_t): probability of taking the left branch.
double decision_probability(std::span<const double> x_t, std::span<const double> w_d);

// One probability per decision node, in heap order.
Vector decision_probabilities(std::span<const double> x_t, const TreeParams& tree);

// mu_l for each leaf: product over the root-to-leaf path of d_n on left
// edges and (1 - d_n) on right edges.
Vector leaf_reach_from_decisions(std::span<const double> decisions, std::size_t depth);
Vector leaf_reach_probabilities(std::span<const double> x_t, const TreeParams& tree);

// P_T[y | x] = sum_l mu_l * P_{l,y}
Vector tree_predict(std::span<const double> x_t, const TreeParams& tree);

// Average of the per-tree class distributions. Throws ConfigError for an
// empty forest.
Vector forest_predict(std::span<const double> x_t, const ForestParams& forest);

// argmax; ties go to the lower class index.
std::size_t predict_label(std::span<const double> probs);

}  // namespace spamforest

#endif  // SPAMFOREST_FOREST_HPP_
