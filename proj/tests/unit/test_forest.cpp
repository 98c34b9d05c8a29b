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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "spamforest/errors.hpp"
#include "spamforest/forest.hpp"

namespace spamforest {
namespace {

// Depth-1 tree whose leaf logits are the logs of the wanted distributions.
TreeParams stump(Vector w, const Vector& left, const Vector& right) {
  TreeParams t;
  t.depth = 1;
  t.routing = Matrix(1, w.size(), w);
  t.leaf_logits = Matrix(2, 2, {std::log(left[0]), std::log(left[1]), std::log(right[0]),
                                std::log(right[1])});
  return t;
}

double sum(const Vector& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

TEST(TreeInput, PassThroughZeroAndHandLayer) {
  const Vector h{0.1, 0.9};
  EXPECT_EQ(tree_input(h, {}), h);
  const std::vector<DenseLayer> zero{{Matrix(3, 2, 0.0), Vector(3, 0.0)}};
  EXPECT_EQ(tree_input(h, zero), (Vector{0.5, 0.5, 0.5}));
  const std::vector<DenseLayer> one{{Matrix(1, 2, {2.0, -1.0}), Vector{0.3}}};
  EXPECT_NEAR(tree_input(h, one)[0], oracle::sigmoid_ref(0.2 - 0.9 + 0.3), 1e-15);
  EXPECT_THROW(tree_input(Vector{1.0}, one), ShapeError);
}

TEST(DecisionProbability, Examples) {
  EXPECT_EQ(decision_probability(Vector{1, -1}, Vector{2, 2}), 0.5);
  EXPECT_EQ(decision_probability(Vector{5, 7}, Vector{0, 0}), 0.5);
  EXPECT_NEAR(decision_probability(Vector{std::log(3.0)}, Vector{1.0}), 0.75, 1e-15);
  EXPECT_THROW(decision_probability(Vector{1, 2}, Vector{1}), ShapeError);
}

TEST(LeafReach, Examples) {
  EXPECT_EQ(leaf_reach_from_decisions(Vector{0.7}, 1), (Vector{0.7, 1.0 - 0.7}));
  for (double mu : leaf_reach_from_decisions(Vector{0.5, 0.5, 0.5}, 2)) EXPECT_EQ(mu, 0.25);
  EXPECT_THROW(leaf_reach_from_decisions(Vector{0.5}, 2), ShapeError);
}

TEST(LeafReach, PathProductsFollowHeapOrder) {
  // Root d0, its left child d1, right child d2. The leftmost leaf is reached
  // through d0 then d1, the next through d0 then not d1.
  const double d0 = 0.8, d1 = 0.3, d2 = 0.6;
  const Vector mu = leaf_reach_from_decisions(Vector{d0, d1, d2}, 2);
  EXPECT_EQ(mu[0], d0 * d1);
  EXPECT_EQ(mu[1], d0 * (1 - d1));
  EXPECT_EQ(mu[2], (1 - d0) * d2);
  EXPECT_EQ(mu[3], (1 - d0) * (1 - d2));
}

TEST(LeafReach, SumsToOneOnRandomTrees) {
  Rng rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t depth = 1 + trial % 5, width = 1 + rng.uniform_index(6);
    const TreeParams t = make_tree(depth, width, 2, rng, 3.0);
    const Vector x = rng_normal_vector(rng, width, 2.0);
    const Vector mu = leaf_reach_probabilities(x, t);
    ASSERT_EQ(mu.size(), std::size_t{1} << depth);
    EXPECT_NEAR(sum(mu), 1.0, 1e-9);
    for (double m : mu) EXPECT_GE(m, 0.0);
  }
}

TEST(TreePredict, Examples) {
  const TreeParams t = stump(Vector{1.0}, {0.9, 0.1}, {0.2, 0.8});
  const Vector p = tree_predict(Vector{std::log(0.7 / 0.3)}, t);
  EXPECT_NEAR(p[0], 0.69, 1e-12);
  EXPECT_NEAR(p[1], 0.31, 1e-12);

  Rng rng(2);
  TreeParams same = make_tree(3, 4, 2, rng, 1.0);
  for (std::size_t l = 0; l < same.leaf_count(); ++l) {
    same.leaf_logits(l, 0) = 0.4;
    same.leaf_logits(l, 1) = -1.1;
  }
  const Vector q = oracle::softmax_ref({0.4, -1.1});
  for (int i = 0; i < 20; ++i) {
    const Vector out = tree_predict(rng_normal_vector(rng, 4, 1.0), same);
    EXPECT_NEAR(out[0], q[0], 1e-12);
    EXPECT_NEAR(out[1], q[1], 1e-12);
  }
}

TEST(TreePredict, SaturatedRoutingReturnsOneLeaf) {
  Rng rng(17);
  TreeParams t = make_tree(2, 3, 2, rng, 1.0);
  for (double& w : t.routing.values()) w *= 1e6;
  const Vector x = rng_normal_vector(rng, 3, 1.0);
  const Vector leaf = t.leaf_distribution(oracle::hard_route_leaf(t, x));
  const Vector out = tree_predict(x, t);
  EXPECT_NEAR(out[0], leaf[0], 1e-6);
  EXPECT_NEAR(out[1], leaf[1], 1e-6);
}

TEST(ForestPredict, Examples) {
  const TreeParams a = stump(Vector{0.0}, {0.6, 0.4}, {0.6, 0.4});
  const TreeParams b = stump(Vector{0.0}, {0.8, 0.2}, {0.8, 0.2});
  ForestParams f;
  f.trees = {a, b};
  const Vector p = forest_predict(Vector{1.0}, f);
  EXPECT_NEAR(p[0], 0.7, 1e-12);
  EXPECT_NEAR(p[1], 0.3, 1e-12);

  ForestParams single;
  single.trees = {a};
  EXPECT_EQ(forest_predict(Vector{1.0}, single), tree_predict(Vector{1.0}, a));
  ForestParams triple;
  triple.trees = {a, a, a};
  const Vector t3 = forest_predict(Vector{1.0}, triple), t1 = tree_predict(Vector{1.0}, a);
  EXPECT_NEAR(t3[0], t1[0], 1e-15);
  EXPECT_THROW(forest_predict(Vector{1.0}, ForestParams{}), ConfigError);
}

TEST(ForestPredict, ValidDistributionWithinTreeBounds) {
  Rng rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    ForestParams f;
    const std::size_t k = 1 + rng.uniform_index(5), depth = 1 + rng.uniform_index(4);
    for (std::size_t i = 0; i < k; ++i) f.trees.push_back(make_tree(depth, 3, 2, rng, 2.0));
    const Vector x = rng_normal_vector(rng, 3, 1.0);
    const Vector p = forest_predict(x, f);
    EXPECT_NEAR(sum(p), 1.0, 1e-9);
    for (std::size_t y = 0; y < 2; ++y) {
      double lo = 1.0, hi = 0.0;
      for (const auto& t : f.trees) {
        const double v = tree_predict(x, t)[y];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      EXPECT_GE(p[y], lo - 1e-15);
      EXPECT_LE(p[y], hi + 1e-15);
      EXPECT_GE(p[y], 0.0);
      EXPECT_LE(p[y], 1.0);
    }
  }
}

TEST(ForestPredict, HardRoutingMatchesTreeFollower) {
  Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    ForestParams f;
    for (int k = 0; k < 3; ++k) f.trees.push_back(make_tree(3, 4, 2, rng, 1.0));
    for (auto& t : f.trees) {
      for (double& w : t.routing.values()) w *= 1e6;
    }
    const Vector x = rng_normal_vector(rng, 4, 1.0);
    Vector expected(2, 0.0);
    for (const auto& t : f.trees) {
      std::vector<double> logits(t.leaf_logits.row(oracle::hard_route_leaf(t, x)).begin(),
                                 t.leaf_logits.row(oracle::hard_route_leaf(t, x)).end());
      const Vector d = oracle::softmax_ref(logits);
      for (std::size_t y = 0; y < 2; ++y) expected[y] += d[y] / 3.0;
    }
    const Vector p = forest_predict(x, f);
    EXPECT_NEAR(p[0], expected[0], 1e-6);
    EXPECT_NEAR(p[1], expected[1], 1e-6);
  }
}

TEST(PredictLabel, TieGoesLow) {
  EXPECT_EQ(predict_label(Vector{0.7, 0.3}), 0u);
  EXPECT_EQ(predict_label(Vector{0.3, 0.7}), 1u);
  EXPECT_EQ(predict_label(Vector{0.5, 0.5}), 0u);
}

TEST(TreeParams, ValidateShapes) {
  Rng rng(1);
  TreeParams t = make_tree(3, 2, 2, rng, 1.0);
  EXPECT_EQ(t.decision_count(), 7u);
  EXPECT_EQ(t.leaf_count(), 8u);
  EXPECT_NO_THROW(t.validate());
  t.leaf_logits = Matrix(7, 2, 0.0);
  EXPECT_THROW(t.validate(), ShapeError);
}

}  // namespace
}  // namespace spamforest
