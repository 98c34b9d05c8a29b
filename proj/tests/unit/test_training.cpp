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

#include <cmath>
#include <numeric>
#include <sstream>

#include "oracles.hpp"
#include "spamforest/data_io.hpp"
#include "spamforest/errors.hpp"
#include "spamforest/synthetic.hpp"
#include "spamforest/training.hpp"

namespace spamforest {
namespace {

TrainConfig desk_config() {
  TrainConfig c;
  c.n_tree = 2;
  c.n_depth = 2;
  c.fc_layer_count = 1;
  c.ae_layer_count = 2;
  c.batch_size = 5;
  return c;
}

Dataset random_dataset(std::size_t rows, std::size_t width, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  for (std::size_t i = 0; i < rows; ++i) {
    d.rows.push_back(rng_normal_vector(rng, width, 1.0));
    d.labels.push_back(static_cast<int>(i % 2));
  }
  return d;
}

Dataset gaussian_dataset(std::uint64_t seed) {
  const LabeledDataset raw = two_gaussians(500, seed);
  return to_dataset(normalize(raw.features, Normalization::zscore).features, raw.labels);
}

TEST(TreeLoss, Examples) {
  EXPECT_EQ(tree_loss(Vector{0.0, 1.0}, 1), 0.0);
  EXPECT_NEAR(tree_loss(Vector{0.5, 0.5}, 0), 0.6931, 1e-4);
  EXPECT_NEAR(tree_loss(Vector{0.69, 0.31}, 0), 0.3711, 1e-4);
  EXPECT_NEAR(tree_loss(Vector{1.0, 0.0}, 1), -std::log(kProbabilityFloor), 1e-9);
}

TEST(JointLoss, MeanOfComponents) {
  const std::vector<SampleLoss> parts{{0.5, std::log(2.0)}, {1.5, 0.0}};
  EXPECT_NEAR(mean_joint_loss(parts), 1.3466, 1e-4);
  EXPECT_EQ(mean_joint_loss(std::vector<SampleLoss>{{0.0, 0.0}}), 0.0);
  EXPECT_THROW(mean_joint_loss(std::vector<SampleLoss>{}), ArgumentError);
}

TEST(JointLoss, SingleSampleIsReconstructionPlusTreeLoss) {
  Rng rng(6);
  TrainConfig c = desk_config();
  c.n_tree = 1;
  const Model m = init_model(4, c, rng);
  const Vector x{0.1, -0.4, 0.8, 0.0};
  const ForwardResult f = forward(x, m);
  const Dataset d{{x}, {1}};
  const std::vector<std::size_t> batch{0};
  EXPECT_NEAR(joint_loss(d, batch, m),
              reconstruction_loss(x, f.reconstruction) + tree_loss(f.tree_probs[0], 1), 1e-14);
  EXPECT_THROW(joint_loss(d, std::vector<std::size_t>{}, m), ArgumentError);
}

TEST(Forward, HandChainOnTinyModel) {
  Model m;
  m.autoencoder.encoder.push_back({Matrix(1, 2, {1.0, -1.0}), Vector{0.5}});
  m.autoencoder.decoder.push_back({Matrix(2, 1, {2.0, -3.0}), Vector{0.0, 0.1}});
  TreeParams t;
  t.depth = 1;
  t.routing = Matrix(1, 1, {1.5});
  t.leaf_logits = Matrix(2, 2, {0.2, -0.2, -1.0, 1.0});
  m.forest.trees.push_back(t);
  const Vector x{0.3, 0.9};
  using oracle::sigmoid_ref;
  const double h = sigmoid_ref(0.3 - 0.9 + 0.5);
  const double d = sigmoid_ref(1.5 * h);
  const Vector l0 = oracle::softmax_ref({0.2, -0.2}), l1 = oracle::softmax_ref({-1.0, 1.0});
  const ForwardResult f = forward(x, m);
  EXPECT_NEAR(f.code[0], h, 1e-15);
  EXPECT_NEAR(f.reconstruction[0], sigmoid_ref(2.0 * h), 1e-15);
  EXPECT_NEAR(f.reconstruction[1], sigmoid_ref(-3.0 * h + 0.1), 1e-15);
  EXPECT_NEAR(f.forest_probs[0], d * l0[0] + (1 - d) * l1[0], 1e-15);
  EXPECT_NEAR(f.forest_probs[1], d * l0[1] + (1 - d) * l1[1], 1e-15);
  const ForwardResult again = forward(x, m);
  EXPECT_EQ(again.forest_probs, f.forest_probs);
  EXPECT_EQ(again.reconstruction, f.reconstruction);
}

TEST(Forward, IdenticalTreesGiveTreeOutput) {
  Rng rng(12);
  Model m = init_model(5, desk_config(), rng);
  m.forest.trees[1] = m.forest.trees[0];
  const ForwardResult f = forward(Vector{0.1, 0.2, 0.3, 0.4, 0.5}, m);
  EXPECT_NEAR(f.forest_probs[0], f.tree_probs[0][0], 1e-15);
  EXPECT_NEAR(f.forest_probs[1], f.tree_probs[0][1], 1e-15);
}

TEST(Gradients, DeskModelMatchesFiniteDifferences) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Rng rng(seed);
    const Model m = init_model(8, desk_config(), rng);
    const Dataset d = random_dataset(5, 8, seed + 100);
    const std::vector<std::size_t> batch{0, 1, 2, 3, 4};
    for (const auto& block : oracle::gradient_check(d, batch, m)) {
      EXPECT_LT(block.max_relative_error, 1e-4) << block.name << " seed " << seed;
      EXPECT_LT(block.max_abs_error, 1e-8) << block.name << " seed " << seed;
    }
  }
}

TEST(Gradients, WithoutFullyConnectedLayers) {
  Rng rng(9);
  TrainConfig c = desk_config();
  c.fc_layer_count = 0;
  c.ae_layer_count = 1;
  const Model m = init_model(6, c, rng);
  const Dataset d = random_dataset(4, 6, 55);
  for (const auto& block : oracle::gradient_check(d, std::vector<std::size_t>{0, 1, 2, 3}, m)) {
    EXPECT_LT(block.max_relative_error, 1e-4) << block.name;
  }
}

TEST(Gradients, LogisticToyClosedForm) {
  // One decision node fed by one input; both leaves saturated so the
  // tree output is sigmoid(w x) for class 0.
  TreeParams t;
  t.depth = 1;
  t.routing = Matrix(1, 1, {0.7});
  t.leaf_logits = Matrix(2, 2, {60.0, -60.0, -60.0, 60.0});
  TreeParams grad = t;
  std::fill(grad.routing.values().begin(), grad.routing.values().end(), 0.0);
  std::fill(grad.leaf_logits.values().begin(), grad.leaf_logits.values().end(), 0.0);
  const double x = 1.3;
  Vector d_input(1, 0.0);
  tree_backward(Vector{x}, t, 0, 1.0, grad, d_input);
  const double s = oracle::sigmoid_ref(0.7 * x);
  EXPECT_NEAR(grad.routing(0, 0), (s - 1.0) * x, 1e-10);
  EXPECT_NEAR(d_input[0], (s - 1.0) * 0.7, 1e-10);
}

TEST(Gradients, StationaryAtSaturatedOptimum) {
  TreeParams t;
  t.depth = 1;
  t.routing = Matrix(1, 1, {0.0});
  t.leaf_logits = Matrix(2, 2, {40.0, -40.0, 40.0, -40.0});
  TreeParams grad = t;
  std::fill(grad.routing.values().begin(), grad.routing.values().end(), 0.0);
  std::fill(grad.leaf_logits.values().begin(), grad.leaf_logits.values().end(), 0.0);
  Vector d_input(1, 0.0);
  const double p = tree_backward(Vector{2.0}, t, 0, 1.0, grad, d_input);
  EXPECT_NEAR(p, 1.0, 1e-15);
  for (double g : grad.leaf_logits.values()) EXPECT_LT(std::fabs(g), 1e-8);
  EXPECT_LT(std::fabs(grad.routing(0, 0)), 1e-8);
}

TEST(Rmsprop, Examples) {
  Vector theta{1.0, -2.0}, acc{0.0, 0.5};
  rmsprop_step(theta, Vector{0.0, 0.0}, acc, 0.01, 1e-8);
  EXPECT_EQ(theta, (Vector{1.0, -2.0}));
  EXPECT_EQ(acc, (Vector{0.0, 0.5}));

  Vector t1{0.0}, g1{0.0};
  rmsprop_step(t1, Vector{3.0}, g1, 0.01, 1e-8);
  EXPECT_NEAR(t1[0], -0.01, 1e-10);
  EXPECT_EQ(g1[0], 9.0);

  Vector t2{0.0}, g2{0.0};
  rmsprop_step(t2, Vector{1.0}, g2, 0.01, 1e-8);
  const double after_first = t2[0];
  rmsprop_step(t2, Vector{1.0}, g2, 0.01, 1e-8);
  EXPECT_EQ(g2[0], 2.0);
  EXPECT_NEAR(t2[0] - after_first, -0.01 / std::sqrt(2.0 + 1e-8), 1e-15);
}

TEST(Rmsprop, AccumulatorsNeverDecrease) {
  Rng rng(40);
  Model m = init_model(5, desk_config(), rng);
  OptimizerState state(m);
  const Dataset d = random_dataset(10, 5, 3);
  std::vector<std::size_t> all(10);
  std::iota(all.begin(), all.end(), 0);
  Model previous = state.accumulators;
  for (int step = 0; step < 20; ++step) {
    const Model g = gradients(d, all, m);
    apply_rmsprop(m, g, state, BlockKind::theta, 0.01, 1e-8);
    apply_rmsprop(m, g, state, BlockKind::leaf, 0.01, 1e-8);
    const auto now = parameter_blocks(static_cast<const Model&>(state.accumulators));
    const auto before = parameter_blocks(static_cast<const Model&>(previous));
    for (std::size_t b = 0; b < now.size(); ++b) {
      for (std::size_t i = 0; i < now[b].values.size(); ++i) {
        EXPECT_GE(now[b].values[i], before[b].values[i]);
        EXPECT_GE(now[b].values[i], 0.0);
      }
    }
    previous = state.accumulators;
  }
}

TEST(LeafUpdate, ZeroGradientKeepsDistribution) {
  Matrix logits(2, 2, {0.3, -0.3, 1.0, 2.0});
  const Matrix before = logits;
  Matrix acc(2, 2, 0.0);
  leaf_update_step(logits, Matrix(2, 2, 0.0), acc, 0.01, 1e-8);
  EXPECT_EQ(logits, before);
}

TEST(LeafUpdate, HandComputedSoftmaxOfSteppedLogits) {
  Matrix logits(1, 2, {0.5, -0.5});
  Matrix acc(1, 2, 0.0);
  const Matrix grad(1, 2, {2.0, -0.5});
  leaf_update_step(logits, grad, acc, 0.1, 1e-8);
  const double s0 = 0.1 * 2.0 / std::sqrt(4.0 + 1e-8);
  const double s1 = 0.1 * -0.5 / std::sqrt(0.25 + 1e-8);
  const Vector expected = oracle::softmax_ref({0.5 - s0, -0.5 - s1});
  const Vector got = softmax(logits.row(0));
  EXPECT_NEAR(got[0], expected[0], 1e-15);
  EXPECT_NEAR(got[1], expected[1], 1e-15);
  EXPECT_NEAR(got[0] + got[1], 1.0, 1e-12);
}

TEST(Train, ZeroEpochsReturnsInitialisation) {
  const Dataset d = random_dataset(20, 3, 4);
  TrainConfig c = desk_config();
  c.n_epoch = 0;
  Rng rng(c.seed);
  const Model init = init_model(3, c, rng);
  const TrainResult r = train(d, c);
  EXPECT_EQ(r.model, init);
  EXPECT_TRUE(r.trace.empty());
}

TEST(Train, SameSeedSameTrace) {
  const Dataset d = random_dataset(30, 4, 8);
  TrainConfig c = desk_config();
  c.n_epoch = 15;
  const TrainResult a = train(d, c), b = train(d, c);
  ASSERT_EQ(a.trace.size(), 15u);
  for (std::size_t i = 0; i < a.trace.size(); ++i) EXPECT_EQ(a.trace[i].loss, b.trace[i].loss);
  EXPECT_EQ(a.model, b.model);
  c.seed = 43;
  EXPECT_NE(train(d, c).trace.back().loss, a.trace.back().loss);
}

TEST(Train, BatchLargerThanDataIsConfigError) {
  const Dataset d = random_dataset(4, 2, 1);
  TrainConfig c = desk_config();
  c.batch_size = 5;
  EXPECT_THROW(train(d, c), ConfigError);
}

TEST(Train, TwoGaussiansReachHighTrainingAccuracy) {
  const Dataset d = gaussian_dataset(7);
  TrainConfig c;
  c.n_epoch = 200;
  std::size_t epochs_seen = 0;
  const TrainResult r = train(d, c, [&](const EpochRecord& rec, const Model& m) {
    ++epochs_seen;
    EXPECT_EQ(rec.epoch, epochs_seen);
    for (const auto& t : m.forest.trees) {
      for (std::size_t l = 0; l < t.leaf_count(); ++l) {
        const Vector p = t.leaf_distribution(l);
        EXPECT_NEAR(p[0] + p[1], 1.0, 1e-12);
        EXPECT_GE(p[0], 0.0);
        EXPECT_GE(p[1], 0.0);
      }
    }
  });
  EXPECT_EQ(epochs_seen, 200u);
  EXPECT_GE(r.trace.back().accuracy, 0.95);
  EXPECT_GE(accuracy(d, r.model), 0.95);
}

TEST(Train, LogHasOneLinePerEpoch) {
  std::ostringstream out;
  const std::vector<EpochRecord> trace{{1, 0.5, 0.75}, {2, 0.25, 1.0}};
  write_training_log(out, trace);
  EXPECT_EQ(out.str(), "epoch\tloss\taccuracy\n1\t0.5\t0.75\n2\t0.25\t1\n");
}

}  // namespace
}  // namespace spamforest
