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

// Joint loss, hand-derived backpropagation, the RMSProp-style update for the
// network parameters and the leaf logits, and the epoch/batch training loop.
//
// Per-sample loss:
//
//   L(x, y) = ||x - decode(encode(x))||^2 + (1/K) sum_k -log P_k[y | x]
//
// and the batch loss is its mean over the samples. Leaf distributions are
// stored as logits; P_{l,.} = softmax(logits_l). Gradients are exact and are
// checked against central finite differences in the test suite.
//
// Cost per epoch is linear in the number of samples and, per sample,
// proportional to sum over dense layers of (in x out) plus
// n_tree x (decision nodes x tree-input width + leaves x classes).

#ifndef SPAMFOREST_TRAINING_HPP_
#define SPAMFOREST_TRAINING_HPP_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "spamforest/config.hpp"
#include "spamforest/model.hpp"

namespace spamforest {

// Lower clamp on P_T[y|x] inside the tree loss.
inline constexpr double kProbabilityFloor = 1e-12;

// Dense numeric samples with binary labels.
struct Dataset {
  std::vector<Vector> rows;
  std::vector<int> labels;

  std::size_t size() const noexcept { return rows.size(); }
  std::size_t width() const noexcept { return rows.empty() ? 0 : rows.front().size(); }
  // Equal row/label counts, a common row width, labels in {0, 1}, finite values.
  void validate() const;
};

// -log(max(probs[y], kProbabilityFloor))
double tree_loss(std::span<const double> probs, std::size_t y);

struct SampleLoss {
  double reconstruction = 0.0;
  double forest = 0.0;  // mean over trees of tree_loss
};

// Mean over samples of reconstruction + forest. Throws ArgumentError if empty.
double mean_joint_loss(std::span<const SampleLoss> losses);

SampleLoss sample_loss(std::span<const double> x, int label, const Model& model);

// Joint loss over the rows selected by `batch` (indices into `data`).
double joint_loss(const Dataset& data, std::span<const std::size_t> batch,
                  const Model& model);
// Joint loss over every row.
double joint_loss(const Dataset& data, const Model& model);

// Gradient of joint_loss with respect to every parameter, shaped like the
// model. Throws NumericError naming the first non-finite block.
Model gradients(const Dataset& data, std::span<const std::size_t> batch,
                const Model& model);

// Backpropagates d(loss)/d(output) through sigmoid dense layers. `trace` is
// the output of dense_forward_trace for the same layers. Adds weight and
// bias gradients into `grads` and returns d(loss)/d(input).
Vector dense_backward(std::span<const DenseLayer> layers, std::span<const Vector> trace,
                      std::span<const double> d_output, std::span<DenseLayer> grads);

// Accumulates the gradient of scale * (-log P_T[y | x_t]) for one tree into
// `grad` (same shape as `tree`) and `d_input`. Returns P_T[y | x_t].
double tree_backward(std::span<const double> x_t, const TreeParams& tree, std::size_t y,
                     double scale, TreeParams& grad, std::span<double> d_input);

// G <- G + g*g; theta <- theta - eta / sqrt(G + eps) * g, elementwise.
void rmsprop_step(std::span<double> theta, std::span<const double> g,
                  std::span<double> accumulator, double eta, double epsilon);

// Squared-gradient accumulators, one per parameter.
struct OptimizerState {
  Model accumulators;
  explicit OptimizerState(const Model& model) : accumulators(zeros_like(model)) {}
};

// rmsprop_step over every block of the given kind.
void apply_rmsprop(Model& model, const Model& grads, OptimizerState& state,
                   BlockKind kind, double eta, double epsilon);

// The leaf rule: the RMSProp step on the logits; the exposed distribution is
// softmax of the updated logits, so every row stays normalised.
void leaf_update_step(Matrix& leaf_logits, const Matrix& grad, Matrix& accumulator,
                      double eta, double epsilon);

double accuracy(const Dataset& data, const Model& model);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double loss = 0.0;
  double accuracy = 0.0;
};

struct TrainResult {
  Model model;
  std::vector<EpochRecord> trace;
};

// Called after each epoch with the record and the current model.
using EpochObserver = std::function<void(const EpochRecord&, const Model&)>;

// Training loop:
//   initialise all parameters from config.seed;
//   shuffle the rows once;
//   for each epoch: split into batch_size chunks and take one RMSProp step on
//   the network parameters per chunk; then one leaf step using the leaf
//   gradient over the whole training set.
// The recorded loss and accuracy are measured on `data` after each epoch.
// Throws ConfigError if batch_size exceeds the row count and NumericError
// (naming the epoch) if the loss stops being finite.
TrainResult train(const Dataset& data, const TrainConfig& config,
                  const EpochObserver& observer = {});

// "epoch\tloss\taccuracy" header then one line per epoch.
void write_training_log(std::ostream& out, std::span<const EpochRecord> trace);

}  // namespace spamforest

#endif  // SPAMFOREST_TRAINING_HPP_
