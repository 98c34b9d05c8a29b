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

#include "spamforest/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>
#include <utility>

#include "spamforest/errors.hpp"

namespace spamforest {

void Dataset::validate() const {
  if (rows.size() != labels.size()) {
    throw ShapeError("dataset has " + std::to_string(rows.size()) + " rows but " +
                     std::to_string(labels.size()) + " labels");
  }
  const std::size_t w = width();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != w) {
      throw ShapeError("row " + std::to_string(i) + " has width " +
                       std::to_string(rows[i].size()) + ", expected " + std::to_string(w));
    }
    if (labels[i] != 0 && labels[i] != 1) {
      throw ArgumentError("row " + std::to_string(i) + " has label " +
                          std::to_string(labels[i]) + ", expected 0 or 1");
    }
    if (!all_finite(rows[i])) {
      throw NumericError("row " + std::to_string(i) + " has a non-finite value");
    }
  }
}

double tree_loss(std::span<const double> probs, std::size_t y) {
  if (y >= probs.size()) {
    throw ArgumentError("class " + std::to_string(y) + " out of range for " +
                        std::to_string(probs.size()) + " classes");
  }
  return -std::log(std::max(probs[y], kProbabilityFloor));
}

double mean_joint_loss(std::span<const SampleLoss> losses) {
  if (losses.empty()) throw ArgumentError("joint loss of an empty batch");
  double s = 0.0;
  for (const SampleLoss& l : losses) s += l.reconstruction + l.forest;
  return s / static_cast<double>(losses.size());
}

SampleLoss sample_loss(std::span<const double> x, int label, const Model& model) {
  const ForwardResult f = forward(x, model);
  SampleLoss loss;
  loss.reconstruction = reconstruction_loss(x, f.reconstruction);
  for (const Vector& p : f.tree_probs) loss.forest += tree_loss(p, static_cast<std::size_t>(label));
  loss.forest /= static_cast<double>(f.tree_probs.size());
  return loss;
}

double joint_loss(const Dataset& data, std::span<const std::size_t> batch,
                  const Model& model) {
  std::vector<SampleLoss> losses;
  losses.reserve(batch.size());
  for (std::size_t i : batch) losses.push_back(sample_loss(data.rows.at(i), data.labels.at(i), model));
  return mean_joint_loss(losses);
}

double joint_loss(const Dataset& data, const Model& model) {
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return joint_loss(data, all, model);
}

Vector dense_backward(std::span<const DenseLayer> layers, std::span<const Vector> trace,
                      std::span<const double> d_output, std::span<DenseLayer> grads) {
  if (trace.size() != layers.size() + 1 || grads.size() != layers.size()) {
    throw ShapeError("dense_backward: " + std::to_string(layers.size()) + " layers, " +
                     std::to_string(trace.size()) + " activations, " +
                     std::to_string(grads.size()) + " gradient slots");
  }
  Vector d(d_output.begin(), d_output.end());
  for (std::size_t l = layers.size(); l-- > 0;) {
    const Vector& out = trace[l + 1];
    const Vector& in = trace[l];
    Vector delta(out.size());
    for (std::size_t r = 0; r < out.size(); ++r) delta[r] = d[r] * out[r] * (1.0 - out[r]);
    DenseLayer& g = grads[l];
    for (std::size_t r = 0; r < delta.size(); ++r) {
      auto grow = g.weights.row(r);
      for (std::size_t c = 0; c < in.size(); ++c) grow[c] += delta[r] * in[c];
      g.bias[r] += delta[r];
    }
    Vector d_in(in.size(), 0.0);
    add_transpose_product(layers[l].weights, delta, d_in);
    d = std::move(d_in);
  }
  return d;
}

double tree_backward(std::span<const double> x_t, const TreeParams& tree, std::size_t y,
                     double scale, TreeParams& grad, std::span<double> d_input) {
  const Vector decisions = decision_probabilities(x_t, tree);
  const Vector mu = leaf_reach_from_decisions(decisions, tree.depth);
  const std::size_t leaves = tree.leaf_count();
  const std::size_t inner = tree.decision_count();

  // weighted[pos] = sum over leaves under heap position pos of mu_l * P_{l,y}
  Vector weighted(inner + leaves, 0.0);
  std::vector<Vector> dist(leaves);
  double p_y = 0.0;
  for (std::size_t l = 0; l < leaves; ++l) {
    dist[l] = tree.leaf_distribution(l);
    weighted[inner + l] = mu[l] * dist[l][y];
    p_y += weighted[inner + l];
  }
  for (std::size_t n = inner; n-- > 0;) weighted[n] = weighted[2 * n + 1] + weighted[2 * n + 2];

  // d(-scale * log p)/dp; zero inside the clamp where the loss is flat.
  const double g_p = p_y > kProbabilityFloor ? -scale / p_y : 0.0;
  if (g_p == 0.0) return p_y;

  const std::size_t classes = tree.class_count();
  for (std::size_t l = 0; l < leaves; ++l) {
    auto g = grad.leaf_logits.row(l);
    const double common = g_p * mu[l] * dist[l][y];
    for (std::size_t c = 0; c < classes; ++c) {
      g[c] += common * ((c == y ? 1.0 : 0.0) - dist[l][c]);
    }
  }
  // dp/da_n = (1 - d_n) * weighted(left) - d_n * weighted(right), a_n = w_n . x_t
  for (std::size_t n = 0; n < inner; ++n) {
    const double d_n = decisions[n];
    const double da = g_p * ((1.0 - d_n) * weighted[2 * n + 1] - d_n * weighted[2 * n + 2]);
    if (da == 0.0) continue;
    auto g = grad.routing.row(n);
    const auto w = tree.routing.row(n);
    for (std::size_t c = 0; c < x_t.size(); ++c) {
      g[c] += da * x_t[c];
      d_input[c] += da * w[c];
    }
  }
  return p_y;
}

namespace {

// Adds the gradient of weight * L(x, y) into `grad`.
void accumulate_sample_gradient(std::span<const double> x, std::size_t y, double weight,
                                const Model& model, Model& grad) {
  const auto& ae = model.autoencoder;
  const std::vector<Vector> enc = dense_forward_trace(ae.encoder, x);
  const Vector& h = enc.back();
  const std::vector<Vector> dec = dense_forward_trace(ae.decoder, h);
  const std::vector<Vector> fc = dense_forward_trace(model.forest.fc_layers, h);
  const Vector& x_t = fc.back();

  const Vector& x_c = dec.back();
  Vector d_rec(x_c.size());
  for (std::size_t i = 0; i < x_c.size(); ++i) d_rec[i] = weight * 2.0 * (x_c[i] - x[i]);
  Vector d_h = dense_backward(ae.decoder, dec, d_rec, grad.autoencoder.decoder);

  Vector d_xt(x_t.size(), 0.0);
  const double tree_scale = weight / static_cast<double>(model.forest.trees.size());
  for (std::size_t k = 0; k < model.forest.trees.size(); ++k) {
    tree_backward(x_t, model.forest.trees[k], y, tree_scale, grad.forest.trees[k], d_xt);
  }
  const Vector d_h_forest =
      dense_backward(model.forest.fc_layers, fc, d_xt, grad.forest.fc_layers);
  for (std::size_t i = 0; i < d_h.size(); ++i) d_h[i] += d_h_forest[i];

  dense_backward(ae.encoder, enc, d_h, grad.autoencoder.encoder);
}

}  // namespace

Model gradients(const Dataset& data, std::span<const std::size_t> batch,
                const Model& model) {
  if (batch.empty()) throw ArgumentError("gradient of an empty batch");
  Model grad = zeros_like(model);
  const double weight = 1.0 / static_cast<double>(batch.size());
  for (std::size_t i : batch) {
    accumulate_sample_gradient(data.rows.at(i), static_cast<std::size_t>(data.labels.at(i)),
                               weight, model, grad);
  }
  for (const ConstParamBlock& block : parameter_blocks(std::as_const(grad))) {
    if (!all_finite(block.values)) {
      throw NumericError("non-finite gradient in parameter block " + block.name);
    }
  }
  return grad;
}

void rmsprop_step(std::span<double> theta, std::span<const double> g,
                  std::span<double> accumulator, double eta, double epsilon) {
  if (theta.size() != g.size() || theta.size() != accumulator.size()) {
    throw ShapeError("rmsprop_step: parameter, gradient and accumulator sizes " +
                     std::to_string(theta.size()) + ", " + std::to_string(g.size()) +
                     ", " + std::to_string(accumulator.size()));
  }
  for (std::size_t i = 0; i < theta.size(); ++i) {
    accumulator[i] += g[i] * g[i];
    theta[i] -= eta / std::sqrt(accumulator[i] + epsilon) * g[i];
  }
}

void apply_rmsprop(Model& model, const Model& grads, OptimizerState& state,
                   BlockKind kind, double eta, double epsilon) {
  auto params = parameter_blocks(model);
  const auto g = parameter_blocks(grads);
  auto acc = parameter_blocks(state.accumulators);
  if (params.size() != g.size() || params.size() != acc.size()) {
    throw ShapeError("model, gradient and optimizer state have different structure");
  }
  for (std::size_t b = 0; b < params.size(); ++b) {
    if (params[b].kind != kind) continue;
    rmsprop_step(params[b].values, g[b].values, acc[b].values, eta, epsilon);
  }
}

void leaf_update_step(Matrix& leaf_logits, const Matrix& grad, Matrix& accumulator,
                      double eta, double epsilon) {
  if (leaf_logits.rows() != grad.rows() || leaf_logits.cols() != grad.cols() ||
      leaf_logits.rows() != accumulator.rows() || leaf_logits.cols() != accumulator.cols()) {
    throw ShapeError("leaf update: logits " + shape_string(leaf_logits) + ", gradient " +
                     shape_string(grad) + ", accumulator " + shape_string(accumulator));
  }
  rmsprop_step(leaf_logits.values(), grad.values(), accumulator.values(), eta, epsilon);
}

double accuracy(const Dataset& data, const Model& model) {
  if (data.size() == 0) throw ArgumentError("accuracy of an empty dataset");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (predict(data.rows[i], model) == static_cast<std::size_t>(data.labels[i])) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

TrainResult train(const Dataset& data, const TrainConfig& config,
                  const EpochObserver& observer) {
  config.validate();
  data.validate();
  if (data.size() == 0) throw ConfigError("training set is empty");
  if (config.batch_size > data.size()) {
    throw ConfigError("batch_size " + std::to_string(config.batch_size) +
                      " exceeds the " + std::to_string(data.size()) + " training rows");
  }

  Rng rng(config.seed);
  TrainResult result;
  result.model = init_model(data.width(), config, rng);
  Model& model = result.model;
  OptimizerState state(model);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(order));
  const std::vector<std::size_t> all_rows = order;

  for (std::size_t epoch = 1; epoch <= config.n_epoch; ++epoch) {
    if (config.reshuffle_each_epoch && epoch > 1) rng.shuffle(std::span<std::size_t>(order));

    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t len = std::min(config.batch_size, order.size() - start);
      const std::span<const std::size_t> batch(order.data() + start, len);
      const Model g = gradients(data, batch, model);
      apply_rmsprop(model, g, state, BlockKind::theta, config.learning_rate, config.epsilon);
    }

    const Model g = gradients(data, all_rows, model);
    for (std::size_t k = 0; k < model.forest.trees.size(); ++k) {
      leaf_update_step(model.forest.trees[k].leaf_logits, g.forest.trees[k].leaf_logits,
                       state.accumulators.forest.trees[k].leaf_logits,
                       config.leaf_learning_rate, config.epsilon);
    }

    EpochRecord record{epoch, joint_loss(data, all_rows, model), accuracy(data, model)};
    if (!std::isfinite(record.loss)) {
      throw NumericError("non-finite loss at epoch " + std::to_string(epoch));
    }
    result.trace.push_back(record);
    if (observer) observer(record, model);
  }
  return result;
}

void write_training_log(std::ostream& out, std::span<const EpochRecord> trace) {
  out << "epoch\tloss\taccuracy\n";
  for (const EpochRecord& r : trace) {
    out << r.epoch << '\t' << format_double(r.loss) << '\t' << format_double(r.accuracy)
        << '\n';
  }
}

}  // namespace spamforest
