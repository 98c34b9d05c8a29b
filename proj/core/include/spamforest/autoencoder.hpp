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

#ifndef SPAMFOREST_AUTOENCODER_HPP_
#define SPAMFOREST_AUTOENCODER_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "spamforest/numerics.hpp"

namespace spamforest {

// One fully connected sigmoid layer: out = sigmoid(weights * in + bias).
struct DenseLayer {
  Matrix weights;  // (output x input)
  Vector bias;     // output

  std::size_t input_width() const noexcept { return weights.cols(); }
  std::size_t output_width() const noexcept { return weights.rows(); }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

Vector dense_forward(const DenseLayer& layer, std::span<const double> input);

// Runs `layers` in order. The returned list holds the input followed by
// every layer's activation, so back() is the network output.
std::vector<Vector> dense_forward_trace(std::span<const DenseLayer> layers,
                                        std::span<const double> input);

// Checks that each layer's bias matches its weights and that consecutive
// widths chain. `input_width` is the expected width of the first layer.
void validate_chain(std::span<const DenseLayer> layers, std::size_t input_width,
                    const char* what);

// Gaussian-initialised layer (weights and bias both N(0, scale^2)).
DenseLayer make_dense_layer(std::size_t input_width, std::size_t output_width,
                            Rng& rng, double scale);

struct AutoencoderParams {
  std::vector<DenseLayer> encoder;
  std::vector<DenseLayer> decoder;

  // n: width of X_I.
  std::size_t input_width() const;
  // m: width of the code H.
  std::size_t code_width() const;

  // Throws ShapeError unless the encoder chains n -> ... -> m and the
  // decoder chains m -> ... -> n.
  void validate() const;

  friend bool operator==(const AutoencoderParams&, const AutoencoderParams&) = default;
};

// Encoder widths n -> w_1 -> ... -> m for `layer_count` layers. With two
// layers this is n -> max(ceil(n/2), m) -> m; more layers interpolate
// geometrically between n and m.
std::vector<std::size_t> encoder_widths(std::size_t input_width, std::size_t layer_count,
                                        std::size_t code_width);

// Encoder along `widths`, decoder along the reversed widths.
AutoencoderParams make_autoencoder(std::span<const std::size_t> widths, Rng& rng,
                                   double scale);

// H = f_E(W_E x + b_E), layer by layer.
Vector encode(std::span<const double> x, const AutoencoderParams& params);
// X_C = f_D(W_D h + b_D), layer by layer.
Vector decode(std::span<const double> h, const AutoencoderParams& params);

// ||x_in - x_rec||^2
double reconstruction_loss(std::span<const double> x_in, std::span<const double> x_rec);
// Mean of the per-sample squared errors.
double reconstruction_loss(std::span<const Vector> x_in, std::span<const Vector> x_rec);

}  // namespace spamforest

#endif  // SPAMFOREST_AUTOENCODER_HPP_
