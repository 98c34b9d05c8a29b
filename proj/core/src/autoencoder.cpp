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

#include "spamforest/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spamforest/errors.hpp"

namespace spamforest {

Vector dense_forward(const DenseLayer& layer, std::span<const double> input) {
  Vector z = affine(input, layer.weights, layer.bias);
  for (double& v : z) v = sigmoid(v);
  return z;
}

std::vector<Vector> dense_forward_trace(std::span<const DenseLayer> layers,
                                        std::span<const double> input) {
  std::vector<Vector> trace;
  trace.reserve(layers.size() + 1);
  trace.emplace_back(input.begin(), input.end());
  for (const DenseLayer& layer : layers) {
    trace.push_back(dense_forward(layer, trace.back()));
  }
  return trace;
}

void validate_chain(std::span<const DenseLayer> layers, std::size_t input_width,
                    const char* what) {
  std::size_t width = input_width;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const DenseLayer& layer = layers[i];
    if (layer.input_width() != width || layer.bias.size() != layer.output_width()) {
      throw ShapeError(std::string(what) + " layer " + std::to_string(i) +
                       ": weights " + shape_string(layer.weights) + ", bias (" +
                       std::to_string(layer.bias.size()) + "), expected input width " +
                       std::to_string(width));
    }
    width = layer.output_width();
  }
}

DenseLayer make_dense_layer(std::size_t input_width, std::size_t output_width,
                            Rng& rng, double scale) {
  DenseLayer layer;
  layer.weights = rng_normal_init(rng, output_width, input_width, scale);
  layer.bias = rng_normal_vector(rng, output_width, scale);
  return layer;
}

std::size_t AutoencoderParams::input_width() const {
  return encoder.empty() ? 0 : encoder.front().input_width();
}

std::size_t AutoencoderParams::code_width() const {
  return encoder.empty() ? 0 : encoder.back().output_width();
}

void AutoencoderParams::validate() const {
  if (encoder.empty() || decoder.empty()) {
    throw ShapeError("autoencoder needs at least one encoder and one decoder layer");
  }
  validate_chain(encoder, input_width(), "encoder");
  validate_chain(decoder, code_width(), "decoder");
  if (decoder.back().output_width() != input_width()) {
    throw ShapeError("decoder output width " +
                     std::to_string(decoder.back().output_width()) +
                     " differs from encoder input width " +
                     std::to_string(input_width()));
  }
}

std::vector<std::size_t> encoder_widths(std::size_t input_width, std::size_t layer_count,
                                        std::size_t code_width) {
  if (input_width == 0 || code_width == 0 || layer_count == 0) {
    throw ConfigError("autoencoder widths and layer count must be positive");
  }
  std::vector<std::size_t> widths{input_width};
  if (layer_count == 2) {
    widths.push_back(std::max((input_width + 1) / 2, code_width));
  } else {
    const double ratio = static_cast<double>(code_width) / input_width;
    for (std::size_t l = 1; l < layer_count; ++l) {
      const double w = input_width * std::pow(ratio, static_cast<double>(l) / layer_count);
      widths.push_back(std::max<std::size_t>(
          code_width, static_cast<std::size_t>(std::ceil(w - 1e-9))));
    }
  }
  widths.push_back(code_width);
  return widths;
}

AutoencoderParams make_autoencoder(std::span<const std::size_t> widths, Rng& rng,
                                   double scale) {
  if (widths.size() < 2) throw ConfigError("autoencoder needs at least two widths");
  AutoencoderParams params;
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    params.encoder.push_back(make_dense_layer(widths[i], widths[i + 1], rng, scale));
  }
  for (std::size_t i = widths.size() - 1; i > 0; --i) {
    params.decoder.push_back(make_dense_layer(widths[i], widths[i - 1], rng, scale));
  }
  return params;
}

Vector encode(std::span<const double> x, const AutoencoderParams& params) {
  if (x.size() != params.input_width()) {
    throw ShapeError("encode: input length " + std::to_string(x.size()) +
                     ", encoder expects " + std::to_string(params.input_width()));
  }
  Vector h(x.begin(), x.end());
  for (const DenseLayer& layer : params.encoder) h = dense_forward(layer, h);
  return h;
}

Vector decode(std::span<const double> h, const AutoencoderParams& params) {
  if (params.decoder.empty() || h.size() != params.decoder.front().input_width()) {
    throw ShapeError("decode: code length " + std::to_string(h.size()) +
                     ", decoder expects " +
                     std::to_string(params.decoder.empty()
                                        ? 0
                                        : params.decoder.front().input_width()));
  }
  Vector x(h.begin(), h.end());
  for (const DenseLayer& layer : params.decoder) x = dense_forward(layer, x);
  return x;
}

double reconstruction_loss(std::span<const double> x_in, std::span<const double> x_rec) {
  if (x_in.size() != x_rec.size()) {
    throw ShapeError("reconstruction loss: lengths " + std::to_string(x_in.size()) +
                     " and " + std::to_string(x_rec.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < x_in.size(); ++i) {
    const double d = x_in[i] - x_rec[i];
    s += d * d;
  }
  return s;
}

double reconstruction_loss(std::span<const Vector> x_in, std::span<const Vector> x_rec) {
  if (x_in.size() != x_rec.size()) {
    throw ShapeError("reconstruction loss: batch sizes " + std::to_string(x_in.size()) +
                     " and " + std::to_string(x_rec.size()));
  }
  if (x_in.empty()) throw ArgumentError("reconstruction loss of an empty batch");
  double s = 0.0;
  for (std::size_t i = 0; i < x_in.size(); ++i) s += reconstruction_loss(x_in[i], x_rec[i]);
  return s / static_cast<double>(x_in.size());
}

}  // namespace spamforest
