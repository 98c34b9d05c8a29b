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

#include "spamforest/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "spamforest/errors.hpp"

namespace spamforest {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    throw ShapeError("matrix (" + std::to_string(rows) + " x " +
                     std::to_string(cols) + ") given " +
                     std::to_string(values_.size()) + " values");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::string shape_string(const Matrix& m) {
  return "(" + std::to_string(m.rows()) + " x " + std::to_string(m.cols()) + ")";
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ShapeError("dot: lengths " + std::to_string(a.size()) + " and " +
                     std::to_string(b.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vector affine(std::span<const double> x, const Matrix& weights,
              std::span<const double> bias) {
  if (weights.cols() != x.size() || weights.rows() != bias.size()) {
    throw ShapeError("affine: weights " + shape_string(weights) + ", input (" +
                     std::to_string(x.size()) + "), bias (" +
                     std::to_string(bias.size()) + ")");
  }
  Vector out(weights.rows());
  for (std::size_t r = 0; r < weights.rows(); ++r) {
    const auto w = weights.row(r);
    double s = bias[r];
    for (std::size_t c = 0; c < x.size(); ++c) s += w[c] * x[c];
    out[r] = s;
  }
  return out;
}

void add_transpose_product(const Matrix& weights, std::span<const double> v,
                           std::span<double> y) {
  if (weights.rows() != v.size() || weights.cols() != y.size()) {
    throw ShapeError("transpose product: weights " + shape_string(weights) +
                     ", vector (" + std::to_string(v.size()) + "), output (" +
                     std::to_string(y.size()) + ")");
  }
  for (std::size_t r = 0; r < weights.rows(); ++r) {
    const auto w = weights.row(r);
    const double vr = v[r];
    for (std::size_t c = 0; c < y.size(); ++c) y[c] += w[c] * vr;
  }
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Vector sigmoid(std::span<const double> x) {
  Vector out(x.size());
  std::transform(x.begin(), x.end(), out.begin(),
                 [](double v) { return sigmoid(v); });
  return out;
}

Vector softmax(std::span<const double> v) {
  if (v.empty()) throw ArgumentError("softmax of an empty vector");
  const double m = *std::max_element(v.begin(), v.end());
  Vector out(v.size());
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - m);
    total += out[i];
  }
  for (double& o : out) o /= total;
  return out;
}

double entropy(std::span<const double> proportions) {
  double total = 0.0;
  for (double p : proportions) {
    if (!(p >= 0.0)) throw ArgumentError("entropy: negative or NaN proportion");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ArgumentError("entropy: proportions sum to " + std::to_string(total));
  }
  // Terms are summed in sorted order so the result does not depend on the
  // order of the input.
  Vector terms;
  terms.reserve(proportions.size());
  for (double p : proportions) {
    if (p > 0.0) terms.push_back(-p * std::log(p));
  }
  std::sort(terms.begin(), terms.end());
  double h = 0.0;
  for (double t : terms) h += t;
  return std::max(h, 0.0);
}

Vector proportions(std::span<const double> counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  Vector out(counts.size(), 0.0);
  if (total <= 0.0) return out;
  for (std::size_t i = 0; i < counts.size(); ++i) out[i] = counts[i] / total;
  return out;
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  // 1 - uniform() lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Rng::uniform_index(std::size_t n) {
  if (n == 0) throw ArgumentError("uniform_index over an empty range");
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return static_cast<std::size_t>(r % bound);
}

Matrix rng_normal_init(Rng& rng, std::size_t rows, std::size_t cols, double scale) {
  if (!(scale > 0.0)) throw ArgumentError("normal init scale must be positive");
  Matrix m(rows, cols);
  for (double& v : m.values()) v = scale * rng.normal();
  return m;
}

Vector rng_normal_vector(Rng& rng, std::size_t n, double scale) {
  if (!(scale > 0.0)) throw ArgumentError("normal init scale must be positive");
  Vector v(n);
  for (double& x : v) x = scale * rng.normal();
  return v;
}

bool all_finite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

}  // namespace spamforest
