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

// Small dense linear algebra, activations, entropy and a portable seeded
// random stream. Everything the model layers need and nothing more: no
// broadcasting, no expression templates, 64-bit floats throughout.

#ifndef SPAMFOREST_NUMERICS_HPP_
#define SPAMFOREST_NUMERICS_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace spamforest {

using Vector = std::vector<double>;

// Row-major dense matrix. The shape is fixed at construction; only the
// entries may change.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  // `values` is row-major and must hold rows*cols entries.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator()(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }
  double& operator()(std::size_t r, std::size_t c) {
    return values_[r * cols_ + c];
  }

  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// "(rows x cols)"
std::string shape_string(const Matrix& m);

double dot(std::span<const double> a, std::span<const double> b);

// W*x + b. Throws ShapeError naming both shapes on mismatch.
Vector affine(std::span<const double> x, const Matrix& weights,
              std::span<const double> bias);

// y += W^T * v, the transpose product used by backpropagation.
void add_transpose_product(const Matrix& weights, std::span<const double> v,
                           std::span<double> y);

// Logistic function, evaluated without overflow for any finite input.
// The result is strictly inside (0, 1) for |x| < 36 and saturates to the
// endpoints beyond that in double precision.
double sigmoid(double x);
Vector sigmoid(std::span<const double> x);

// Max-subtracted softmax. Throws ArgumentError on an empty input.
Vector softmax(std::span<const double> v);

// Shannon entropy in nats with 0*log(0) := 0. The proportions must be
// non-negative and sum to 1 within 1e-9.
double entropy(std::span<const double> proportions);

// counts / sum(counts); all zeros when the counts sum to zero.
Vector proportions(std::span<const double> counts);

// Deterministic random stream. The engine is mt19937_64, whose output
// sequence is fixed by the C++ standard; the uniform, normal and index
// transforms are implemented here rather than with <random> distributions,
// whose algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Standard normal via Box-Muller.
  double normal();
  // Uniform on {0, ..., n-1}, unbiased (rejection sampling). n must be > 0.
  std::size_t uniform_index(std::size_t n);

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// rows x cols matrix with i.i.d. N(0, scale^2) entries.
// Throws ArgumentError if scale <= 0.
Matrix rng_normal_init(Rng& rng, std::size_t rows, std::size_t cols, double scale);
Vector rng_normal_vector(Rng& rng, std::size_t n, double scale);

bool all_finite(std::span<const double> values);

}  // namespace spamforest

#endif  // SPAMFOREST_NUMERICS_HPP_
