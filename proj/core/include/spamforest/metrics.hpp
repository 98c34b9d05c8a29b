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

#ifndef SPAMFOREST_METRICS_HPP_
#define SPAMFOREST_METRICS_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

namespace spamforest {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// Labels must be 0 or 1. Throws ArgumentError on a length mismatch or any
// other value.
ConfusionCounts confusion(std::span<const int> predicted, std::span<const int> actual,
                          int positive_class = 1);

struct EvalMetrics {
  ConfusionCounts counts;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Set when the metric's denominator was zero; the value is then 0.
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool f1_degenerate = false;
};

// Throws ArgumentError when the counts are all zero.
EvalMetrics compute_metrics(const ConfusionCounts& counts);

// A fraction as a percentage with two decimals, e.g. 0.95848 -> "95.85".
std::string percent_2dp(double fraction);

// key<TAB>value lines: the four counts, then the four metrics as
// percentages, then the degenerate flags.
void write_metrics_report(std::ostream& out, const EvalMetrics& metrics);

}  // namespace spamforest

#endif  // SPAMFOREST_METRICS_HPP_
