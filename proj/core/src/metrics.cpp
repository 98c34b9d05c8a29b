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

#include "spamforest/metrics.hpp"

#include <cstdio>
#include <ostream>

#include "spamforest/errors.hpp"

namespace spamforest {

ConfusionCounts confusion(std::span<const int> predicted, std::span<const int> actual,
                          int positive_class) {
  if (predicted.size() != actual.size()) {
    throw ArgumentError("confusion needs equal lengths, got " + std::to_string(predicted.size()) +
                        " predictions and " + std::to_string(actual.size()) + " labels");
  }
  if (positive_class != 0 && positive_class != 1) {
    throw ArgumentError("positive class must be 0 or 1");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const int p = predicted[i], a = actual[i];
    if ((p != 0 && p != 1) || (a != 0 && a != 1)) {
      throw ArgumentError("labels must be 0 or 1 (index " + std::to_string(i) + ")");
    }
    const bool pp = p == positive_class, ap = a == positive_class;
    if (pp && ap) ++c.tp;
    else if (pp) ++c.fp;
    else if (ap) ++c.fn;
    else ++c.tn;
  }
  return c;
}

EvalMetrics compute_metrics(const ConfusionCounts& counts) {
  if (counts.total() == 0) throw ArgumentError("metrics need at least one sample");
  EvalMetrics m;
  m.counts = counts;
  const auto tp = static_cast<double>(counts.tp);
  m.accuracy = static_cast<double>(counts.tp + counts.tn) / static_cast<double>(counts.total());
  if (counts.tp + counts.fp > 0) m.precision = tp / static_cast<double>(counts.tp + counts.fp);
  else m.precision_degenerate = true;
  if (counts.tp + counts.fn > 0) m.recall = tp / static_cast<double>(counts.tp + counts.fn);
  else m.recall_degenerate = true;
  // 2PR/(P+R) rewritten over counts so it stays defined when P or R is.
  const std::uint64_t f1_den = 2 * counts.tp + counts.fp + counts.fn;
  if (f1_den > 0 && !m.precision_degenerate && !m.recall_degenerate) {
    m.f1 = 2.0 * tp / static_cast<double>(f1_den);
  } else {
    m.f1_degenerate = true;
  }
  return m;
}

std::string percent_2dp(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", fraction * 100.0);
  return buf;
}

void write_metrics_report(std::ostream& out, const EvalMetrics& m) {
  out << "tp\t" << m.counts.tp << '\n'
      << "fp\t" << m.counts.fp << '\n'
      << "tn\t" << m.counts.tn << '\n'
      << "fn\t" << m.counts.fn << '\n'
      << "accuracy\t" << percent_2dp(m.accuracy) << '\n'
      << "precision\t" << percent_2dp(m.precision) << '\n'
      << "recall\t" << percent_2dp(m.recall) << '\n'
      << "f1\t" << percent_2dp(m.f1) << '\n'
      << "precision_degenerate\t" << (m.precision_degenerate ? 1 : 0) << '\n'
      << "recall_degenerate\t" << (m.recall_degenerate ? 1 : 0) << '\n'
      << "f1_degenerate\t" << (m.f1_degenerate ? 1 : 0) << '\n';
}

}  // namespace spamforest
