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

#include <sstream>

#include "spamforest/errors.hpp"
#include "spamforest/metrics.hpp"
#include "spamforest/numerics.hpp"

namespace spamforest {
namespace {

TEST(Confusion, Examples) {
  const std::vector<int> ones(6, 1);
  EXPECT_EQ(confusion(ones, ones), (ConfusionCounts{6, 0, 0, 0}));
  const std::vector<int> act{1, 0, 1, 1, 0}, flipped{0, 1, 0, 0, 1};
  const ConfusionCounts c = confusion(flipped, act);
  EXPECT_EQ(c.tp, 0u);
  EXPECT_EQ(c.tn, 0u);
  EXPECT_EQ(confusion(std::vector<int>{1, 0, 1, 0}, std::vector<int>{1, 1, 0, 0}),
            (ConfusionCounts{1, 1, 1, 1}));
  EXPECT_THROW(confusion(std::vector<int>{1}, std::vector<int>{1, 0}), ArgumentError);
  EXPECT_THROW(confusion(std::vector<int>{2}, std::vector<int>{1}), ArgumentError);
}

TEST(Confusion, PositiveClassSwapsRoles) {
  const std::vector<int> pred{1, 0, 1, 0, 1}, act{1, 1, 0, 0, 1};
  const ConfusionCounts a = confusion(pred, act, 1), b = confusion(pred, act, 0);
  EXPECT_EQ(a.tp, b.tn);
  EXPECT_EQ(a.fp, b.fn);
  EXPECT_EQ(a.fn, b.fp);
}

TEST(Confusion, InvariantUnderPairOrder) {
  Rng rng(6);
  std::vector<int> pred(200), act(200);
  for (std::size_t i = 0; i < 200; ++i) {
    pred[i] = static_cast<int>(rng.uniform_index(2));
    act[i] = static_cast<int>(rng.uniform_index(2));
  }
  const ConfusionCounts before = confusion(pred, act);
  std::vector<std::size_t> order(200);
  for (std::size_t i = 0; i < 200; ++i) order[i] = i;
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<int> p2, a2;
  for (std::size_t i : order) {
    p2.push_back(pred[i]);
    a2.push_back(act[i]);
  }
  EXPECT_EQ(confusion(p2, a2), before);
}

TEST(Metrics, ReportedCountsReproduceTable) {
  const EvalMetrics m = compute_metrics({1594, 65, 2192, 99});
  EXPECT_EQ(percent_2dp(m.accuracy), "95.85");
  EXPECT_EQ(percent_2dp(m.precision), "96.08");
  EXPECT_EQ(percent_2dp(m.recall), "94.15");
  EXPECT_EQ(percent_2dp(m.f1), "95.11");
  EXPECT_EQ(m.counts.total(), 3950u);
}

TEST(Metrics, PerfectAndAllNegative) {
  const EvalMetrics perfect = compute_metrics({5, 0, 7, 0});
  EXPECT_EQ(perfect.accuracy, 1.0);
  EXPECT_EQ(perfect.precision, 1.0);
  EXPECT_EQ(perfect.recall, 1.0);
  EXPECT_EQ(perfect.f1, 1.0);
  const EvalMetrics none = compute_metrics({0, 0, 7, 5});
  EXPECT_EQ(none.recall, 0.0);
  EXPECT_FALSE(none.recall_degenerate);
  EXPECT_EQ(none.precision, 0.0);
  EXPECT_TRUE(none.precision_degenerate);
  EXPECT_TRUE(none.f1_degenerate);
  EXPECT_THROW(compute_metrics({0, 0, 0, 0}), ArgumentError);
}

TEST(Metrics, F1IsHarmonicMeanOnRandomCounts) {
  Rng rng(12);
  for (int trial = 0; trial < 2000; ++trial) {
    const ConfusionCounts c{1 + rng.uniform_index(500), rng.uniform_index(500),
                            rng.uniform_index(500), rng.uniform_index(500)};
    const EvalMetrics m = compute_metrics(c);
    EXPECT_NEAR(m.f1, 2 * m.precision * m.recall / (m.precision + m.recall), 1e-12);
    for (double v : {m.accuracy, m.precision, m.recall, m.f1}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Metrics, ReportLayout) {
  std::ostringstream out;
  write_metrics_report(out, compute_metrics({1594, 65, 2192, 99}));
  const std::string s = out.str();
  for (const char* line : {"tp\t1594\n", "accuracy\t95.85\n", "precision\t96.08\n",
                           "recall\t94.15\n", "f1\t95.11\n"}) {
    EXPECT_NE(s.find(line), std::string::npos) << line << " in\n" << s;
  }
}

}  // namespace
}  // namespace spamforest
