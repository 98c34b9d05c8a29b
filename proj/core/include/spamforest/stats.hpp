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

// Nonparametric screening of features between two label groups.
//
// Rank tests report three p-values. p_less is the probability, under the
// null, of a statistic at most the observed one (group a tends lower);
// p_greater the mirror. In exact mode the two-sided value is
// min(1, 2 * min(p_less, p_greater)).

#ifndef SPAMFOREST_STATS_HPP_
#define SPAMFOREST_STATS_HPP_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "spamforest/review.hpp"

namespace spamforest {

// Exact enumeration is used up to this many observations.
inline constexpr std::size_t kExactTestLimit = 12;
// Reports print smaller p-values as this floor.
inline constexpr double kReportPFloor = 2.2e-16;

enum class TestKind { rank_sum, signed_rank, chi_squared };
std::string to_string(TestKind kind);

struct TestResult {
  std::string feature_name;
  TestKind test = TestKind::rank_sum;
  double statistic = 0.0;
  double p_two_sided = 1.0;
  double p_less = 1.0;
  double p_greater = 1.0;
  bool significant_at_05 = false;
  bool exact = false;
  double degrees_of_freedom = 0.0;  // chi-squared only
  bool degenerate = false;
  std::string note;
};

// Wilcoxon-Mann-Whitney rank sum. statistic = sum of group a's mid-ranks.
// Throws ArgumentError when a group is empty or holds a non-finite value.
TestResult rank_sum_test(std::span<const double> group_a, std::span<const double> group_b);

// Wilcoxon signed rank on paired differences; zeros are dropped.
// statistic = sum of the ranks of the positive differences.
// Throws DegenerateInputError when every difference is zero.
TestResult signed_rank_test(std::span<const double> paired_diffs);

// Pearson chi-squared independence test without continuity correction.
// Rows or columns with a zero marginal are dropped and listed in `note`.
// The statistic has a single upper tail, so p_less and p_greater repeat
// p_two_sided. Throws DegenerateInputError when fewer than 2x2 cells remain
// and ArgumentError for negative or ragged counts.
TestResult chi_squared_test(const std::vector<std::vector<double>>& table);

struct ScreenOptions {
  // Paired signed-rank on the first min(n0, n1) rows of each group instead
  // of the rank-sum test.
  bool signed_rank = false;
};

// One result per column, in column order. Group a is label 0, group b is
// label 1. Constant columns are reported with p = 1 and flagged degenerate.
// Throws ArgumentError if a label class is empty.
std::vector<TestResult> screen_features(const FeatureMatrix& features,
                                        std::span<const int> labels,
                                        const ScreenOptions& options = {});

// Tab-separated report, one line per result.
void write_screening_report(std::ostream& out, std::span<const TestResult> results,
                            std::span<const FeatureInfo> columns);

// Per-class histogram densities for every continuous column:
// "feature,bin,lower,upper,density_0,density_1". A constant column gets a
// single zero-width bin whose "density" is the class share.
void write_histograms(std::ostream& out, const FeatureMatrix& features,
                      std::span<const int> labels, std::size_t bins);

// Text form of a p-value as it appears in reports.
std::string format_p_value(double p);

}  // namespace spamforest

#endif  // SPAMFOREST_STATS_HPP_
