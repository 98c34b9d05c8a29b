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

#include "spamforest/stats.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>

#include <boost/math/special_functions/gamma.hpp>

#include "spamforest/errors.hpp"
#include "spamforest/config.hpp"

namespace spamforest {
namespace {

// Mid-ranks times two, so tied ranks stay integral. Also returns the tie
// correction term sum(t^3 - t).
struct DoubledRanks {
  std::vector<std::int64_t> ranks;
  double tie_term = 0.0;
};

DoubledRanks doubled_mid_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  DoubledRanks out;
  out.ranks.assign(n, 0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // 1-based positions i+1 .. j+1 share rank (i+1 + j+1) / 2
    const auto doubled = static_cast<std::int64_t>(i + j + 2);
    for (std::size_t k = i; k <= j; ++k) out.ranks[order[k]] = doubled;
    const double t = static_cast<double>(j - i + 1);
    out.tie_term += t * t * t - t;
    i = j + 1;
  }
  return out;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

void finish(TestResult& r) {
  r.p_less = std::clamp(r.p_less, 0.0, 1.0);
  r.p_greater = std::clamp(r.p_greater, 0.0, 1.0);
  r.p_two_sided = std::min(1.0, 2.0 * std::min(r.p_less, r.p_greater));
  r.significant_at_05 = r.p_two_sided < 0.05;
}

// One-sided normal tails with a 0.5 continuity correction on `stat`.
void normal_tails(TestResult& r, double stat, double mean, double variance) {
  if (!(variance > 0.0)) {
    r.p_less = r.p_greater = 1.0;
    r.degenerate = true;
    r.note = "zero variance";
    return;
  }
  const double sd = std::sqrt(variance);
  r.p_less = normal_cdf((stat - mean + 0.5) / sd);
  r.p_greater = 1.0 - normal_cdf((stat - mean - 0.5) / sd);
}

void check_finite(std::span<const double> v, const char* what) {
  if (!all_finite(v)) throw ArgumentError(std::string(what) + " contains a non-finite value");
}

bool is_constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

std::string to_string(TestKind kind) {
  switch (kind) {
    case TestKind::rank_sum:
      return "rank_sum";
    case TestKind::signed_rank:
      return "signed_rank";
    case TestKind::chi_squared:
      return "chi_squared";
  }
  return "rank_sum";
}

TestResult rank_sum_test(std::span<const double> group_a, std::span<const double> group_b) {
  if (group_a.empty() || group_b.empty()) {
    throw ArgumentError("rank sum test needs two non-empty groups (got " +
                        std::to_string(group_a.size()) + " and " +
                        std::to_string(group_b.size()) + ")");
  }
  check_finite(group_a, "group a");
  check_finite(group_b, "group b");

  Vector pooled(group_a.begin(), group_a.end());
  pooled.insert(pooled.end(), group_b.begin(), group_b.end());
  const std::size_t na = group_a.size();
  const std::size_t n = pooled.size();
  const DoubledRanks dr = doubled_mid_ranks(pooled);
  const std::int64_t observed = std::accumulate(dr.ranks.begin(), dr.ranks.begin() +
                                                    static_cast<std::ptrdiff_t>(na),
                                                std::int64_t{0});

  TestResult r;
  r.test = TestKind::rank_sum;
  r.statistic = static_cast<double>(observed) / 2.0;

  if (n <= kExactTestLimit) {
    // every way of choosing which na pooled ranks belong to group a
    std::uint64_t total = 0, at_most = 0, at_least = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != na) continue;
      std::int64_t s = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (mask & (1u << k)) s += dr.ranks[k];
      }
      ++total;
      if (s <= observed) ++at_most;
      if (s >= observed) ++at_least;
    }
    r.exact = true;
    r.p_less = static_cast<double>(at_most) / static_cast<double>(total);
    r.p_greater = static_cast<double>(at_least) / static_cast<double>(total);
  } else {
    const double N = static_cast<double>(n);
    const double a = static_cast<double>(na);
    const double b = N - a;
    const double mean = a * (N + 1.0) / 2.0;
    const double variance = a * b / 12.0 * ((N + 1.0) - dr.tie_term / (N * (N - 1.0)));
    normal_tails(r, r.statistic, mean, variance);
  }
  finish(r);
  return r;
}

TestResult signed_rank_test(std::span<const double> paired_diffs) {
  check_finite(paired_diffs, "paired differences");
  Vector nonzero;
  for (double d : paired_diffs) {
    if (d != 0.0) nonzero.push_back(d);
  }
  if (nonzero.empty()) throw DegenerateInputError("all paired differences are zero");

  Vector magnitudes(nonzero.size());
  std::transform(nonzero.begin(), nonzero.end(), magnitudes.begin(),
                 [](double d) { return std::fabs(d); });
  const DoubledRanks dr = doubled_mid_ranks(magnitudes);
  const std::size_t n = nonzero.size();
  std::int64_t observed = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (nonzero[k] > 0.0) observed += dr.ranks[k];
  }

  TestResult r;
  r.test = TestKind::signed_rank;
  r.statistic = static_cast<double>(observed) / 2.0;

  if (n <= kExactTestLimit) {
    std::uint64_t at_most = 0, at_least = 0;
    const std::uint32_t total = 1u << n;
    for (std::uint32_t mask = 0; mask < total; ++mask) {
      std::int64_t s = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (mask & (1u << k)) s += dr.ranks[k];
      }
      if (s <= observed) ++at_most;
      if (s >= observed) ++at_least;
    }
    r.exact = true;
    r.p_less = static_cast<double>(at_most) / static_cast<double>(total);
    r.p_greater = static_cast<double>(at_least) / static_cast<double>(total);
  } else {
    const double N = static_cast<double>(n);
    const double mean = N * (N + 1.0) / 4.0;
    const double variance = N * (N + 1.0) * (2.0 * N + 1.0) / 24.0 - dr.tie_term / 48.0;
    normal_tails(r, r.statistic, mean, variance);
  }
  finish(r);
  return r;
}

TestResult chi_squared_test(const std::vector<std::vector<double>>& table) {
  if (table.empty()) throw DegenerateInputError("empty contingency table");
  const std::size_t cols = table.front().size();
  for (const auto& row : table) {
    if (row.size() != cols) throw ArgumentError("contingency table rows differ in length");
    for (double c : row) {
      if (!std::isfinite(c) || c < 0.0) {
        throw ArgumentError("contingency counts must be finite and non-negative");
      }
    }
  }

  Vector row_sum(table.size(), 0.0), col_sum(cols, 0.0);
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      row_sum[i] += table[i][j];
      col_sum[j] += table[i][j];
    }
  }
  std::vector<std::size_t> keep_rows, keep_cols;
  std::string note;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (row_sum[i] > 0.0) keep_rows.push_back(i);
    else note += (note.empty() ? "" : "; ") + std::string("dropped empty row ") + std::to_string(i);
  }
  for (std::size_t j = 0; j < cols; ++j) {
    if (col_sum[j] > 0.0) keep_cols.push_back(j);
    else note += (note.empty() ? "" : "; ") + std::string("dropped empty column ") + std::to_string(j);
  }
  if (keep_rows.size() < 2 || keep_cols.size() < 2) {
    throw DegenerateInputError("contingency table has fewer than 2x2 non-empty cells (" +
                               std::to_string(keep_rows.size()) + "x" +
                               std::to_string(keep_cols.size()) + ")");
  }

  double total = 0.0;
  for (std::size_t i : keep_rows) total += row_sum[i];
  double stat = 0.0;
  for (std::size_t i : keep_rows) {
    for (std::size_t j : keep_cols) {
      const double expected = row_sum[i] * col_sum[j] / total;
      const double d = table[i][j] - expected;
      stat += d * d / expected;
    }
  }

  TestResult r;
  r.test = TestKind::chi_squared;
  r.statistic = stat;
  r.degrees_of_freedom = static_cast<double>((keep_rows.size() - 1) * (keep_cols.size() - 1));
  r.p_two_sided = boost::math::gamma_q(r.degrees_of_freedom / 2.0, stat / 2.0);
  r.p_less = r.p_greater = r.p_two_sided;
  r.significant_at_05 = r.p_two_sided < 0.05;
  r.note = note;
  return r;
}

std::vector<TestResult> screen_features(const FeatureMatrix& features,
                                        std::span<const int> labels,
                                        const ScreenOptions& options) {
  if (labels.size() != features.row_count()) {
    throw ShapeError("screening got " + std::to_string(features.row_count()) + " rows and " +
                     std::to_string(labels.size()) + " labels");
  }
  features.validate();
  std::size_t positives = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) throw ArgumentError("screening labels must be 0 or 1");
    positives += static_cast<std::size_t>(y);
  }
  if (positives == 0 || positives == labels.size()) {
    throw ArgumentError("screening needs both label classes present");
  }

  std::vector<TestResult> results;
  results.reserve(features.column_count());
  for (std::size_t j = 0; j < features.column_count(); ++j) {
    const FeatureInfo& info = features.columns[j];
    const Vector column = features.column(j);
    Vector a, b;
    for (std::size_t i = 0; i < column.size(); ++i) (labels[i] == 0 ? a : b).push_back(column[i]);

    TestResult r;
    if (is_constant(column)) {
      r.test = info.kind == FeatureKind::categorical
                   ? TestKind::chi_squared
                   : (options.signed_rank ? TestKind::signed_rank : TestKind::rank_sum);
      r.degenerate = true;
      r.note = "constant feature";
    } else if (info.kind == FeatureKind::categorical) {
      std::map<double, std::size_t> levels;
      for (double v : column) levels.emplace(v, 0);
      std::size_t next = 0;
      for (auto& [value, index] : levels) index = next++;
      std::vector<std::vector<double>> table(levels.size(), std::vector<double>(2, 0.0));
      for (std::size_t i = 0; i < column.size(); ++i) {
        table[levels.at(column[i])][static_cast<std::size_t>(labels[i])] += 1.0;
      }
      r = chi_squared_test(table);
    } else if (options.signed_rank) {
      const std::size_t m = std::min(a.size(), b.size());
      Vector diffs(m);
      for (std::size_t k = 0; k < m; ++k) diffs[k] = a[k] - b[k];
      try {
        r = signed_rank_test(diffs);
      } catch (const DegenerateInputError&) {
        r = TestResult{};
        r.test = TestKind::signed_rank;
        r.degenerate = true;
        r.note = "all paired differences are zero";
      }
    } else {
      r = rank_sum_test(a, b);
    }
    r.feature_name = info.name;
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_p_value(double p) {
  if (p < kReportPFloor) return "2.2e-16";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", p);
  return buf;
}

void write_screening_report(std::ostream& out, std::span<const TestResult> results,
                            std::span<const FeatureInfo> columns) {
  if (results.size() != columns.size()) {
    throw ShapeError("report has " + std::to_string(results.size()) + " results for " +
                     std::to_string(columns.size()) + " columns");
  }
  out << "feature\tscope\tkind\ttest\tstatistic\tdf\tp_two_sided\tp_less\tp_greater\t"
         "significant\tnote\n";
  for (std::size_t j = 0; j < results.size(); ++j) {
    const TestResult& r = results[j];
    char stat[32];
    std::snprintf(stat, sizeof stat, "%.6g", r.statistic);
    out << r.feature_name << '\t' << to_string(columns[j].scope) << '\t'
        << to_string(columns[j].kind) << '\t' << to_string(r.test) << '\t' << stat << '\t'
        << r.degrees_of_freedom << '\t' << format_p_value(r.p_two_sided) << '\t'
        << format_p_value(r.p_less) << '\t' << format_p_value(r.p_greater) << '\t'
        << (r.significant_at_05 ? "yes" : "no") << '\t'
        << (r.degenerate ? (r.note.empty() ? "degenerate" : "degenerate: " + r.note) : r.note)
        << '\n';
  }
}

void write_histograms(std::ostream& out, const FeatureMatrix& features,
                      std::span<const int> labels, std::size_t bins) {
  if (bins == 0) throw ArgumentError("histogram needs at least one bin");
  if (labels.size() != features.row_count()) throw ShapeError("histogram label count mismatch");
  double class_size[2] = {0.0, 0.0};
  for (int y : labels) {
    if (y != 0 && y != 1) throw ArgumentError("histogram labels must be 0 or 1");
    class_size[y] += 1.0;
  }
  out << "feature,bin,lower,upper,density_0,density_1\n";
  for (std::size_t j = 0; j < features.column_count(); ++j) {
    if (features.columns[j].kind != FeatureKind::continuous) continue;
    const Vector column = features.column(j);
    if (column.empty()) continue;
    const auto [lo_it, hi_it] = std::minmax_element(column.begin(), column.end());
    const double lo = *lo_it, hi = *hi_it;
    const std::size_t nb = hi > lo ? bins : 1;
    const double width = hi > lo ? (hi - lo) / static_cast<double>(nb) : 0.0;
    std::vector<std::array<double, 2>> counts(nb, {0.0, 0.0});
    for (std::size_t i = 0; i < column.size(); ++i) {
      std::size_t k = width > 0.0 ? static_cast<std::size_t>((column[i] - lo) / width) : 0;
      k = std::min(k, nb - 1);
      counts[k][static_cast<std::size_t>(labels[i])] += 1.0;
    }
    for (std::size_t k = 0; k < nb; ++k) {
      double dens[2];
      for (int c = 0; c < 2; ++c) {
        const double share = class_size[c] > 0.0 ? counts[k][c] / class_size[c] : 0.0;
        dens[c] = width > 0.0 ? share / width : share;
      }
      const double lower = lo + width * static_cast<double>(k);
      const double upper = k + 1 == nb ? hi : lo + width * static_cast<double>(k + 1);
      out << features.columns[j].name << ',' << k << ',' << format_double(lower) << ','
          << format_double(upper) << ',' << format_double(dens[0]) << ','
          << format_double(dens[1]) << '\n';
    }
  }
}

}  // namespace spamforest
