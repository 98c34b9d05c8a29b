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

#ifndef SPAMFOREST_REVIEW_HPP_
#define SPAMFOREST_REVIEW_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spamforest/numerics.hpp"

namespace spamforest {

// One raw product review.
struct ReviewRecord {
  std::string user_id;
  std::string product_id;
  int rating = 0;  // 1..5
  std::int64_t helpful_votes = 0;
  std::int64_t unhelpful_votes = 0;
  std::int64_t timestamp = 0;  // days since 1970-01-01
  std::string category;
  std::string summary_text;
  std::string review_text;
  std::optional<std::string> user_name;
  std::optional<std::string> user_memo;

  // Throws ArgumentError when rating or votes are out of range.
  void validate() const;

  friend bool operator==(const ReviewRecord&, const ReviewRecord&) = default;
};

// Proleptic Gregorian calendar fields of a day count.
struct CivilDate {
  int year = 1970;
  unsigned month = 1;  // 1..12
  unsigned day = 1;    // 1..31
};
CivilDate civil_from_days(std::int64_t days);
// Throws ArgumentError for an invalid date.
std::int64_t days_from_civil(int year, unsigned month, unsigned day);

enum class Scope { history, rating, feedback, time, product, review };
enum class FeatureKind { continuous, categorical };

inline constexpr Scope kAllScopes[] = {Scope::history, Scope::rating,  Scope::feedback,
                                       Scope::time,    Scope::product, Scope::review};

std::string to_string(Scope scope);
std::string to_string(FeatureKind kind);
// Throws ParseError for unknown names.
Scope parse_scope(const std::string& text);
FeatureKind parse_feature_kind(const std::string& text);

struct FeatureInfo {
  std::string name;
  Scope scope = Scope::history;
  FeatureKind kind = FeatureKind::continuous;

  friend bool operator==(const FeatureInfo&, const FeatureInfo&) = default;
};

// Named feature values for one sample (or one part of a sample).
struct FeatureVector {
  Vector values;
  std::vector<FeatureInfo> columns;

  std::size_t size() const noexcept { return values.size(); }
  void append(const FeatureInfo& info, double value);
  void append(const FeatureVector& other);
  // Throws ArgumentError for an unknown name.
  double value(const std::string& name) const;
};

// n x d feature table plus its column metadata.
struct FeatureMatrix {
  int manifest_version = 0;
  std::vector<FeatureInfo> columns;
  std::vector<Vector> rows;

  std::size_t row_count() const noexcept { return rows.size(); }
  std::size_t column_count() const noexcept { return columns.size(); }
  Vector column(std::size_t j) const;
  // Index of the named column; throws ArgumentError if absent.
  std::size_t column_index(const std::string& name) const;
  FeatureMatrix select_columns(const std::vector<std::size_t>& indices) const;
  FeatureMatrix select_rows(const std::vector<std::size_t>& indices) const;
  void validate() const;
};

// Features with one binary label per row. Label 1 marks a review written by
// a spammer.
struct LabeledDataset {
  FeatureMatrix features;
  std::vector<int> labels;
  std::vector<std::string> user_ids;
  std::vector<std::string> product_ids;

  std::size_t size() const noexcept { return labels.size(); }
  LabeledDataset select_rows(const std::vector<std::size_t>& indices) const;
  // Equal row counts, labels in {0, 1}.
  void validate() const;
};

}  // namespace spamforest

#endif  // SPAMFOREST_REVIEW_HPP_
