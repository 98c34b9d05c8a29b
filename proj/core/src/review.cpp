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

#include "spamforest/review.hpp"

#include <chrono>

#include "spamforest/errors.hpp"

namespace spamforest {

void ReviewRecord::validate() const {
  if (rating < 1 || rating > 5) {
    throw ArgumentError("rating must be in 1..5, got " + std::to_string(rating));
  }
  if (helpful_votes < 0 || unhelpful_votes < 0) {
    throw ArgumentError("vote counts must be non-negative");
  }
  if (user_id.empty()) throw ArgumentError("user_id must not be empty");
  if (product_id.empty()) throw ArgumentError("product_id must not be empty");
}

CivilDate civil_from_days(std::int64_t days) {
  using namespace std::chrono;
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  return {static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
          static_cast<unsigned>(ymd.day())};
}

std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{m}, day{d}};
  if (!ymd.ok()) {
    throw ArgumentError("invalid calendar date " + std::to_string(y) + "-" +
                        std::to_string(m) + "-" + std::to_string(d));
  }
  return sys_days{ymd}.time_since_epoch().count();
}

std::string to_string(Scope scope) {
  switch (scope) {
    case Scope::history:
      return "history";
    case Scope::rating:
      return "rating";
    case Scope::feedback:
      return "feedback";
    case Scope::time:
      return "time";
    case Scope::product:
      return "product";
    case Scope::review:
      return "review";
  }
  return "history";
}

std::string to_string(FeatureKind kind) {
  return kind == FeatureKind::continuous ? "continuous" : "categorical";
}

Scope parse_scope(const std::string& text) {
  for (Scope s : kAllScopes) {
    if (to_string(s) == text) return s;
  }
  throw ParseError("unknown feature scope '" + text + "'", 0);
}

FeatureKind parse_feature_kind(const std::string& text) {
  if (text == "continuous") return FeatureKind::continuous;
  if (text == "categorical") return FeatureKind::categorical;
  throw ParseError("unknown feature kind '" + text + "'", 0);
}

void FeatureVector::append(const FeatureInfo& info, double value) {
  columns.push_back(info);
  values.push_back(value);
}

void FeatureVector::append(const FeatureVector& other) {
  columns.insert(columns.end(), other.columns.begin(), other.columns.end());
  values.insert(values.end(), other.values.begin(), other.values.end());
}

double FeatureVector::value(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return values[i];
  }
  throw ArgumentError("no feature named '" + name + "'");
}

Vector FeatureMatrix::column(std::size_t j) const {
  Vector out;
  out.reserve(rows.size());
  for (const Vector& r : rows) out.push_back(r.at(j));
  return out;
}

std::size_t FeatureMatrix::column_index(const std::string& name) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].name == name) return j;
  }
  throw ArgumentError("no feature column named '" + name + "'");
}

FeatureMatrix FeatureMatrix::select_columns(const std::vector<std::size_t>& indices) const {
  FeatureMatrix out;
  out.manifest_version = manifest_version;
  for (std::size_t j : indices) out.columns.push_back(columns.at(j));
  out.rows.reserve(rows.size());
  for (const Vector& r : rows) {
    Vector sel;
    sel.reserve(indices.size());
    for (std::size_t j : indices) sel.push_back(r.at(j));
    out.rows.push_back(std::move(sel));
  }
  return out;
}

FeatureMatrix FeatureMatrix::select_rows(const std::vector<std::size_t>& indices) const {
  FeatureMatrix out;
  out.manifest_version = manifest_version;
  out.columns = columns;
  out.rows.reserve(indices.size());
  for (std::size_t i : indices) out.rows.push_back(rows.at(i));
  return out;
}

void FeatureMatrix::validate() const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != columns.size()) {
      throw ShapeError("feature row " + std::to_string(i) + " has " +
                       std::to_string(rows[i].size()) + " values for " +
                       std::to_string(columns.size()) + " columns");
    }
    if (!all_finite(rows[i])) {
      throw NumericError("feature row " + std::to_string(i) + " has a non-finite value");
    }
  }
}

LabeledDataset LabeledDataset::select_rows(const std::vector<std::size_t>& indices) const {
  LabeledDataset out;
  out.features = features.select_rows(indices);
  for (std::size_t i : indices) {
    out.labels.push_back(labels.at(i));
    if (!user_ids.empty()) out.user_ids.push_back(user_ids.at(i));
    if (!product_ids.empty()) out.product_ids.push_back(product_ids.at(i));
  }
  return out;
}

void LabeledDataset::validate() const {
  features.validate();
  if (features.row_count() != labels.size()) {
    throw ShapeError("dataset has " + std::to_string(features.row_count()) +
                     " feature rows but " + std::to_string(labels.size()) + " labels");
  }
  if ((!user_ids.empty() && user_ids.size() != labels.size()) ||
      (!product_ids.empty() && product_ids.size() != labels.size())) {
    throw ShapeError("dataset id columns do not match the row count");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) throw ArgumentError("labels must be 0 or 1");
  }
}

}  // namespace spamforest
