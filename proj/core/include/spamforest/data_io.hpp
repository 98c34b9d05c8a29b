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

// Review ingestion, labelling, normalisation, batching and feature files.
//
// Reviews are JSON lines, one object per line:
//
//   {"user_id": "u1", "product_id": "p9", "rating": 4,
//    "helpful_votes": 3, "unhelpful_votes": 0, "timestamp": "2013-05-21",
//    "category": "Books", "summary_text": "...", "review_text": "...",
//    "user_name": "Ann", "user_memo": "..."}
//
// timestamp is either "YYYY-MM-DD" or an integer day count since
// 1970-01-01. user_name and user_memo are optional. Blank lines are skipped.

#ifndef SPAMFOREST_DATA_IO_HPP_
#define SPAMFOREST_DATA_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "spamforest/config.hpp"
#include "spamforest/review.hpp"
#include "spamforest/training.hpp"

namespace spamforest {

// Non-fatal findings (unknown fields, dropped columns) go here when given.
using Warnings = std::vector<std::string>;

std::vector<ReviewRecord> parse_reviews(std::istream& in, Warnings* warnings = nullptr);
// Throws FileError if the file cannot be opened.
std::vector<ReviewRecord> load_reviews(const std::filesystem::path& path,
                                       Warnings* warnings = nullptr);
std::string review_to_json(const ReviewRecord& review);
void write_reviews(std::ostream& out, std::span<const ReviewRecord> reviews);
void save_reviews(const std::filesystem::path& path, std::span<const ReviewRecord> reviews);

// Delimited text with a header row. `columns` maps record field names to
// header names; unmapped fields use their own name. Optional fields may be
// missing from the header. Fields may be double-quoted ("" escapes a quote).
struct DelimitedFormat {
  char delimiter = ',';
  std::map<std::string, std::string> columns;
};
std::vector<ReviewRecord> parse_delimited_reviews(std::istream& in,
                                                  const DelimitedFormat& format = {});
std::vector<ReviewRecord> load_delimited_reviews(const std::filesystem::path& path,
                                                 const DelimitedFormat& format = {});

// "user_id,score" or "user_id score" per line; '#' comments. Scores must lie
// in [0, 1]. A repeated user is a ParseError.
std::map<std::string, double> parse_spam_scores(std::istream& in);
std::map<std::string, double> load_spam_scores(const std::filesystem::path& path);

// 0 below 0.5, otherwise 1.
int label_from_score(double average_score);

struct LabeledReviews {
  std::vector<ReviewRecord> retained;  // input order
  std::map<std::string, int> user_labels;
};

// Labels every user and keeps at most `cap` reviews per user, chosen
// uniformly with a generator seeded from `seed` and the user id. Throws
// ArgumentError listing every user without a score.
LabeledReviews label_and_cap_users(std::span<const ReviewRecord> records,
                                   const std::map<std::string, double>& spam_scores,
                                   std::size_t cap = 20, std::uint64_t seed = 42);

// x' = (x - shift) / scale per column; columns with scale 0 map to 0.
struct NormalizationStats {
  Normalization method = Normalization::none;
  Vector shift;
  Vector scale;

  std::size_t width() const noexcept { return shift.size(); }
  Vector apply(std::span<const double> row) const;
  FeatureMatrix apply(const FeatureMatrix& features) const;

  friend bool operator==(const NormalizationStats&, const NormalizationStats&) = default;
};

// z-score uses the population standard deviation. `rows` selects the rows
// the statistics are fitted on; empty means all rows.
NormalizationStats fit_normalization(const FeatureMatrix& features, Normalization method,
                                     std::span<const std::size_t> rows = {});

struct NormalizedFeatures {
  FeatureMatrix features;
  NormalizationStats stats;
};
NormalizedFeatures normalize(const FeatureMatrix& features, Normalization method);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::vector<std::vector<std::size_t>> batches;  // positions into `train`
};

// Seeded shuffle of 0..rows-1; the first train_count go to training and are
// cut into ceil(train_count / batch_size) batches. Throws ConfigError on a
// violated bound.
Split split_shuffle_batch(std::size_t rows, std::size_t train_count, std::size_t batch_size,
                          std::uint64_t seed);

// Number of training rows for a fraction in (0, 1].
std::size_t train_count_for(std::size_t rows, double train_fraction);

Dataset to_dataset(const FeatureMatrix& features, std::span<const int> labels);

// A feature directory holds features.tsv (header of column names, one row
// per sample), labels.tsv (user_id, product_id, label) and manifest.tsv.
inline constexpr const char* kFeaturesFile = "features.tsv";
inline constexpr const char* kLabelsFile = "labels.tsv";
inline constexpr const char* kManifestFile = "manifest.tsv";

void write_feature_dir(const std::filesystem::path& dir, const LabeledDataset& data);
// Throws VersionError when the manifest version differs from this build's,
// ParseError on malformed files and FileError on missing ones.
LabeledDataset read_feature_dir(const std::filesystem::path& dir);

}  // namespace spamforest

#endif  // SPAMFOREST_DATA_IO_HPP_
