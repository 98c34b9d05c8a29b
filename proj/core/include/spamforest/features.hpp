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

// Behavioural and review-level features for opinion spam detection.
//
// One feature row describes one review: the author's behavioural profile
// (computed over all of that user's retained reviews), the product's review
// context, the review itself, and finally one "category_ratio:<name>" column
// per product category seen in the input. Entropies are in nats.
//
// Zero-denominator conventions: every ratio whose denominator is zero is 0.
// In particular helpful_ratio = helpful / (helpful + unhelpful) is 0 for a
// user without votes, and comment_time_gap_ratio is 0 when all of a
// product's reviews share one day.

#ifndef SPAMFOREST_FEATURES_HPP_
#define SPAMFOREST_FEATURES_HPP_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "spamforest/review.hpp"

namespace spamforest {

// Version of the fixed feature list below. Bump whenever a name, order,
// scope or kind changes.
inline constexpr int kFeatureManifestVersion = 1;

inline constexpr std::string_view kCategoryRatioPrefix = "category_ratio:";

// The fixed part of a row, in order: user features then review features.
const std::vector<FeatureInfo>& user_feature_manifest();
const std::vector<FeatureInfo>& review_feature_manifest();
// Fixed columns followed by one category ratio column per category.
std::vector<FeatureInfo> feature_manifest(std::span<const std::string> categories);

// Tab-separated manifest: a version comment then "index name scope kind".
void write_manifest(std::ostream& out, int version, std::span<const FeatureInfo> columns);

// Word -> polarity (+1 / -1) table for the sentiment rule.
class Lexicon {
 public:
  Lexicon() = default;
  // Lines "word<TAB>polarity"; '#' starts a comment line.
  static Lexicon parse(std::string_view text);
  static Lexicon load(const std::filesystem::path& path);
  // The lexicon shipped in data/sentiment_lexicon.tsv.
  static const Lexicon& bundled();

  // +1, -1, or 0 for words not in the lexicon.
  int polarity(std::string_view word) const;
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::unordered_map<std::string, int> words_;
};

// Lowercase common given names.
class NameList {
 public:
  NameList() = default;
  // One name per line; '#' starts a comment line.
  static NameList parse(std::string_view text);
  static NameList load(const std::filesystem::path& path);
  // The list shipped in data/common_names.txt.
  static const NameList& bundled();

  // Case-insensitive test of the first alphabetic token of `display_name`.
  bool contains(std::string_view display_name) const;
  std::size_t size() const noexcept { return names_.size(); }

 private:
  std::unordered_set<std::string> names_;
};

// Lowercase word tokens (letters, digits, apostrophes, inner hyphens).
std::vector<std::string> tokenize(std::string_view text);
// Whitespace-separated word count.
std::size_t word_count(std::string_view text);

// sign(#positive hits - #negative hits); 0 for empty text and ties.
int sentiment_score(std::string_view text, const Lexicon& lexicon = Lexicon::bundled());

// Behavioural features of one user. All reviews must share one user_id.
// Category ratio columns are appended for each entry of `categories`.
// Throws ArgumentError on an empty list or mixed users.
FeatureVector extract_user_features(std::span<const ReviewRecord> reviews_of_user,
                                    std::span<const std::string> categories,
                                    const NameList& names = NameList::bundled());

// Features of `review` within the reviews of its product. Throws
// ArgumentError if `review` is not among `product_reviews`.
FeatureVector extract_review_features(const ReviewRecord& review,
                                      std::span<const ReviewRecord> product_reviews,
                                      const Lexicon& lexicon = Lexicon::bundled());

// Builds one row per review in `retained`, labelled by its author's entry in
// `user_labels`. Product context comes from `all_reviews`, which must
// contain every retained review. Rows are ordered by user id, then time,
// then product id.
LabeledDataset build_feature_dataset(std::span<const ReviewRecord> retained,
                                     std::span<const ReviewRecord> all_reviews,
                                     const std::map<std::string, int>& user_labels,
                                     const NameList& names = NameList::bundled(),
                                     const Lexicon& lexicon = Lexicon::bundled());

}  // namespace spamforest

#endif  // SPAMFOREST_FEATURES_HPP_
