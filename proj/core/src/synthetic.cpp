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

#include "spamforest/synthetic.hpp"

#include "spamforest/errors.hpp"
#include "spamforest/features.hpp"

namespace spamforest {

LabeledDataset two_gaussians(std::size_t per_class, std::uint64_t seed) {
  Rng rng(seed);
  LabeledDataset d;
  d.features.manifest_version = kFeatureManifestVersion;
  d.features.columns = {{"x0", Scope::history, FeatureKind::continuous},
                        {"x1", Scope::history, FeatureKind::continuous}};
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    const int y = static_cast<int>(i % 2);
    const double mx = y == 0 ? -2.0 : 2.0;
    d.features.rows.push_back({mx + rng.normal(), rng.normal()});
    d.labels.push_back(y);
    d.user_ids.push_back("g" + std::to_string(i));
    d.product_ids.push_back("-");
  }
  return d;
}

LabeledDataset scoped_signal(std::size_t rows, std::size_t per_scope, Scope signal_scope,
                             double shift, std::uint64_t seed) {
  if (per_scope == 0) throw ArgumentError("scoped_signal needs at least one column per scope");
  Rng rng(seed);
  LabeledDataset d;
  d.features.manifest_version = kFeatureManifestVersion;
  for (Scope s : kAllScopes) {
    for (std::size_t k = 0; k < per_scope; ++k) {
      d.features.columns.push_back(
          {to_string(s) + "_" + std::to_string(k), s, FeatureKind::continuous});
    }
  }
  for (std::size_t i = 0; i < rows; ++i) {
    const int y = static_cast<int>(i % 2);
    Vector row;
    for (Scope s : kAllScopes) {
      for (std::size_t k = 0; k < per_scope; ++k) {
        const double offset = s == signal_scope ? (y == 1 ? shift : -shift) : 0.0;
        row.push_back(offset + rng.normal());
      }
    }
    d.features.rows.push_back(std::move(row));
    d.labels.push_back(y);
    d.user_ids.push_back("s" + std::to_string(i));
    d.product_ids.push_back("-");
  }
  return d;
}

SyntheticCorpus synthetic_corpus(std::size_t users, std::size_t max_reviews, std::uint64_t seed) {
  if (max_reviews == 0) throw ArgumentError("synthetic_corpus needs max_reviews >= 1");
  static const char* const kCategories[] = {"Books", "Electronics", "Kitchen", "Toys"};
  static const char* const kNames[] = {"anna", "brian", "zq_x77", "maria", "kk99", "peter"};
  static const char* const kPraise[] = {"great", "excellent", "wonderful", "love"};
  static const char* const kScorn[] = {"terrible", "awful", "poor", "broken"};
  Rng rng(seed);
  SyntheticCorpus c;
  const std::int64_t base_day = days_from_civil(2010, 1, 1);
  for (std::size_t u = 0; u < users; ++u) {
    const bool spammer = u % 2 == 1;
    const std::string user = "user" + std::to_string(u);
    c.spam_scores[user] = spammer ? 0.8 : 0.1;
    const std::size_t n = 1 + rng.uniform_index(max_reviews);
    const std::int64_t burst_day = base_day + static_cast<std::int64_t>(rng.uniform_index(1500));
    for (std::size_t k = 0; k < n; ++k) {
      ReviewRecord r;
      r.user_id = user;
      r.product_id = "prod" + std::to_string(rng.uniform_index(12));
      r.category = kCategories[rng.uniform_index(4)];
      if (spammer) {
        r.rating = rng.uniform() < 0.5 ? 5 : 1;
        r.helpful_votes = static_cast<std::int64_t>(rng.uniform_index(3));
        r.unhelpful_votes = static_cast<std::int64_t>(rng.uniform_index(8));
        r.timestamp = burst_day + static_cast<std::int64_t>(rng.uniform_index(3));
        const char* word = r.rating == 5 ? kPraise[rng.uniform_index(4)] : kScorn[rng.uniform_index(4)];
        r.summary_text = word;
        r.review_text = std::string(word) + " " + word + " product";
      } else {
        r.rating = 1 + static_cast<int>(rng.uniform_index(5));
        r.helpful_votes = static_cast<std::int64_t>(rng.uniform_index(15));
        r.unhelpful_votes = static_cast<std::int64_t>(rng.uniform_index(3));
        r.timestamp = base_day + static_cast<std::int64_t>(rng.uniform_index(2500));
        r.summary_text = "my honest take";
        r.review_text = "I used this for a few weeks and it held up " +
                        std::string(r.rating >= 4 ? "great" : "poor") +
                        " in daily use, with some details worth noting";
      }
      if (rng.uniform() < 0.7) r.user_name = kNames[rng.uniform_index(6)];
      if (!spammer && rng.uniform() < 0.4) r.user_memo = "reader and tinkerer";
      c.reviews.push_back(std::move(r));
    }
  }
  return c;
}

}  // namespace spamforest
