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

// Seeded synthetic data for tests, benchmarks and demos.

#ifndef SPAMFOREST_SYNTHETIC_HPP_
#define SPAMFOREST_SYNTHETIC_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spamforest/review.hpp"

namespace spamforest {

// Class 0 ~ N((-2, 0), I), class 1 ~ N((2, 0), I), `per_class` points each,
// interleaved 0, 1, 0, 1, ... Columns "x0" and "x1" in scope history.
LabeledDataset two_gaussians(std::size_t per_class, std::uint64_t seed);

// `per_scope` continuous columns for each of the six scopes, all standard
// normal noise except that columns of `signal_scope` are shifted by
// +-`shift` according to the label. Labels alternate 0, 1.
LabeledDataset scoped_signal(std::size_t rows, std::size_t per_scope, Scope signal_scope,
                             double shift, std::uint64_t seed);

struct SyntheticCorpus {
  std::vector<ReviewRecord> reviews;
  std::map<std::string, double> spam_scores;
};

// `users` reviewers with 1..max_reviews reviews each over a small product
// catalogue. Odd-numbered users get spam score 0.8 and write short,
// extreme, bursty reviews; the rest get 0.1.
SyntheticCorpus synthetic_corpus(std::size_t users, std::size_t max_reviews, std::uint64_t seed);

}  // namespace spamforest

#endif  // SPAMFOREST_SYNTHETIC_HPP_
