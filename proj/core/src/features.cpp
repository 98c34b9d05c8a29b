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

#include "spamforest/features.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include "spamforest/bundled_resources.hpp"
#include "spamforest/errors.hpp"

namespace spamforest {
namespace {

constexpr auto kC = FeatureKind::continuous;
constexpr auto kCat = FeatureKind::categorical;

std::vector<FeatureInfo> make_user_manifest() {
  std::vector<FeatureInfo> m = {
      {"num_reviewed_products", Scope::history, kC},
      {"name_length", Scope::history, kC},
      {"common_name", Scope::history, kCat},
      {"memo_length", Scope::history, kC},
      {"has_memo", Scope::history, kCat},
      {"min_rating", Scope::rating, kCat},
      {"max_rating", Scope::rating, kCat},
  };
  for (int s = 1; s <= 5; ++s) m.push_back({"ratio_score_" + std::to_string(s), Scope::rating, kC});
  for (int s = 1; s <= 5; ++s) m.push_back({"count_score_" + std::to_string(s), Scope::rating, kC});
  const std::vector<FeatureInfo> rest = {
      {"positive_ratio", Scope::rating, kC},
      {"negative_ratio", Scope::rating, kC},
      {"rating_entropy", Scope::rating, kC},
      {"mean_rating", Scope::rating, kC},
      {"helpful_sum", Scope::feedback, kC},
      {"unhelpful_sum", Scope::feedback, kC},
      {"helpful_mean", Scope::feedback, kC},
      {"unhelpful_mean", Scope::feedback, kC},
      {"helpful_ratio", Scope::feedback, kC},
      {"helpful_median", Scope::feedback, kC},
      {"helpful_min", Scope::feedback, kC},
      {"helpful_max", Scope::feedback, kC},
      {"unhelpful_median", Scope::feedback, kC},
      {"unhelpful_min", Scope::feedback, kC},
      {"unhelpful_max", Scope::feedback, kC},
      {"day_gap", Scope::time, kC},
      {"review_time_entropy", Scope::time, kC},
      {"same_date", Scope::time, kCat},
      {"active_ratio", Scope::time, kC},
  };
  m.insert(m.end(), rest.begin(), rest.end());
  return m;
}

std::vector<FeatureInfo> make_review_manifest() {
  return {
      {"product_mean_rating", Scope::product, kC},
      {"product_review_count", Scope::product, kC},
      {"product_score_entropy", Scope::product, kC},
      {"product_comment_time_gap", Scope::product, kC},
      {"product_comment_time_entropy", Scope::product, kC},
      {"product_first_day_count", Scope::product, kC},
      {"user_rating", Scope::review, kCat},
      {"user_helpful", Scope::review, kC},
      {"user_unhelpful", Scope::review, kC},
      {"user_comment_time_gap", Scope::review, kC},
      {"comment_time_gap_ratio", Scope::review, kC},
      {"comment_rank", Scope::review, kC},
      {"comment_rank_ratio", Scope::review, kC},
      {"summary_length", Scope::review, kC},
      {"review_length", Scope::review, kC},
      {"summary_sentiment", Scope::review, kCat},
      {"review_sentiment", Scope::review, kCat},
  };
}

// Appends values in manifest order and checks each name as it goes.
class RowWriter {
 public:
  explicit RowWriter(const std::vector<FeatureInfo>& manifest) : manifest_(manifest) {}

  void emit(std::string_view name, double value) {
    if (next_ >= manifest_.size() || manifest_[next_].name != name) {
      throw Error("feature '" + std::string(name) + "' emitted out of manifest order");
    }
    out_.append(manifest_[next_++], value);
  }

  FeatureVector finish() {
    if (next_ != manifest_.size()) throw Error("feature row is missing manifest entries");
    return std::move(out_);
  }

 private:
  const std::vector<FeatureInfo>& manifest_;
  std::size_t next_ = 0;
  FeatureVector out_;
};

double median(Vector v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

// Entropy of the counts over their bins.
double count_entropy(const Vector& counts) { return entropy(proportions(counts)); }

std::size_t code_points(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool earlier(const ReviewRecord& a, const ReviewRecord& b) {
  return std::tie(a.timestamp, a.product_id, a.rating, a.summary_text) <
         std::tie(b.timestamp, b.product_id, b.rating, b.summary_text);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

const std::vector<FeatureInfo>& user_feature_manifest() {
  static const std::vector<FeatureInfo> m = make_user_manifest();
  return m;
}

const std::vector<FeatureInfo>& review_feature_manifest() {
  static const std::vector<FeatureInfo> m = make_review_manifest();
  return m;
}

std::vector<FeatureInfo> feature_manifest(std::span<const std::string> categories) {
  std::vector<FeatureInfo> m = user_feature_manifest();
  const auto& r = review_feature_manifest();
  m.insert(m.end(), r.begin(), r.end());
  for (const std::string& c : categories) {
    m.push_back({std::string(kCategoryRatioPrefix) + c, Scope::history, kC});
  }
  return m;
}

void write_manifest(std::ostream& out, int version, std::span<const FeatureInfo> columns) {
  out << "# manifest_version\t" << version << '\n';
  out << "index\tname\tscope\tkind\n";
  for (std::size_t j = 0; j < columns.size(); ++j) {
    out << j << '\t' << columns[j].name << '\t' << to_string(columns[j].scope) << '\t'
        << to_string(columns[j].kind) << '\n';
  }
}

Lexicon Lexicon::parse(std::string_view text) {
  Lexicon lex;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("lexicon line needs word<TAB>polarity", number);
    const std::string word = lower(line.substr(0, tab));
    const std::string pol = line.substr(tab + 1);
    int p = 0;
    if (pol == "1" || pol == "+1") p = 1;
    else if (pol == "-1") p = -1;
    else throw ParseError("lexicon polarity must be 1 or -1, got '" + pol + "'", number);
    lex.words_[word] = p;
  }
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path) { return parse(read_file(path)); }

const Lexicon& Lexicon::bundled() {
  static const Lexicon lex = parse(resources::kSentimentLexicon);
  return lex;
}

int Lexicon::polarity(std::string_view word) const {
  const auto it = words_.find(std::string(word));
  return it == words_.end() ? 0 : it->second;
}

NameList NameList::parse(std::string_view text) {
  NameList list;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    list.names_.insert(lower(line));
  }
  return list;
}

NameList NameList::load(const std::filesystem::path& path) { return parse(read_file(path)); }

const NameList& NameList::bundled() {
  static const NameList list = parse(resources::kCommonNames);
  return list;
}

bool NameList::contains(std::string_view display_name) const {
  std::string token;
  for (char c : display_name) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!token.empty()) {
      break;
    }
  }
  return !token.empty() && names_.count(token) > 0;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    while (!cur.empty() && (cur.back() == '-' || cur.back() == '\'')) cur.pop_back();
    std::size_t lead = 0;
    while (lead < cur.size() && (cur[lead] == '-' || cur[lead] == '\'')) ++lead;
    if (lead < cur.size()) tokens.push_back(cur.substr(lead));
    cur.clear();
  };
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '\'' || c == '-') {
      cur.push_back(static_cast<char>(std::tolower(u)));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::size_t word_count(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::size_t n = 0;
  std::string w;
  while (in >> w) ++n;
  return n;
}

int sentiment_score(std::string_view text, const Lexicon& lexicon) {
  int balance = 0;
  for (const std::string& tok : tokenize(text)) balance += lexicon.polarity(tok);
  return (balance > 0) - (balance < 0);
}

FeatureVector extract_user_features(std::span<const ReviewRecord> reviews_of_user,
                                    std::span<const std::string> categories,
                                    const NameList& names) {
  if (reviews_of_user.empty()) throw ArgumentError("user feature extraction needs reviews");
  const std::string& user = reviews_of_user.front().user_id;
  for (const ReviewRecord& r : reviews_of_user) {
    if (r.user_id != user) {
      throw ArgumentError("reviews of several users passed together: '" + user + "' and '" +
                          r.user_id + "'");
    }
    r.validate();
  }
  std::vector<ReviewRecord> reviews(reviews_of_user.begin(), reviews_of_user.end());
  std::sort(reviews.begin(), reviews.end(), earlier);
  const double n = static_cast<double>(reviews.size());

  // Display name and memo come from the earliest review that carries them.
  std::string display = user;
  std::optional<std::string> memo;
  for (const ReviewRecord& r : reviews) {
    if (r.user_name && !r.user_name->empty()) {
      display = *r.user_name;
      break;
    }
  }
  for (const ReviewRecord& r : reviews) {
    if (r.user_memo && !r.user_memo->empty()) {
      memo = r.user_memo;
      break;
    }
  }

  std::set<std::string> products;
  Vector score_counts(5, 0.0);
  Vector helpful, unhelpful;
  double rating_sum = 0.0;
  int min_rating = 5, max_rating = 1;
  for (const ReviewRecord& r : reviews) {
    products.insert(r.product_id);
    score_counts[static_cast<std::size_t>(r.rating - 1)] += 1.0;
    helpful.push_back(static_cast<double>(r.helpful_votes));
    unhelpful.push_back(static_cast<double>(r.unhelpful_votes));
    rating_sum += r.rating;
    min_rating = std::min(min_rating, r.rating);
    max_rating = std::max(max_rating, r.rating);
  }
  const Vector score_ratio = proportions(score_counts);

  RowWriter w(user_feature_manifest());
  w.emit("num_reviewed_products", static_cast<double>(products.size()));
  w.emit("name_length", static_cast<double>(code_points(display)));
  w.emit("common_name", names.contains(display) ? 0.0 : 1.0);
  w.emit("memo_length", memo ? static_cast<double>(word_count(*memo)) : 0.0);
  w.emit("has_memo", memo ? 1.0 : 0.0);
  w.emit("min_rating", min_rating);
  w.emit("max_rating", max_rating);
  for (int s = 1; s <= 5; ++s) w.emit("ratio_score_" + std::to_string(s), score_ratio[s - 1]);
  for (int s = 1; s <= 5; ++s) w.emit("count_score_" + std::to_string(s), score_counts[s - 1]);
  w.emit("positive_ratio", (score_counts[3] + score_counts[4]) / n);
  w.emit("negative_ratio", (score_counts[0] + score_counts[1]) / n);
  w.emit("rating_entropy", entropy(score_ratio));
  w.emit("mean_rating", rating_sum / n);

  double help_sum = 0.0, unhelp_sum = 0.0;
  for (double v : helpful) help_sum += v;
  for (double v : unhelpful) unhelp_sum += v;
  w.emit("helpful_sum", help_sum);
  w.emit("unhelpful_sum", unhelp_sum);
  w.emit("helpful_mean", help_sum / n);
  w.emit("unhelpful_mean", unhelp_sum / n);
  w.emit("helpful_ratio", safe_ratio(help_sum, help_sum + unhelp_sum));
  w.emit("helpful_median", median(helpful));
  w.emit("helpful_min", *std::min_element(helpful.begin(), helpful.end()));
  w.emit("helpful_max", *std::max_element(helpful.begin(), helpful.end()));
  w.emit("unhelpful_median", median(unhelpful));
  w.emit("unhelpful_min", *std::min_element(unhelpful.begin(), unhelpful.end()));
  w.emit("unhelpful_max", *std::max_element(unhelpful.begin(), unhelpful.end()));

  // Time: yearly bins between the first and last review year.
  const std::int64_t first = reviews.front().timestamp;
  const std::int64_t last = reviews.back().timestamp;
  const int first_year = civil_from_days(first).year;
  const int last_year = civil_from_days(last).year;
  Vector year_counts(static_cast<std::size_t>(last_year - first_year + 1), 0.0);
  for (const ReviewRecord& r : reviews) {
    year_counts[static_cast<std::size_t>(civil_from_days(r.timestamp).year - first_year)] += 1.0;
  }
  const auto active_years = std::count_if(year_counts.begin(), year_counts.end(),
                                          [](double c) { return c > 0.0; });
  w.emit("day_gap", static_cast<double>(last - first));
  w.emit("review_time_entropy", count_entropy(year_counts));
  w.emit("same_date", first == last ? 1.0 : 0.0);
  w.emit("active_ratio", static_cast<double>(active_years) / static_cast<double>(year_counts.size()));

  FeatureVector out = w.finish();
  for (const std::string& c : categories) {
    const auto hits = std::count_if(reviews.begin(), reviews.end(),
                                    [&](const ReviewRecord& r) { return r.category == c; });
    out.append({std::string(kCategoryRatioPrefix) + c, Scope::history, kC},
               static_cast<double>(hits) / n);
  }
  return out;
}

FeatureVector extract_review_features(const ReviewRecord& review,
                                      std::span<const ReviewRecord> product_reviews,
                                      const Lexicon& lexicon) {
  if (std::find(product_reviews.begin(), product_reviews.end(), review) ==
      product_reviews.end()) {
    throw ArgumentError("review by '" + review.user_id + "' is not among the reviews of product '" +
                        review.product_id + "'");
  }
  review.validate();

  const double count = static_cast<double>(product_reviews.size());
  Vector score_counts(5, 0.0);
  double rating_sum = 0.0;
  std::int64_t first = product_reviews.front().timestamp;
  std::int64_t last = first;
  for (const ReviewRecord& r : product_reviews) {
    if (r.product_id != review.product_id) {
      throw ArgumentError("product context mixes products '" + review.product_id + "' and '" +
                          r.product_id + "'");
    }
    r.validate();
    score_counts[static_cast<std::size_t>(r.rating - 1)] += 1.0;
    rating_sum += r.rating;
    first = std::min(first, r.timestamp);
    last = std::max(last, r.timestamp);
  }

  // Monthly bins from the first to the last review month.
  const CivilDate first_date = civil_from_days(first);
  const CivilDate last_date = civil_from_days(last);
  const auto month_index = [](const CivilDate& d) {
    return static_cast<std::int64_t>(d.year) * 12 + static_cast<std::int64_t>(d.month) - 1;
  };
  Vector month_counts(static_cast<std::size_t>(month_index(last_date) - month_index(first_date) + 1),
                      0.0);
  std::size_t earlier_count = 0;
  std::size_t first_day_count = 0;
  for (const ReviewRecord& r : product_reviews) {
    month_counts[static_cast<std::size_t>(month_index(civil_from_days(r.timestamp)) -
                                          month_index(first_date))] += 1.0;
    if (r.timestamp < review.timestamp) ++earlier_count;
    if (r.timestamp == first) ++first_day_count;
  }

  const double gap = static_cast<double>(last - first);
  const double user_gap = static_cast<double>(review.timestamp - first);
  const double rank = static_cast<double>(earlier_count + 1);

  RowWriter w(review_feature_manifest());
  w.emit("product_mean_rating", rating_sum / count);
  w.emit("product_review_count", count);
  w.emit("product_score_entropy", count_entropy(score_counts));
  w.emit("product_comment_time_gap", gap);
  w.emit("product_comment_time_entropy", count_entropy(month_counts));
  w.emit("product_first_day_count", static_cast<double>(first_day_count));
  w.emit("user_rating", review.rating);
  w.emit("user_helpful", static_cast<double>(review.helpful_votes));
  w.emit("user_unhelpful", static_cast<double>(review.unhelpful_votes));
  w.emit("user_comment_time_gap", user_gap);
  w.emit("comment_time_gap_ratio", safe_ratio(user_gap, gap));
  w.emit("comment_rank", rank);
  w.emit("comment_rank_ratio", rank / count);
  w.emit("summary_length", static_cast<double>(word_count(review.summary_text)));
  w.emit("review_length", static_cast<double>(word_count(review.review_text)));
  w.emit("summary_sentiment", sentiment_score(review.summary_text, lexicon));
  w.emit("review_sentiment", sentiment_score(review.review_text, lexicon));
  return w.finish();
}

LabeledDataset build_feature_dataset(std::span<const ReviewRecord> retained,
                                     std::span<const ReviewRecord> all_reviews,
                                     const std::map<std::string, int>& user_labels,
                                     const NameList& names, const Lexicon& lexicon) {
  std::set<std::string> category_set;
  std::map<std::string, std::vector<ReviewRecord>> by_product;
  for (const ReviewRecord& r : all_reviews) {
    category_set.insert(r.category);
    by_product[r.product_id].push_back(r);
  }
  const std::vector<std::string> categories(category_set.begin(), category_set.end());

  std::map<std::string, std::vector<ReviewRecord>> by_user;
  for (const ReviewRecord& r : retained) by_user[r.user_id].push_back(r);

  LabeledDataset out;
  out.features.manifest_version = kFeatureManifestVersion;
  out.features.columns = feature_manifest(categories);
  for (auto& [user, reviews] : by_user) {
    const auto label = user_labels.find(user);
    if (label == user_labels.end()) throw ArgumentError("no label for user '" + user + "'");
    std::sort(reviews.begin(), reviews.end(), earlier);
    const FeatureVector user_part = extract_user_features(reviews, categories, names);
    for (const ReviewRecord& r : reviews) {
      const auto product = by_product.find(r.product_id);
      if (product == by_product.end()) {
        throw ArgumentError("product '" + r.product_id + "' missing from the review context");
      }
      const FeatureVector review_part = extract_review_features(r, product->second, lexicon);
      // user fixed part, review part, then the category ratios
      const std::size_t fixed_user = user_feature_manifest().size();
      Vector row(user_part.values.begin(),
                 user_part.values.begin() + static_cast<std::ptrdiff_t>(fixed_user));
      row.insert(row.end(), review_part.values.begin(), review_part.values.end());
      row.insert(row.end(), user_part.values.begin() + static_cast<std::ptrdiff_t>(fixed_user),
                 user_part.values.end());
      out.features.rows.push_back(std::move(row));
      out.labels.push_back(label->second);
      out.user_ids.push_back(user);
      out.product_ids.push_back(r.product_id);
    }
  }
  out.validate();
  return out;
}

}  // namespace spamforest
