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

#include "spamforest/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

#include "spamforest/errors.hpp"
#include "spamforest/features.hpp"

namespace spamforest {
namespace {

using nlohmann::json;

const std::set<std::string>& known_fields() {
  static const std::set<std::string> f = {
      "user_id",  "product_id",   "rating",      "helpful_votes", "unhelpful_votes",
      "timestamp", "category",    "summary_text", "review_text",  "user_name",
      "user_memo"};
  return f;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileError("cannot write " + path.string());
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::int64_t parse_day(std::string_view text, std::size_t line) {
  const std::string t = trim(text);
  std::int64_t days = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), days);
  if (ec == std::errc() && p == t.data() + t.size() && !t.empty()) return days;
  int y = 0;
  unsigned m = 0, d = 0;
  char dash1 = 0, dash2 = 0;
  std::istringstream in(t);
  if (in >> y >> dash1 >> m >> dash2 >> d && dash1 == '-' && dash2 == '-' && in.peek() == EOF) {
    try {
      return days_from_civil(y, m, d);
    } catch (const ArgumentError& e) {
      throw ParseError(e.what(), line);
    }
  }
  throw ParseError("timestamp '" + t + "' is neither a day count nor YYYY-MM-DD", line);
}

std::int64_t parse_int(std::string_view text, const std::string& field, std::size_t line) {
  const std::string t = trim(text);
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty()) {
    throw ParseError(field + " must be an integer, got '" + t + "'", line);
  }
  return v;
}

// Range checks shared by both readers.
void check_record(const ReviewRecord& r, std::size_t line) {
  if (r.rating < 1 || r.rating > 5) {
    throw ParseError("rating must be in 1..5, got " + std::to_string(r.rating), line);
  }
  if (r.helpful_votes < 0) throw ParseError("helpful_votes must be >= 0", line);
  if (r.unhelpful_votes < 0) throw ParseError("unhelpful_votes must be >= 0", line);
  if (r.user_id.empty()) throw ParseError("user_id must not be empty", line);
  if (r.product_id.empty()) throw ParseError("product_id must not be empty", line);
}

const json& require(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    throw ParseError(std::string("missing field '") + key + "'", line);
  }
  return *it;
}

std::string require_string(const json& obj, const char* key, std::size_t line) {
  const json& v = require(obj, key, line);
  if (!v.is_string()) throw ParseError(std::string("field '") + key + "' must be a string", line);
  return v.get<std::string>();
}

std::int64_t require_integer(const json& obj, const char* key, std::size_t line) {
  const json& v = require(obj, key, line);
  if (!v.is_number_integer()) {
    throw ParseError(std::string("field '") + key + "' must be an integer", line);
  }
  return v.get<std::int64_t>();
}

std::optional<std::string> optional_string(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ParseError(std::string("field '") + key + "' must be a string", line);
  return it->get<std::string>();
}

std::vector<std::string> split_delimited(const std::string& line, char delim, std::size_t number) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == delim) {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", number);
  out.push_back(std::move(cur));
  return out;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
  return out;
}

double parse_double(const std::string& text, std::size_t line) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || text.empty()) {
    throw ParseError("not a number: '" + text + "'", line);
  }
  return v;
}

}  // namespace

std::vector<ReviewRecord> parse_reviews(std::istream& in, Warnings* warnings) {
  std::vector<ReviewRecord> out;
  std::string line;
  std::size_t number = 0;
  std::set<std::string> warned;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed record: ") + e.what(), number);
    }
    if (!obj.is_object()) throw ParseError("record must be a JSON object", number);

    ReviewRecord r;
    r.user_id = require_string(obj, "user_id", number);
    r.product_id = require_string(obj, "product_id", number);
    const std::int64_t rating = require_integer(obj, "rating", number);
    if (rating < 1 || rating > 5) {
      throw ParseError("rating must be in 1..5, got " + std::to_string(rating), number);
    }
    r.rating = static_cast<int>(rating);
    r.helpful_votes = require_integer(obj, "helpful_votes", number);
    r.unhelpful_votes = require_integer(obj, "unhelpful_votes", number);
    const json& ts = require(obj, "timestamp", number);
    if (ts.is_number_integer()) {
      r.timestamp = ts.get<std::int64_t>();
    } else if (ts.is_string()) {
      r.timestamp = parse_day(ts.get<std::string>(), number);
    } else {
      throw ParseError("timestamp must be a day count or a YYYY-MM-DD string", number);
    }
    r.category = require_string(obj, "category", number);
    r.summary_text = require_string(obj, "summary_text", number);
    r.review_text = require_string(obj, "review_text", number);
    r.user_name = optional_string(obj, "user_name", number);
    r.user_memo = optional_string(obj, "user_memo", number);
    check_record(r, number);

    if (warnings) {
      for (const auto& [key, value] : obj.items()) {
        if (!known_fields().count(key) && warned.insert(key).second) {
          warnings->push_back("line " + std::to_string(number) + ": unknown field '" + key +
                              "' ignored");
        }
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ReviewRecord> load_reviews(const std::filesystem::path& path, Warnings* warnings) {
  std::ifstream in = open_in(path);
  return parse_reviews(in, warnings);
}

std::string review_to_json(const ReviewRecord& r) {
  json obj = {{"user_id", r.user_id},
              {"product_id", r.product_id},
              {"rating", r.rating},
              {"helpful_votes", r.helpful_votes},
              {"unhelpful_votes", r.unhelpful_votes},
              {"timestamp", r.timestamp},
              {"category", r.category},
              {"summary_text", r.summary_text},
              {"review_text", r.review_text}};
  if (r.user_name) obj["user_name"] = *r.user_name;
  if (r.user_memo) obj["user_memo"] = *r.user_memo;
  return obj.dump();
}

void write_reviews(std::ostream& out, std::span<const ReviewRecord> reviews) {
  for (const ReviewRecord& r : reviews) out << review_to_json(r) << '\n';
}

void save_reviews(const std::filesystem::path& path, std::span<const ReviewRecord> reviews) {
  std::ofstream out = open_out(path);
  write_reviews(out, reviews);
  if (!out) throw FileError("failed writing " + path.string());
}

std::vector<ReviewRecord> parse_delimited_reviews(std::istream& in, const DelimitedFormat& format) {
  std::string line;
  std::size_t number = 0;
  if (!std::getline(in, line)) return {};
  ++number;
  const std::vector<std::string> header = split_delimited(line, format.delimiter, number);
  std::map<std::string, std::size_t> index;
  for (std::size_t j = 0; j < header.size(); ++j) index[trim(header[j])] = j;

  auto column_of = [&](const std::string& field) -> std::optional<std::size_t> {
    const auto mapped = format.columns.find(field);
    const std::string name = mapped == format.columns.end() ? field : mapped->second;
    const auto it = index.find(name);
    if (it == index.end()) return std::nullopt;
    return it->second;
  };
  std::map<std::string, std::size_t> cols;
  for (const std::string& field : known_fields()) {
    const auto c = column_of(field);
    if (c) {
      cols[field] = *c;
    } else if (field != "user_name" && field != "user_memo") {
      throw ParseError("header has no column for '" + field + "'", 1);
    }
  }

  std::vector<ReviewRecord> out;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_delimited(line, format.delimiter, number);
    if (cells.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(cells.size()),
                       number);
    }
    auto cell = [&](const char* f) { return cells[cols.at(f)]; };
    ReviewRecord r;
    r.user_id = trim(cell("user_id"));
    r.product_id = trim(cell("product_id"));
    r.rating = static_cast<int>(parse_int(cell("rating"), "rating", number));
    r.helpful_votes = parse_int(cell("helpful_votes"), "helpful_votes", number);
    r.unhelpful_votes = parse_int(cell("unhelpful_votes"), "unhelpful_votes", number);
    r.timestamp = parse_day(cell("timestamp"), number);
    r.category = trim(cell("category"));
    r.summary_text = cell("summary_text");
    r.review_text = cell("review_text");
    if (cols.count("user_name") && !cell("user_name").empty()) r.user_name = cell("user_name");
    if (cols.count("user_memo") && !cell("user_memo").empty()) r.user_memo = cell("user_memo");
    check_record(r, number);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ReviewRecord> load_delimited_reviews(const std::filesystem::path& path,
                                                 const DelimitedFormat& format) {
  std::ifstream in = open_in(path);
  return parse_delimited_reviews(in, format);
}

std::map<std::string, double> parse_spam_scores(std::istream& in) {
  std::map<std::string, double> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto sep = t.find(',');
    if (sep == std::string::npos) sep = t.find_first_of(" \t");
    if (sep == std::string::npos) throw ParseError("expected 'user_id,score'", number);
    const std::string user = trim(t.substr(0, sep));
    const std::string score_text = trim(t.substr(sep + 1));
    if (user.empty()) throw ParseError("empty user id", number);
    const double score = parse_double(score_text, number);
    if (!(score >= 0.0 && score <= 1.0)) {
      throw ParseError("score must lie in [0, 1], got " + score_text, number);
    }
    if (!out.emplace(user, score).second) {
      throw ParseError("user '" + user + "' listed twice", number);
    }
  }
  return out;
}

std::map<std::string, double> load_spam_scores(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  return parse_spam_scores(in);
}

int label_from_score(double average_score) { return average_score < 0.5 ? 0 : 1; }

LabeledReviews label_and_cap_users(std::span<const ReviewRecord> records,
                                   const std::map<std::string, double>& spam_scores,
                                   std::size_t cap, std::uint64_t seed) {
  if (cap == 0) throw ConfigError("review cap must be positive");
  std::map<std::string, std::vector<std::size_t>> by_user;
  for (std::size_t i = 0; i < records.size(); ++i) by_user[records[i].user_id].push_back(i);

  std::vector<std::string> missing;
  LabeledReviews out;
  for (const auto& [user, rows] : by_user) {
    const auto score = spam_scores.find(user);
    if (score == spam_scores.end()) {
      missing.push_back(user);
      continue;
    }
    out.user_labels[user] = label_from_score(score->second);
  }
  if (!missing.empty()) {
    std::string list;
    for (const std::string& u : missing) list += (list.empty() ? "" : ", ") + u;
    throw ArgumentError("no spam score for user(s): " + list);
  }

  std::vector<bool> keep(records.size(), false);
  for (auto& [user, rows] : by_user) {
    if (rows.size() > cap) {
      Rng rng(seed ^ fnv1a(user));
      std::vector<std::size_t> pick = rows;
      rng.shuffle(std::span<std::size_t>(pick));
      pick.resize(cap);
      for (std::size_t i : pick) keep[i] = true;
    } else {
      for (std::size_t i : rows) keep[i] = true;
    }
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (keep[i]) out.retained.push_back(records[i]);
  }
  return out;
}

Vector NormalizationStats::apply(std::span<const double> row) const {
  if (row.size() != shift.size()) {
    throw ShapeError("normalization fitted on " + std::to_string(shift.size()) +
                     " columns applied to a row of " + std::to_string(row.size()));
  }
  Vector out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    out[j] = scale[j] > 0.0 ? (row[j] - shift[j]) / scale[j] : 0.0;
  }
  return out;
}

FeatureMatrix NormalizationStats::apply(const FeatureMatrix& features) const {
  FeatureMatrix out;
  out.manifest_version = features.manifest_version;
  out.columns = features.columns;
  out.rows.reserve(features.row_count());
  for (const Vector& r : features.rows) out.rows.push_back(apply(r));
  return out;
}

NormalizationStats fit_normalization(const FeatureMatrix& features, Normalization method,
                                     std::span<const std::size_t> rows) {
  features.validate();
  const std::size_t d = features.column_count();
  NormalizationStats s;
  s.method = method;
  s.shift.assign(d, 0.0);
  s.scale.assign(d, 1.0);
  if (method == Normalization::none) return s;

  std::vector<std::size_t> use(rows.begin(), rows.end());
  if (use.empty()) {
    use.resize(features.row_count());
    std::iota(use.begin(), use.end(), std::size_t{0});
  }
  if (use.empty()) throw ArgumentError("cannot fit normalization on zero rows");
  const double n = static_cast<double>(use.size());

  for (std::size_t j = 0; j < d; ++j) {
    if (method == Normalization::zscore) {
      double mean = 0.0;
      for (std::size_t i : use) mean += features.rows.at(i)[j];
      mean /= n;
      double var = 0.0;
      for (std::size_t i : use) {
        const double c = features.rows[i][j] - mean;
        var += c * c;
      }
      s.shift[j] = mean;
      s.scale[j] = std::sqrt(var / n);
    } else {
      double lo = features.rows.at(use[0])[j], hi = lo;
      for (std::size_t i : use) {
        lo = std::min(lo, features.rows.at(i)[j]);
        hi = std::max(hi, features.rows[i][j]);
      }
      s.shift[j] = lo;
      s.scale[j] = hi - lo;
    }
  }
  return s;
}

NormalizedFeatures normalize(const FeatureMatrix& features, Normalization method) {
  NormalizedFeatures out;
  out.stats = fit_normalization(features, method);
  out.features = out.stats.apply(features);
  return out;
}

Split split_shuffle_batch(std::size_t rows, std::size_t train_count, std::size_t batch_size,
                          std::uint64_t seed) {
  if (train_count > rows) {
    throw ConfigError("train count " + std::to_string(train_count) + " exceeds " +
                      std::to_string(rows) + " rows");
  }
  if (batch_size == 0 || batch_size > train_count) {
    throw ConfigError("batch size " + std::to_string(batch_size) + " must be in 1.." +
                      std::to_string(train_count));
  }
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  Split s;
  s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_count));
  s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(train_count), order.end());
  for (std::size_t start = 0; start < train_count; start += batch_size) {
    std::vector<std::size_t> b(std::min(batch_size, train_count - start));
    std::iota(b.begin(), b.end(), start);
    s.batches.push_back(std::move(b));
  }
  return s;
}

std::size_t train_count_for(std::size_t rows, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    throw ConfigError("train_fraction must lie in (0, 1]");
  }
  const auto n = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(rows)));
  return std::max<std::size_t>(1, std::min(n, rows));
}

Dataset to_dataset(const FeatureMatrix& features, std::span<const int> labels) {
  Dataset d;
  d.rows = features.rows;
  d.labels.assign(labels.begin(), labels.end());
  d.validate();
  return d;
}

void write_feature_dir(const std::filesystem::path& dir, const LabeledDataset& data) {
  data.validate();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw FileError("cannot create " + dir.string() + ": " + ec.message());

  {
    std::ofstream out = open_out(dir / kManifestFile);
    write_manifest(out, data.features.manifest_version, data.features.columns);
  }
  {
    std::ofstream out = open_out(dir / kFeaturesFile);
    for (std::size_t j = 0; j < data.features.column_count(); ++j) {
      out << (j ? "\t" : "") << data.features.columns[j].name;
    }
    out << '\n';
    for (const Vector& row : data.features.rows) {
      for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "\t" : "") << format_double(row[j]);
      out << '\n';
    }
  }
  {
    std::ofstream out = open_out(dir / kLabelsFile);
    out << "user_id\tproduct_id\tlabel\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
      out << (data.user_ids.empty() ? "" : data.user_ids[i]) << '\t'
          << (data.product_ids.empty() ? "" : data.product_ids[i]) << '\t' << data.labels[i]
          << '\n';
    }
  }
}

LabeledDataset read_feature_dir(const std::filesystem::path& dir) {
  LabeledDataset data;
  std::string line;

  {
    std::ifstream in = open_in(dir / kManifestFile);
    std::size_t number = 0;
    bool saw_version = false, saw_header = false;
    while (std::getline(in, line)) {
      ++number;
      const auto cells = split_tabs(line);
      if (!saw_version) {
        if (cells.size() != 2 || cells[0] != "# manifest_version") {
          throw ParseError("manifest must start with '# manifest_version<TAB>N'", number);
        }
        data.features.manifest_version =
            static_cast<int>(parse_int(cells[1], "manifest_version", number));
        if (data.features.manifest_version != kFeatureManifestVersion) {
          throw VersionError("feature manifest version " +
                             std::to_string(data.features.manifest_version) +
                             " does not match supported version " +
                             std::to_string(kFeatureManifestVersion));
        }
        saw_version = true;
        continue;
      }
      if (!saw_header) {
        saw_header = true;
        continue;
      }
      if (trim(line).empty()) continue;
      if (cells.size() != 4) throw ParseError("manifest rows need 4 fields", number);
      try {
        data.features.columns.push_back(
            {cells[1], parse_scope(cells[2]), parse_feature_kind(cells[3])});
      } catch (const ParseError& e) {
        throw ParseError(e.what(), number);
      }
    }
    if (!saw_version) throw ParseError((dir / kManifestFile).string() + " is empty", 0);
  }

  {
    std::ifstream in = open_in(dir / kFeaturesFile);
    std::size_t number = 1;
    if (!std::getline(in, line)) throw ParseError("features file has no header", 1);
    const auto names = split_tabs(line);
    if (names.size() != data.features.column_count()) {
      throw ParseError("features header has " + std::to_string(names.size()) +
                           " columns but the manifest lists " +
                           std::to_string(data.features.column_count()),
                       1);
    }
    for (std::size_t j = 0; j < names.size(); ++j) {
      if (names[j] != data.features.columns[j].name) {
        throw ParseError("features column '" + names[j] + "' does not match manifest entry '" +
                             data.features.columns[j].name + "'",
                         1);
      }
    }
    while (std::getline(in, line)) {
      ++number;
      if (trim(line).empty()) continue;
      const auto cells = split_tabs(line);
      if (cells.size() != names.size()) {
        throw ParseError("expected " + std::to_string(names.size()) + " values, got " +
                             std::to_string(cells.size()),
                         number);
      }
      Vector row(cells.size());
      for (std::size_t j = 0; j < cells.size(); ++j) row[j] = parse_double(cells[j], number);
      data.features.rows.push_back(std::move(row));
    }
  }

  {
    std::ifstream in = open_in(dir / kLabelsFile);
    std::size_t number = 1;
    std::getline(in, line);
    while (std::getline(in, line)) {
      ++number;
      if (trim(line).empty()) continue;
      const auto cells = split_tabs(line);
      if (cells.size() != 3) throw ParseError("labels rows need 3 fields", number);
      const std::int64_t y = parse_int(cells[2], "label", number);
      if (y != 0 && y != 1) throw ParseError("label must be 0 or 1", number);
      data.user_ids.push_back(cells[0]);
      data.product_ids.push_back(cells[1]);
      data.labels.push_back(static_cast<int>(y));
    }
  }
  data.validate();
  return data;
}

}  // namespace spamforest
