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

#include "commands.hpp"

#include <charconv>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "spamforest/data_io.hpp"
#include "spamforest/errors.hpp"
#include "spamforest/features.hpp"
#include "spamforest/metrics.hpp"
#include "spamforest/model_io.hpp"
#include "spamforest/stats.hpp"
#include "spamforest/training.hpp"

namespace spamforest::cli {
namespace {

constexpr const char* kModelFileName = "model.sfm";

template <typename T>
T parse_value(const std::string& key, const std::string& value) {
  T out{};
  const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || p != value.data() + value.size() || value.empty()) {
    throw ConfigError("config key '" + key + "' has invalid value '" + value + "'");
  }
  return out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileError("cannot write " + path.string());
  return out;
}

void prepare_out(const fs::path& dir, const RunConfig& config) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw FileError("cannot create " + dir.string() + ": " + ec.message());
  write_effective_config(dir, config);
}

LabeledDataset read_features(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw FileError("feature directory not found: " + dir.string());
  return read_feature_dir(dir);
}

Split split_for(std::size_t rows, double fraction, std::uint64_t seed) {
  return split_shuffle_batch(rows, train_count_for(rows, fraction), 1, seed);
}

struct Trained {
  ModelFile file;
  std::vector<EpochRecord> trace;
};

// Fits normalization on the training rows, trains, and packages the result.
Trained fit(const LabeledDataset& data, const Split& split, const RunConfig& config) {
  const NormalizationStats stats =
      fit_normalization(data.features, config.train.normalization, split.train);
  const LabeledDataset train_rows = data.select_rows(split.train);
  const Dataset train_set = to_dataset(stats.apply(train_rows.features), train_rows.labels);
  TrainResult result = train(train_set, config.train);

  Trained t;
  t.file.config = config.train;
  t.file.model = std::move(result.model);
  t.file.normalization = stats;
  t.file.manifest_version = data.features.manifest_version;
  t.file.features = data.features.columns;
  t.file.train_fraction = config.train_fraction;
  t.file.split_seed = config.train.seed;
  t.trace = std::move(result.trace);
  return t;
}

std::vector<int> predict_rows(const ModelFile& file, const FeatureMatrix& features,
                              std::vector<double>* p_spam = nullptr) {
  std::vector<int> out;
  out.reserve(features.row_count());
  for (const Vector& row : features.rows) {
    const Vector probs = predict_proba(file.normalization.apply(row), file.model);
    if (p_spam) p_spam->push_back(probs[1]);
    out.push_back(probs[1] > probs[0] ? 1 : 0);
  }
  return out;
}

void check_compatible(const ModelFile& file, const LabeledDataset& data) {
  if (file.manifest_version != data.features.manifest_version) {
    throw VersionError("model was trained on feature manifest version " +
                       std::to_string(file.manifest_version) + " but the features use version " +
                       std::to_string(data.features.manifest_version));
  }
  if (file.features != data.features.columns) {
    throw VersionError("feature columns differ from the ones the model was trained on");
  }
}

std::vector<std::size_t> rows_for(const std::string& which, const ModelFile& file,
                                  std::size_t rows) {
  if (which == "all") {
    std::vector<std::size_t> all(rows);
    for (std::size_t i = 0; i < rows; ++i) all[i] = i;
    return all;
  }
  const Split split = split_for(rows, file.train_fraction, file.split_seed);
  if (which == "train") return split.train;
  if (which == "test") return split.test;
  throw ConfigError("--split must be test, train or all, got '" + which + "'");
}

}  // namespace

void apply_run_config_entry(RunConfig& c, const std::string& key, const std::string& value) {
  if (apply_train_config_entry(c.train, key, value)) return;
  if (key == "review_cap") c.review_cap = parse_value<std::size_t>(key, value);
  else if (key == "train_fraction") c.train_fraction = parse_value<double>(key, value);
  else if (key == "name_list") c.name_list = value;
  else if (key == "lexicon") c.lexicon = value;
  else if (key == "signed_rank") {
    if (value == "true" || value == "1") c.signed_rank = true;
    else if (value == "false" || value == "0") c.signed_rank = false;
    else throw ConfigError("config key 'signed_rank' needs true or false, got '" + value + "'");
  } else if (key == "histogram_bins") c.histogram_bins = parse_value<std::size_t>(key, value);
  else if (key == "positive_class") c.positive_class = parse_value<int>(key, value);
  else throw ConfigError("unknown config key '" + key + "'");
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open config " + path.string());
  RunConfig c;
  for (const ConfigEntry& e : parse_config_entries(in)) {
    try {
      apply_run_config_entry(c, e.key, e.value);
    } catch (const ConfigError& err) {
      throw ConfigError(path.string() + ":" + std::to_string(e.line) + ": " + err.what());
    }
  }
  return c;
}

std::vector<std::pair<std::string, std::string>> run_config_entries(const RunConfig& c) {
  auto out = train_config_entries(c.train);
  out.emplace_back("review_cap", std::to_string(c.review_cap));
  out.emplace_back("train_fraction", format_double(c.train_fraction));
  out.emplace_back("name_list", c.name_list);
  out.emplace_back("lexicon", c.lexicon);
  out.emplace_back("signed_rank", c.signed_rank ? "true" : "false");
  out.emplace_back("histogram_bins", std::to_string(c.histogram_bins));
  out.emplace_back("positive_class", std::to_string(c.positive_class));
  return out;
}

void write_effective_config(const fs::path& out_dir, const RunConfig& config) {
  std::ofstream out = open_out(out_dir / "config.txt");
  out << "# effective configuration\n";
  for (const auto& [key, value] : run_config_entries(config)) out << key << " = " << value << '\n';
}

int cmd_extract(const ExtractArgs& args, const RunConfig& config, std::ostream& log) {
  if (!fs::exists(args.reviews)) throw FileError("reviews file not found: " + args.reviews.string());
  if (!fs::exists(args.scores)) throw FileError("score file not found: " + args.scores.string());
  Warnings warnings;
  const std::vector<ReviewRecord> reviews =
      args.delimited ? load_delimited_reviews(args.reviews) : load_reviews(args.reviews, &warnings);
  for (const std::string& w : warnings) log << "warning: " << args.reviews.string() << ": " << w << '\n';
  const auto scores = load_spam_scores(args.scores);
  const LabeledReviews labeled =
      label_and_cap_users(reviews, scores, config.review_cap, config.train.seed);

  const NameList names = config.name_list.empty() ? NameList::bundled() : NameList::load(config.name_list);
  const Lexicon lexicon = config.lexicon.empty() ? Lexicon::bundled() : Lexicon::load(config.lexicon);
  const LabeledDataset data =
      build_feature_dataset(labeled.retained, reviews, labeled.user_labels, names, lexicon);

  prepare_out(args.out, config);
  write_feature_dir(args.out, data);
  log << "extracted " << data.size() << " rows x " << data.features.column_count()
      << " features from " << reviews.size() << " reviews (" << labeled.user_labels.size()
      << " users)\n";
  return kExitOk;
}

int cmd_analyze(const FeatureArgs& args, const RunConfig& config, std::ostream& log) {
  const LabeledDataset data = read_features(args.features);
  ScreenOptions options;
  options.signed_rank = config.signed_rank;
  const std::vector<TestResult> results = screen_features(data.features, data.labels, options);

  prepare_out(args.out, config);
  {
    std::ofstream out = open_out(args.out / "screening.tsv");
    write_screening_report(out, results, data.features.columns);
  }
  if (config.histogram_bins > 0) {
    std::ofstream out = open_out(args.out / "histograms.csv");
    write_histograms(out, data.features, data.labels, config.histogram_bins);
  }
  std::size_t significant = 0, degenerate = 0;
  for (const TestResult& r : results) {
    significant += r.significant_at_05 ? 1 : 0;
    degenerate += r.degenerate ? 1 : 0;
  }
  log << "screened " << results.size() << " features: " << significant << " significant at 0.05, "
      << degenerate << " degenerate\n";
  return kExitOk;
}

int cmd_train(const FeatureArgs& args, const RunConfig& config, std::ostream& log) {
  config.train.validate();
  const LabeledDataset data = read_features(args.features);
  const Split split = split_for(data.size(), config.train_fraction, config.train.seed);
  prepare_out(args.out, config);
  const Trained t = fit(data, split, config);
  save_model(args.out / kModelFileName, t.file);
  {
    std::ofstream out = open_out(args.out / "training_log.tsv");
    write_training_log(out, t.trace);
  }
  if (!t.trace.empty()) {
    log << "trained " << t.trace.size() << " epochs on " << split.train.size()
        << " rows: loss " << format_double(t.trace.back().loss) << ", training accuracy "
        << percent_2dp(t.trace.back().accuracy) << "%\n";
  }
  return kExitOk;
}

int cmd_evaluate(const ModelArgs& args, const RunConfig& config, std::ostream& log) {
  const ModelFile file = load_model(args.model);
  const LabeledDataset data = read_features(args.features);
  check_compatible(file, data);
  const std::vector<std::size_t> rows = rows_for(args.split, file, data.size());
  if (rows.empty()) throw ConfigError("the '" + args.split + "' split has no rows");
  const LabeledDataset subset = data.select_rows(rows);
  const std::vector<int> predicted = predict_rows(file, subset.features);
  const EvalMetrics m = compute_metrics(confusion(predicted, subset.labels, config.positive_class));

  prepare_out(args.out, config);
  std::ofstream out = open_out(args.out / "metrics.tsv");
  out << "split\t" << args.split << '\n' << "positive_class\t" << config.positive_class << '\n';
  write_metrics_report(out, m);
  log << args.split << " rows " << rows.size() << ": accuracy " << percent_2dp(m.accuracy)
      << "%, precision " << percent_2dp(m.precision) << "%, recall " << percent_2dp(m.recall)
      << "%, F1 " << percent_2dp(m.f1) << "%\n";
  return kExitOk;
}

int cmd_predict(const ModelArgs& args, const RunConfig& config, std::ostream& log) {
  const ModelFile file = load_model(args.model);
  const LabeledDataset data = read_features(args.features);
  check_compatible(file, data);
  const std::vector<std::size_t> rows = rows_for(args.split, file, data.size());
  const LabeledDataset subset = data.select_rows(rows);
  std::vector<double> p_spam;
  const std::vector<int> predicted = predict_rows(file, subset.features, &p_spam);

  prepare_out(args.out, config);
  std::ofstream out = open_out(args.out / "predictions.tsv");
  out << "row\tuser_id\tproduct_id\tlabel\tpredicted\tp_spam\n";
  std::size_t correct = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out << rows[k] << '\t' << subset.user_ids[k] << '\t' << subset.product_ids[k] << '\t'
        << subset.labels[k] << '\t' << predicted[k] << '\t' << format_double(p_spam[k]) << '\n';
    correct += predicted[k] == subset.labels[k] ? 1 : 0;
  }
  log << "predicted " << rows.size() << " rows";
  if (!rows.empty()) {
    log << ", accuracy "
        << percent_2dp(static_cast<double>(correct) / static_cast<double>(rows.size())) << "%";
  }
  log << '\n';
  return kExitOk;
}

int cmd_ablate(const FeatureArgs& args, const RunConfig& config, std::ostream& log) {
  config.train.validate();
  const LabeledDataset data = read_features(args.features);
  const Split split = split_for(data.size(), config.train_fraction, config.train.seed);
  if (split.test.empty()) throw ConfigError("ablation needs held-out rows; lower train_fraction");
  prepare_out(args.out, config);

  struct Row {
    std::string scope;
    std::size_t width;
    double accuracy;
    bool reference;
  };
  std::vector<Row> table;
  auto run = [&](const std::string& name, const std::vector<std::size_t>& cols, bool reference) {
    LabeledDataset sub = data;
    sub.features = data.features.select_columns(cols);
    const Trained t = fit(sub, split, config);
    const LabeledDataset held = sub.select_rows(split.test);
    const std::vector<int> predicted = predict_rows(t.file, held.features);
    const EvalMetrics m = compute_metrics(confusion(predicted, held.labels));
    table.push_back({name, cols.size(), m.accuracy, reference});
    log << "ablation " << name << " (" << cols.size() << " features): accuracy "
        << percent_2dp(m.accuracy) << "%\n";
  };

  for (Scope s : kAllScopes) {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < data.features.column_count(); ++j) {
      if (data.features.columns[j].scope == s) cols.push_back(j);
    }
    if (cols.empty()) {
      log << "warning: scope " << to_string(s) << " has no features; skipped\n";
      continue;
    }
    run(to_string(s), cols, false);
  }
  std::vector<std::size_t> all(data.features.column_count());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  run("full", all, true);

  std::ofstream out = open_out(args.out / "ablation.tsv");
  out << "scope\tfeatures\taccuracy\treference\n";
  for (const Row& r : table) {
    out << r.scope << '\t' << r.width << '\t' << percent_2dp(r.accuracy) << '\t'
        << (r.reference ? "yes" : "no") << '\n';
  }
  return kExitOk;
}

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Opinion spam detection with an autoencoder decision forest"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value configuration file");
    sub->add_option("--seed", seed, "random seed (overrides the config file)");
    sub->add_option("--out", out_dir, "output directory")->required();
  };

  ExtractArgs extract;
  FeatureArgs feature_args;
  ModelArgs model_args;
  std::string format = "jsonl";

  auto* ext = app.add_subcommand("extract", "build feature rows from reviews and spam scores");
  ext->add_option("--reviews", extract.reviews, "review records")->required();
  ext->add_option("--scores", extract.scores, "user_id,average_score lines")->required();
  ext->add_option("--format", format, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));
  add_common(ext);

  std::vector<CLI::App*> feature_cmds;
  for (const char* name : {"analyze", "train", "ablate"}) {
    const char* help = std::string(name) == "analyze" ? "rank and chi-squared feature screening"
                       : std::string(name) == "train" ? "train a model on the training split"
                                                       : "per-scope accuracy ablation";
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--features", feature_args.features, "feature directory")->required();
    add_common(sub);
    feature_cmds.push_back(sub);
  }
  std::vector<CLI::App*> model_cmds;
  for (const char* name : {"evaluate", "predict"}) {
    auto* sub = app.add_subcommand(name, std::string(name) == "evaluate"
                                             ? "confusion counts and metrics on a split"
                                             : "per-row predictions");
    sub->add_option("--features", model_args.features, "feature directory")->required();
    sub->add_option("--model", model_args.model, "model file")->required();
    sub->add_option("--split", model_args.split, "test, train or all")
        ->check(CLI::IsMember({"test", "train", "all"}));
    add_common(sub);
    model_cmds.push_back(sub);
  }
  std::optional<int> positive_class;
  model_cmds[0]->add_option("--positive-class", positive_class, "label treated as positive")
      ->check(CLI::IsMember({0, 1}));
  model_cmds[1]->get_option("--split")->default_str("test");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    app.exit(e, out, err);
    return kExitInput;
  }

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    if (seed) config.train.seed = *seed;
    if (positive_class) config.positive_class = *positive_class;
    if (config.positive_class != 0 && config.positive_class != 1) {
      throw ConfigError("positive_class must be 0 or 1");
    }
    extract.out = feature_args.out = model_args.out = out_dir;
    extract.delimited = format == "csv";

    CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    if (name == "extract") return cmd_extract(extract, config, err);
    if (name == "analyze") return cmd_analyze(feature_args, config, err);
    if (name == "train") return cmd_train(feature_args, config, err);
    if (name == "ablate") return cmd_ablate(feature_args, config, err);
    if (name == "evaluate") return cmd_evaluate(model_args, config, err);
    if (name == "predict") return cmd_predict(model_args, config, err);
    return kExitInput;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const DegenerateInputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const Error& e) {
    // parse, config, file, version, integrity, shape and argument errors
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace spamforest::cli
