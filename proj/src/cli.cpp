#include "trollscope/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "trollscope/diagnostics.hpp"
#include "trollscope/error.hpp"
#include "trollscope/eval.hpp"
#include "trollscope/features.hpp"
#include "trollscope/ingest.hpp"
#include "trollscope/learners.hpp"
#include "trollscope/parallel.hpp"
#include "trollscope/source_intel.hpp"
#include "trollscope/stats.hpp"
#include "trollscope/stylometry.hpp"
#include "trollscope/util/csv.hpp"
#include "trollscope/util/format.hpp"
#include "trollscope/util/hash.hpp"

namespace trollscope::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Records every file read and written so the manifest can pin them by hash.
class Run {
 public:
  Run(std::string subcommand, std::vector<std::string> args, std::string config)
      : subcommand_(std::move(subcommand)), args_(std::move(args)), config_(std::move(config)) {}

  void input(const fs::path& p) { inputs_.push_back(p); }

  void write(const fs::path& p, const std::string& content) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw DataError("cannot write " + p.string());
    out << content;
    if (!out) throw DataError("failed writing " + p.string());
    outputs_.push_back(p);
  }

  void wrote(const fs::path& p) { outputs_.push_back(p); }

  void set_catalog(const sources::SourceCatalog& c) { catalog_digest_ = c.digest(); }

  // <first output>.manifest.json, or manifest.json inside `dir` when given.
  void finish(const std::optional<fs::path>& dir = std::nullopt) const {
    if (outputs_.empty() && !dir) return;
    json j;
    j["tool"] = "trollscope";
    j["version"] = kVersion;
    j["subcommand"] = subcommand_;
    j["args"] = args_;
    j["config"] = config_;
    j["wordlists_sha256"] = stylometry::wordlist_digest();
    j["catalog_sha256"] = catalog_digest_;
    const auto files = [](const std::vector<fs::path>& paths) {
      json arr = json::array();
      for (const auto& p : paths) arr.push_back({{"path", p.generic_string()}, {"sha256", hash::sha256_file(p)}});
      return arr;
    };
    j["inputs"] = files(inputs_);
    j["outputs"] = files(outputs_);
    fs::path target;
    if (dir) {
      target = *dir / "manifest.json";
    } else {
      target = outputs_.front();
      target += ".manifest.json";
    }
    std::ofstream out(target, std::ios::binary);
    if (!out) throw DataError("cannot write " + target.string());
    out << j.dump(2) << '\n';
  }

 private:
  std::string subcommand_;
  std::vector<std::string> args_;
  std::string config_;
  std::string catalog_digest_;
  std::vector<fs::path> inputs_;
  std::vector<fs::path> outputs_;
};

struct Globals {
  int threads = 0;
  std::string catalog_path;
  std::optional<sources::SourceCatalog> catalog;

  const sources::SourceCatalog& load_catalog(Run& run) {
    if (!catalog) {
      if (catalog_path.empty()) {
        catalog = sources::SourceCatalog::defaults();
      } else {
        catalog = sources::SourceCatalog::load(catalog_path);
        run.input(catalog_path);
      }
    }
    run.set_catalog(*catalog);
    return *catalog;
  }
};

Corpus load_corpus(Run& run, const std::string& path, std::optional<Label> label = std::nullopt) {
  run.input(path);
  return ingest::read_corpus(path, label);
}

std::vector<Corpus> load_corpora(Run& run, const std::vector<std::string>& paths,
                                 std::optional<Label> label = std::nullopt) {
  std::vector<Corpus> out;
  for (const auto& p : paths) out.push_back(load_corpus(run, p, label));
  return out;
}

std::vector<const Corpus*> pointers(const std::vector<Corpus>& corpora) {
  std::vector<const Corpus*> out;
  for (const auto& c : corpora) out.push_back(&c);
  return out;
}

// Concatenates corpora into one, keeping each account's campaign.
Corpus merge(std::vector<Corpus> corpora, Label label) {
  Corpus all;
  all.label = label;
  for (auto& c : corpora) {
    const auto name = corpus_name(c);
    for (auto& a : c.accounts) {
      if (a.campaign.empty() && label == Label::troll) a.campaign = name;
      all.accounts.push_back(std::move(a));
    }
    if (all.source_path.empty()) all.source_path = c.source_path;
  }
  std::stable_sort(all.accounts.begin(), all.accounts.end(),
                   [](const Account& a, const Account& b) { return a.account_id < b.account_id; });
  return all;
}

std::int64_t parse_ref_time(const std::string& text, std::span<const Corpus* const> corpora,
                            std::optional<std::int64_t> model_time = std::nullopt) {
  if (text == "model") {
    if (!model_time) throw UsageError("--ref-time model needs a model");
    return *model_time;
  }
  if (text == "auto") return features::auto_reference_time(corpora);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    if (auto t = ingest::parse_timestamp(text)) return *t;
    throw UsageError("--ref-time expects auto, model, epoch seconds or a date, got '" + text + "'");
  }
  return v;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::ostringstream out;
  csv::write_row(out, fields);
  return out.str();
}

struct ModelOptions {
  std::string algo = "rf";
  int k = 5;
  int trees = 100;
  int max_features = 0;
  int max_depth = 0;
  int min_leaf = 1;
  double svm_c = 1.0;
  int svm_epochs = 200;

  void add(CLI::App* app) {
    app->add_option("--algo", algo, "rf, dt, knn or svm")->capture_default_str();
    app->add_option("--k", k, "knn neighbours")->capture_default_str();
    app->add_option("--trees", trees, "forest size")->capture_default_str();
    app->add_option("--max-features", max_features, "columns tried per split (0 = sqrt)")->capture_default_str();
    app->add_option("--max-depth", max_depth, "tree depth limit (0 = none)")->capture_default_str();
    app->add_option("--min-leaf", min_leaf, "minimum rows per leaf")->capture_default_str();
    app->add_option("--svm-c", svm_c, "SVM regularization C")->capture_default_str();
    app->add_option("--svm-epochs", svm_epochs, "SVM epochs")->capture_default_str();
  }

  learn::Algorithm algorithm() const {
    try {
      return learn::parse_algorithm(algo);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  learn::Hyperparams params() const {
    learn::Hyperparams h;
    h.k = k;
    h.n_trees = trees;
    h.max_features = max_features;
    h.max_depth = max_depth;
    h.min_samples_leaf = min_leaf;
    h.svm_c = svm_c;
    h.svm_epochs = svm_epochs;
    try {
      return learn::Hyperparams::from_map(h.to_map());
    } catch (const DataError& e) {
      throw UsageError(e.what());
    }
  }
};

std::string metrics_csv_row(const std::string& name, const learn::Metrics& m) {
  return csv_line({name, fmt::number(m.accuracy), fmt::number(m.precision), fmt::number(m.recall),
                   fmt::number(m.f1), std::to_string(m.confusion.tp), std::to_string(m.confusion.fp),
                   std::to_string(m.confusion.tn), std::to_string(m.confusion.fn)});
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Detects state-sponsored troll accounts from tweet corpora.", "trollscope"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  app.set_config("--run-config", "", "TOML file supplying option defaults; flags override it");

  Globals g;
  app.add_option("--threads", g.threads, "worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--catalog", g.catalog_path, "source catalog JSON (default: shipped catalog)");

  std::function<void(Run&)> action;
  std::optional<fs::path> manifest_dir;

  // ---- ingest
  struct {
    std::string input, output, format = "auto", label = "troll", campaign;
  } in;
  auto* ingest_cmd = app.add_subcommand("ingest", "convert a CSV dump or JSONL sample to the canonical format");
  ingest_cmd->add_option("--input", in.input, "input file")->required();
  ingest_cmd->add_option("--out,--output", in.output, "canonical JSONL output")->required();
  ingest_cmd->add_option("--format", in.format, "csv, jsonl, canonical or auto")
      ->check(CLI::IsMember({"auto", "csv", "jsonl", "canonical"}))
      ->capture_default_str();
  ingest_cmd->add_option("--label", in.label, "troll, benign or unlabeled")
      ->check(CLI::IsMember({"troll", "benign", "unlabeled"}))
      ->capture_default_str();
  ingest_cmd->add_option("--campaign", in.campaign, "campaign name for every account");
  ingest_cmd->callback([&] {
    action = [&](Run& r) {
      const Label label = parse_label(in.label);
      std::string format = in.format;
      if (format == "auto") format = fs::path(in.input).extension() == ".csv" ? "csv" : "jsonl";
      r.input(in.input);
      Corpus c = format == "csv"     ? ingest::parse_campaign_csv(in.input, label, in.campaign)
                 : format == "jsonl" ? ingest::parse_sample_jsonl(in.input, label)
                                     : ingest::read_corpus(in.input, label);
      if (format != "csv" && !in.campaign.empty()) {
        for (auto& a : c.accounts) a.campaign = in.campaign;
      }
      std::ostringstream buf;
      ingest::write_corpus(c, buf);
      r.write(in.output, buf.str());
      out << "accounts " << c.accounts.size() << "\ntweets   " << tweet_count(c) << "\nskipped  " << c.skipped_rows
          << '\n';
    };
  });

  // ---- featurize
  struct {
    std::vector<std::string> troll, benign;
    std::string output, ref_time = "auto", lang_table;
    std::size_t per_class = 0;
    std::uint64_t seed = 0;
  } fz;
  auto* featurize_cmd = app.add_subcommand("featurize", "build the 45-feature dataset");
  featurize_cmd->add_option("--troll", fz.troll, "troll corpora (canonical JSONL)")->required();
  featurize_cmd->add_option("--benign", fz.benign, "benign corpora (canonical JSONL)")->required();
  featurize_cmd->add_option("--output", fz.output, "dataset CSV")->required();
  featurize_cmd->add_option("--ref-time", fz.ref_time, "account-age clock: auto or epoch seconds")
      ->capture_default_str();
  featurize_cmd->add_option("--lang-table", fz.lang_table, "fixed language table (one code per line)");
  featurize_cmd->add_option("--per-class", fz.per_class, "balanced sample size per class (0 = every account)")
      ->capture_default_str();
  featurize_cmd->add_option("--seed", fz.seed, "sampling seed")->capture_default_str();
  featurize_cmd->callback([&] {
    action = [&](Run& r) {
      auto trolls = load_corpora(r, fz.troll, Label::troll);
      auto benign = load_corpora(r, fz.benign, Label::benign);
      std::vector<const Corpus*> all = pointers(trolls);
      for (const auto& c : benign) all.push_back(&c);
      const auto& catalog = g.load_catalog(r);
      std::optional<features::LanguageTable> table;
      if (fz.lang_table.empty()) {
        table = features::LanguageTable::from_corpora(all);
      } else {
        r.input(fz.lang_table);
        table = features::LanguageTable::load(fz.lang_table);
      }
      const features::FeatureContext ctx{parse_ref_time(fz.ref_time, all), catalog, *table};
      features::Dataset d;
      if (fz.per_class > 0) {
        const auto pos = merge(std::move(trolls), Label::troll);
        const auto neg = merge(std::move(benign), Label::benign);
        d = features::balance_sample(pos, neg, fz.per_class, fz.seed, ctx);
      } else {
        d = features::build_dataset(all, ctx);
      }
      features::write_dataset(d, fz.output);
      r.wrote(fz.output);
      r.wrote(features::provenance_path(fz.output));
      out << "rows " << d.rows.size() << " (troll " << d.count(Label::troll) << ", benign "
          << d.count(Label::benign) << ")\n";
    };
  });

  // ---- ks-report
  struct {
    std::string dataset, output;
    std::vector<std::string> features;
    double alpha = stats::kDefaultAlpha;
  } ks;
  auto* ks_cmd = app.add_subcommand("ks-report", "two-sample KS test of troll vs benign per feature");
  ks_cmd->add_option("--dataset", ks.dataset, "dataset CSV")->required();
  ks_cmd->add_option("--output", ks.output, "report CSV")->required();
  ks_cmd->add_option("--features", ks.features, "feature names (default: all)")->delimiter(',');
  ks_cmd->add_option("--alpha", ks.alpha, "significance level")->capture_default_str();
  ks_cmd->callback([&] {
    action = [&](Run& r) {
      r.input(ks.dataset);
      const auto d = features::read_dataset(ks.dataset);
      std::vector<std::string> names = ks.features;
      if (names.empty()) names.assign(features::feature_names().begin(), features::feature_names().end());
      const auto rows = stats::comparison_report(d, names, ks.alpha);
      r.write(ks.output, stats::comparison_csv(rows));
      out << stats::comparison_table(rows);
    };
  });

  // ---- campaign-metrics
  struct {
    std::vector<std::string> inputs;
    std::string output;
  } cm;
  auto* cm_cmd = app.add_subcommand("campaign-metrics", "scheduled and retweet fractions per campaign");
  cm_cmd->add_option("--input", cm.inputs, "canonical corpora")->required();
  cm_cmd->add_option("--output", cm.output, "report CSV")->required();
  cm_cmd->callback([&] {
    action = [&](Run& r) {
      const auto corpora = load_corpora(r, cm.inputs);
      const auto& catalog = g.load_catalog(r);
      std::string csv = "campaign,accounts,tweets,scheduled_fraction,retweet_fraction\n";
      std::vector<std::vector<std::string>> table = {{"campaign", "accounts", "tweets", "scheduled", "retweets"}};
      for (const auto& c : corpora) {
        const auto m = stats::campaign_metrics(c, catalog);
        csv += csv_line({m.campaign, std::to_string(m.account_count), std::to_string(m.tweet_count),
                         fmt::number(m.scheduled_fraction), fmt::number(m.retweet_fraction)});
        table.push_back({m.campaign, std::to_string(m.account_count), std::to_string(m.tweet_count),
                         fmt::fixed(m.scheduled_fraction * 100, 1) + "%",
                         fmt::fixed(m.retweet_fraction * 100, 1) + "%"});
      }
      r.write(cm.output, csv);
      out << fmt::aligned_table(table);
    };
  });

  // ---- timeseries
  struct {
    std::vector<std::string> inputs;
    std::string output, app_name;
    double bin_days = 1;
  } ts;
  auto* ts_cmd = app.add_subcommand("timeseries", "usage of one client application over time");
  ts_cmd->add_option("--input", ts.inputs, "canonical corpora")->required();
  ts_cmd->add_option("--output", ts.output, "report CSV")->required();
  ts_cmd->add_option("--app", ts.app_name, "exact client name")->required();
  ts_cmd->add_option("--bin-days", ts.bin_days, "bin width in days")->capture_default_str();
  ts_cmd->callback([&] {
    action = [&](Run& r) {
      const auto corpora = load_corpora(r, ts.inputs);
      const auto bin = static_cast<std::int64_t>(ts.bin_days * 86400);
      if (bin <= 0) throw UsageError("--bin-days must be positive");
      const auto series = stats::app_usage_timeseries(pointers(corpora), ts.app_name, bin);
      std::string csv = "corpus,bin_start,count\n";
      for (const auto& s : series) {
        for (const auto& [t, n] : s.points) csv += csv_line({s.corpus, std::to_string(t), std::to_string(n)});
      }
      r.write(ts.output, csv);
    };
  });

  // ---- duplicates
  struct {
    std::vector<std::string> inputs;
    std::string output;
    std::size_t min_corpora = 2, top = 0;
  } dup;
  auto* dup_cmd = app.add_subcommand("duplicates", "texts repeated across corpora");
  dup_cmd->add_option("--input", dup.inputs, "canonical corpora")->required();
  dup_cmd->add_option("--output", dup.output, "report CSV")->required();
  dup_cmd->add_option("--min-corpora", dup.min_corpora, "minimum number of corpora sharing a text")
      ->capture_default_str();
  dup_cmd->add_option("--top", dup.top, "keep the first N rows (0 = all)")->capture_default_str();
  dup_cmd->callback([&] {
    action = [&](Run& r) {
      const auto corpora = load_corpora(r, dup.inputs);
      auto rows = stats::cross_corpus_duplicates(pointers(corpora), dup.min_corpora);
      if (dup.top > 0 && rows.size() > dup.top) rows.resize(dup.top);
      std::string csv = "text,corpora,count\n";
      for (const auto& d : rows) {
        std::string names;
        for (const auto& n : d.corpora) names += (names.empty() ? "" : ";") + n;
        csv += csv_line({d.text, names, std::to_string(d.count)});
      }
      r.write(dup.output, csv);
      out << rows.size() << " shared texts\n";
    };
  });

  // ---- cdf
  struct {
    std::vector<std::string> inputs;
    std::string output;
  } cdf;
  auto* cdf_cmd = app.add_subcommand("cdf", "CDF of distinct sources per account");
  cdf_cmd->add_option("--input", cdf.inputs, "canonical corpora")->required();
  cdf_cmd->add_option("--output", cdf.output, "report CSV")->required();
  cdf_cmd->callback([&] {
    action = [&](Run& r) {
      const auto corpora = load_corpora(r, cdf.inputs);
      std::string csv = "corpus,distinct_sources,cdf\n";
      for (const auto& c : corpora) {
        for (const auto& [k, f] : stats::source_count_cdf(c.accounts)) {
          csv += csv_line({corpus_name(c), std::to_string(k), fmt::number(f)});
        }
      }
      r.write(cdf.output, csv);
    };
  });

  // ---- tfidf
  struct {
    std::vector<std::string> a, b;
    std::string output, unit = "account";
    std::size_t top = 20;
  } tf;
  auto* tf_cmd = app.add_subcommand("tfidf", "top TF-IDF terms of two groups");
  tf_cmd->add_option("--group-a", tf.a, "canonical corpora of group A")->required();
  tf_cmd->add_option("--group-b", tf.b, "canonical corpora of group B")->required();
  tf_cmd->add_option("--output", tf.output, "report CSV")->required();
  tf_cmd->add_option("--top", tf.top, "terms per group")->capture_default_str();
  tf_cmd->add_option("--doc-unit", tf.unit, "account or tweet")
      ->check(CLI::IsMember({"account", "tweet"}))
      ->capture_default_str();
  tf_cmd->callback([&] {
    action = [&](Run& r) {
      const auto a = merge(load_corpora(r, tf.a), Label::unlabeled);
      const auto b = merge(load_corpora(r, tf.b), Label::unlabeled);
      const auto res = stats::tfidf_top_terms(a.accounts, b.accounts, tf.top,
                                              tf.unit == "tweet" ? stats::DocUnit::tweet : stats::DocUnit::account);
      std::string csv = "group,rank,term,score\n";
      const auto emit = [&](const char* group, const std::vector<stats::TermScore>& terms) {
        for (std::size_t i = 0; i < terms.size(); ++i) {
          csv += csv_line({group, std::to_string(i + 1), terms[i].term, fmt::number(terms[i].score)});
        }
      };
      emit("a", res.group_a);
      emit("b", res.group_b);
      r.write(tf.output, csv);
    };
  });

  // ---- train
  struct {
    std::string dataset, out_path, report;
    std::uint64_t seed = 0;
    std::size_t folds = 10;
    ModelOptions model;
  } tr;
  auto* train_cmd = app.add_subcommand("train", "cross-validate, then fit a classifier on the full dataset");
  train_cmd->add_option("--dataset", tr.dataset, "dataset CSV")->required();
  train_cmd->add_option("--out", tr.out_path, "model file")->required();
  train_cmd->add_option("--report", tr.report, "cross-validation CSV (default: <out>.cv.csv)");
  train_cmd->add_option("--seed", tr.seed, "random seed")->capture_default_str();
  train_cmd->add_option("--folds", tr.folds, "cross-validation folds (0 = skip)")->capture_default_str();
  tr.model.add(train_cmd);
  train_cmd->callback([&] {
    action = [&](Run& r) {
      r.input(tr.dataset);
      const auto d = features::read_dataset(tr.dataset);
      const auto algo = tr.model.algorithm();
      const auto params = tr.model.params();
      const auto model = learn::train(algo, d, params, tr.seed);
      const auto text = learn::model_to_json(model);
      r.write(tr.out_path, text);
      if (tr.folds > 0) {
        const auto report = learn::cross_validate(algo, d, tr.folds, tr.seed, params);
        r.write(tr.report.empty() ? tr.out_path + ".cv.csv" : tr.report, learn::eval_report_csv(report));
        out << learn::to_string(algo) << ", " << tr.folds << "-fold cross-validation\n"
            << learn::eval_summary(report);
      }
    };
  });

  // ---- ablate
  struct {
    std::string dataset, output;
    std::uint64_t seed = 0;
    std::size_t folds = 10;
    ModelOptions model;
  } ab;
  auto* ablate_cmd = app.add_subcommand("ablate", "cross-validate each feature group on its own");
  ablate_cmd->add_option("--dataset", ab.dataset, "dataset CSV")->required();
  ablate_cmd->add_option("--output", ab.output, "report CSV")->required();
  ablate_cmd->add_option("--seed", ab.seed, "random seed")->capture_default_str();
  ablate_cmd->add_option("--folds", ab.folds, "cross-validation folds")->capture_default_str();
  ab.model.add(ablate_cmd);
  ablate_cmd->callback([&] {
    action = [&](Run& r) {
      r.input(ab.dataset);
      const auto d = features::read_dataset(ab.dataset);
      const auto res = learn::ablate_components(ab.model.algorithm(), d, ab.folds, ab.seed, ab.model.params());
      std::string csv = "group,accuracy,precision,recall,f1,tp,fp,tn,fn\n";
      std::vector<std::vector<std::string>> table = {{"group", "accuracy", "precision", "recall", "f1"}};
      for (const auto& [name, rep] : res) {
        const auto& m = rep.aggregate;
        csv += metrics_csv_row(name, m);
        table.push_back({name, fmt::fixed(m.accuracy * 100, 1) + "%", fmt::fixed(m.precision * 100, 1) + "%",
                         fmt::fixed(m.recall * 100, 1) + "%", fmt::fixed(m.f1 * 100, 1) + "%"});
      }
      r.write(ab.output, csv);
      out << fmt::aligned_table(table);
    };
  });

  // ---- importance
  struct {
    std::string model, output;
  } imp;
  auto* imp_cmd = app.add_subcommand("importance", "Gini importance of a random forest model");
  imp_cmd->add_option("--model", imp.model, "model file")->required();
  imp_cmd->add_option("--output", imp.output, "report CSV")->required();
  imp_cmd->callback([&] {
    action = [&](Run& r) {
      r.input(imp.model);
      const auto model = learn::load_model(imp.model);
      const auto values = learn::gini_importance(model);
      std::vector<std::size_t> order(values.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] > values[b]; });
      std::string csv = "rank,feature,importance\n";
      std::vector<std::vector<std::string>> table = {{"rank", "feature", "importance"}};
      for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& name = features::feature_names()[order[i]];
        csv += csv_line({std::to_string(i + 1), name, fmt::number(values[order[i]])});
        if (i < 10) table.push_back({std::to_string(i + 1), name, fmt::fixed(values[order[i]], 4)});
      }
      r.write(imp.output, csv);
      out << fmt::aligned_table(table);
    };
  });

  // ---- cross-eval
  struct {
    std::vector<std::string> campaigns;
    std::string benign, output, ref_time = "auto";
    std::size_t per_class = 500;
    std::uint64_t seed = 0;
    double threshold = eval::kDefaultThreshold;
    ModelOptions model;
  } ce;
  auto* ce_cmd = app.add_subcommand("cross-eval", "train on each campaign, detect the others");
  ce_cmd->add_option("--campaign", ce.campaigns, "troll campaign corpora (at least 2)")->required();
  ce_cmd->add_option("--benign", ce.benign, "benign corpus")->required();
  ce_cmd->add_option("--output", ce.output, "report CSV")->required();
  ce_cmd->add_option("--per-class", ce.per_class, "training accounts per class")->capture_default_str();
  ce_cmd->add_option("--seed", ce.seed, "random seed")->capture_default_str();
  ce_cmd->add_option("--threshold", ce.threshold, "troll score cut")->capture_default_str();
  ce_cmd->add_option("--ref-time", ce.ref_time, "account-age clock: auto or epoch seconds")->capture_default_str();
  ce.model.add(ce_cmd);
  ce_cmd->callback([&] {
    action = [&](Run& r) {
      const auto campaigns = load_corpora(r, ce.campaigns, Label::troll);
      const auto benign = load_corpus(r, ce.benign, Label::benign);
      auto all = pointers(campaigns);
      all.push_back(&benign);
      const auto& catalog = g.load_catalog(r);
      const auto table = features::LanguageTable::from_corpora(all);
      const features::FeatureContext ctx{parse_ref_time(ce.ref_time, all), catalog, table};
      eval::CrossEvalOptions opts;
      opts.algorithm = ce.model.algorithm();
      opts.params = ce.model.params();
      opts.n_per_class = ce.per_class;
      opts.seed = ce.seed;
      opts.threshold = ce.threshold;
      const auto reports = eval::leave_one_campaign_eval(pointers(campaigns), benign, opts, ctx);
      r.write(ce.output, eval::cross_eval_csv(reports));
      out << eval::cross_eval_summary(reports);
    };
  });

  // ---- fp-eval
  struct {
    std::string model, holdout, output, ref_time = "model";
    double threshold = eval::kDefaultThreshold;
  } fp;
  auto* fp_cmd = app.add_subcommand("fp-eval", "false-positive rate on a disjoint benign holdout");
  fp_cmd->add_option("--model", fp.model, "model file")->required();
  fp_cmd->add_option("--holdout", fp.holdout, "benign holdout corpus")->required();
  fp_cmd->add_option("--output", fp.output, "report CSV")->required();
  fp_cmd->add_option("--threshold", fp.threshold, "troll score cut")->capture_default_str();
  fp_cmd->add_option("--ref-time", fp.ref_time, "account-age clock: model, auto or epoch seconds")
      ->capture_default_str();
  fp_cmd->callback([&] {
    action = [&](Run& r) {
      r.input(fp.model);
      const auto model = learn::load_model(fp.model);
      const auto holdout = load_corpus(r, fp.holdout, Label::benign);
      const std::vector<const Corpus*> all = {&holdout};
      const auto& catalog = g.load_catalog(r);
      const features::LanguageTable table(model.language_codes);
      const features::FeatureContext ctx{parse_ref_time(fp.ref_time, all, model.reference_time), catalog, table};
      const auto res = eval::false_positive_eval(model, holdout, ctx, fp.threshold);
      std::string csv = "flagged,total,rate\n" +
                        csv_line({std::to_string(res.flagged), std::to_string(res.total), fmt::number(res.rate)});
      r.write(fp.output, csv);
      out << "flagged " << res.flagged << " of " << res.total << " (" << fmt::fixed(res.rate * 100, 2) << "%)\n";
    };
  });

  // ---- detect
  struct {
    std::string model, input, output, prefilter = "fake", ref_time = "model";
    double threshold = eval::kDefaultThreshold;
  } dt;
  auto* detect_cmd = app.add_subcommand("detect", "flag likely troll accounts in an unlabeled corpus");
  detect_cmd->add_option("--model", dt.model, "model file")->required();
  detect_cmd->add_option("--input", dt.input, "canonical corpus")->required();
  detect_cmd->add_option("--output", dt.output, "flagged account ids")->required();
  detect_cmd->add_option("--prefilter", dt.prefilter, "fake: only accounts using impersonated clients; none")
      ->check(CLI::IsMember({"fake", "none"}))
      ->capture_default_str();
  detect_cmd->add_option("--threshold", dt.threshold, "troll score cut")->capture_default_str();
  detect_cmd->add_option("--ref-time", dt.ref_time, "account-age clock: model, auto or epoch seconds")
      ->capture_default_str();
  detect_cmd->callback([&] {
    action = [&](Run& r) {
      r.input(dt.model);
      const auto model = learn::load_model(dt.model);
      auto corpus = load_corpus(r, dt.input);
      if (corpus.label == Label::troll) corpus.label = Label::unlabeled;
      const std::vector<const Corpus*> all = {&corpus};
      const auto& catalog = g.load_catalog(r);
      const features::LanguageTable table(model.language_codes);
      const features::FeatureContext ctx{parse_ref_time(dt.ref_time, all, model.reference_time), catalog, table};
      const auto rep = eval::detect_in_wild(model, corpus, ctx, eval::parse_prefilter(dt.prefilter), dt.threshold);
      std::string text = "account_id\n";
      for (const auto& id : rep.flagged) text += csv_line({id});
      r.write(dt.output, text);
      out << "candidates " << rep.candidate_count << "\nflagged    " << rep.flagged.size() << "\nflag rate  "
          << fmt::fixed(rep.flag_rate * 100, 2) << "%\n";
    };
  });

  // ---- synth
  struct {
    std::string config, out_dir;
    std::optional<std::uint64_t> seed;
    std::size_t campaigns = 1, holdout = 0;
  } sy;
  auto* synth_cmd = app.add_subcommand("synth", "generate synthetic troll and benign corpora");
  synth_cmd->add_option("--config", sy.config, "synthetic profile JSON");
  synth_cmd->add_option("--seed", sy.seed, "overrides the config seed");
  synth_cmd->add_option("--out-dir", sy.out_dir, "output directory")->required();
  synth_cmd->add_option("--campaigns", sy.campaigns, "number of troll campaigns sharing the troll profile")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--holdout", sy.holdout, "extra benign accounts for fp-eval (0 = none)")
      ->capture_default_str();
  synth_cmd->callback([&] {
    manifest_dir = sy.out_dir;
    action = [&](Run& r) {
      eval::SynthConfig cfg;
      if (!sy.config.empty()) {
        r.input(sy.config);
        std::ifstream f(sy.config, std::ios::binary);
        if (!f) throw DataError("cannot read " + sy.config);
        std::stringstream buf;
        buf << f.rdbuf();
        cfg = eval::synth_config_from_json(buf.str());
      }
      if (sy.seed) cfg.seed = *sy.seed;
      eval::validate(cfg);
      const fs::path dir = sy.out_dir;
      fs::create_directories(dir);
      const auto emit = [&](const Corpus& c, const std::string& name) {
        std::ostringstream buf;
        ingest::write_corpus(c, buf);
        r.write(dir / (name + ".jsonl"), buf.str());
        out << (dir / (name + ".jsonl")).generic_string() << "  " << c.accounts.size() << " accounts, "
            << tweet_count(c) << " tweets\n";
      };
      if (sy.campaigns == 1) {
        const auto corpora = eval::synth_generate(cfg);
        emit(corpora.trolls, cfg.campaign);
        emit(corpora.benign, "benign");
      } else {
        const auto tag = std::to_string(cfg.seed);
        for (std::size_t k = 1; k <= sy.campaigns; ++k) {
          const auto name = cfg.campaign + "_" + std::to_string(k);
          emit(eval::synth_corpus(cfg.troll, cfg.n_troll, Label::troll, name,
                                  "t" + tag + "_" + std::to_string(k) + "_", derive_seed(cfg.seed, 100 + k)),
               name);
        }
        auto benign = eval::synth_corpus(cfg.benign, cfg.n_benign, Label::benign, "", "b" + tag + "_",
                                         derive_seed(cfg.seed, 2));
        emit(benign, "benign");
      }
      if (sy.holdout > 0) {
        auto h = eval::synth_corpus(cfg.benign, sy.holdout, Label::benign, "", "h" + std::to_string(cfg.seed) + "_",
                                    derive_seed(cfg.seed, 3));
        emit(h, "benign_holdout");
      }
      r.write(dir / "synth_config.json", eval::synth_config_to_json(cfg));
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    const auto subs = app.get_subcommands();
    err << "error: " << e.what() << "\n\n" << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  set_threads(g.threads);
  Run run(sub, args, app.get_subcommands().front()->config_to_str(true, false));
  try {
    action(run);
    run.finish(manifest_dir);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.get_subcommands().front()->help();
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace trollscope::cli
