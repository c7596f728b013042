#include "trollscope/features.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include "trollscope/diagnostics.hpp"
#include "trollscope/error.hpp"
#include "trollscope/resources.hpp"
#include "trollscope/stylometry.hpp"
#include "trollscope/util/rng.hpp"
#include "trollscope/util/text.hpp"

namespace trollscope::features {
namespace {

std::array<std::string, kFeatureCount> make_names() {
  std::array<std::string, kFeatureCount> names;
  const std::array<std::string, 10> head = {
      "tweet_count",       "account_age_days",         "followers",
      "following",         "language_code_int",        "description_length_chars",
      "description_language_int", "cumulative_mentions_per_tweet", "average_tweet_length_chars",
      "retweet_fraction"};
  std::copy(head.begin(), head.end(), names.begin());
  for (int h = 0; h < 24; ++h) {
    names[kHourOffset + h] = (h < 10 ? "hour_0" : "hour_") + std::to_string(h);
  }
  const std::array<std::string, 11> tail = {
      "avg_word_count",        "avg_unique_words",       "avg_stopword_count",
      "avg_punctuation_count", "avg_word_length",        "avg_sentence_length",
      "avg_sentence_complexity", "function_to_nonfunction_ratio", "distinct_sources",
      "fraction_fake_sources", "fraction_regular_sources"};
  std::copy(tail.begin(), tail.end(), names.begin() + 34);
  return names;
}

std::vector<std::string> parse_lines(std::string_view content) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    auto line = content.substr(start, end - start);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    if (!line.empty() && line.front() != '#') out.emplace_back(line);
    start = end + 1;
  }
  return out;
}

// Tweet order used for every summation, so features do not depend on the
// order tweets arrive in.
std::vector<const Tweet*> canonical_order(const Account& account) {
  std::vector<const Tweet*> order;
  order.reserve(account.tweets.size());
  for (const auto& t : account.tweets) order.push_back(&t);
  std::sort(order.begin(), order.end(), [](const Tweet* a, const Tweet* b) {
    return std::tie(a->timestamp, a->tweet_id, a->text, a->client_name, a->is_retweet, a->language) <
           std::tie(b->timestamp, b->tweet_id, b->text, b->client_name, b->is_retweet, b->language);
  });
  return order;
}

int hour_of(std::int64_t timestamp) { return static_cast<int>((timestamp % 86400) / 3600); }

}  // namespace

const std::array<std::string, kFeatureCount>& feature_names() {
  static const auto names = make_names();
  return names;
}

std::optional<std::size_t> feature_index(std::string_view name) {
  const auto& names = feature_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  return std::nullopt;
}

LanguageTable::LanguageTable(std::vector<std::string> codes) : codes_(std::move(codes)) {
  if (codes_.size() > kMaxLanguages) {
    throw DataError("language table holds at most 31 codes, got " + std::to_string(codes_.size()));
  }
  std::set<std::string> seen;
  for (const auto& c : codes_) {
    if (c.empty() || !seen.insert(c).second) throw DataError("language table: empty or duplicate code '" + c + "'");
  }
}

const LanguageTable& LanguageTable::defaults() {
  static const LanguageTable table(parse_lines(resources::languages));
  return table;
}

LanguageTable LanguageTable::from_corpora(std::span<const Corpus* const> corpora) {
  std::map<std::string, std::size_t> counts;
  for (const Corpus* corpus : corpora) {
    for (const auto& a : corpus->accounts) {
      if (!a.account_language.empty()) ++counts[a.account_language];
      if (!a.description_language.empty()) ++counts[a.description_language];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> codes = {"en"};
  for (const auto& [code, n] : ranked) {
    if (codes.size() == kMaxLanguages) break;
    if (code != "en") codes.push_back(code);
  }
  return LanguageTable(std::move(codes));
}

LanguageTable LanguageTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open language table " + path.string());
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return LanguageTable(parse_lines(content));
}

void LanguageTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& c : codes_) out << c << '\n';
}

int LanguageTable::encode(std::string_view code) const {
  if (code.empty()) return 0;
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    if (codes_[i] == code) return static_cast<int>(i) + 1;
  }
  return 0;
}

int encode_language(std::string_view code, const LanguageTable& table) { return table.encode(code); }

std::array<double, 24> hourly_histogram(std::span<const Tweet> tweets) {
  std::array<double, 24> hist{};
  if (tweets.empty()) return hist;
  std::array<std::size_t, 24> counts{};
  for (const auto& t : tweets) ++counts[static_cast<std::size_t>(hour_of(t.timestamp))];
  const double n = static_cast<double>(tweets.size());
  for (std::size_t h = 0; h < 24; ++h) hist[h] = static_cast<double>(counts[h]) / n;
  return hist;
}

std::int64_t auto_reference_time(std::span<const Corpus* const> corpora) {
  std::int64_t ref = 0;
  for (const Corpus* corpus : corpora) {
    for (const auto& a : corpus->accounts) {
      ref = std::max(ref, a.creation_time);
      for (const auto& t : a.tweets) ref = std::max(ref, t.timestamp);
    }
  }
  return ref;
}

FeatureVector extract_features(const Account& account, const FeatureContext& ctx) {
  if (ctx.reference_time < account.creation_time) {
    throw DataError("negative account age for " + account.account_id + ": reference time " +
                    std::to_string(ctx.reference_time) + " precedes creation " +
                    std::to_string(account.creation_time));
  }
  FeatureVector fv;
  fv.account_id = account.account_id;
  auto& v = fv.values;
  v[0] = static_cast<double>(account.tweets.size());
  v[1] = static_cast<double>(ctx.reference_time - account.creation_time) / 86400.0;
  v[2] = static_cast<double>(account.followers);
  v[3] = static_cast<double>(account.following);
  v[4] = ctx.languages.encode(account.account_language);
  v[5] = static_cast<double>(text::codepoint_length(account.description));
  v[6] = ctx.languages.encode(account.description_language.empty() ? account.account_language
                                                                   : account.description_language);
  if (account.tweets.empty()) return fv;

  const auto order = canonical_order(account);
  const double n = static_cast<double>(order.size());
  double mentions = 0, length = 0, retweets = 0;
  double words = 0, unique = 0, stop = 0, punct = 0, word_len = 0, sent_len = 0, flesch = 0;
  double function = 0, non_function = 0;
  std::array<std::size_t, 24> hours{};
  for (const Tweet* t : order) {
    mentions += static_cast<double>(stylometry::count_mentions(t->text));
    length += static_cast<double>(text::codepoint_length(t->text));
    retweets += t->is_retweet ? 1.0 : 0.0;
    ++hours[static_cast<std::size_t>(hour_of(t->timestamp))];
    const auto s = stylometry::analyze_text(t->text);
    words += static_cast<double>(s.word_count);
    unique += static_cast<double>(s.unique_word_count);
    stop += static_cast<double>(s.stopword_count);
    punct += static_cast<double>(s.punctuation_count);
    word_len += s.mean_word_length;
    sent_len += s.mean_sentence_length;
    flesch += s.flesch_score;
    function += static_cast<double>(s.function_word_count);
    non_function += static_cast<double>(s.non_function_word_count);
  }
  v[7] = mentions / n;
  v[8] = length / n;
  v[9] = retweets / n;
  for (std::size_t h = 0; h < 24; ++h) v[kHourOffset + h] = static_cast<double>(hours[h]) / n;
  v[34] = words / n;
  v[35] = unique / n;
  v[36] = stop / n;
  v[37] = punct / n;
  v[38] = word_len / n;
  v[39] = sent_len / n;
  v[40] = flesch / n;
  v[41] = non_function > 0 ? function / non_function : 0.0;
  const auto src = sources::source_stats(account, ctx.catalog);
  v[42] = static_cast<double>(src.distinct_sources);
  v[43] = src.fraction_fake;
  v[44] = src.fraction_regular;
  return fv;
}

FeatureVector extract_features(const Account& account, std::int64_t reference_time,
                               const sources::SourceCatalog& catalog, const LanguageTable& languages) {
  return extract_features(account, FeatureContext{reference_time, catalog, languages});
}

std::vector<FeatureVector> extract_all(std::span<const Account> accounts, const FeatureContext& ctx, Exec exec) {
  std::vector<FeatureVector> out(accounts.size());
  parallel_for(accounts.size(), exec, [&](std::size_t i) { out[i] = extract_features(accounts[i], ctx); });
  return out;
}

std::size_t Dataset::count(Label label) const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [&](const DatasetRow& r) { return r.label == label; }));
}

Dataset make_empty_dataset(const FeatureContext& ctx) {
  Dataset d;
  d.feature_names.assign(feature_names().begin(), feature_names().end());
  d.language_codes = ctx.languages.codes();
  d.catalog_digest = ctx.catalog.digest();
  d.reference_time = ctx.reference_time;
  return d;
}

Dataset build_dataset(std::span<const Corpus* const> corpora, const FeatureContext& ctx, Exec exec) {
  Dataset d = make_empty_dataset(ctx);
  for (const Corpus* corpus : corpora) {
    if (corpus->label == Label::unlabeled) {
      throw DataError("corpus " + corpus_name(*corpus) + " is unlabeled; datasets need troll or benign rows");
    }
    const auto name = corpus_name(*corpus);
    const auto fvs = extract_all(corpus->accounts, ctx, exec);
    for (std::size_t i = 0; i < fvs.size(); ++i) {
      const auto& a = corpus->accounts[i];
      d.rows.push_back({fvs[i], corpus->label, a.campaign.empty() ? name : a.campaign});
    }
  }
  return d;
}

std::vector<std::size_t> sample_accounts(const Corpus& corpus, std::size_t n, std::uint64_t seed,
                                         std::uint64_t stream) {
  if (corpus.accounts.empty()) throw EmptyCorpusError("cannot sample from empty corpus " + corpus_name(corpus));
  std::vector<std::size_t> idx(corpus.accounts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return corpus.accounts[a].account_id < corpus.accounts[b].account_id;
  });
  if (n >= idx.size()) {
    if (n > idx.size()) {
      warn("corpus " + corpus_name(corpus) + " has " + std::to_string(idx.size()) + " accounts, fewer than the " +
           std::to_string(n) + " requested; using all of them");
    }
    return idx;
  }
  Rng rng(derive_seed(seed, stream));
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n);
  return idx;
}

Dataset balance_sample(const Corpus& positives, const Corpus& negatives, std::size_t n_per_class,
                       std::uint64_t seed, const FeatureContext& ctx, Exec exec) {
  const auto pos = sample_accounts(positives, n_per_class, seed, 1);
  const auto neg = sample_accounts(negatives, n_per_class, seed, 2);

  struct Pick {
    const Account* account;
    Label label;
    std::string provenance;
  };
  std::vector<Pick> picks;
  const auto pos_name = corpus_name(positives);
  const auto neg_name = corpus_name(negatives);
  for (auto i : pos) {
    const auto& a = positives.accounts[i];
    picks.push_back({&a, Label::troll, a.campaign.empty() ? pos_name : a.campaign});
  }
  for (auto i : neg) {
    const auto& a = negatives.accounts[i];
    picks.push_back({&a, Label::benign, a.campaign.empty() ? neg_name : a.campaign});
  }
  std::sort(picks.begin(), picks.end(), [](const Pick& a, const Pick& b) {
    if (a.label != b.label) return a.label < b.label;
    return a.account->account_id < b.account->account_id;
  });
  Rng rng(derive_seed(seed, 3));
  rng.shuffle(picks);

  Dataset d = make_empty_dataset(ctx);
  d.rows.resize(picks.size());
  parallel_for(picks.size(), exec, [&](std::size_t i) {
    d.rows[i] = {extract_features(*picks[i].account, ctx), picks[i].label, picks[i].provenance};
  });
  return d;
}

}  // namespace trollscope::features
