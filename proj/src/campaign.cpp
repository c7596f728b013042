#include <algorithm>
#include <map>

#include "trollscope/error.hpp"
#include "trollscope/stats.hpp"
#include "trollscope/util/text.hpp"

namespace trollscope::stats {

CampaignMetrics campaign_metrics(const Corpus& corpus, const sources::SourceCatalog& catalog) {
  if (corpus.accounts.empty()) throw EmptyCorpusError("campaign metrics need a non-empty corpus");
  CampaignMetrics m;
  m.campaign = corpus_name(corpus);
  m.account_count = corpus.accounts.size();
  std::size_t scheduled = 0, retweets = 0;
  for (const auto& a : corpus.accounts) {
    for (const auto& t : a.tweets) {
      ++m.tweet_count;
      if (t.is_retweet) ++retweets;
      if (sources::classify_source(t.client_name, catalog) == sources::SourceClass::scheduling) ++scheduled;
    }
  }
  if (m.tweet_count > 0) {
    m.scheduled_fraction = static_cast<double>(scheduled) / static_cast<double>(m.tweet_count);
    m.retweet_fraction = static_cast<double>(retweets) / static_cast<double>(m.tweet_count);
  }
  return m;
}

std::vector<TimeSeries> app_usage_timeseries(std::span<const Corpus* const> corpora, std::string_view app,
                                             std::int64_t bin_seconds) {
  if (bin_seconds <= 0) throw DataError("time-series bin must be positive");
  std::vector<TimeSeries> out;
  for (const Corpus* corpus : corpora) {
    std::map<std::int64_t, std::size_t> bins;
    for (const auto& a : corpus->accounts) {
      for (const auto& t : a.tweets) {
        if (t.client_name == app) ++bins[t.timestamp / bin_seconds * bin_seconds];
      }
    }
    out.push_back({corpus_name(*corpus), {bins.begin(), bins.end()}});
  }
  return out;
}

std::string normalize_for_duplicates(std::string_view input) {
  std::string s = text::collapse_whitespace(input);
  if (s.starts_with("RT @")) {
    std::size_t i = 4;
    while (i < s.size()) {
      std::size_t next = i;
      if (!text::is_word_char(text::next_codepoint(s, next))) break;
      i = next;
    }
    if (i > 4 && i < s.size() && s[i] == ':') {
      s.erase(0, i + 1);
      if (!s.empty() && s.front() == ' ') s.erase(0, 1);
    }
  }
  return s;
}

std::vector<DuplicateText> cross_corpus_duplicates(std::span<const Corpus* const> corpora,
                                                   std::size_t min_corpora) {
  if (min_corpora < 2) throw DataError("duplicate detection needs min_corpora >= 2");
  std::map<std::string, DuplicateText> seen;
  for (const Corpus* corpus : corpora) {
    const auto name = corpus_name(*corpus);
    for (const auto& a : corpus->accounts) {
      for (const auto& t : a.tweets) {
        auto key = normalize_for_duplicates(t.text);
        if (key.empty()) continue;
        auto& entry = seen[key];
        entry.corpora.insert(name);
        ++entry.count;
      }
    }
  }
  std::vector<DuplicateText> out;
  for (auto& [key, entry] : seen) {
    if (entry.corpora.size() < min_corpora) continue;
    entry.text = key;
    out.push_back(std::move(entry));
  }
  std::stable_sort(out.begin(), out.end(), [](const DuplicateText& a, const DuplicateText& b) {
    if (a.corpora.size() != b.corpora.size()) return a.corpora.size() > b.corpora.size();
    return a.count > b.count;
  });
  return out;
}

}  // namespace trollscope::stats
