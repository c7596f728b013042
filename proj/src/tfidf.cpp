#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "trollscope/error.hpp"
#include "trollscope/stats.hpp"
#include "trollscope/stylometry.hpp"
#include "trollscope/util/text.hpp"

namespace trollscope::stats {
namespace {

using Counts = std::map<std::string, std::size_t>;

Counts term_counts(const std::vector<std::string>& doc) {
  Counts c;
  for (const auto& t : doc) ++c[t];
  return c;
}

std::vector<TermScore> rank_group(const std::vector<Counts>& docs, const std::map<std::string, double>& idf,
                                  std::size_t k) {
  std::map<std::string, double> score;
  for (const auto& doc : docs) {
    for (const auto& [term, tf] : doc) score[term] += static_cast<double>(tf) * idf.at(term);
  }
  std::vector<TermScore> ranked;
  ranked.reserve(score.size());
  for (auto& [term, s] : score) ranked.push_back({term, s});
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const TermScore& a, const TermScore& b) { return a.score > b.score; });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

}  // namespace

std::vector<std::string> tfidf_tokens(std::string_view text) {
  auto words = stylometry::tokenize(text);
  for (auto& w : words) w = text::ascii_lower(w);
  return words;
}

TfidfResult tfidf_rank(const std::vector<std::vector<std::string>>& docs_a,
                       const std::vector<std::vector<std::string>>& docs_b, std::size_t k) {
  if (docs_a.empty() || docs_b.empty()) throw DataError("TF-IDF needs two non-empty groups");
  if (k == 0) throw DataError("TF-IDF k must be at least 1");
  std::vector<Counts> a, b;
  for (const auto& d : docs_a) a.push_back(term_counts(d));
  for (const auto& d : docs_b) b.push_back(term_counts(d));

  std::map<std::string, std::size_t> df;
  for (const auto* group : {&a, &b}) {
    for (const auto& doc : *group) {
      for (const auto& [term, tf] : doc) ++df[term];
    }
  }
  const double n = static_cast<double>(a.size() + b.size());
  std::map<std::string, double> idf;
  for (const auto& [term, count] : df) idf[term] = std::log(n / static_cast<double>(count));
  return {rank_group(a, idf, k), rank_group(b, idf, k)};
}

TfidfResult tfidf_top_terms(std::span<const Account> group_a, std::span<const Account> group_b, std::size_t k,
                            DocUnit unit) {
  const auto documents = [unit](std::span<const Account> group) {
    std::vector<std::vector<std::string>> docs;
    for (const auto& account : group) {
      if (unit == DocUnit::tweet) {
        for (const auto& t : account.tweets) docs.push_back(tfidf_tokens(t.text));
        continue;
      }
      std::vector<std::string> doc;
      for (const auto& t : account.tweets) {
        auto words = tfidf_tokens(t.text);
        doc.insert(doc.end(), words.begin(), words.end());
      }
      docs.push_back(std::move(doc));
    }
    return docs;
  };
  return tfidf_rank(documents(group_a), documents(group_b), k);
}

}  // namespace trollscope::stats
