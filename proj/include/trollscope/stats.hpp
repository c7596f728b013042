#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trollscope/features.hpp"
#include "trollscope/model.hpp"
#include "trollscope/parallel.hpp"
#include "trollscope/source_intel.hpp"

namespace trollscope::stats {

inline constexpr double kDefaultAlpha = 0.01;

struct KsResult {
  double statistic = 0.0;  // sup |F_a - F_b|
  double p_value = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  bool significant = false;  // p_value < alpha
};

// Asymptotic Kolmogorov survival function
//   Q(lambda) = 2 * sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2),
// truncated once a term drops below 1e-12 and clamped to [0, 1].
double kolmogorov_survival(double lambda);

// Two-sample KS test. The p-value uses lambda = (sqrt(ne) + 0.12 +
// 0.11 / sqrt(ne)) * D with ne = n1 n2 / (n1 + n2). Throws DataError on an
// empty or non-finite sample.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b, double alpha = kDefaultAlpha);

struct ComparisonRow {
  std::string feature_name;
  double mean_troll = 0.0;
  double mean_real = 0.0;
  KsResult ks;
};

// One row per requested feature, in request order. Features are tested in
// parallel; throws DataError for an unknown feature name or an empty class.
std::vector<ComparisonRow> comparison_report(std::span<const features::FeatureValues> trolls,
                                             std::span<const features::FeatureValues> real,
                                             std::span<const std::string> feature_subset,
                                             double alpha = kDefaultAlpha, Exec exec = Exec::parallel);

std::vector<ComparisonRow> comparison_report(const features::Dataset& dataset,
                                             std::span<const std::string> feature_subset,
                                             double alpha = kDefaultAlpha, Exec exec = Exec::parallel);

std::string comparison_csv(const std::vector<ComparisonRow>& rows);
std::string comparison_table(const std::vector<ComparisonRow>& rows);

// ---- TF-IDF contrast --------------------------------------------------------

enum class DocUnit { account, tweet };

struct TermScore {
  std::string term;
  double score = 0.0;
};

struct TfidfResult {
  std::vector<TermScore> group_a;
  std::vector<TermScore> group_b;
};

// Lowercased word tokens with URLs and mentions removed.
std::vector<std::string> tfidf_tokens(std::string_view text);

// tf = raw count, idf = ln(N / df) over all documents of both groups; a
// term's group score is the sum of tf * idf over the group's documents.
// Each list holds the group's own terms ranked by score (ties by term),
// truncated to k.
TfidfResult tfidf_rank(const std::vector<std::vector<std::string>>& docs_a,
                       const std::vector<std::vector<std::string>>& docs_b, std::size_t k);

TfidfResult tfidf_top_terms(std::span<const Account> group_a, std::span<const Account> group_b, std::size_t k,
                            DocUnit unit = DocUnit::account);

// ---- Campaign analytics -----------------------------------------------------

struct CampaignMetrics {
  std::string campaign;
  double scheduled_fraction = 0.0;
  double retweet_fraction = 0.0;
  std::size_t account_count = 0;
  std::size_t tweet_count = 0;
};

CampaignMetrics campaign_metrics(const Corpus& corpus, const sources::SourceCatalog& catalog);

struct TimeSeries {
  std::string corpus;
  std::vector<std::pair<std::int64_t, std::size_t>> points;  // (bin start, count)
};

// Tweets whose client_name equals `app` exactly, counted per time bin.
std::vector<TimeSeries> app_usage_timeseries(std::span<const Corpus* const> corpora, std::string_view app,
                                             std::int64_t bin_seconds);

struct DuplicateText {
  std::string text;
  std::set<std::string> corpora;
  std::size_t count = 0;
};

// Trim, collapse whitespace, drop a leading "RT @name:" prefix.
std::string normalize_for_duplicates(std::string_view text);

// Texts shared by at least min_corpora corpora, most widely spread first,
// then by total count, then by text.
std::vector<DuplicateText> cross_corpus_duplicates(std::span<const Corpus* const> corpora,
                                                   std::size_t min_corpora);

// Empirical CDF of per-account distinct source counts: (count, F(count)).
std::vector<std::pair<std::size_t, double>> source_count_cdf(std::span<const Account> accounts);

}  // namespace trollscope::stats
