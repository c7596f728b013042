#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trollscope/model.hpp"
#include "trollscope/parallel.hpp"
#include "trollscope/source_intel.hpp"

namespace trollscope::features {

inline constexpr std::size_t kFeatureCount = 45;
inline constexpr std::size_t kHourOffset = 10;  // hour_00 sits at index 10

using FeatureValues = std::array<double, kFeatureCount>;

struct FeatureVector {
  std::string account_id;
  FeatureValues values{};
};

// Column names in layout order: 10 account attributes, 24 posting-hour
// fractions, 8 stylometric means, 3 source statistics.
const std::array<std::string, kFeatureCount>& feature_names();

std::optional<std::size_t> feature_index(std::string_view name);

// Language codes mapped to 1..31 in table order; anything else is 0.
class LanguageTable {
 public:
  static constexpr std::size_t kMaxLanguages = 31;

  explicit LanguageTable(std::vector<std::string> codes);

  // Shipped table (resources/languages.txt), "en" first.
  static const LanguageTable& defaults();

  // The 31 most frequent account/description language codes across the
  // corpora, ties broken by code, with "en" pinned to 1.
  static LanguageTable from_corpora(std::span<const Corpus* const> corpora);

  static LanguageTable load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  int encode(std::string_view code) const;
  const std::vector<std::string>& codes() const { return codes_; }

 private:
  std::vector<std::string> codes_;
};

int encode_language(std::string_view code, const LanguageTable& table);

std::array<double, 24> hourly_histogram(std::span<const Tweet> tweets);

struct FeatureContext {
  std::int64_t reference_time = 0;
  const sources::SourceCatalog& catalog;
  const LanguageTable& languages;
};

// Latest tweet or account-creation time over all corpora; keeps account age
// independent of the wall clock.
std::int64_t auto_reference_time(std::span<const Corpus* const> corpora);

// Throws DataError when reference_time precedes the account's creation.
FeatureVector extract_features(const Account& account, const FeatureContext& ctx);

FeatureVector extract_features(const Account& account, std::int64_t reference_time,
                               const sources::SourceCatalog& catalog, const LanguageTable& languages);

// Per-account extraction over a batch; parallel output equals serial output.
std::vector<FeatureVector> extract_all(std::span<const Account> accounts, const FeatureContext& ctx,
                                       Exec exec = Exec::parallel);

struct DatasetRow {
  FeatureVector features;
  Label label = Label::benign;
  std::string provenance;  // campaign or corpus name
};

struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<DatasetRow> rows;
  std::vector<std::string> language_codes;
  std::string catalog_digest;
  std::int64_t reference_time = 0;

  std::size_t count(Label label) const;
};

Dataset make_empty_dataset(const FeatureContext& ctx);

// Every account of every corpus. Corpora must be labeled troll or benign.
Dataset build_dataset(std::span<const Corpus* const> corpora, const FeatureContext& ctx,
                      Exec exec = Exec::parallel);

// Uniform sample without replacement of `n` account indices (sorted by
// account id first); all of them, with a warning, when the corpus is smaller.
std::vector<std::size_t> sample_accounts(const Corpus& corpus, std::size_t n, std::uint64_t seed,
                                         std::uint64_t stream);

// n_per_class accounts from each corpus (positives become troll, negatives
// benign), rows shuffled. Each class draws from its own seed stream, so the
// negative sample is identical for every positive corpus given the same seed.
Dataset balance_sample(const Corpus& positives, const Corpus& negatives, std::size_t n_per_class,
                       std::uint64_t seed, const FeatureContext& ctx, Exec exec = Exec::parallel);

// CSV with 45 feature columns plus "label"; sidecar <path>.provenance.json
// holds account ids, provenance tags, language table, catalog digest and
// reference time.
void write_dataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset read_dataset(const std::filesystem::path& path);

std::filesystem::path provenance_path(const std::filesystem::path& dataset_path);

}  // namespace trollscope::features
