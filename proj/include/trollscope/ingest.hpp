#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "trollscope/model.hpp"

namespace trollscope::ingest {

// Strips an `<a ...>INNER</a>` anchor and decodes HTML entities in INNER.
// Anything else is returned unchanged. Never trims.
std::string decode_client_name(std::string_view raw_source);

// Accepts "YYYY-MM-DD", "YYYY-MM-DD HH:MM[:SS]" (optionally with a 'T'
// separator and trailing 'Z'), Twitter's "Wed Oct 10 20:19:24 +0000 2018"
// and RFC 2822 "Wed, 10 Oct 2018 20:19:24 +0000". Returns nullopt for
// anything malformed, out of range, or before the epoch.
std::optional<std::int64_t> parse_timestamp(std::string_view text);

// The explicit flag OR a case-sensitive "RT @" prefix.
bool is_retweet(bool flag, std::string_view text);

// Groups tweet rows into accounts. Shards of a file can be accumulated
// independently and merged; merge is associative, keeps the metadata of the
// left operand for accounts present in both, and finish() produces accounts
// sorted by id with tweets sorted by (timestamp, tweet_id).
class AccountAccumulator {
 public:
  void add(const Account& metadata, Tweet tweet);
  void add_account(Account account);
  void merge(AccountAccumulator&& other);
  std::size_t size() const { return accounts_.size(); }
  std::vector<Account> finish() &&;

 private:
  std::map<std::string, Account> accounts_;
};

// Transparency-report CSV dump. `campaign` overrides the campaign of every
// account; when empty, an optional "campaign" column is used.
Corpus parse_campaign_csv(const std::filesystem::path& path, Label label,
                          const std::string& campaign = {});
Corpus parse_campaign_csv(std::istream& in, Label label, const std::string& campaign = {},
                          const std::string& source_path = {});

// 1%-sample style JSONL: one v1.1 tweet object per line.
Corpus parse_sample_jsonl(const std::filesystem::path& path, Label label = Label::benign);
Corpus parse_sample_jsonl(std::istream& in, Label label = Label::benign,
                          const std::string& source_path = {});

// Canonical format: one JSON record per account, tweets embedded.
void write_corpus(const Corpus& corpus, std::ostream& out);
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);

// When `label` is given it overrides the stored per-record label.
Corpus read_corpus(const std::filesystem::path& path, std::optional<Label> label = std::nullopt);
Corpus read_corpus(std::istream& in, std::optional<Label> label = std::nullopt,
                   const std::string& source_path = {});

}  // namespace trollscope::ingest
