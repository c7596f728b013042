#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace trollscope {

enum class Label { troll, benign, unlabeled };

std::string_view to_string(Label label);

// Accepts "troll", "benign", "unlabeled". Throws DataError otherwise.
Label parse_label(std::string_view text);

struct Tweet {
  std::string tweet_id;
  std::string account_id;
  std::string text;
  std::int64_t timestamp = 0;  // UTC epoch seconds
  std::string client_name;     // decoded; whitespace is significant
  bool is_retweet = false;
  std::string language;

  bool operator==(const Tweet&) const = default;
};

struct Account {
  std::string account_id;
  std::string screen_name;
  std::string description;
  std::string account_language;
  std::string description_language;
  std::uint64_t followers = 0;
  std::uint64_t following = 0;
  std::int64_t creation_time = 0;
  std::string campaign;  // e.g. "2018oct_ira"; empty for benign samples
  std::vector<Tweet> tweets;

  bool operator==(const Account&) const = default;
};

struct Corpus {
  std::vector<Account> accounts;
  Label label = Label::unlabeled;
  std::string source_path;
  std::size_t skipped_rows = 0;
};

// The campaign shared by the corpus's accounts, else the file stem of
// source_path, else "corpus".
std::string corpus_name(const Corpus& corpus);

std::size_t tweet_count(const Corpus& corpus);

}  // namespace trollscope
