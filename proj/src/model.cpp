#include "trollscope/model.hpp"

#include <filesystem>

#include "trollscope/error.hpp"

namespace trollscope {

std::string_view to_string(Label label) {
  switch (label) {
    case Label::troll:
      return "troll";
    case Label::benign:
      return "benign";
    case Label::unlabeled:
      return "unlabeled";
  }
  return "unlabeled";
}

Label parse_label(std::string_view text) {
  if (text == "troll") return Label::troll;
  if (text == "benign") return Label::benign;
  if (text == "unlabeled") return Label::unlabeled;
  throw DataError("unknown label '" + std::string(text) + "'");
}

std::string corpus_name(const Corpus& corpus) {
  for (const auto& account : corpus.accounts) {
    if (!account.campaign.empty()) return account.campaign;
  }
  if (!corpus.source_path.empty()) {
    auto stem = std::filesystem::path(corpus.source_path).stem().string();
    if (!stem.empty()) return stem;
  }
  return "corpus";
}

std::size_t tweet_count(const Corpus& corpus) {
  std::size_t n = 0;
  for (const auto& account : corpus.accounts) n += account.tweets.size();
  return n;
}

}  // namespace trollscope
