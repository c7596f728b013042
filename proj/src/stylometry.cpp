#include "trollscope/stylometry.hpp"

#include <algorithm>
#include <cmath>

#include "trollscope/resources.hpp"
#include "trollscope/util/text.hpp"

namespace trollscope::stylometry {
namespace {

bool is_sentence_terminator(char32_t cp) {
  return cp == '.' || cp == '!' || cp == '?' || cp == 0x061F || cp == 0x3002;
}

bool is_latin_vowel(char32_t cp) {
  switch (cp) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y':
    case 'A': case 'E': case 'I': case 'O': case 'U': case 'Y':
      return true;
    default:
      return false;
  }
}

std::vector<char32_t> decode(std::string_view s) {
  std::vector<char32_t> cps;
  cps.reserve(s.size());
  for (std::size_t pos = 0; pos < s.size();) cps.push_back(text::next_codepoint(s, pos));
  return cps;
}

// Calls fn(token) for each maximal run of non-whitespace.
template <typename Fn>
void for_each_raw_token(std::string_view s, Fn&& fn) {
  std::size_t pos = 0;
  std::size_t start = std::string_view::npos;
  while (pos < s.size()) {
    const std::size_t here = pos;
    const char32_t cp = text::next_codepoint(s, pos);
    if (text::is_space(cp)) {
      if (start != std::string_view::npos) fn(s.substr(start, here - start));
      start = std::string_view::npos;
    } else if (start == std::string_view::npos) {
      start = here;
    }
  }
  if (start != std::string_view::npos) fn(s.substr(start));
}

bool is_pure_mention(const std::vector<char32_t>& cps, std::size_t end) {
  std::size_t at = 0;
  while (at < end && cps[at] != '@' && text::is_punct(cps[at])) ++at;
  if (end < at + 2 || cps[at] != '@') return false;
  for (std::size_t i = at + 1; i < end; ++i) {
    if (!text::is_word_char(cps[i])) return false;
  }
  return true;
}

std::string without_urls(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for_each_raw_token(s, [&](std::string_view tok) {
    if (text::starts_with_url(tok)) return;
    if (!out.empty()) out.push_back(' ');
    out.append(tok);
  });
  return out;
}

bool counts_as_content_word(std::string_view word) {
  bool letter = false;
  for (std::size_t pos = 0; pos < word.size();) {
    const char32_t cp = text::next_codepoint(word, pos);
    if (cp >= '0' && cp <= '9') return false;
    if (text::is_ascii_letter(cp) || cp >= 0x80) letter = true;
  }
  return letter;
}

double flesch_from_counts(std::size_t words, std::size_t sentences, std::size_t syllables) {
  if (words == 0) return 0.0;
  const double w = static_cast<double>(words);
  const double s = static_cast<double>(std::max<std::size_t>(sentences, 1));
  const double raw = 206.835 - 1.015 * (w / s) - 84.6 * (static_cast<double>(syllables) / w);
  return std::clamp(raw, 0.0, 100.0);
}

}  // namespace

Tokens tokenize_detailed(std::string_view input) {
  Tokens out;
  for_each_raw_token(input, [&](std::string_view tok) {
    if (text::starts_with_url(tok)) return;
    const auto cps = decode(tok);
    std::size_t end = cps.size();
    while (end > 0 && text::is_punct(cps[end - 1])) --end;
    if (is_pure_mention(cps, end)) return;
    std::size_t begin = 0;
    while (begin < end && text::is_punct(cps[begin])) ++begin;
    out.punctuation_count += static_cast<std::size_t>(std::count_if(cps.begin(), cps.end(), text::is_punct));
    if (begin == end) return;
    std::string word;
    for (std::size_t i = begin; i < end; ++i) text::append_utf8(word, cps[i]);
    out.words.push_back(std::move(word));
  });
  return out;
}

std::vector<std::string> tokenize(std::string_view text) { return tokenize_detailed(text).words; }

std::size_t count_mentions(std::string_view s) {
  std::size_t count = 0;
  bool prev_is_word = false;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const char32_t cp = text::next_codepoint(s, pos);
    if (cp == '@' && !prev_is_word && pos < s.size()) {
      std::size_t peek = pos;
      if (text::is_word_char(text::next_codepoint(s, peek))) ++count;
    }
    prev_is_word = text::is_word_char(cp);
  }
  return count;
}

std::vector<std::string> split_sentences(std::string_view s) {
  std::vector<std::string> sentences;
  const auto flush = [&](std::string_view segment) {
    if (tokenize(segment).empty()) return;
    const auto collapsed = text::collapse_whitespace(segment);
    sentences.push_back(collapsed);
  };
  std::size_t pos = 0;
  std::size_t start = 0;
  while (pos < s.size()) {
    const std::size_t here = pos;
    const char32_t cp = text::next_codepoint(s, pos);
    if (is_sentence_terminator(cp)) {
      flush(s.substr(start, here - start));
      start = pos;
    }
  }
  flush(s.substr(start));
  return sentences;
}

int estimate_syllables(std::string_view word) {
  const auto cps = decode(word);
  if (cps.empty()) return 1;
  const bool latin = std::any_of(cps.begin(), cps.end(), text::is_ascii_letter);
  if (!latin) return static_cast<int>((cps.size() + 1) / 2);

  int groups = 0;
  bool in_group = false;
  for (char32_t cp : cps) {
    const bool vowel = is_latin_vowel(cp);
    if (vowel && !in_group) ++groups;
    in_group = vowel;
  }
  const std::size_t n = cps.size();
  if (n >= 2 && (cps[n - 1] == 'e' || cps[n - 1] == 'E') && text::is_ascii_letter(cps[n - 2]) &&
      !is_latin_vowel(cps[n - 2])) {
    --groups;
  }
  return std::max(groups, 1);
}

double flesch_reading_ease(std::string_view text) { return analyze_text(text).flesch_score; }

TextStats analyze_text(std::string_view input) {
  TextStats stats;
  const Tokens tokens = tokenize_detailed(input);
  stats.word_count = tokens.words.size();
  stats.punctuation_count = tokens.punctuation_count;
  if (stats.word_count == 0) return stats;

  std::unordered_set<std::string> unique;
  std::size_t total_length = 0;
  std::size_t syllables = 0;
  const auto& stop = stopwords();
  const auto& function = function_words();
  for (const auto& w : tokens.words) {
    unique.insert(text::ascii_lower(w));
    total_length += text::codepoint_length(w);
    syllables += static_cast<std::size_t>(estimate_syllables(w));
    if (stop.contains(w)) ++stats.stopword_count;
    if (function.contains(w)) {
      ++stats.function_word_count;
    } else if (counts_as_content_word(w)) {
      ++stats.non_function_word_count;
    }
  }
  stats.unique_word_count = unique.size();
  stats.mean_word_length = static_cast<double>(total_length) / static_cast<double>(stats.word_count);
  stats.sentence_count = split_sentences(without_urls(input)).size();
  if (stats.sentence_count > 0) {
    stats.mean_sentence_length =
        static_cast<double>(stats.word_count) / static_cast<double>(stats.sentence_count);
  }
  stats.flesch_score = flesch_from_counts(stats.word_count, stats.sentence_count, syllables);
  return stats;
}

WordList::WordList(std::string_view one_per_line) {
  std::size_t start = 0;
  while (start <= one_per_line.size()) {
    auto end = one_per_line.find('\n', start);
    if (end == std::string_view::npos) end = one_per_line.size();
    auto line = one_per_line.substr(start, end - start);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    if (!line.empty() && line.front() != '#') words_.insert(text::ascii_lower(line));
    start = end + 1;
  }
}

WordList::WordList(const WordList& a, const WordList& b) : words_(a.words_) {
  words_.insert(b.words_.begin(), b.words_.end());
}

bool WordList::contains(std::string_view word) const { return words_.contains(text::ascii_lower(word)); }

const WordList& function_words() {
  static const WordList list(resources::function_words);
  return list;
}

const WordList& stopwords() {
  static const WordList list(function_words(), WordList(resources::filler_words));
  return list;
}

std::string wordlist_digest() {
  return std::string(resources::function_words_sha256) + ":" + std::string(resources::filler_words_sha256);
}

}  // namespace trollscope::stylometry
