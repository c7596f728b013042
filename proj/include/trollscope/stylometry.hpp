#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace trollscope::stylometry {

struct TextStats {
  std::size_t word_count = 0;
  std::size_t unique_word_count = 0;
  std::size_t stopword_count = 0;
  std::size_t punctuation_count = 0;
  double mean_word_length = 0.0;  // code points
  std::size_t sentence_count = 0;
  double mean_sentence_length = 0.0;  // words per sentence
  double flesch_score = 0.0;          // clamped to [0, 100]
  std::size_t function_word_count = 0;
  std::size_t non_function_word_count = 0;

  bool operator==(const TextStats&) const = default;
};

struct Tokens {
  std::vector<std::string> words;  // punctuation-stripped, case preserved
  std::size_t punctuation_count = 0;
};

// Whitespace tokenization. Leading/trailing punctuation is stripped from
// each token; the stripped and internal punctuation of word tokens is
// counted. URL tokens (http://, https://) and pure @mention tokens are
// excluded from both.
Tokens tokenize_detailed(std::string_view text);

std::vector<std::string> tokenize(std::string_view text);

// '@' followed by at least one word character, where the '@' starts the
// string or follows a non-word character.
std::size_t count_mentions(std::string_view text);

// Splits on runs of . ! ? ؟ 。 and drops segments that contain no word.
std::vector<std::string> split_sentences(std::string_view text);

// Latin vowel groups (a e i o u y), minus a trailing silent 'e' after a
// consonant, floored at 1. Words without Latin letters: ceil(code points / 2).
int estimate_syllables(std::string_view word);

double flesch_reading_ease(std::string_view text);

TextStats analyze_text(std::string_view text);

// Case-insensitive (ASCII) lookup over a shipped word list.
class WordList {
 public:
  explicit WordList(std::string_view one_per_line);
  WordList(const WordList& a, const WordList& b);

  bool contains(std::string_view word) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

// Closed-class English words: articles, pronouns, prepositions,
// conjunctions, auxiliaries and negators.
const WordList& function_words();

// Function words plus high-frequency fillers.
const WordList& stopwords();

// SHA-256 of the shipped list files, in "function:filler" form.
std::string wordlist_digest();

}  // namespace trollscope::stylometry
