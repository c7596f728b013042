#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "trollscope/stylometry.hpp"
#include "trollscope/util/rng.hpp"
#include "trollscope/util/text.hpp"

using namespace trollscope;
using namespace trollscope::stylometry;

namespace {

std::string random_unicode(Rng& rng, std::size_t max_len) {
  static const char32_t pool[] = {U'a', U'E', U'y', U'z', U' ', U' ', U'\n', U'.', U'!', U'?', U'@', U',',
                                  U'\'', U'#', U'1', U'é', U'ж', U'ب', U'。', U'؟', U'中', U'\U0001F600',
                                  U' ', U'　', U'-', U'/', U':', U'h', U't', U'p', U's'};
  std::string s;
  const auto len = rng.below(max_len + 1);
  for (std::uint64_t i = 0; i < len; ++i) {
    if (rng.below(10) == 0) {
      text::append_utf8(s, static_cast<char32_t>(rng.below(0x2FFFF) + 1));
    } else {
      text::append_utf8(s, pool[rng.below(std::size(pool))]);
    }
  }
  return s;
}

}  // namespace

TEST_CASE("tokenize examples") {
  const auto t = tokenize_detailed("Hello, world!");
  CHECK(t.words == std::vector<std::string>{"Hello", "world"});
  CHECK(t.punctuation_count == 2);
  CHECK(tokenize("RT @user https://t.co/x hi") == std::vector<std::string>{"RT", "hi"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("@user: (@other)").empty());
  CHECK(tokenize("don't stop") == std::vector<std::string>{"don't", "stop"});
}

TEST_CASE("mentions") {
  CHECK(count_mentions("@a hi @b") == 2);
  CHECK(count_mentions("mail me a@b.com") == 0);
  CHECK(count_mentions("") == 0);
  CHECK(count_mentions("(@a),@b") == 2);
  CHECK(count_mentions("@ alone") == 0);
  CHECK(count_mentions("@@a") == 1);
}

TEST_CASE("mentions never exceed the number of at signs") {
  Rng rng(17);
  for (int i = 0; i < 3000; ++i) {
    const auto s = random_unicode(rng, 40);
    CHECK(count_mentions(s) <= static_cast<std::size_t>(std::count(s.begin(), s.end(), '@')));
  }
}

TEST_CASE("sentences") {
  CHECK(split_sentences("A b. C d!").size() == 2);
  CHECK(split_sentences("no terminator").size() == 1);
  CHECK(split_sentences("...").empty());
  CHECK(split_sentences("one?! two؟ three。").size() == 3);
  CHECK(split_sentences("").empty());
}

TEST_CASE("syllables") {
  CHECK(estimate_syllables("cat") == 1);
  CHECK(estimate_syllables("beautiful") == 3);
  CHECK(estimate_syllables("x") == 1);
  CHECK(estimate_syllables("make") == 1);
  CHECK(estimate_syllables("the") == 1);
  CHECK(estimate_syllables("tree") == 1);
  CHECK(estimate_syllables("reading") == 2);
  CHECK(estimate_syllables("привет") == 3);
  CHECK(estimate_syllables("中文字") == 2);
}

TEST_CASE("flesch reading ease") {
  CHECK(flesch_reading_ease("") == 0.0);
  CHECK(flesch_reading_ease("The cat sat.") == 100.0);
  // 2 sentences, 8 words; syllables 1+1+1+1+1+3+1+2 = 11
  const double raw = 206.835 - 1.015 * (8.0 / 2.0) - 84.6 * (11.0 / 8.0);
  CHECK(flesch_reading_ease("The dog ran far. A beautiful day coming.") == doctest::Approx(raw).epsilon(1e-12));
  // Long polysyllabic sentence goes below zero before clamping.
  CHECK(flesch_reading_ease("Internationalization institutionalization characterization "
                            "telecommunication intercontinental") == 0.0);
}

TEST_CASE("flesch stays in range for random unicode") {
  Rng rng(23);
  for (int i = 0; i < 5000; ++i) {
    const double f = flesch_reading_ease(random_unicode(rng, 80));
    CHECK(f >= 0.0);
    CHECK(f <= 100.0);
  }
}

TEST_CASE("analyze_text examples") {
  const auto s = analyze_text("the cat");
  CHECK(s.word_count == 2);
  CHECK(s.stopword_count == 1);
  CHECK(s.function_word_count == 1);
  CHECK(s.non_function_word_count == 1);
  CHECK(s.unique_word_count == 2);
  CHECK(s.mean_word_length == 3.0);

  CHECK(analyze_text("") == TextStats{});
  CHECK(analyze_text("The THE the").unique_word_count == 1);
}

TEST_CASE("shipped word lists") {
  CHECK(function_words().size() >= 120);
  CHECK(function_words().size() <= 180);
  CHECK(stopwords().size() > function_words().size());
  for (const char* w : {"the", "and", "is", "of", "she", "would", "not", "between"}) CHECK(function_words().contains(w));
  for (const char* w : {"the", "and", "is", "just", "very"}) CHECK(stopwords().contains(w));
  CHECK(stopwords().contains("The"));
  CHECK_FALSE(function_words().contains("cat"));
  CHECK(wordlist_digest().size() == 64 * 2 + 1);
}

TEST_CASE("TextStats invariants and determinism over random text") {
  Rng rng(31);
  for (int i = 0; i < 3000; ++i) {
    const auto text = random_unicode(rng, 60);
    const auto s = analyze_text(text);
    CHECK(s.unique_word_count <= s.word_count);
    CHECK(s.stopword_count <= s.word_count);
    CHECK(s.function_word_count + s.non_function_word_count <= s.word_count);
    CHECK(s.flesch_score >= 0.0);
    CHECK(s.flesch_score <= 100.0);
    CHECK(std::isfinite(s.mean_word_length));
    CHECK(std::isfinite(s.mean_sentence_length));
    CHECK(analyze_text(text) == s);
  }
}

TEST_CASE("appending a sentence never decreases counts") {
  Rng rng(37);
  for (int i = 0; i < 2000; ++i) {
    const auto base = random_unicode(rng, 40);
    const auto extra = random_unicode(rng, 20);
    const auto a = analyze_text(base);
    const auto b = analyze_text(base + " " + extra + ".");
    CHECK(b.word_count >= a.word_count);
    CHECK(b.sentence_count >= a.sentence_count);
    CHECK(b.punctuation_count >= a.punctuation_count);
  }
}
