#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "trollscope/util/csv.hpp"
#include "trollscope/util/format.hpp"
#include "trollscope/util/hash.hpp"
#include "trollscope/util/rng.hpp"
#include "trollscope/util/text.hpp"

using namespace trollscope;

TEST_CASE("utf8 decoding") {
  std::string s = "a\xC3\xA9\xE2\x80\x94\xF0\x9F\x98\x80";
  std::size_t pos = 0;
  CHECK(text::next_codepoint(s, pos) == U'a');
  CHECK(text::next_codepoint(s, pos) == U'é');
  CHECK(text::next_codepoint(s, pos) == U'—');
  CHECK(text::next_codepoint(s, pos) == U'\U0001F600');
  CHECK(pos == s.size());
  CHECK(text::codepoint_length(s) == 4);
}

TEST_CASE("invalid utf8 consumes one byte per error") {
  const std::string cases[] = {"\xC3", "\xE2\x80", "\xC0\xAF", "\xED\xA0\x80", "\xFF", "\x80"};
  for (const auto& s : cases) {
    std::size_t pos = 0;
    CHECK(text::next_codepoint(s, pos) == text::kReplacement);
    CHECK(pos == 1);
  }
}

TEST_CASE("utf8 encode round trip") {
  for (char32_t cp : {U'\0', U'x', U'߿', U'ࠀ', U'�', U'\U00010000', U'\U0010FFFF'}) {
    std::string s;
    text::append_utf8(s, cp);
    std::size_t pos = 0;
    CHECK(text::next_codepoint(s, pos) == cp);
    CHECK(pos == s.size());
  }
}

TEST_CASE("whitespace helpers") {
  CHECK(text::collapse_whitespace("  a \t b\n\nc  ") == "a b c");
  CHECK(text::collapse_whitespace("a\xC2\xA0\xC2\xA0" "b") == "a b");
  CHECK(text::ascii_lower("TwItTeR \xC3\x89") == "twitter \xC3\x89");
  CHECK(text::starts_with_url("https://t.co/x"));
  CHECK(text::starts_with_url("HTTP://x"));
  CHECK_FALSE(text::starts_with_url("httpx"));
}

TEST_CASE("csv reader handles quoting, embedded newlines and CRLF") {
  std::istringstream in("a,b,c\r\n\"x, y\",\"he said \"\"hi\"\"\",\"two\nlines\"\r\n,,\n");
  csv::Reader r(in);
  std::vector<std::string> f;
  REQUIRE(r.next(f));
  CHECK(f == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(r.next(f));
  CHECK(f == std::vector<std::string>{"x, y", "he said \"hi\"", "two\nlines"});
  REQUIRE(r.next(f));
  CHECK(f == std::vector<std::string>{"", "", ""});
  CHECK_FALSE(r.next(f));
}

TEST_CASE("csv write then read is identity") {
  const std::vector<std::string> row = {"plain", " lead", "trail ", "com,ma", "quo\"te", "multi\nline", ""};
  std::ostringstream out;
  csv::write_row(out, row);
  std::istringstream in(out.str());
  csv::Reader r(in);
  std::vector<std::string> back;
  REQUIRE(r.next(back));
  CHECK(back == row);
}

TEST_CASE("sha256 known answers") {
  CHECK(hash::sha256("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(hash::sha256("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.0, -2.5}) {
    CHECK(std::stod(fmt::number(v)) == v);
  }
  CHECK(fmt::number(-0.0) == "0");
  CHECK(fmt::number(3.0) == "3");
  CHECK(fmt::fixed(0.125, 2) == "0.12");
}

TEST_CASE("rng helpers are deterministic and in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.below(7);
    CHECK(x == b.below(7));
    CHECK(x < 7);
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("shuffle is a permutation") {
  std::vector<int> v(100);
  for (int i = 0; i < 100; ++i) v[static_cast<std::size_t>(i)] = i;
  Rng rng(3);
  rng.shuffle(v);
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 100; ++i) CHECK(sorted[static_cast<std::size_t>(i)] == i);
}

TEST_CASE("poisson mean") {
  Rng rng(11);
  double sum = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) sum += static_cast<double>(rng.poisson(4.0));
  CHECK(sum / n == doctest::Approx(4.0).epsilon(0.03));
}
