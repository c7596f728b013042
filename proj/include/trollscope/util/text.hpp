#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace trollscope::text {

inline constexpr char32_t kReplacement = 0xFFFD;

// Decodes one UTF-8 code point starting at `pos` and advances `pos`. Invalid
// or truncated sequences consume a single byte and yield U+FFFD.
char32_t next_codepoint(std::string_view s, std::size_t& pos);

void append_utf8(std::string& out, char32_t cp);

std::size_t codepoint_length(std::string_view s);

bool is_space(char32_t cp);

// ASCII punctuation/symbols plus the common Unicode punctuation blocks
// (general punctuation, CJK, Arabic, fullwidth forms).
bool is_punct(char32_t cp);

// Letters, digits and underscore; non-ASCII code points count unless they
// are whitespace or punctuation.
bool is_word_char(char32_t cp);

bool is_ascii_letter(char32_t cp);

std::string ascii_lower(std::string_view s);

// Strips leading/trailing whitespace and collapses internal whitespace runs
// to one ASCII space.
std::string collapse_whitespace(std::string_view s);

bool starts_with_url(std::string_view token);

}  // namespace trollscope::text
