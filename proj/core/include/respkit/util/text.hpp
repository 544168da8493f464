#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace respkit::text {

/// Decodes UTF-8 into code points. Invalid bytes decode to U+FFFD.
std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view cps);

std::string_view trim(std::string_view s);
std::string collapse_whitespace(std::string_view s);
std::string ascii_lower(std::string_view s);

/// Whitespace-delimited tokens. This is the word counter used for length limits.
std::vector<std::string_view> whitespace_tokens(std::string_view s);
std::size_t word_count(std::string_view s);

/// Lowercased alphanumeric word tokens; punctuation separates tokens.
/// Non-ASCII bytes are kept inside tokens.
std::vector<std::string> word_tokens(std::string_view s);

bool contains(std::string_view haystack, std::string_view needle);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace respkit::text
