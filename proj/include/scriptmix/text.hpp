#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace scriptmix {

// Minimal UTF-8 handling. Invalid byte sequences decode to U+FFFD; decoding
// never throws since social-media text is messy by nature.
std::vector<char32_t> decode_utf8(std::string_view s);
void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(const std::vector<char32_t>& cps);
std::size_t count_code_points(std::string_view s);

// Lowercases ASCII and Latin-1 letters, collapses whitespace runs to a single
// space, strips control characters, trims the ends.
std::string normalize_text(std::string_view s);

std::vector<std::string> split_whitespace(std::string_view s);
std::string trim(std::string_view s);

}  // namespace scriptmix
