#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace deskagent {

std::string trim(std::string_view s);

/// Splits on '\n'; a trailing newline does not produce an empty last element.
std::vector<std::string> split_lines(std::string_view s);

/// Collapses every run of whitespace to a single space and trims the ends.
std::string normalize_whitespace(std::string_view s);

/// Lowercases ASCII letters in place-copy.
std::string to_lower(std::string_view s);

bool starts_with(std::string_view s, std::string_view prefix);
bool contains(std::string_view haystack, std::string_view needle);

/// Replaces every occurrence of `from` with `to`.
std::string replace_all(std::string s, std::string_view from, std::string_view to);

/// Quotes `s` in double quotes, escaping backslash, quote, newline and tab.
/// Inverse of parse_quoted.
std::string quote(std::string_view s);

/// Parses a quote() literal starting at s[pos] (which must be '"').
/// On success returns the decoded string and advances pos past the closing quote.
/// Throws ParseError on malformed input.
std::string parse_quoted(std::string_view s, std::size_t& pos);

}  // namespace deskagent
