#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small text helpers shared across the library. All ASCII-oriented; the
// corpora this harness handles are chat-room English.
namespace tutorbench {

std::string_view trim_view(std::string_view s);
std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

// Whitespace-separated tokens, empty tokens dropped.
std::vector<std::string> split_whitespace(std::string_view s);
std::size_t count_words(std::string_view s);

std::vector<std::string> split_lines(std::string_view s);

bool starts_with_icase(std::string_view s, std::string_view prefix);

// Lowercases and strips punctuation (keeps letters, digits, whitespace),
// collapsing runs of whitespace to single spaces.
std::string normalize_for_matching(std::string_view s);

}  // namespace tutorbench
