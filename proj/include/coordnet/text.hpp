#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace coordnet::text {

/// Invalid byte sequences decode to U+FFFD.
std::u32string decode_utf8(std::string_view bytes);
std::string encode_utf8(std::u32string_view cps);

/// Letters (Latin, Greek, Cyrillic blocks), digits and underscore.
bool is_word_char(char32_t cp);

std::string to_lower(std::string_view s);

/// '#'-prefixed runs of word characters, '#' stripped, lowercased, in order of
/// appearance (duplicates preserved).
std::vector<std::string> extract_hashtags(std::string_view text);

/// Lowercased word tokens. URLs and @mentions are dropped; a hashtag
/// contributes its word. Punctuation, symbols and emoji act as separators.
std::vector<std::string> word_tokens(std::string_view text);

bool is_stopword(std::string_view lang, std::string_view token);

/// Tokens with stopwords removed. Empty when fewer than `min_tokens` survive.
std::vector<std::string> clean_tokens(std::string_view text, std::string_view lang,
                                      std::size_t min_tokens);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Version tag of the bundled word lists (stopwords, sentiment lexicons,
/// domain filters, public suffixes).
inline constexpr std::string_view kBundledDataVersion = "2024.1";

}  // namespace coordnet::text
