#pragma once

#include <string_view>
#include <vector>

namespace coordnet::data {

// All lists are sorted and deduplicated; unknown languages yield an empty list.
const std::vector<std::string_view>& stopwords(std::string_view lang);
const std::vector<std::string_view>& positive_words(std::string_view lang);
const std::vector<std::string_view>& negative_words(std::string_view lang);
bool has_sentiment_lexicon(std::string_view lang);

/// Multi-label public suffixes; any single final label is also a suffix.
const std::vector<std::string_view>& multi_label_suffixes();

const std::vector<std::string_view>& default_domain_filter(std::string_view lang);

}  // namespace coordnet::data
