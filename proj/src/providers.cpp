#include "coordnet/providers.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include "coordnet/error.hpp"
#include "coordnet/log.hpp"
#include "coordnet/text.hpp"
#include "data/wordlists.hpp"

namespace coordnet {
namespace {

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw IoError(std::string("cannot read ") + what + " file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Calls fn(line_number, line) for each non-blank line, trailing '\r' removed.
template <typename Fn>
void for_each_line(std::string_view content, Fn&& fn) {
  std::size_t pos = 0;
  int lineno = 0;
  while (pos <= content.size()) {
    auto nl = content.find('\n', pos);
    std::string_view line = content.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) fn(lineno, line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

std::pair<std::string_view, std::string_view> split_tab(std::string_view line, int lineno,
                                                        const char* what) {
  auto tab = line.find('\t');
  if (tab == std::string_view::npos || tab == 0) {
    throw ProviderError(std::string(what) + " line " + std::to_string(lineno) + ": expected key<TAB>value");
  }
  return {line.substr(0, tab), line.substr(tab + 1)};
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

HashedNgramEmbedding::HashedNgramEmbedding(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw ConfigError("embedding dimension must be positive");
}

Eigen::VectorXd HashedNgramEmbedding::embed_one(std::string_view text) const {
  const std::u32string cps = text::decode_utf8(text);
  if (cps.empty()) throw ProviderError("cannot embed an empty text");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension_));
  auto add = [&](std::u32string_view gram) {
    v[static_cast<Eigen::Index>(fnv1a64(text::encode_utf8(gram)) % dimension_)] += 1.0;
  };
  if (cps.size() < 3) {
    add(cps);
  } else {
    for (std::size_t n = 3; n <= 5; ++n) {
      for (std::size_t i = 0; i + n <= cps.size(); ++i) add(std::u32string_view(cps).substr(i, n));
    }
  }
  v.normalize();
  return v;
}

Eigen::MatrixXd HashedNgramEmbedding::embed(std::span<const EmbeddingInput> inputs) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(inputs.size()), static_cast<Eigen::Index>(dimension_));
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = embed_one(inputs[i].text).transpose();
  }
  return out;
}

FileEmbedding FileEmbedding::parse(std::string_view content) {
  FileEmbedding fe;
  bool have_header = false;
  for_each_line(content, [&](int lineno, std::string_view line) {
    if (!have_header) {
      if (!line.starts_with("dimension=")) {
        throw ProviderError("embedding file must start with 'dimension=D'");
      }
      auto num = line.substr(10);
      auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), fe.dimension_);
      if (ec != std::errc{} || p != num.data() + num.size() || fe.dimension_ == 0) {
        throw ProviderError("bad embedding dimension header");
      }
      have_header = true;
      return;
    }
    auto [id, values] = split_tab(line, lineno, "embedding");
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      auto comma = values.find(',', pos);
      fields.emplace_back(values.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (fields.size() != fe.dimension_) {
      throw ProviderError("embedding line " + std::to_string(lineno) + ": expected " +
                          std::to_string(fe.dimension_) + " components, got " + std::to_string(fields.size()));
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(fe.dimension_));
    for (std::size_t k = 0; k < fields.size(); ++k) {
      char* end = nullptr;
      v[static_cast<Eigen::Index>(k)] = std::strtod(fields[k].c_str(), &end);
      if (fields[k].empty() || end != fields[k].c_str() + fields[k].size()) {
        throw ProviderError("embedding line " + std::to_string(lineno) + ": bad component '" + fields[k] + "'");
      }
    }
    const double norm = v.norm();
    if (!(norm > 0.0)) throw ProviderError("embedding for " + std::string(id) + " is zero");
    fe.vectors_[std::string(id)] = v / norm;
  });
  if (!have_header) throw ProviderError("embedding file is empty");
  return fe;
}

FileEmbedding FileEmbedding::load(const std::string& path) { return parse(read_file(path, "embedding")); }

Eigen::MatrixXd FileEmbedding::embed(std::span<const EmbeddingInput> inputs) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(inputs.size()), static_cast<Eigen::Index>(dimension_));
  std::vector<std::string> missing;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    auto it = vectors_.find(std::string(inputs[i].tweet_id));
    if (it == vectors_.end()) {
      missing.emplace_back(inputs[i].tweet_id);
      continue;
    }
    out.row(static_cast<Eigen::Index>(i)) = it->second.transpose();
  }
  if (!missing.empty()) {
    throw ProviderError("embedding file has no vector for tweet ids: " + text::join(missing, ", "));
  }
  return out;
}

std::string_view to_string(Sentiment s) {
  switch (s) {
    case Sentiment::Positive: return "positive";
    case Sentiment::Negative: return "negative";
    case Sentiment::Neutral: return "neutral";
  }
  return "neutral";
}

Sentiment parse_sentiment(std::string_view label) {
  if (label == "positive") return Sentiment::Positive;
  if (label == "negative") return Sentiment::Negative;
  if (label == "neutral") return Sentiment::Neutral;
  throw ProviderError("unknown sentiment label '" + std::string(label) + "'");
}

Sentiment classify_sentiment(std::string_view text, std::string_view lang) {
  if (!data::has_sentiment_lexicon(lang)) {
    static std::mutex mutex;
    static std::set<std::string, std::less<>> warned;
    std::lock_guard lock(mutex);
    if (warned.insert(std::string(lang)).second) {
      log::warn("no sentiment lexicon for language '" + std::string(lang) + "'; labeling neutral");
    }
    return Sentiment::Neutral;
  }
  const auto& pos = data::positive_words(lang);
  const auto& neg = data::negative_words(lang);
  long score = 0;
  for (const auto& tok : text::word_tokens(text)) {
    if (std::binary_search(pos.begin(), pos.end(), tok)) ++score;
    if (std::binary_search(neg.begin(), neg.end(), tok)) --score;
  }
  return score > 0 ? Sentiment::Positive : score < 0 ? Sentiment::Negative : Sentiment::Neutral;
}

FileSentiment FileSentiment::parse(std::string_view content) {
  FileSentiment fs;
  for_each_line(content, [&](int lineno, std::string_view line) {
    auto [id, label] = split_tab(line, lineno, "sentiment");
    fs.labels_[std::string(id)] = parse_sentiment(label);
  });
  return fs;
}

FileSentiment FileSentiment::load(const std::string& path) { return parse(read_file(path, "sentiment")); }

Sentiment FileSentiment::classify(const TweetRecord& tweet) const {
  auto it = labels_.find(tweet.tweet_id);
  if (it == labels_.end()) throw ProviderError("sentiment file has no label for tweet " + tweet.tweet_id);
  return it->second;
}

std::vector<TopicAssignment> HashtagTopics::assign(const Corpus& corpus,
                                                   std::span<const std::string> users) const {
  std::map<std::string, std::size_t, std::less<>> freq;
  for (const auto& r : corpus.records()) {
    for (const auto& tag : r.hashtags) ++freq[tag];
  }
  std::vector<std::pair<std::string_view, std::size_t>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > top_k_) ranked.resize(top_k_);
  // rank position doubles as the preference order: lower is better.
  std::map<std::string_view, std::size_t, std::less<>> rank;
  for (std::size_t i = 0; i < ranked.size(); ++i) rank.emplace(ranked[i].first, i);

  std::vector<TopicAssignment> out;
  out.reserve(users.size());
  for (const auto& user : users) {
    std::size_t best = SIZE_MAX;
    for (auto idx : corpus.tweets_of(user)) {
      for (const auto& tag : corpus[idx].hashtags) {
        if (auto it = rank.find(tag); it != rank.end()) best = std::min(best, it->second);
      }
    }
    out.push_back({user, best == SIZE_MAX ? std::string(kOtherTopic) : std::string(ranked[best].first)});
  }
  return out;
}

FileTopics FileTopics::parse(std::string_view content) {
  FileTopics ft;
  for_each_line(content, [&](int lineno, std::string_view line) {
    auto [id, topic] = split_tab(line, lineno, "topic");
    if (topic.empty()) throw ProviderError("topic line " + std::to_string(lineno) + ": empty topic");
    ft.topics_[std::string(id)] = std::string(topic);
  });
  return ft;
}

FileTopics FileTopics::load(const std::string& path) { return parse(read_file(path, "topic")); }

std::vector<TopicAssignment> FileTopics::assign(const Corpus&, std::span<const std::string> users) const {
  std::vector<TopicAssignment> out;
  for (const auto& user : users) {
    if (auto it = topics_.find(user); it != topics_.end()) out.push_back({user, it->second});
  }
  if (!users.empty() && 2 * out.size() < users.size()) {
    throw ProviderError("topic file labels only " + std::to_string(out.size()) + " of " +
                        std::to_string(users.size()) + " requested users");
  }
  return out;
}

std::vector<TopicAssignment> assign_topics(const Corpus& corpus, std::span<const std::string> users,
                                           const TopicProvider& provider) {
  return provider.assign(corpus, users);
}

}  // namespace coordnet
