#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "coordnet/ingest.hpp"

namespace coordnet {

// ---------------------------------------------------------------------------
// Embeddings

struct EmbeddingInput {
  std::string_view tweet_id;
  std::string_view text;  // already cleaned
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string name() const = 0;
  virtual std::size_t dimension() const = 0;
  /// One unit-norm row per input, `dimension()` columns.
  virtual Eigen::MatrixXd embed(std::span<const EmbeddingInput> inputs) const = 0;
};

/// 64-bit FNV-1a: h = 14695981039346656037; for each byte, h ^= byte, h *= 1099511628211.
std::uint64_t fnv1a64(std::string_view bytes);

/// Character n-gram frequency vectors hashed into `dimension` buckets.
///
/// N-grams are taken over Unicode code points for every n in [3, 5]; each
/// n-gram's UTF-8 bytes are hashed with fnv1a64 and reduced modulo the
/// dimension. Texts shorter than three code points contribute themselves as
/// a single gram. Rows are L2-normalized.
class HashedNgramEmbedding final : public EmbeddingProvider {
 public:
  explicit HashedNgramEmbedding(std::size_t dimension = 256);
  std::string name() const override { return "hashed-ngram"; }
  std::size_t dimension() const override { return dimension_; }
  Eigen::MatrixXd embed(std::span<const EmbeddingInput> inputs) const override;
  Eigen::VectorXd embed_one(std::string_view text) const;

 private:
  std::size_t dimension_;
};

/// Precomputed vectors: header `dimension=D`, then `tweet_id<TAB>v1,...,vD`.
class FileEmbedding final : public EmbeddingProvider {
 public:
  static FileEmbedding load(const std::string& path);
  static FileEmbedding parse(std::string_view content);
  std::string name() const override { return "file"; }
  std::size_t dimension() const override { return dimension_; }
  /// Throws ProviderError listing every tweet id without a vector.
  Eigen::MatrixXd embed(std::span<const EmbeddingInput> inputs) const override;

 private:
  std::size_t dimension_ = 0;
  std::unordered_map<std::string, Eigen::VectorXd> vectors_;
};

// ---------------------------------------------------------------------------
// Sentiment

enum class Sentiment { Positive, Negative, Neutral };

std::string_view to_string(Sentiment s);
Sentiment parse_sentiment(std::string_view label);

class SentimentProvider {
 public:
  virtual ~SentimentProvider() = default;
  virtual std::string name() const = 0;
  virtual Sentiment classify(const TweetRecord& tweet) const = 0;
};

/// Sign of (positive hits - negative hits) against the bundled lexicon.
/// Languages without a lexicon are neutral (with a warning).
Sentiment classify_sentiment(std::string_view text, std::string_view lang);

class LexiconSentiment final : public SentimentProvider {
 public:
  std::string name() const override { return "lexicon"; }
  Sentiment classify(const TweetRecord& tweet) const override {
    return classify_sentiment(tweet.text, tweet.lang);
  }
};

/// `tweet_id<TAB>label` with labels positive/negative/neutral.
class FileSentiment final : public SentimentProvider {
 public:
  static FileSentiment load(const std::string& path);
  static FileSentiment parse(std::string_view content);
  std::string name() const override { return "file"; }
  /// Throws ProviderError for tweets without a label.
  Sentiment classify(const TweetRecord& tweet) const override;

 private:
  std::unordered_map<std::string, Sentiment> labels_;
};

// ---------------------------------------------------------------------------
// Topics

struct TopicAssignment {
  std::string user_id;
  std::string topic;
  bool operator==(const TopicAssignment&) const = default;
};

inline constexpr std::string_view kOtherTopic = "other";

class TopicProvider {
 public:
  virtual ~TopicProvider() = default;
  virtual std::string name() const = 0;
  /// At most one assignment per requested user, in request order.
  virtual std::vector<TopicAssignment> assign(const Corpus& corpus,
                                              std::span<const std::string> users) const = 0;
};

/// A user's topic is, among their hashtags that rank in the corpus-wide top
/// `top_k`, the one with the highest corpus-wide frequency (ties broken
/// lexicographically). Users with no such hashtag get "other".
class HashtagTopics final : public TopicProvider {
 public:
  explicit HashtagTopics(std::size_t top_k = 50) : top_k_(top_k) {}
  std::string name() const override { return "hashtag"; }
  std::vector<TopicAssignment> assign(const Corpus& corpus,
                                      std::span<const std::string> users) const override;

 private:
  std::size_t top_k_;
};

/// `user_id<TAB>topic`. Fails when fewer than half the requested users have
/// a label; unlabeled users are left out of the result.
class FileTopics final : public TopicProvider {
 public:
  static FileTopics load(const std::string& path);
  static FileTopics parse(std::string_view content);
  std::string name() const override { return "file"; }
  std::vector<TopicAssignment> assign(const Corpus& corpus,
                                      std::span<const std::string> users) const override;

 private:
  std::unordered_map<std::string, std::string> topics_;
};

std::vector<TopicAssignment> assign_topics(const Corpus& corpus, std::span<const std::string> users,
                                           const TopicProvider& provider);

}  // namespace coordnet
