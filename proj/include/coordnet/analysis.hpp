#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coordnet/domain.hpp"
#include "coordnet/graph.hpp"
#include "coordnet/ingest.hpp"
#include "coordnet/providers.hpp"

namespace coordnet {

enum class Factuality { VeryLow, Low, Mixed, High, VeryHigh, NA };
enum class Leaning { Left, LeftCenter, LeastBiased, RightCenter, Right, NA };

std::string_view to_string(Factuality f);
std::string_view to_string(Leaning l);
Factuality parse_factuality(std::string_view s);
Leaning parse_leaning(std::string_view s);

struct MbfcRecord {
  std::string domain;
  Factuality factuality = Factuality::NA;
  Leaning leaning = Leaning::NA;
};

/// Media annotations loaded from `domain,factuality,leaning` CSV (header optional).
class MbfcTable {
 public:
  static MbfcTable parse(std::string_view csv);
  static MbfcTable load(const std::string& path);
  const MbfcRecord* find(std::string_view domain) const;
  std::size_t size() const { return records_.size(); }

 private:
  std::map<std::string, MbfcRecord, std::less<>> records_;
};

struct DriverSet {
  std::vector<std::string> users;  // by descending centrality, ties by user id
  std::vector<double> scores;
  std::string network;
  double percentile = 0.0;
};

/// The ceil(percentile * n) most central nodes.
DriverSet select_drivers(const SimilarityGraph& graph, double percentile, std::string network = "");

enum class EntityKind { Hashtags, Domains };

struct EntityRow {
  std::string entity;
  std::size_t count = 0;
  Factuality factuality = Factuality::NA;
  Leaning leaning = Leaning::NA;
};

/// Most frequent hashtags or (filtered) base domains in the users' tweets,
/// ties in lexicographic order. Domains are joined against `mbfc` when given.
std::vector<EntityRow> top_entities(const Corpus& corpus, std::span<const std::string> users, EntityKind kind,
                                    std::size_t k, const DomainFilterList& filter = {},
                                    const MbfcTable* mbfc = nullptr);

struct EngagementStats {
  double avg_likes = 0.0;
  double avg_retweets = 0.0;
  double avg_quotes = 0.0;
  double avg_replies = 0.0;
  std::size_t tweets = 0;
};

/// Mean engagement counts over every tweet by `users`. Throws DataError when
/// they have no tweets.
EngagementStats engagement_stats(const Corpus& corpus, std::span<const std::string> users);

/// Users with at least `min_tweets_each` tweets in both languages, sorted.
std::vector<std::string> find_bilingual_users(const Corpus& corpus, std::string_view lang_a,
                                              std::string_view lang_b, std::size_t min_tweets_each = 1);

struct OverlapReport {
  std::size_t drivers_a = 0;
  std::size_t drivers_b = 0;
  std::vector<std::string> bilingual_a;  // sorted
  std::vector<std::string> bilingual_b;  // sorted
  std::vector<std::string> shared;       // drivers in both sets, sorted
};

OverlapReport driver_language_overlap(std::span<const std::string> drivers_a, std::span<const std::string> drivers_b,
                                      std::span<const std::string> bilinguals);

struct SentimentCounts {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t neutral = 0;
  bool operator==(const SentimentCounts&) const = default;
};

struct SentimentTimeline {
  std::map<std::string, SentimentCounts> months;  // "YYYY-MM"
  std::size_t excluded = 0;                       // tweets outside the year range
};

/// Monthly sentiment counts of the users' tweets dated within
/// [year_from, year_to].
SentimentTimeline sentiment_timeline(const Corpus& corpus, std::span<const std::string> users,
                                     const SentimentProvider& provider, int year_from = 2024, int year_to = 2024);

/// Per month, how many of the users active that month fall under each topic,
/// with topics assigned from that month's tweets only.
std::map<std::string, std::map<std::string, std::size_t>> topic_timeline(const Corpus& corpus,
                                                                         std::span<const std::string> users,
                                                                         const TopicProvider& provider,
                                                                         int year_from = 2024, int year_to = 2024);

}  // namespace coordnet
