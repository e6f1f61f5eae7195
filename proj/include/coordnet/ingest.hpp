#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coordnet/timeutil.hpp"

namespace coordnet {

struct TweetRecord {
  std::string tweet_id;
  std::string user_id;
  Timestamp created_at{};
  std::string lang;
  std::string text;
  std::vector<std::string> hashtags;
  std::vector<std::string> urls;
  std::uint64_t like_count = 0;
  std::uint64_t retweet_count = 0;
  std::uint64_t quote_count = 0;
  std::uint64_t reply_count = 0;
  bool is_retweet = false;

  bool operator==(const TweetRecord&) const = default;
};

/// Immutable, indexed collection of records in input order.
class Corpus {
 public:
  using Index = std::map<std::string, std::vector<std::size_t>, std::less<>>;

  Corpus() = default;
  /// Throws DataError on empty or duplicate tweet ids.
  explicit Corpus(std::vector<TweetRecord> records);

  const std::vector<TweetRecord>& records() const { return records_; }
  const TweetRecord& operator[](std::size_t i) const { return records_[i]; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  const Index& lang_index() const { return lang_index_; }
  const Index& user_index() const { return user_index_; }

  /// Record indices of one user / language; empty span when absent.
  std::span<const std::size_t> tweets_of(std::string_view user_id) const;
  std::span<const std::size_t> tweets_in(std::string_view lang) const;

  /// Sorted distinct user ids.
  std::vector<std::string> users() const;

  /// Records at `indices`, kept in corpus order.
  Corpus subset(std::vector<std::size_t> indices) const;
  Corpus filter_lang(std::string_view lang) const;

  bool operator==(const Corpus& other) const { return records_ == other.records_; }

 private:
  std::vector<TweetRecord> records_;
  Index lang_index_;
  Index user_index_;
};

/// Maps canonical field names to source keys. Source keys may be dotted
/// paths into nested objects, e.g. `public_metrics.like_count`.
struct SchemaConfig {
  std::map<std::string, std::string> field_map;
  /// Records created after this instant are treated as malformed.
  std::optional<Timestamp> horizon;
  double max_malformed_fraction = 0.5;

  std::string key_for(const std::string& field) const;
};

struct ParseResult {
  Corpus corpus;
  std::size_t lines = 0;    // non-blank lines seen
  std::size_t skipped = 0;  // malformed lines
  std::map<std::string, std::size_t> skip_reasons;
};

/// Parses line-delimited JSON records. Malformed lines are skipped and
/// counted; more than `max_malformed_fraction` malformed is a DataError.
ParseResult parse_corpus(std::istream& in, const SchemaConfig& schema = {});
ParseResult parse_corpus_file(const std::string& path, const SchemaConfig& schema = {});

/// One canonical JSON line (no trailing newline) in the input schema.
std::string to_json_line(const TweetRecord& record);
void write_corpus(std::ostream& out, const Corpus& corpus);

/// Restricts to `lang_a` and `lang_b`, then downsamples the larger language
/// (uniformly, seeded) to the smaller language's count within the smaller
/// language's time span.
Corpus balanced_sample(const Corpus& corpus, std::string_view lang_a, std::string_view lang_b,
                       std::uint64_t seed);

}  // namespace coordnet
