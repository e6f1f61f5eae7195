#pragma once

#include <string>
#include <vector>

#include "coordnet/ingest.hpp"
#include "coordnet/timeutil.hpp"

namespace fixture {

inline coordnet::Timestamp at(const std::string& iso) {
  auto t = coordnet::parse_timestamp(iso);
  if (!t) throw std::runtime_error("bad fixture timestamp " + iso);
  return *t;
}

struct Tweet {
  std::string id;
  std::string user;
  std::string when = "2024-03-01T12:00:00Z";
  std::string lang = "en";
  std::string text = "placeholder text";
  std::vector<std::string> hashtags{};
  std::vector<std::string> urls{};
};

inline coordnet::TweetRecord make(const Tweet& t) {
  coordnet::TweetRecord r;
  r.tweet_id = t.id;
  r.user_id = t.user;
  r.created_at = at(t.when);
  r.lang = t.lang;
  r.text = t.text;
  r.hashtags = t.hashtags;
  r.urls = t.urls;
  return r;
}

inline coordnet::Corpus corpus(const std::vector<Tweet>& tweets) {
  std::vector<coordnet::TweetRecord> records;
  for (const auto& t : tweets) records.push_back(make(t));
  return coordnet::Corpus(std::move(records));
}

}  // namespace fixture
