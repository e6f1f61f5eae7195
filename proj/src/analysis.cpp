#include "coordnet/analysis.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "coordnet/dismantle.hpp"
#include "coordnet/error.hpp"
#include "coordnet/text.hpp"

namespace coordnet {

std::string_view to_string(Factuality f) {
  switch (f) {
    case Factuality::VeryLow: return "very low";
    case Factuality::Low: return "low";
    case Factuality::Mixed: return "mixed";
    case Factuality::High: return "high";
    case Factuality::VeryHigh: return "very high";
    case Factuality::NA: return "NA";
  }
  return "NA";
}

std::string_view to_string(Leaning l) {
  switch (l) {
    case Leaning::Left: return "left";
    case Leaning::LeftCenter: return "left-center";
    case Leaning::LeastBiased: return "least biased";
    case Leaning::RightCenter: return "right-center";
    case Leaning::Right: return "right";
    case Leaning::NA: return "NA";
  }
  return "NA";
}

Factuality parse_factuality(std::string_view s) {
  for (auto f : {Factuality::VeryLow, Factuality::Low, Factuality::Mixed, Factuality::High, Factuality::VeryHigh,
                 Factuality::NA}) {
    if (text::to_lower(s) == text::to_lower(to_string(f))) return f;
  }
  throw DataError("unknown factuality '" + std::string(s) + "'");
}

Leaning parse_leaning(std::string_view s) {
  for (auto l : {Leaning::Left, Leaning::LeftCenter, Leaning::LeastBiased, Leaning::RightCenter, Leaning::Right,
                 Leaning::NA}) {
    if (text::to_lower(s) == text::to_lower(to_string(l))) return l;
  }
  throw DataError("unknown leaning '" + std::string(s) + "'");
}

MbfcTable MbfcTable::parse(std::string_view csv) {
  MbfcTable table;
  std::istringstream in{std::string(csv)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (lineno == 1 && !f.empty() && f[0] == "domain") continue;
    if (f.size() != 3) throw DataError("MBFC line " + std::to_string(lineno) + ": expected domain,factuality,leaning");
    MbfcRecord r;
    r.domain = text::to_lower(f[0]);
    if (auto base = try_extract_base_domain("https://" + r.domain); !base || *base != r.domain) {
      throw DataError("MBFC line " + std::to_string(lineno) + ": '" + f[0] + "' is not a base domain");
    }
    r.factuality = parse_factuality(f[1]);
    r.leaning = parse_leaning(f[2]);
    table.records_[r.domain] = r;
  }
  return table;
}

MbfcTable MbfcTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read MBFC file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const MbfcRecord* MbfcTable::find(std::string_view domain) const {
  auto it = records_.find(domain);
  return it == records_.end() ? nullptr : &it->second;
}

DriverSet select_drivers(const SimilarityGraph& graph, double percentile, std::string network) {
  if (!(percentile > 0.0 && percentile < 1.0)) throw ConfigError("driver percentile must lie in (0, 1)");
  if (graph.empty()) throw DataError("cannot select drivers from an empty graph");
  const auto centrality = eigenvector_centrality(graph);
  std::vector<std::size_t> order(graph.node_count());
  std::iota(order.begin(), order.end(), 0);
  // Node order is user-id order, so a stable sort breaks ties by user id.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return centrality.scores[static_cast<Eigen::Index>(a)] > centrality.scores[static_cast<Eigen::Index>(b)];
  });
  const std::size_t k = std::min(graph.node_count(), ceil_fraction(percentile, graph.node_count()));
  DriverSet d;
  d.network = std::move(network);
  d.percentile = percentile;
  for (std::size_t i = 0; i < k; ++i) {
    d.users.push_back(graph.user(static_cast<NodeId>(order[i])));
    d.scores.push_back(centrality.scores[static_cast<Eigen::Index>(order[i])]);
  }
  return d;
}

std::vector<EntityRow> top_entities(const Corpus& corpus, std::span<const std::string> users, EntityKind kind,
                                    std::size_t k, const DomainFilterList& filter, const MbfcTable* mbfc) {
  if (k == 0) throw ConfigError("k must be at least 1");
  std::map<std::string, std::size_t> freq;
  for (const auto& user : std::set<std::string>(users.begin(), users.end())) {
    for (auto i : corpus.tweets_of(user)) {
      const auto& r = corpus[i];
      if (kind == EntityKind::Hashtags) {
        for (const auto& tag : r.hashtags) ++freq[tag];
      } else {
        for (auto& d : filter_domains(r.urls, filter).domains) ++freq[d];
      }
    }
  }
  std::vector<EntityRow> rows;
  for (const auto& [entity, count] : freq) rows.push_back({entity, count});
  std::stable_sort(rows.begin(), rows.end(), [](const EntityRow& a, const EntityRow& b) { return a.count > b.count; });
  if (rows.size() > k) rows.resize(k);
  if (kind == EntityKind::Domains && mbfc) {
    for (auto& row : rows) {
      if (const auto* rec = mbfc->find(row.entity)) {
        row.factuality = rec->factuality;
        row.leaning = rec->leaning;
      }
    }
  }
  return rows;
}

EngagementStats engagement_stats(const Corpus& corpus, std::span<const std::string> users) {
  EngagementStats s;
  double likes = 0, retweets = 0, quotes = 0, replies = 0;
  for (const auto& user : std::set<std::string>(users.begin(), users.end())) {
    for (auto i : corpus.tweets_of(user)) {
      const auto& r = corpus[i];
      likes += static_cast<double>(r.like_count);
      retweets += static_cast<double>(r.retweet_count);
      quotes += static_cast<double>(r.quote_count);
      replies += static_cast<double>(r.reply_count);
      ++s.tweets;
    }
  }
  if (s.tweets == 0) throw DataError("engagement stats need at least one tweet");
  const double n = static_cast<double>(s.tweets);
  s.avg_likes = likes / n;
  s.avg_retweets = retweets / n;
  s.avg_quotes = quotes / n;
  s.avg_replies = replies / n;
  return s;
}

std::vector<std::string> find_bilingual_users(const Corpus& corpus, std::string_view lang_a, std::string_view lang_b,
                                              std::size_t min_tweets_each) {
  if (min_tweets_each < 1) throw ConfigError("min_tweets_each must be at least 1");
  std::vector<std::string> out;
  for (const auto& [user, indices] : corpus.user_index()) {
    std::size_t a = 0, b = 0;
    for (auto i : indices) {
      if (corpus[i].lang == lang_a) ++a;
      if (corpus[i].lang == lang_b) ++b;
    }
    if (a >= min_tweets_each && b >= min_tweets_each) out.push_back(user);
  }
  return out;
}

OverlapReport driver_language_overlap(std::span<const std::string> drivers_a, std::span<const std::string> drivers_b,
                                      std::span<const std::string> bilinguals) {
  const std::set<std::string> a(drivers_a.begin(), drivers_a.end());
  const std::set<std::string> b(drivers_b.begin(), drivers_b.end());
  const std::set<std::string> bi(bilinguals.begin(), bilinguals.end());
  OverlapReport r;
  r.drivers_a = a.size();
  r.drivers_b = b.size();
  std::set_intersection(a.begin(), a.end(), bi.begin(), bi.end(), std::back_inserter(r.bilingual_a));
  std::set_intersection(b.begin(), b.end(), bi.begin(), bi.end(), std::back_inserter(r.bilingual_b));
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.shared));
  return r;
}

SentimentTimeline sentiment_timeline(const Corpus& corpus, std::span<const std::string> users,
                                     const SentimentProvider& provider, int year_from, int year_to) {
  SentimentTimeline t;
  for (const auto& user : std::set<std::string>(users.begin(), users.end())) {
    for (auto i : corpus.tweets_of(user)) {
      const auto& r = corpus[i];
      const int year = year_of(r.created_at);
      if (year < year_from || year > year_to) {
        ++t.excluded;
        continue;
      }
      auto& c = t.months[month_label(r.created_at)];
      switch (provider.classify(r)) {
        case Sentiment::Positive: ++c.positive; break;
        case Sentiment::Negative: ++c.negative; break;
        case Sentiment::Neutral: ++c.neutral; break;
      }
    }
  }
  return t;
}

std::map<std::string, std::map<std::string, std::size_t>> topic_timeline(const Corpus& corpus,
                                                                         std::span<const std::string> users,
                                                                         const TopicProvider& provider, int year_from,
                                                                         int year_to) {
  std::map<std::string, std::vector<std::size_t>> by_month;
  for (const auto& user : std::set<std::string>(users.begin(), users.end())) {
    for (auto i : corpus.tweets_of(user)) {
      const int year = year_of(corpus[i].created_at);
      if (year >= year_from && year <= year_to) by_month[month_label(corpus[i].created_at)].push_back(i);
    }
  }
  std::map<std::string, std::map<std::string, std::size_t>> out;
  for (auto& [month, indices] : by_month) {
    const Corpus slice = corpus.subset(indices);
    const auto active = slice.users();
    for (const auto& a : provider.assign(slice, active)) ++out[month][a.topic];
  }
  return out;
}

}  // namespace coordnet
