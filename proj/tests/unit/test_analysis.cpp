#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "coordnet/analysis.hpp"
#include "coordnet/error.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace coordnet;

namespace {

// n nodes as disjoint pairs (plus one isolate when n is odd).
SimilarityGraph pairs(int n) {
  std::vector<std::string> nodes;
  std::vector<UserEdge> edges;
  for (int i = 0; i < n; ++i) nodes.push_back("u" + std::to_string(i));
  for (int i = 0; i + 1 < n; i += 2) edges.push_back({nodes[i], nodes[i + 1], 1.0});
  return SimilarityGraph::from_edges(nodes, edges);
}

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("driver counts follow the ceil rule") {
  CHECK(select_drivers(pairs(100), 0.03).users.size() == 3);
  // 72 English drivers at 3% and 61 Spanish drivers at 5%.
  for (int n : {2367, 2400}) CHECK(select_drivers(pairs(n), 0.03).users.size() == 72);
  CHECK(select_drivers(pairs(2366), 0.03).users.size() == 71);
  for (int n : {1201, 1220}) CHECK(select_drivers(pairs(n), 0.05).users.size() == 61);
  CHECK(select_drivers(pairs(1200), 0.05).users.size() == 60);
  CHECK_THROWS_AS(select_drivers(SimilarityGraph{}, 0.05), DataError);
}

TEST_CASE("driver ties go to the smallest user ids") {
  std::vector<UserEdge> pairs;
  for (int i = 0; i < 10; i += 2) pairs.push_back({oracle::node_name(9 - i), oracle::node_name(8 - i), 1.0});
  auto d = select_drivers(SimilarityGraph::from_edges({}, pairs), 0.2, "fused");
  CHECK(d.users == std::vector<std::string>{"n000", "n001"});
  CHECK(d.network == "fused");
  CHECK(d.scores == std::vector<double>{1.0, 1.0});

  oracle::DenseGraph star{4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}}};
  auto s = select_drivers(oracle::to_graph(star), 0.25);
  CHECK(s.users == std::vector<std::string>{"n000"});
}

TEST_CASE("drivers are invariant under uniform weight scaling") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    auto d = oracle::random_graph(rng, 60, 0.08);
    auto scaled = d;
    const double factor = 0.01 + 10.0 * static_cast<double>(rng() % 1000) / 1000.0;
    for (auto& e : scaled.edges) e.w *= factor;
    for (double pct : {0.03, 0.05, 0.2}) {
      auto a = select_drivers(oracle::to_graph(d), pct);
      auto b = select_drivers(oracle::to_graph(scaled), pct);
      CHECK(sorted(a.users) == sorted(b.users));
    }
  }
}

TEST_CASE("top entities") {
  auto c = fixture::corpus({
      {.id = "1", .user = "d1", .hashtags = {"trump2024", "maga"}, .urls = {"https://www.foxnews.com/a"}},
      {.id = "2", .user = "d1", .hashtags = {"trump2024"}, .urls = {"https://x.com/b", "https://nodata.org/"}},
      {.id = "3", .user = "d2", .hashtags = {"trump2024", "biden"}, .urls = {"https://foxnews.com/c"}},
      {.id = "4", .user = "other", .hashtags = {"biden", "biden", "biden", "biden"}},
  });
  std::vector<std::string> drivers{"d1", "d2"};
  auto tags = top_entities(c, drivers, EntityKind::Hashtags, 10);
  REQUIRE(tags.size() == 3);
  CHECK(tags[0].entity == "trump2024");
  CHECK(tags[0].count == 3);
  CHECK(tags[1].entity == "biden");
  CHECK(tags[2].entity == "maga");
  CHECK(top_entities(c, drivers, EntityKind::Hashtags, 1).size() == 1);

  auto mbfc = MbfcTable::parse("domain,factuality,leaning\nfoxnews.com,mixed,right\n");
  auto doms = top_entities(c, drivers, EntityKind::Domains, 10, DomainFilterList::defaults("en"), &mbfc);
  REQUIRE(doms.size() == 2);
  CHECK(doms[0].entity == "foxnews.com");
  CHECK(doms[0].count == 2);
  CHECK(doms[0].factuality == Factuality::Mixed);
  CHECK(doms[0].leaning == Leaning::Right);
  CHECK(doms[1].entity == "nodata.org");
  CHECK(doms[1].factuality == Factuality::NA);
  CHECK(doms[1].leaning == Leaning::NA);

  std::vector<std::string> nobody{"ghost"};
  CHECK(top_entities(c, nobody, EntityKind::Hashtags, 10).empty());
}

TEST_CASE("top entity counts never exceed occurrences") {
  std::mt19937_64 rng(90);
  std::vector<fixture::Tweet> tweets;
  for (int i = 0; i < 300; ++i) {
    fixture::Tweet t{.id = std::to_string(i), .user = "u" + std::to_string(rng() % 20)};
    for (int k = static_cast<int>(rng() % 4); k > 0; --k) t.hashtags.push_back("h" + std::to_string(rng() % 15));
    tweets.push_back(t);
  }
  auto c = fixture::corpus(tweets);
  std::vector<std::string> users{"u1", "u3", "u5", "u7"};
  std::size_t total = 0;
  for (const auto& u : users) {
    for (auto i : c.tweets_of(u)) total += c[i].hashtags.size();
  }
  for (std::size_t k : {1, 3, 50}) {
    auto rows = top_entities(c, users, EntityKind::Hashtags, k);
    std::size_t sum = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      sum += rows[i].count;
      if (i > 0) {
        CHECK(rows[i - 1].count >= rows[i].count);
        if (rows[i - 1].count == rows[i].count) CHECK(rows[i - 1].entity < rows[i].entity);
      }
    }
    CHECK(sum <= total);
    CHECK(rows.size() <= k);
  }
}

TEST_CASE("engagement stats") {
  auto one = fixture::make({.id = "1", .user = "a"});
  one.like_count = 10;
  one.retweet_count = 2;
  one.reply_count = 1;
  auto s = engagement_stats(Corpus({one}), std::vector<std::string>{"a"});
  CHECK(s.avg_likes == 10);
  CHECK(s.avg_retweets == 2);
  CHECK(s.avg_quotes == 0);
  CHECK(s.avg_replies == 1);

  auto t1 = fixture::make({.id = "1", .user = "a"});
  auto t2 = fixture::make({.id = "2", .user = "b"});
  t1.like_count = 10;
  t2.retweet_count = 10;
  auto two = engagement_stats(Corpus({t1, t2}), std::vector<std::string>{"a", "b"});
  CHECK(two.avg_likes == 5);
  CHECK(two.avg_retweets == 5);
  CHECK(two.tweets == 2);
  CHECK_THROWS_AS(engagement_stats(Corpus({t1}), std::vector<std::string>{"zz"}), DataError);

  std::mt19937_64 rng(1);
  std::vector<TweetRecord> records;
  for (int i = 0; i < 500; ++i) {
    auto r = fixture::make({.id = std::to_string(i), .user = "u" + std::to_string(rng() % 10)});
    r.like_count = rng() % 1000;
    r.retweet_count = rng() % 100;
    r.quote_count = rng() % 10;
    r.reply_count = rng() % 50;
    records.push_back(r);
  }
  Corpus c(records);
  std::vector<std::string> users{"u0", "u2", "u4"};
  double likes = 0, rts = 0, quotes = 0, replies = 0, n = 0;
  for (const auto& r : records) {
    if (r.user_id != "u0" && r.user_id != "u2" && r.user_id != "u4") continue;
    likes += static_cast<double>(r.like_count);
    rts += static_cast<double>(r.retweet_count);
    quotes += static_cast<double>(r.quote_count);
    replies += static_cast<double>(r.reply_count);
    n += 1;
  }
  auto e = engagement_stats(c, users);
  CHECK(e.avg_likes == doctest::Approx(likes / n));
  CHECK(e.avg_retweets == doctest::Approx(rts / n));
  CHECK(e.avg_quotes == doctest::Approx(quotes / n));
  CHECK(e.avg_replies == doctest::Approx(replies / n));
}

TEST_CASE("bilingual users") {
  auto c = fixture::corpus({
      {.id = "1", .user = "both", .lang = "en"},
      {.id = "2", .user = "both", .lang = "es"},
      {.id = "3", .user = "mono", .lang = "en"},
      {.id = "4", .user = "mono", .lang = "en"},
      {.id = "5", .user = "tilted", .lang = "en"},
      {.id = "6", .user = "tilted", .lang = "en"},
      {.id = "7", .user = "tilted", .lang = "es"},
  });
  auto b1 = find_bilingual_users(c, "en", "es", 1);
  CHECK(b1 == std::vector<std::string>{"both", "tilted"});
  CHECK(find_bilingual_users(c, "en", "es", 2).empty());

  std::mt19937_64 rng(6);
  std::vector<fixture::Tweet> tweets;
  for (int i = 0; i < 400; ++i) {
    tweets.push_back({.id = std::to_string(i), .user = "u" + std::to_string(rng() % 40), .lang = rng() % 2 ? "en" : "es"});
  }
  auto rc = fixture::corpus(tweets);
  std::vector<std::string> prev = find_bilingual_users(rc, "en", "es", 1);
  for (std::size_t t = 2; t < 10; ++t) {
    auto cur = find_bilingual_users(rc, "en", "es", t);
    CHECK(std::includes(prev.begin(), prev.end(), cur.begin(), cur.end()));
    prev = cur;
  }
}

TEST_CASE("driver language overlap") {
  std::vector<std::string> a{"a1", "a2", "s"};
  std::vector<std::string> b{"b1", "s"};
  std::vector<std::string> bi{"a2", "s", "x"};
  auto r = driver_language_overlap(a, b, bi);
  CHECK(r.drivers_a == 3);
  CHECK(r.drivers_b == 2);
  CHECK(r.bilingual_a == std::vector<std::string>{"a2", "s"});
  CHECK(r.bilingual_b == std::vector<std::string>{"s"});
  CHECK(r.shared == std::vector<std::string>{"s"});

  std::vector<std::string> none;
  auto d = driver_language_overlap(a, b, none);
  CHECK(d.bilingual_a.empty());
  std::vector<std::string> all{"a1", "a2", "s"};
  CHECK(driver_language_overlap(a, none, all).bilingual_a.size() == 3);

  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> x, y, z;
    for (int i = 0; i < 30; ++i) {
      const auto id = "u" + std::to_string(i);
      if (rng() % 3 == 0) x.push_back(id);
      if (rng() % 3 == 0) y.push_back(id);
      if (rng() % 2 == 0) z.push_back(id);
    }
    auto o = driver_language_overlap(x, y, z);
    std::set<std::string> sx(x.begin(), x.end()), sy(y.begin(), y.end()), sz(z.begin(), z.end());
    std::vector<std::string> want_a, want_shared;
    for (const auto& u : sx) {
      if (sz.count(u)) want_a.push_back(u);
      if (sy.count(u)) want_shared.push_back(u);
    }
    CHECK(o.bilingual_a == want_a);
    CHECK(o.shared == want_shared);
  }
}

TEST_CASE("sentiment timeline") {
  auto labels = FileSentiment::parse("1\tpositive\n2\tpositive\n3\tpositive\n4\tnegative\n5\tneutral\n");
  auto c = fixture::corpus({
      {.id = "1", .user = "a", .when = "2024-03-01T00:00:00Z"},
      {.id = "2", .user = "a", .when = "2024-03-15T00:00:00Z"},
      {.id = "3", .user = "b", .when = "2024-03-31T23:59:59Z"},
      {.id = "4", .user = "a", .when = "2023-12-31T23:59:59Z"},
      {.id = "5", .user = "z", .when = "2024-05-01T00:00:00Z"},
  });
  std::vector<std::string> users{"a", "b"};
  auto t = sentiment_timeline(c, users, labels);
  CHECK(t.months.size() == 1);
  CHECK(t.months["2024-03"] == SentimentCounts{3, 0, 0});
  CHECK(t.excluded == 1);

  std::mt19937_64 rng(21);
  std::vector<fixture::Tweet> tweets;
  std::string lines;
  std::map<std::string, SentimentCounts> want;
  std::size_t excluded = 0;
  const char* names[] = {"positive", "negative", "neutral"};
  for (int i = 0; i < 300; ++i) {
    const int year = 2023 + static_cast<int>(rng() % 3);
    const int month = 1 + static_cast<int>(rng() % 12);
    char when[32];
    std::snprintf(when, sizeof when, "%d-%02d-10T00:00:00Z", year, month);
    const auto user = "u" + std::to_string(rng() % 5);
    const int label = static_cast<int>(rng() % 3);
    tweets.push_back({.id = std::to_string(i), .user = user, .when = when});
    lines += std::to_string(i) + "\t" + names[label] + "\n";
    if (user == "u4") continue;
    if (year != 2024) {
      ++excluded;
      continue;
    }
    char key[8];
    std::snprintf(key, sizeof key, "%d-%02d", year, month);
    auto& s = want[key];
    (label == 0 ? s.positive : label == 1 ? s.negative : s.neutral) += 1;
  }
  auto rc = fixture::corpus(tweets);
  auto rl = FileSentiment::parse(lines);
  std::vector<std::string> some{"u0", "u1", "u2", "u3"};
  auto got = sentiment_timeline(rc, some, rl);
  CHECK(got.months == want);
  CHECK(got.excluded == excluded);
}

TEST_CASE("topic timeline") {
  auto c = fixture::corpus({
      {.id = "1", .user = "a", .when = "2024-01-05T00:00:00Z", .hashtags = {"econ"}},
      {.id = "2", .user = "b", .when = "2024-01-06T00:00:00Z", .hashtags = {"econ"}},
      {.id = "3", .user = "a", .when = "2024-02-05T00:00:00Z", .hashtags = {"border"}},
      {.id = "4", .user = "b", .when = "2022-02-05T00:00:00Z", .hashtags = {"border"}},
  });
  std::vector<std::string> users{"a", "b"};
  HashtagTopics topics(10);
  auto t = topic_timeline(c, users, topics);
  CHECK(t["2024-01"]["econ"] == 2);
  CHECK(t["2024-02"]["border"] == 1);
  CHECK(t.size() == 2);
}

TEST_CASE("mbfc parsing") {
  auto t = MbfcTable::parse("foxnews.com,mixed,right\nbbc.co.uk,high,left-center\n");
  CHECK(t.size() == 2);
  REQUIRE(t.find("bbc.co.uk") != nullptr);
  CHECK(t.find("bbc.co.uk")->leaning == Leaning::LeftCenter);
  CHECK(t.find("cnn.com") == nullptr);
  CHECK(parse_factuality("very high") == Factuality::VeryHigh);
  CHECK(to_string(Factuality::NA) == "NA");
  CHECK_THROWS(MbfcTable::parse("foxnews.com,mixed\n"));
}
