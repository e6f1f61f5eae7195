#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "coordnet/error.hpp"
#include "coordnet/synth.hpp"
#include "coordnet/text.hpp"
#include "coordnet/timeutil.hpp"
#include "coordnet/traces.hpp"
#include "fixtures.hpp"

using namespace coordnet;

namespace {

CampaignSpec small_spec(std::size_t groups, std::uint64_t seed = 3) {
  auto s = CampaignSpec::default_spec();
  s.n_organic = 120;
  s.groups.resize(groups);
  s.seed = seed;
  return s;
}

std::string serialize(const Corpus& c) {
  std::ostringstream out;
  write_corpus(out, c);
  return out.str();
}

std::set<std::string> domains_of(const Corpus& c, const std::string& user) {
  std::set<std::string> out;
  for (auto i : c.tweets_of(user)) {
    for (const auto& u : c[i].urls) {
      if (auto d = try_extract_base_domain(u)) out.insert(*d);
    }
  }
  return out;
}

std::size_t token_edit_distance(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

}  // namespace

TEST_CASE("spec validation") {
  auto s = CampaignSpec::default_spec();
  CHECK_NOTHROW(s.validate());
  CHECK(s.groups.size() == 3);
  auto tiny = s;
  tiny.groups[0].size = 1;
  CHECK_THROWS_AS(tiny.validate(), ConfigError);
  auto greedy = s;
  greedy.groups[0].entity_pool_size = greedy.domain_pool_size + 1;
  CHECK_THROWS_AS(greedy.validate(), ConfigError);
  auto empty_span = s;
  empty_span.end = empty_span.start;
  CHECK_THROWS_AS(empty_span.validate(), ConfigError);
  CHECK(parse_coordination("near_duplicate_text") == Coordination::NearDuplicateText);
  CHECK_THROWS(parse_coordination("images"));
}

TEST_CASE("no groups means everyone is organic") {
  auto out = generate(small_spec(0));
  CHECK(out.truth.group_count() == 0);
  CHECK(out.truth.group.size() == 120);
  for (const auto& [_, g] : out.truth.group) CHECK(g == -1);
  CHECK(out.truth.group.size() == out.corpus.users().size());
}

TEST_CASE("generation is deterministic per seed") {
  auto a = generate(small_spec(2, 11));
  auto b = generate(small_spec(2, 11));
  CHECK(serialize(a.corpus) == serialize(b.corpus));
  CHECK(a.truth.group == b.truth.group);
  auto c = generate(small_spec(2, 12));
  CHECK(serialize(a.corpus) != serialize(c.corpus));
}

TEST_CASE("generated corpus round-trips through the input format") {
  auto out = generate(small_spec(1));
  std::istringstream in(serialize(out.corpus));
  auto back = parse_corpus(in);
  CHECK(back.skipped == 0);
  CHECK(back.corpus == out.corpus);
}

TEST_CASE("domain-coordinated members share at least three domains") {
  auto spec = small_spec(1);
  spec.groups[0].size = 5;
  spec.groups[0].entity_pool_size = 4;
  spec.groups[0].kinds = {Coordination::Domains};
  auto out = generate(spec);
  auto members = out.truth.members(0);
  REQUIRE(members.size() == 5);
  for (const auto& m : members) {
    auto mine = domains_of(out.corpus, m);
    std::set<std::string> others;
    for (const auto& o : members) {
      if (o == m) continue;
      auto d = domains_of(out.corpus, o);
      others.insert(d.begin(), d.end());
    }
    std::size_t shared = 0;
    for (const auto& d : mine) shared += others.count(d);
    CHECK(shared >= 3);
  }
  auto m = build_user_entity_matrix(out.corpus, TraceKind::CoDomain, 3, 3, {DomainFilterList::defaults("en")});
  for (const auto& u : members) CHECK(std::binary_search(m.users.begin(), m.users.end(), u));
}

TEST_CASE("coordinated posts sit inside bursts") {
  auto spec = small_spec(3, 5);
  auto out = generate(spec);
  for (int g = 0; g < 3; ++g) {
    const auto members = out.truth.members(g);
    const auto window = spec.groups[static_cast<std::size_t>(g)].burst_window;
    // The slogan tag marks every coordinated post of the group.
    std::vector<std::size_t> posts;
    for (const auto& u : members) {
      for (auto i : out.corpus.tweets_of(u)) {
        if (!out.corpus[i].hashtags.empty()) posts.push_back(i);
      }
    }
    REQUIRE(posts.size() >= 2 * spec.groups[static_cast<std::size_t>(g)].bursts);
    for (auto i : posts) {
      bool near = false;
      for (auto j : posts) {
        if (out.corpus[i].user_id == out.corpus[j].user_id) continue;
        auto d = out.corpus[i].created_at - out.corpus[j].created_at;
        if (d < std::chrono::seconds{0}) d = -d;
        if (d <= window) {
          near = true;
          break;
        }
      }
      CHECK(near);
    }
  }
}

TEST_CASE("near-duplicate campaigns differ by a few token edits") {
  auto spec = small_spec(1, 9);
  spec.groups[0].kinds = {Coordination::NearDuplicateText};
  auto out = generate(spec);
  const auto members = out.truth.members(0);
  std::vector<std::size_t> posts;
  for (const auto& u : members) {
    for (auto i : out.corpus.tweets_of(u)) {
      // Background tweets are two clauses; campaign posts are three plus a tag word.
      if (split_words(out.corpus[i].text).size() >= 15) posts.push_back(i);
    }
  }
  REQUIRE(posts.size() >= 2 * spec.groups[0].bursts);
  for (auto i : posts) {
    const auto wi = split_words(out.corpus[i].text);
    std::size_t best = 1000;
    for (auto j : posts) {
      if (out.corpus[i].user_id == out.corpus[j].user_id) continue;
      auto d = out.corpus[i].created_at - out.corpus[j].created_at;
      if (d < std::chrono::seconds{0}) d = -d;
      if (d > spec.groups[0].burst_window) continue;
      best = std::min(best, token_edit_distance(wi, split_words(out.corpus[j].text)));
    }
    CHECK(best <= 4);
  }
}

TEST_CASE("organic users rarely look coordinated on the co-domain trace") {
  auto spec = CampaignSpec::default_spec();
  spec.groups.clear();
  for (std::uint64_t seed : {1, 2, 3}) {
    spec.seed = seed;
    auto out = generate(spec);
    auto m = build_user_entity_matrix(out.corpus, TraceKind::CoDomain, 3, 3, {DomainFilterList::defaults("en")});
    auto g = project_similarity(m, 0.6);
    const double n = static_cast<double>(m.users.size());
    const double pairs = n * (n - 1) / 2;
    CHECK(static_cast<double>(g.edge_count()) / pairs < 0.01);
  }
}

TEST_CASE("score_recovery examples") {
  GroundTruth truth;
  for (const char* u : {"a1", "a2", "a3", "a4"}) truth.group[u] = 0;
  for (const char* u : {"b1", "b2"}) truth.group[u] = 1;
  for (const char* u : {"o1", "o2", "o3"}) truth.group[u] = -1;

  std::map<std::string, int> exact;
  for (const auto& [u, g] : truth.group) {
    if (g >= 0) exact[u] = g + 10;
  }
  auto e = score_recovery(truth, exact);
  CHECK(e.precision == 1.0);
  CHECK(e.recall == 1.0);
  CHECK(e.f1 == 1.0);
  CHECK(e.nmi == doctest::Approx(1.0));
  CHECK_FALSE(e.vacuous);

  auto none = score_recovery(truth, std::map<std::string, int>{});
  CHECK(none.recall == 0.0);
  CHECK(none.precision == 1.0);
  CHECK(none.vacuous);

  std::map<std::string, int> split{{"a1", 0}, {"a2", 0}, {"a3", 1}, {"a4", 1}, {"b1", 2}, {"b2", 2}};
  auto s = score_recovery(truth, split);
  // Planted pairs: 6 + 1. Detected pairs: 1 + 1 + 1, all planted.
  CHECK(s.truth_pairs == 7);
  CHECK(s.detected_pairs == 3);
  CHECK(s.true_positive_pairs == 3);
  CHECK(s.precision == 1.0);
  CHECK(s.recall == doctest::Approx(3.0 / 7));
  CHECK(s.f1 == doctest::Approx(0.6));
  const double ht = -(4.0 / 6 * std::log(4.0 / 6) + 2.0 / 6 * std::log(2.0 / 6));
  const double hd = std::log(3.0);
  CHECK(s.nmi == doctest::Approx(2 * ht / (ht + hd)).epsilon(1e-12));

  std::map<std::string, int> noisy{{"a1", 0}, {"a2", 0}, {"o1", 0}, {"b1", 1}, {"b2", 1}, {"o2", 1}};
  auto n = score_recovery(truth, noisy);
  CHECK(n.detected_pairs == 6);
  CHECK(n.true_positive_pairs == 2);
  CHECK(n.precision == doctest::Approx(2.0 / 6));
  CHECK(n.recall == doctest::Approx(2.0 / 7));

  CHECK_THROWS_AS(score_recovery(truth, std::map<std::string, int>{{"stranger", 0}}), DataError);

  DriverSet d;
  d.users = {"a1", "a2", "a3"};
  auto ds = score_recovery(truth, d);
  CHECK(ds.detected_pairs == 3);
  CHECK(ds.precision == 1.0);
  CHECK(ds.recall == doctest::Approx(3.0 / 7));
}

TEST_CASE("ground truth file round trip") {
  auto out = generate(small_spec(2));
  const auto path = (std::filesystem::temp_directory_path() / "coordnet_truth.tsv").string();
  {
    std::ofstream f(path);
    write_ground_truth(f, out.truth);
  }
  auto back = read_ground_truth_file(path);
  CHECK(back.group == out.truth.group);
  std::ifstream f(path);
  std::string first;
  std::getline(f, first);
  CHECK(first.find('\t') != std::string::npos);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_ground_truth_file(path), IoError);
}
