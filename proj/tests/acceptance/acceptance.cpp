// Acceptance checks: one PASS/FAIL line per criterion.
// Usage: acceptance <coordnet cli> <work dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <sys/wait.h>

#include <json.hpp>

#include "coordnet/analysis.hpp"
#include "coordnet/dismantle.hpp"
#include "coordnet/domain.hpp"
#include "coordnet/evaluate.hpp"
#include "coordnet/graph.hpp"
#include "coordnet/log.hpp"
#include "coordnet/rng.hpp"
#include "coordnet/synth.hpp"
#include "coordnet/timeutil.hpp"
#include "coordnet/traces.hpp"
#include "oracles.hpp"

using namespace coordnet;
namespace fs = std::filesystem;

namespace {

struct Check {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
  }
  bool ok() const { return failures.empty(); }
};

int failed = 0;

void run(int number, const std::string& title, double budget_s, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && secs >= budget_s) {
    c.failures.push_back("took " + std::to_string(secs) + " s, budget " + std::to_string(budget_s) + " s");
  }
  std::ostringstream line;
  line << (c.ok() ? "PASS" : "FAIL") << " criterion " << number << ": " << title << " (" << std::fixed
       << std::setprecision(2) << secs << " s)";
  for (const auto& n : c.notes) line << "; " << n;
  std::cout << line.str() << "\n";
  for (const auto& f : c.failures) std::cout << "    " << f << "\n";
  std::cout.flush();
  if (!c.ok()) ++failed;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

SimilarityGraph fused_graph(const Corpus& corpus, const std::string& lang) {
  EntityOptions entity{DomainFilterList::defaults(lang), false};
  HashedNgramEmbedding embeddings;
  std::vector<SimilarityGraph> traces;
  for (auto kind : {TraceKind::CoDomain, TraceKind::CoHashtag, TraceKind::TextSimilarity}) {
    traces.push_back(build_trace(corpus, TraceConfig::defaults(kind, lang), entity, embeddings, worker_count()));
  }
  return fuse(traces);
}

// ---------------------------------------------------------------------------

void metric_exactness(Check& c) {
  using M = std::map<std::string, double>;
  const double h75 = -(0.75 * std::log(0.75) + 0.25 * std::log(0.25)) / std::log(2.0);
  c.expect(near(cluster_entropy(M{{"a", 0.75}, {"b", 0.25}}), h75, 1e-9), "H(0.75, 0.25)");
  c.expect(near(h75, 0.8113, 1e-4), "0.8113 by hand");
  std::vector<ClusterTopicDistribution> one{{0, 4, {{"a", 0.75}, {"b", 0.25}}}};
  c.expect(near(weighted_entropy(one), h75, 1e-9), "single-cluster weighted entropy");
  std::vector<ClusterTopicDistribution> mixed{{0, 3, {{"a", 0.5}, {"b", 0.5}}}, {1, 1, {{"c", 1.0}}}};
  c.expect(near(weighted_entropy(mixed), 0.75, 1e-9), "weighted entropy 0.75");
  const std::vector<std::string> ab{"a", "b"};
  std::vector<ClusterTopicDistribution> half{{0, 3, {{"a", 1.0}}}, {1, 3, {{"a", 0.5}, {"b", 0.5}}}};
  const double jsd_hand =
      0.5 * std::log2(1 / 0.75) + 0.5 * (0.5 * std::log2(0.5 / 0.75) + 0.5 * std::log2(0.5 / 0.25));
  c.expect(near(pairwise_jsd(half, ab).mean, jsd_hand, 1e-9), "JSD (1,0) vs (0.5,0.5)");
  c.expect(near(jsd_hand, 0.3113, 1e-4), "0.3113 by hand");

  // Hand-built graph: clusters {x x x x y}, {y y z}, and a pair under the size floor.
  oracle::DenseGraph d{10,
                       {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {4, 0, 1}, {5, 6, 1}, {6, 7, 1}, {5, 7, 1},
                        {8, 9, 1}}};
  Partition p{{0, 0, 0, 0, 0, 1, 1, 1, 2, 2}, 0.0, 1.0};
  const char* labels[] = {"x", "x", "x", "x", "y", "y", "y", "z", "q", "q"};
  std::vector<TopicAssignment> topics;
  for (int i = 0; i < 10; ++i) topics.push_back({oracle::node_name(i), labels[i]});
  auto r = evaluate_network(oracle::to_graph(d), p, topics);
  const double ha = -(0.8 * std::log(0.8) + 0.2 * std::log(0.2)) / std::log(2.0);
  const double hb = -(2.0 / 3 * std::log(2.0 / 3) + 1.0 / 3 * std::log(1.0 / 3)) / std::log(2.0);
  c.expect(near(r.h_weighted, (5 * ha + 3 * hb) / 8, 1e-9), "end-to-end H_weighted");
  const double kl_a = 0.8 * std::log2(0.8 / 0.4) + 0.2 * std::log2(0.2 / (13.0 / 30));
  const double kl_b = 2.0 / 3 * std::log2((2.0 / 3) / (13.0 / 30)) + 1.0 / 3 * std::log2((1.0 / 3) / (1.0 / 6));
  c.expect(near(r.mean_jsd, (kl_a + kl_b) / 2, 1e-9), "end-to-end mean JSD");

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_vector = [&](int k) {
    Eigen::VectorXd v(k);
    for (int i = 0; i < k; ++i) v[i] = rng() % 4 == 0 ? 0.0 : unit(rng);
    if (v.sum() == 0) v[0] = 1;
    return (v / v.sum()).eval();
  };
  for (int trial = 0; trial < 10000; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 12);
    const Eigen::VectorXd a = random_vector(k);
    const Eigen::VectorXd b = random_vector(k);
    const double h = normalized_entropy(a);
    const double j = jensen_shannon(a, b);
    c.expect(h >= 0 && h <= 1, "H out of [0,1]");
    c.expect(j >= 0 && j <= 1, "JSD out of [0,1]");
  }
  c.notes.push_back("10000 random vectors");
}

void graph_core(Check& c) {
  std::mt19937_64 rng(8);
  std::size_t partitions = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 7;
    auto d = oracle::random_graph(rng, n, 0.5);
    if (d.edges.empty()) d.edges.push_back({0, 1, 0.5});
    const auto g = oracle::to_graph(d);
    oracle::for_each_partition(n, [&](const std::vector<int>& labels) {
      ++partitions;
      c.expect(near(modularity(g, labels), oracle::modularity(d, labels), 1e-12), "modularity vs pairwise");
    });
  }

  double worst_gap = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial % 6;
    auto d = oracle::random_graph(rng, n, 0.3 + 0.4 * static_cast<double>(trial % 3) / 2);
    if (d.edges.empty()) d.edges.push_back({0, n - 1, 1.0});
    const auto p = louvain(oracle::to_graph(d), 1.0, static_cast<std::uint64_t>(trial));
    const double gap = oracle::best_modularity(d) - p.modularity;
    worst_gap = std::max(worst_gap, gap);
    c.expect(gap <= 0.05, "Louvain more than 0.05 below optimum");
  }

  for (int trial = 0; trial < 20; ++trial) {
    oracle::DenseGraph d;
    std::vector<int> truth;
    const int cliques = 2 + trial % 4;
    for (int k = 0; k < cliques; ++k) {
      const int size = 3 + static_cast<int>(rng() % 4);
      const int base = d.n;
      for (int i = 0; i < size; ++i) {
        truth.push_back(k);
        for (int j = 0; j < i; ++j) d.edges.push_back({base + j, base + i, 1.0});
      }
      d.n += size;
    }
    const auto p = louvain(oracle::to_graph(d), 1.0, static_cast<std::uint64_t>(trial));
    c.expect(p.assignment == truth, "disjoint cliques not recovered");
  }

  double worst_linf = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 49);
    const double density = std::min(1.0, (1.0 + static_cast<double>(rng() % 6)) / n);
    auto d = oracle::random_graph(rng, n, density);
    const auto got = eigenvector_centrality(oracle::to_graph(d));
    const double linf = (got.scores - oracle::centrality(d)).cwiseAbs().maxCoeff();
    worst_linf = std::max(worst_linf, linf);
    c.expect(linf <= 1e-6, "centrality L-inf " + std::to_string(linf));
  }
  c.notes.push_back(std::to_string(partitions) + " partitions");
  std::ostringstream s;
  s << "worst Louvain gap " << worst_gap << ", worst centrality error " << worst_linf;
  c.notes.push_back(s.str());
}

void trace_oracle(Check& c) {
  HashedNgramEmbedding embeddings;
  std::size_t compared = 0;
  struct Case {
    std::uint64_t seed;
    std::string lang;
  };
  for (const auto& [seed, lang] : {Case{1, "en"}, Case{2, "en"}, Case{3, "es"}}) {
    auto spec = CampaignSpec::default_spec();
    spec.n_organic = 170;
    spec.langs = {lang};
    spec.seed = seed;
    spec.groups[2].kinds = {Coordination::NearDuplicateText};
    auto out = generate(spec);
    c.expect(out.corpus.users().size() <= 200, "corpus has more than 200 users");
    const auto filter = DomainFilterList::defaults(lang);
    EntityOptions entity{filter, false};
    for (auto kind : {TraceKind::CoDomain, TraceKind::CoHashtag, TraceKind::TextSimilarity}) {
      const auto cfg = TraceConfig::defaults(kind, lang);
      const auto got = oracle::edge_map(build_trace(out.corpus, cfg, entity, embeddings, worker_count()));
      const auto want =
          kind == TraceKind::TextSimilarity
              ? oracle::text_trace(out.corpus, embeddings, cfg.sim_threshold, cfg.min_tokens)
              : oracle::entity_trace(out.corpus, kind, cfg.min_unique_entities, cfg.min_df, cfg.sim_threshold, filter);
      const std::string tag = std::string(to_string(kind)) + "/" + lang + "/seed " + std::to_string(seed);
      c.expect(!want.empty(), tag + ": oracle found no edge");
      c.expect(got.size() == want.size(), tag + ": edge count " + std::to_string(got.size()) + " vs " +
                                              std::to_string(want.size()));
      for (const auto& [key, w] : want) {
        auto it = got.find(key);
        c.expect(it != got.end() && near(it->second, w, 1e-12), tag + ": edge " + key.first + "-" + key.second);
      }
      compared += want.size();
    }
  }
  c.notes.push_back(std::to_string(compared) + " oracle edges");
}

void dismantling(Check& c) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    auto d = oracle::random_graph(rng, 5 + static_cast<int>(rng() % 40), 0.2);
    if (d.edges.empty()) continue;
    // Coarse weights force ties at the cut.
    for (auto& e : d.edges) e.w = 0.1 * static_cast<double>(1 + rng() % 5);
    const auto g = oracle::to_graph(d);
    const auto kept = filter_edges_by_weight(g, 0.3);
    const auto want = static_cast<std::size_t>(std::ceil(0.3 * static_cast<double>(g.edge_count()) - 1e-9));
    c.expect(kept.edge_count() == want, "weight filter count");
    double min_kept = 1e300;
    for (const auto& e : kept.edges()) min_kept = std::min(min_kept, e.weight);
    std::size_t heavier = 0;
    for (const auto& e : g.edges()) heavier += e.weight > min_kept;
    c.expect(heavier <= want, "weight filter dropped a heavier edge");
  }

  auto spec = CampaignSpec::default_spec();
  spec.n_organic = 200;
  spec.seed = 4;
  const auto small = generate(spec).corpus;
  const auto users = small.users();
  std::set<std::pair<std::string, std::string>> pairs;
  while (pairs.size() < 1000) {
    auto a = users[rng() % users.size()];
    auto b = users[rng() % users.size()];
    if (a == b) continue;
    if (b < a) std::swap(a, b);
    pairs.insert({a, b});
  }
  std::vector<UserEdge> edges;
  for (const auto& [a, b] : pairs) edges.push_back({a, b, 1.0});
  const auto g = SimilarityGraph::from_edges({}, edges);
  std::set<std::pair<std::string, std::string>> previous;
  for (long long window : {60LL, 600LL, 3600LL, 6 * 3600LL, 86400LL, 7 * 86400LL}) {
    const auto kept = oracle::edge_map(filter_edges_by_time(g, small, std::chrono::seconds{window}));
    std::set<std::pair<std::string, std::string>> now;
    for (const auto& [key, _] : kept) now.insert(key);
    for (const auto& [a, b] : pairs) {
      bool close = false;
      for (auto i : small.tweets_of(a)) {
        for (auto j : small.tweets_of(b)) {
          auto dt = small[i].created_at - small[j].created_at;
          if (dt < std::chrono::seconds{0}) dt = -dt;
          close = close || dt <= std::chrono::seconds{window};
        }
      }
      c.expect(close == now.count({a, b}) > 0, "time filter vs brute force at window " + std::to_string(window));
    }
    c.expect(std::includes(now.begin(), now.end(), previous.begin(), previous.end()), "time filter not monotone");
    previous = std::move(now);
  }

  auto fixture = generate(CampaignSpec::default_spec()).corpus;
  const auto fused = fused_graph(fixture, "en");
  LexiconSentiment sentiment;
  for (auto s : kAllStrategies) {
    DismantleConfig cfg;
    cfg.strategy = s;
    cfg.seed = 7;
    const auto r = run_strategy(fused, fixture, cfg, sentiment);
    const std::string tag(to_string(s));
    c.expect(r.report.strategy == s, tag + ": strategy field");
    c.expect(r.report.nodes == r.graph.node_count() && r.report.edges == r.graph.edge_count(), tag + ": sizes");
    c.expect(r.graph.edge_count() <= fused.edge_count(), tag + ": edges grew");
    if (r.graph.edge_count() == 0) {
      c.expect(!r.report.modularity && !r.partition, tag + ": modularity on an empty graph");
      continue;
    }
    c.expect(r.partition.has_value() && r.report.modularity.has_value(), tag + ": missing partition");
    if (!r.partition) continue;
    c.expect(r.partition->assignment.size() == r.graph.node_count(), tag + ": assignment length");
    c.expect(r.report.clusters == r.partition->community_count() && r.report.clusters >= 1, tag + ": clusters");
    const double q = *r.report.modularity;
    c.expect(q >= -0.5 && q <= 1.0, tag + ": modularity range");
    c.expect(near(q, modularity(r.graph, r.partition->assignment), 1e-12), tag + ": modularity recomputed");
    if (s == Strategy::None) c.expect(r.graph == fused, "none changed the graph");
    if (s == Strategy::WeightOnly) {
      c.expect(r.graph.edge_count() == ceil_fraction(0.3, fused.edge_count()), "weight_only edge count");
    }
  }
  c.notes.push_back("fixture " + std::to_string(fused.node_count()) + " nodes / " +
                    std::to_string(fused.edge_count()) + " edges");
}

int shell(const std::string& command) {
  const int rc = std::system(command.c_str());
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

// Runs synth, run and score in `dir` with relative paths so every artifact
// (manifests included) is location independent.
bool cli_pipeline(const std::string& cli, const fs::path& dir, int threads, Check& c) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "config.json");
    cfg << R"({"seed": 7, "out_dir": ".", "input": "synthetic.jsonl"})" << "\n";
  }
  const std::string base = "cd " + quote(dir) + " && " + quote(fs::absolute(cli)) + " ";
  const std::string common = " -c config.json -q --threads " + std::to_string(threads);
  for (const char* sub : {"synth", "run", "score"}) {
    const int rc = shell(base + sub + common);
    if (rc != 0) {
      c.expect(false, std::string(sub) + " exited with " + std::to_string(rc));
      return false;
    }
  }
  return true;
}

void synthetic_recovery(const std::string& cli, const fs::path& work, Check& c) {
  const auto dir = work / "recovery";
  if (!cli_pipeline(cli, dir, static_cast<int>(worker_count()), c)) return;
  const auto score = nlohmann::json::parse(slurp(dir / "score.json"));
  const double f1 = score["partition"]["f1"];
  const double nmi = score["partition"]["nmi"];
  c.expect(score["strategy"] == "weight_only", "scored strategy is not weight_only");
  c.expect(f1 >= 0.9, "partition F1 " + std::to_string(f1));
  c.expect(nmi >= 0.8, "partition NMI " + std::to_string(nmi));
  std::ostringstream s;
  s << std::setprecision(4) << "F1 " << f1 << ", NMI " << nmi << "; drivers F1 " << score["drivers"]["f1"].get<double>()
    << " (informational)";
  c.notes.push_back(s.str());
}

void determinism(const std::string& cli, const fs::path& work, Check& c) {
  const auto a = work / "threads_1";
  const auto b = work / "threads_4";
  if (!cli_pipeline(cli, a, 1, c) || !cli_pipeline(cli, b, 4, c)) return;
  std::set<std::string> names_a, names_b;
  for (const auto& e : fs::directory_iterator(a)) names_a.insert(e.path().filename().string());
  for (const auto& e : fs::directory_iterator(b)) names_b.insert(e.path().filename().string());
  c.expect(names_a == names_b, "different artifact sets");
  std::size_t compared = 0;
  for (const auto& name : names_a) {
    if (!names_b.count(name)) continue;
    c.expect(slurp(a / name) == slurp(b / name), name + " differs");
    ++compared;
  }
  c.notes.push_back(std::to_string(compared) + " files identical");
}

void quality_scatter(Check& c) {
  HashtagTopics topics;
  double worst_dh = 1e300, worst_djsd = 1e300;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto spec = CampaignSpec::default_spec();
    spec.seed = seed;
    const auto out = generate(spec);
    const auto graph = fused_graph(out.corpus, "en");
    // Planted groups are the clusters; each organic node stands alone.
    std::vector<int> truth(graph.node_count());
    int next = out.truth.group_count();
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
      const int g = out.truth.group.at(graph.user(static_cast<NodeId>(i)));
      truth[i] = g >= 0 ? g : next++;
    }
    auto shuffled = truth;
    Rng rng(seed * 1000 + 1);
    rng.shuffle(std::span<int>(shuffled));
    const auto assigned = assign_topics(out.corpus, graph.nodes(), topics);
    const auto pure = evaluate_network(graph, Partition{canonical_labels(truth), 0.0, 1.0}, assigned);
    const auto random = evaluate_network(graph, Partition{canonical_labels(shuffled), 0.0, 1.0}, assigned);
    const std::string tag = "seed " + std::to_string(seed);
    c.expect(pure.h_weighted < random.h_weighted, tag + ": H_weighted not lower");
    c.expect(pure.mean_jsd > random.mean_jsd, tag + ": mean JSD not higher");
    worst_dh = std::min(worst_dh, random.h_weighted - pure.h_weighted);
    worst_djsd = std::min(worst_djsd, pure.mean_jsd - random.mean_jsd);
  }
  std::ostringstream s;
  s << std::setprecision(3) << "smallest H margin " << worst_dh << ", smallest JSD margin " << worst_djsd;
  c.notes.push_back(s.str());
}

void report_tallies(Check& c) {
  auto spec = CampaignSpec::default_spec();
  spec.n_organic = 150;
  spec.langs = {"en", "es"};
  spec.bilingual_fraction = 0.3;
  spec.seed = 12;
  const auto full = generate(spec).corpus;
  std::vector<std::size_t> first;
  for (std::size_t i = 0; i < std::min<std::size_t>(1000, full.size()); ++i) first.push_back(i);
  const auto corpus = full.subset(first);
  c.expect(corpus.size() == 1000, "corpus is not 1000 tweets");

  std::mt19937_64 rng(5);
  const auto everyone = corpus.users();
  std::vector<std::string> group_a, group_b;
  for (const auto& u : everyone) {
    if (rng() % 4 == 0) group_a.push_back(u);
    if (rng() % 4 == 0) group_b.push_back(u);
  }
  const std::set<std::string> in_a(group_a.begin(), group_a.end());

  const auto filter = DomainFilterList::defaults("en");
  for (auto kind : {EntityKind::Hashtags, EntityKind::Domains}) {
    std::map<std::string, std::size_t> counts;
    for (const auto& t : corpus.records()) {
      if (!in_a.count(t.user_id)) continue;
      if (kind == EntityKind::Hashtags) {
        for (const auto& h : t.hashtags) ++counts[h];
      } else {
        for (const auto& u : t.urls) {
          auto d = try_extract_base_domain(u);
          if (d && !filter.contains(*d)) ++counts[*d];
        }
      }
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
    ranked.resize(std::min<std::size_t>(ranked.size(), 10));
    const auto got = top_entities(corpus, group_a, kind, 10, filter);
    c.expect(got.size() == ranked.size(), "top_entities size");
    for (std::size_t i = 0; i < std::min(got.size(), ranked.size()); ++i) {
      c.expect(got[i].entity == ranked[i].first && got[i].count == ranked[i].second, "top_entities row");
    }
  }

  double likes = 0, retweets = 0, quotes = 0, replies = 0;
  std::size_t n = 0;
  for (const auto& t : corpus.records()) {
    if (!in_a.count(t.user_id)) continue;
    likes += static_cast<double>(t.like_count);
    retweets += static_cast<double>(t.retweet_count);
    quotes += static_cast<double>(t.quote_count);
    replies += static_cast<double>(t.reply_count);
    ++n;
  }
  const auto e = engagement_stats(corpus, group_a);
  c.expect(e.tweets == n, "engagement tweet count");
  c.expect(near(e.avg_likes, likes / n, 1e-9) && near(e.avg_retweets, retweets / n, 1e-9) &&
               near(e.avg_quotes, quotes / n, 1e-9) && near(e.avg_replies, replies / n, 1e-9),
           "engagement means");

  std::map<std::string, std::pair<int, int>> per_lang;
  for (const auto& t : corpus.records()) {
    if (t.lang == "en") ++per_lang[t.user_id].first;
    if (t.lang == "es") ++per_lang[t.user_id].second;
  }
  std::vector<std::string> bilingual;
  for (const auto& [u, counts] : per_lang) {
    if (counts.first >= 1 && counts.second >= 1) bilingual.push_back(u);
  }
  c.expect(!bilingual.empty(), "no bilingual users in the corpus");
  c.expect(find_bilingual_users(corpus, "en", "es") == bilingual, "bilingual users");

  const auto overlap = driver_language_overlap(group_a, group_b, bilingual);
  const std::set<std::string> in_b(group_b.begin(), group_b.end()), in_bi(bilingual.begin(), bilingual.end());
  std::vector<std::string> want_a, want_b, want_shared;
  for (const auto& u : in_a) {
    if (in_bi.count(u)) want_a.push_back(u);
    if (in_b.count(u)) want_shared.push_back(u);
  }
  for (const auto& u : in_b) {
    if (in_bi.count(u)) want_b.push_back(u);
  }
  c.expect(overlap.drivers_a == in_a.size() && overlap.drivers_b == in_b.size(), "overlap driver counts");
  c.expect(overlap.bilingual_a == want_a && overlap.bilingual_b == want_b && overlap.shared == want_shared,
           "overlap sets");

  LexiconSentiment lexicon;
  std::map<std::string, SentimentCounts> months;
  std::size_t excluded = 0;
  for (const auto& t : corpus.records()) {
    if (!in_a.count(t.user_id)) continue;
    const auto iso = format_timestamp(t.created_at);
    if (iso.substr(0, 4) != "2024") {
      ++excluded;
      continue;
    }
    auto& slot = months[iso.substr(0, 7)];
    switch (lexicon.classify(t)) {
      case Sentiment::Positive: ++slot.positive; break;
      case Sentiment::Negative: ++slot.negative; break;
      case Sentiment::Neutral: ++slot.neutral; break;
    }
  }
  const auto timeline = sentiment_timeline(corpus, group_a, lexicon);
  c.expect(timeline.months == months, "sentiment timeline counts");
  c.expect(timeline.excluded == excluded, "sentiment timeline exclusions");
  c.notes.push_back(std::to_string(group_a.size()) + " users, " + std::to_string(bilingual.size()) + " bilingual");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <coordnet cli> <work dir>\n";
    return 1;
  }
  const std::string cli = argv[1];
  const fs::path work = fs::absolute(argv[2]);
  fs::create_directories(work);
  log::set_level(log::Level::Quiet);

  run(1, "metric exactness", 5, metric_exactness);
  run(2, "graph core", 60, graph_core);
  run(3, "trace oracle", 30, trace_oracle);
  run(4, "dismantling", 30, dismantling);
  run(5, "synthetic recovery", 120, [&](Check& c) { synthetic_recovery(cli, work, c); });
  run(6, "determinism across thread counts", 0, [&](Check& c) { determinism(cli, work, c); });
  run(7, "quality scatter", 0, quality_scatter);
  run(8, "report correctness", 0, report_tallies);
  return failed == 0 ? 0 : 1;
}
