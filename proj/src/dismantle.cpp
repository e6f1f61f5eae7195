#include "coordnet/dismantle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "coordnet/error.hpp"

namespace coordnet {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::None: return "none";
    case Strategy::WeightOnly: return "weight_only";
    case Strategy::TimeSentimentOnly: return "time_sentiment_only";
    case Strategy::PruneOnly: return "prune_only";
    case Strategy::TimeSentimentPlusPrune: return "time_sentiment_plus_prune";
  }
  return "none";
}

Strategy parse_strategy(std::string_view name) {
  for (auto s : kAllStrategies) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown strategy '" + std::string(name) + "'");
}

std::string_view strategy_label(Strategy s) {
  switch (s) {
    case Strategy::None: return "No filtering or pruning";
    case Strategy::WeightOnly: return "Edge filtering on low weight only";
    case Strategy::TimeSentimentOnly: return "Edge filtering (time, sentiment) only";
    case Strategy::PruneOnly: return "Node pruning only";
    case Strategy::TimeSentimentPlusPrune: return "Edge filtering (time, sentiment) + node pruning";
  }
  return "";
}

void DismantleConfig::validate() const {
  if (!(keep_top_weight_fraction > 0.0 && keep_top_weight_fraction <= 1.0)) {
    throw ConfigError("keep_top_weight_fraction must lie in (0, 1]");
  }
  if (time_window.count() < 0) throw ConfigError("time_window must be non-negative");
  if (!(centrality_threshold >= 0.0)) throw ConfigError("centrality_threshold must be non-negative");
}

std::size_t ceil_fraction(double fraction, std::size_t count) {
  const double x = fraction * static_cast<double>(count);
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::ceil(x));
}

SimilarityGraph filter_edges_by_weight(const SimilarityGraph& graph, double keep_top_fraction) {
  if (!(keep_top_fraction > 0.0 && keep_top_fraction <= 1.0)) {
    throw ConfigError("keep_top_fraction must lie in (0, 1]");
  }
  const auto& edges = graph.edges();
  if (edges.empty()) return graph;
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  // Edges are stored in canonical order, so a stable sort by weight breaks
  // ties by (u, v).
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return edges[a].weight > edges[b].weight; });
  const std::size_t k = std::min(edges.size(), ceil_fraction(keep_top_fraction, edges.size()));
  std::vector<bool> keep(edges.size(), false);
  for (std::size_t i = 0; i < k; ++i) keep[order[i]] = true;
  return graph.keep_edges(keep);
}

namespace {

std::vector<std::vector<Timestamp>> node_times(const SimilarityGraph& graph, const Corpus& corpus) {
  std::vector<std::vector<Timestamp>> times(graph.node_count());
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    auto tweets = corpus.tweets_of(graph.user(static_cast<NodeId>(i)));
    if (tweets.empty()) {
      throw DataError("graph node " + graph.user(static_cast<NodeId>(i)) + " has no tweets in the corpus");
    }
    for (auto t : tweets) times[i].push_back(corpus[t].created_at);
    std::sort(times[i].begin(), times[i].end());
  }
  return times;
}

// Smallest |a_i - b_j| is found by a linear merge of the two sorted lists.
bool within_window(const std::vector<Timestamp>& a, const std::vector<Timestamp>& b, std::chrono::seconds window) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const auto diff = a[i] - b[j];
    if ((diff < std::chrono::seconds{0} ? -diff : diff) <= window) return true;
    if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return false;
}

void require_nodes_in_corpus(const SimilarityGraph& graph, const Corpus& corpus) {
  for (const auto& user : graph.nodes()) {
    if (corpus.tweets_of(user).empty()) throw DataError("graph node " + user + " has no tweets in the corpus");
  }
}

}  // namespace

SimilarityGraph filter_edges_by_time(const SimilarityGraph& graph, const Corpus& corpus, std::chrono::seconds window) {
  const auto times = node_times(graph, corpus);
  std::vector<bool> keep(graph.edge_count());
  for (std::size_t k = 0; k < graph.edge_count(); ++k) {
    const auto& e = graph.edges()[k];
    keep[k] = within_window(times[e.u], times[e.v], window);
  }
  return graph.keep_edges(keep);
}

Sentiment dominant_sentiment(const Corpus& corpus, std::string_view user_id, const SentimentProvider& provider) {
  std::array<std::size_t, 3> counts{};
  for (auto t : corpus.tweets_of(user_id)) ++counts[static_cast<std::size_t>(provider.classify(corpus[t]))];
  const auto top = *std::max_element(counts.begin(), counts.end());
  if (std::count(counts.begin(), counts.end(), top) > 1) return Sentiment::Neutral;
  return static_cast<Sentiment>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

SimilarityGraph filter_edges_by_sentiment(const SimilarityGraph& graph, const Corpus& corpus,
                                          const SentimentProvider& provider) {
  require_nodes_in_corpus(graph, corpus);
  std::vector<Sentiment> dominant(graph.node_count());
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    dominant[i] = dominant_sentiment(corpus, graph.user(static_cast<NodeId>(i)), provider);
  }
  std::vector<bool> keep(graph.edge_count());
  for (std::size_t k = 0; k < graph.edge_count(); ++k) {
    const auto& e = graph.edges()[k];
    keep[k] = dominant[e.u] == dominant[e.v];
  }
  return graph.keep_edges(keep);
}

SimilarityGraph prune_nodes_by_centrality(const SimilarityGraph& graph, double threshold, bool iterate) {
  if (graph.empty()) throw DataError("cannot prune an empty graph");
  SimilarityGraph current = graph;
  while (true) {
    const auto centrality = eigenvector_centrality(current);
    std::vector<bool> remove(current.node_count(), false);
    std::size_t removed = 0;
    for (std::size_t i = 0; i < current.node_count(); ++i) {
      if (centrality.scores[static_cast<Eigen::Index>(i)] < threshold) {
        remove[i] = true;
        ++removed;
      }
    }
    if (removed == current.node_count()) {
      throw DataError("centrality threshold " + std::to_string(threshold) + " prunes every node");
    }
    if (removed == 0) return current;
    current = current.remove_nodes(remove);
    if (!iterate || current.empty()) return current;
  }
}

StrategyReport describe(const SimilarityGraph& graph, Strategy strategy, const std::optional<Partition>& partition) {
  StrategyReport r;
  r.strategy = strategy;
  r.nodes = graph.node_count();
  r.edges = graph.edge_count();
  if (partition) {
    r.clusters = partition->community_count();
    r.modularity = partition->modularity;
  } else {
    r.clusters = graph.node_count();
  }
  return r;
}

StrategyResult run_strategy(const SimilarityGraph& graph, const Corpus& corpus, const DismantleConfig& config,
                            const SentimentProvider& sentiment) {
  config.validate();
  SimilarityGraph g = graph;
  const Strategy s = config.strategy;
  if (s == Strategy::WeightOnly) g = filter_edges_by_weight(g, config.keep_top_weight_fraction);
  if (s == Strategy::TimeSentimentOnly || s == Strategy::TimeSentimentPlusPrune) {
    g = filter_edges_by_time(g, corpus, config.time_window);
    if (config.require_sentiment_match) g = filter_edges_by_sentiment(g, corpus, sentiment);
  }
  if ((s == Strategy::PruneOnly || s == Strategy::TimeSentimentPlusPrune) && !g.empty()) {
    g = prune_nodes_by_centrality(g, config.centrality_threshold, config.iterate_pruning);
  }

  StrategyResult result;
  if (g.edge_count() > 0) result.partition = louvain(g, config.resolution, config.seed);
  result.report = describe(g, s, result.partition);
  result.graph = std::move(g);
  return result;
}

}  // namespace coordnet
