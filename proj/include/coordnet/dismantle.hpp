#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coordnet/graph.hpp"
#include "coordnet/ingest.hpp"
#include "coordnet/providers.hpp"

namespace coordnet {

/// The five pipeline configurations compared on fused networks.
enum class Strategy { None, WeightOnly, TimeSentimentOnly, PruneOnly, TimeSentimentPlusPrune };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view name);
/// Human-readable row label, e.g. "Edge filtering (time, sentiment) + node pruning".
std::string_view strategy_label(Strategy s);
inline constexpr Strategy kAllStrategies[] = {Strategy::TimeSentimentPlusPrune, Strategy::PruneOnly,
                                              Strategy::TimeSentimentOnly, Strategy::WeightOnly,
                                              Strategy::None};

struct DismantleConfig {
  double keep_top_weight_fraction = 0.3;
  std::chrono::seconds time_window{3600};
  bool require_sentiment_match = true;
  double centrality_threshold = 1e-2;
  bool iterate_pruning = false;
  Strategy strategy = Strategy::None;
  double resolution = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// ceil(fraction * count), robust to representation error in the product
/// (0.3 * 10 is 3, not 4).
std::size_t ceil_fraction(double fraction, std::size_t count);

/// Keeps the ceil(fraction * |E|) heaviest edges; ties at the cut go to the
/// canonically smaller (u, v).
SimilarityGraph filter_edges_by_weight(const SimilarityGraph& graph, double keep_top_fraction);

/// Keeps edges whose endpoints have some pair of tweets at most `window`
/// apart. Throws DataError when a node has no tweets in `corpus`.
SimilarityGraph filter_edges_by_time(const SimilarityGraph& graph, const Corpus& corpus,
                                     std::chrono::seconds window);

/// Most frequent label among the user's tweets; any tie is neutral.
Sentiment dominant_sentiment(const Corpus& corpus, std::string_view user_id, const SentimentProvider& provider);

/// Keeps edges whose endpoints share the same dominant sentiment.
SimilarityGraph filter_edges_by_sentiment(const SimilarityGraph& graph, const Corpus& corpus,
                                          const SentimentProvider& provider);

/// Removes nodes whose eigenvector centrality is below `threshold` (single
/// pass unless `iterate`). Throws DataError when every node would go.
SimilarityGraph prune_nodes_by_centrality(const SimilarityGraph& graph, double threshold, bool iterate = false);

struct StrategyReport {
  Strategy strategy = Strategy::None;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t clusters = 0;
  std::optional<double> modularity;  // absent when no edge is left
};

struct StrategyResult {
  SimilarityGraph graph;
  std::optional<Partition> partition;
  StrategyReport report;
};

/// Applies the strategy's edge filters, then node pruning, then Louvain.
StrategyResult run_strategy(const SimilarityGraph& graph, const Corpus& corpus, const DismantleConfig& config,
                            const SentimentProvider& sentiment);

/// Louvain statistics of an already dismantled graph.
StrategyReport describe(const SimilarityGraph& graph, Strategy strategy, const std::optional<Partition>& partition);

}  // namespace coordnet
