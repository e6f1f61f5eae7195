#include "coordnet/evaluate.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace coordnet {
namespace {

Eigen::VectorXd as_vector(const std::map<std::string, double>& probs) {
  Eigen::VectorXd p(static_cast<Eigen::Index>(probs.size()));
  Eigen::Index i = 0;
  for (const auto& [_, v] : probs) p[i++] = v;
  return p;
}

}  // namespace

double cluster_entropy(const std::map<std::string, double>& topic_probs) {
  return normalized_entropy(as_vector(topic_probs));
}

double weighted_entropy(std::span<const ClusterTopicDistribution> clusters) {
  if (clusters.empty()) throw DataError("weighted entropy needs at least one cluster");
  double total = 0.0;
  double acc = 0.0;
  for (const auto& c : clusters) {
    acc += static_cast<double>(c.size) * cluster_entropy(c.topic_probs);
    total += static_cast<double>(c.size);
  }
  if (!(total > 0.0)) throw DataError("clusters are all empty");
  return acc / total;
}

JsdSummary pairwise_jsd(std::span<const ClusterTopicDistribution> clusters,
                        std::span<const std::string> topic_universe) {
  JsdSummary out;
  const auto c = static_cast<Eigen::Index>(clusters.size());
  out.pairs = Eigen::MatrixXd::Zero(c, c);
  if (c < 2) {
    out.degenerate = true;
    return out;
  }
  std::unordered_map<std::string, Eigen::Index> column;
  for (const auto& t : topic_universe) column.emplace(t, static_cast<Eigen::Index>(column.size()));
  const auto t = static_cast<Eigen::Index>(column.size());
  Eigen::MatrixXd dists = Eigen::MatrixXd::Zero(c, t);
  for (Eigen::Index k = 0; k < c; ++k) {
    for (const auto& [topic, p] : clusters[static_cast<std::size_t>(k)].topic_probs) {
      auto it = column.find(topic);
      if (it == column.end()) throw DataError("topic '" + topic + "' is missing from the topic universe");
      dists(k, it->second) = p;
    }
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < c; ++i) {
    for (Eigen::Index j = i + 1; j < c; ++j) {
      const double d = jensen_shannon(dists.row(i).transpose(), dists.row(j).transpose());
      out.pairs(i, j) = out.pairs(j, i) = d;
      sum += d;
    }
  }
  out.mean = sum / (static_cast<double>(c) * static_cast<double>(c - 1) / 2.0);
  return out;
}

QualityReport evaluate_network(const SimilarityGraph& graph, const Partition& partition,
                               std::span<const TopicAssignment> topics, const EvaluateOptions& options) {
  if (partition.assignment.size() != graph.node_count()) throw DataError("partition does not cover the graph");
  std::vector<const std::string*> topic_of(graph.node_count(), nullptr);
  std::size_t labeled = 0;
  for (const auto& a : topics) {
    if (auto id = graph.find(a.user_id); id && !topic_of[*id]) {
      topic_of[*id] = &a.topic;
      ++labeled;
    }
  }
  if (2 * labeled < graph.node_count()) {
    throw DataError("topics cover only " + std::to_string(labeled) + " of " + std::to_string(graph.node_count()) +
                    " nodes");
  }

  const std::size_t communities = partition.community_count();
  std::vector<std::size_t> sizes(communities, 0);
  std::vector<std::map<std::string, std::size_t>> counts(communities);
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    const auto c = static_cast<std::size_t>(partition.assignment[i]);
    ++sizes[c];
    if (topic_of[i]) ++counts[c][*topic_of[i]];
  }

  QualityReport report;
  report.strategy = options.strategy;
  std::vector<ClusterTopicDistribution> kept;
  std::set<std::string> universe;
  for (std::size_t c = 0; c < communities; ++c) {
    std::size_t members = 0;
    for (const auto& [_, n] : counts[c]) members += n;
    if (sizes[c] < options.min_cluster_size || members == 0) {
      ++report.excluded_clusters;
      continue;
    }
    ClusterTopicDistribution d;
    d.cluster_id = static_cast<int>(c);
    d.size = sizes[c];
    for (const auto& [topic, n] : counts[c]) {
      d.topic_probs[topic] = static_cast<double>(n) / static_cast<double>(members);
      universe.insert(topic);
    }
    kept.push_back(std::move(d));
  }
  if (kept.empty()) {
    throw DataError("every cluster was excluded (" + std::to_string(communities) +
                    " clusters, min_cluster_size=" + std::to_string(options.min_cluster_size) + ")");
  }

  report.topic_universe.assign(universe.begin(), universe.end());
  report.h_weighted = weighted_entropy(kept);
  const auto jsd = pairwise_jsd(kept, report.topic_universe);
  report.mean_jsd = jsd.mean;
  report.degenerate = jsd.degenerate;
  report.jsd_pairs = jsd.pairs;
  for (const auto& d : kept) {
    report.per_cluster.push_back({d.cluster_id, cluster_entropy(d.topic_probs), d.size, d.topic_probs.size()});
  }
  return report;
}

}  // namespace coordnet
