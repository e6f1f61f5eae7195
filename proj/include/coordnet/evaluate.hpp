#pragma once

#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coordnet/error.hpp"
#include "coordnet/graph.hpp"
#include "coordnet/providers.hpp"

namespace coordnet {

inline constexpr double kProbabilityTolerance = 1e-9;

/// Checks that `p` is a probability vector (non-negative, sums to 1).
template <typename Derived>
void require_distribution(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  if (p.size() == 0) throw DataError("empty probability vector");
  if ((p.array() < Scalar(0)).any()) throw DataError("negative probability");
  if (std::abs(p.sum() - Scalar(1)) > Scalar(kProbabilityTolerance)) {
    throw DataError("probabilities sum to " + std::to_string(static_cast<double>(p.sum())) + ", not 1");
  }
}

/// Shannon entropy of `p` divided by ln of its support size; 0 for a single
/// topic. Zero entries neither contribute nor count toward the support.
template <typename Derived>
typename Derived::Scalar normalized_entropy(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  require_distribution(p);
  Scalar h(0);
  Eigen::Index support = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] > Scalar(0)) {
      h -= p[i] * std::log(p[i]);
      ++support;
    }
  }
  if (support <= 1) return Scalar(0);
  return std::clamp(h / std::log(Scalar(support)), Scalar(0), Scalar(1));
}

/// sum_i p_i log2(p_i / q_i) over p_i > 0; q must cover p's support.
template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar kl_divergence_bits(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q) {
  using Scalar = typename DerivedP::Scalar;
  Scalar d(0);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] > Scalar(0)) d += p[i] * std::log2(p[i] / q[i]);
  }
  return d;
}

/// Base-2 Jensen-Shannon divergence, in [0, 1].
template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar jensen_shannon(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q) {
  using Scalar = typename DerivedP::Scalar;
  if (p.size() != q.size()) throw DataError("distributions have different lengths");
  require_distribution(p);
  require_distribution(q);
  const auto m = ((p + q) / Scalar(2)).eval();
  const Scalar jsd = kl_divergence_bits(p, m) / Scalar(2) + kl_divergence_bits(q, m) / Scalar(2);
  return std::clamp(jsd, Scalar(0), Scalar(1));
}

/// Topic mix of one cluster.
struct ClusterTopicDistribution {
  int cluster_id = 0;
  std::size_t size = 0;  // cluster node count
  std::map<std::string, double> topic_probs;
};

double cluster_entropy(const std::map<std::string, double>& topic_probs);

/// Size-weighted mean of the cluster entropies.
double weighted_entropy(std::span<const ClusterTopicDistribution> clusters);

struct JsdSummary {
  double mean = 0.0;
  Eigen::MatrixXd pairs;  // symmetric, zero diagonal
  bool degenerate = false;  // fewer than two clusters; mean is 0
};

/// Mean JSD over all unordered cluster pairs, with distributions laid out
/// over `topic_universe` (topics absent from a cluster get probability 0).
JsdSummary pairwise_jsd(std::span<const ClusterTopicDistribution> clusters,
                        std::span<const std::string> topic_universe);

struct ClusterQuality {
  int cluster_id = 0;
  double entropy = 0.0;
  std::size_t size = 0;
  std::size_t topic_count = 0;
};

struct QualityReport {
  std::string strategy;
  double h_weighted = 0.0;
  double mean_jsd = 0.0;
  bool degenerate = false;
  std::vector<ClusterQuality> per_cluster;
  std::size_t excluded_clusters = 0;
  std::vector<std::string> topic_universe;
  Eigen::MatrixXd jsd_pairs;
};

struct EvaluateOptions {
  std::size_t min_cluster_size = 3;
  std::string strategy;
};

/// Scores a partition: clusters smaller than `min_cluster_size` or without
/// any topic-labeled member are excluded; p(t, k) is the share of k's labeled
/// members with topic t. Throws DataError when fewer than half the nodes are
/// labeled or every cluster is excluded.
QualityReport evaluate_network(const SimilarityGraph& graph, const Partition& partition,
                               std::span<const TopicAssignment> topics, const EvaluateOptions& options = {});

}  // namespace coordnet
