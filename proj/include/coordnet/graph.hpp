#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace coordnet {

using NodeId = std::uint32_t;

/// Undirected edge between node indices, u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double weight = 0.0;
  std::uint32_t support = 1;  // number of fused input graphs contributing

  bool operator==(const Edge&) const = default;
};

/// Undirected edge keyed by user id, in any orientation.
struct UserEdge {
  std::string u;
  std::string v;
  double weight = 0.0;
  std::uint32_t support = 1;
};

struct GraphMetadata {
  std::vector<std::string> trace_kinds;
  std::map<std::string, std::string> params;
  bool fused = false;
};

/// Immutable undirected weighted graph over user ids.
///
/// Nodes are kept in sorted user-id order so node indices, edge order and
/// serialization are canonical. Edges are stored once with u < v, sorted by
/// (u, v); the symmetric adjacency matrix is materialized for numeric work.
class SimilarityGraph {
 public:
  using Adjacency = Eigen::SparseMatrix<double>;

  SimilarityGraph() = default;

  /// Node list is sorted and deduplicated; every edge endpoint is added as a
  /// node. Throws DataError on self-loops, non-positive or non-finite
  /// weights, and duplicate edges.
  static SimilarityGraph from_edges(std::vector<std::string> nodes, std::span<const UserEdge> edges,
                                    GraphMetadata metadata = {});

  /// `nodes` must already be sorted and unique; edges index into it.
  static SimilarityGraph from_indexed(std::vector<std::string> nodes, std::vector<Edge> edges,
                                      GraphMetadata metadata = {});

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return nodes_.empty(); }

  std::optional<NodeId> find(std::string_view user_id) const;
  const std::string& user(NodeId id) const { return nodes_[id]; }

  const Adjacency& adjacency() const { return adjacency_; }
  /// Weighted degree of each node.
  const Eigen::VectorXd& strengths() const { return strengths_; }
  double total_weight() const { return total_weight_; }

  const GraphMetadata& metadata() const { return metadata_; }
  void set_metadata(GraphMetadata metadata) { metadata_ = std::move(metadata); }

  /// Keeps edges whose flag is set, then drops nodes left without edges.
  SimilarityGraph keep_edges(const std::vector<bool>& keep) const;
  /// Removes flagged nodes and their edges, then drops nodes left without edges.
  SimilarityGraph remove_nodes(const std::vector<bool>& remove) const;

  bool operator==(const SimilarityGraph& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_;
  }

 private:
  void build_adjacency();

  std::vector<std::string> nodes_;
  std::vector<Edge> edges_;
  Adjacency adjacency_;
  Eigen::VectorXd strengths_;
  double total_weight_ = 0.0;
  GraphMetadata metadata_;
};

/// Component id per node; ids are numbered in order of each component's
/// smallest node index.
std::vector<std::uint32_t> connected_components(const SimilarityGraph& graph);

struct CentralityVector {
  Eigen::VectorXd scores;  // per node, in [0, 1]
  bool converged = true;
  std::size_t max_iterations_used = 0;
};

/// Eigenvector centrality computed separately on each connected component.
///
/// Each component runs a damped power iteration
///   x <- normalize(x + A x / |A x|)
/// from the uniform vector until the L2 change drops below `tol`. The half
/// step toward the previous iterate removes the period-2 oscillation of
/// bipartite components without changing the fixed point. Each component's
/// vector is then scaled so its largest entry is 1, so every component keeps
/// a node at the global maximum. Isolated nodes score 1.
CentralityVector eigenvector_centrality(const SimilarityGraph& graph, double tol = 1e-8,
                                        std::size_t max_iter = 1000);

/// Newman modularity with resolution:
///   Q = sum_c [ w_c / W - resolution * (s_c / 2W)^2 ]
/// with w_c the intra-community edge weight, s_c the summed strength of c,
/// and W the total edge weight. Throws DataError for an edgeless graph.
double modularity(const SimilarityGraph& graph, std::span<const int> assignment,
                  double resolution = 1.0);

struct Partition {
  std::vector<int> assignment;  // per node, dense ids 0..C-1
  double modularity = 0.0;
  double resolution = 1.0;

  std::size_t community_count() const;
};

/// Renumbers labels densely in order of first appearance.
std::vector<int> canonical_labels(std::span<const int> labels);

/// Two-phase Louvain: local moving to a fixpoint, then aggregation, repeated
/// until a level makes no move. Nodes are visited in a seeded shuffle of
/// canonical order; equal-gain candidates resolve to the lowest community id.
Partition louvain(const SimilarityGraph& graph, double resolution = 1.0, std::uint64_t seed = 0);

struct FuseOptions {
  bool keep_isolates = false;
};

/// Smallest weight a fused edge may carry; an edge that is the weakest edge
/// of every graph it appears in normalizes to 0 and is lifted to this floor.
inline constexpr double kFusedWeightFloor = 1e-6;

/// Union of the input graphs. Each input's weights are min-max normalized
/// to [0, 1] (all-equal weights normalize to 1); a fused edge carries the mean
/// of its normalized weights over the inputs containing it, and `support`
/// counts those inputs.
SimilarityGraph fuse(std::span<const SimilarityGraph> graphs, const FuseOptions& options = {});

}  // namespace coordnet
