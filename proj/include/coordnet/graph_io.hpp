#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coordnet/graph.hpp"

namespace coordnet {

/// `u,v,weight[,support]` with a header row, one edge per line in canonical
/// (u, v) order. Weights use the shortest round-trip decimal form.
/// The support column is written for fused graphs.
void write_edge_csv(std::ostream& out, const SimilarityGraph& graph);
void write_edge_csv_file(const std::string& path, const SimilarityGraph& graph);
SimilarityGraph read_edge_csv(std::istream& in);
SimilarityGraph read_edge_csv_file(const std::string& path);

/// Per-node attributes exported to GEXF; missing entries fall back to
/// community -1, empty language and is_driver false.
struct NodeAttributes {
  std::optional<Eigen::VectorXd> centrality;
  std::vector<int> community;
  std::vector<std::string> language;
  std::vector<bool> is_driver;
};

/// GEXF 1.2 document with node attributes centrality, community, language
/// and is_driver, and edge weights.
void write_gexf(std::ostream& out, const SimilarityGraph& graph, const NodeAttributes& attrs);
void write_gexf_file(const std::string& path, const SimilarityGraph& graph, const NodeAttributes& attrs);

/// `user_id,community` rows in node order, header included.
void write_partition_csv(std::ostream& out, const SimilarityGraph& graph, const Partition& partition);
void write_partition_csv_file(const std::string& path, const SimilarityGraph& graph, const Partition& partition);
/// Reads a partition for `graph`; every node must be covered. Modularity is
/// recomputed at `resolution`.
Partition read_partition_csv_file(const std::string& path, const SimilarityGraph& graph,
                                  double resolution = 1.0);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double value);

}  // namespace coordnet
