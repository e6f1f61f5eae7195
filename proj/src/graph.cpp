#include "coordnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coordnet/error.hpp"
#include "coordnet/log.hpp"
#include "coordnet/rng.hpp"

namespace coordnet {

SimilarityGraph SimilarityGraph::from_edges(std::vector<std::string> nodes,
                                            std::span<const UserEdge> edges, GraphMetadata metadata) {
  for (const auto& e : edges) {
    nodes.push_back(e.u);
    nodes.push_back(e.v);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  auto index_of = [&](const std::string& id) {
    return static_cast<NodeId>(std::lower_bound(nodes.begin(), nodes.end(), id) - nodes.begin());
  };
  std::vector<Edge> indexed;
  indexed.reserve(edges.size());
  for (const auto& e : edges) {
    NodeId a = index_of(e.u);
    NodeId b = index_of(e.v);
    if (a > b) std::swap(a, b);
    indexed.push_back({a, b, e.weight, e.support});
  }
  return from_indexed(std::move(nodes), std::move(indexed), std::move(metadata));
}

SimilarityGraph SimilarityGraph::from_indexed(std::vector<std::string> nodes, std::vector<Edge> edges,
                                              GraphMetadata metadata) {
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i - 1] < nodes[i])) throw DataError("graph node ids must be sorted and unique");
  }
  for (auto& e : edges) {
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u == e.v) throw DataError("self-loop on node " + nodes.at(e.u));
    if (e.v >= nodes.size()) throw DataError("edge endpoint out of range");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw DataError("edge (" + nodes[e.u] + "," + nodes[e.v] + ") has non-positive weight");
    }
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v) {
      throw DataError("duplicate edge (" + nodes[edges[i].u] + "," + nodes[edges[i].v] + ")");
    }
  }
  SimilarityGraph g;
  g.nodes_ = std::move(nodes);
  g.edges_ = std::move(edges);
  g.metadata_ = std::move(metadata);
  g.build_adjacency();
  return g;
}

void SimilarityGraph::build_adjacency() {
  const auto n = static_cast<Eigen::Index>(nodes_.size());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(edges_.size() * 2);
  strengths_ = Eigen::VectorXd::Zero(n);
  total_weight_ = 0.0;
  for (const auto& e : edges_) {
    triplets.emplace_back(e.u, e.v, e.weight);
    triplets.emplace_back(e.v, e.u, e.weight);
    strengths_[e.u] += e.weight;
    strengths_[e.v] += e.weight;
    total_weight_ += e.weight;
  }
  adjacency_.resize(n, n);
  adjacency_.setFromTriplets(triplets.begin(), triplets.end());
  adjacency_.makeCompressed();
}

std::optional<NodeId> SimilarityGraph::find(std::string_view user_id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), user_id,
                             [](const std::string& a, std::string_view b) { return a < b; });
  if (it == nodes_.end() || *it != user_id) return std::nullopt;
  return static_cast<NodeId>(it - nodes_.begin());
}

namespace {

SimilarityGraph compact(const SimilarityGraph& g, std::vector<Edge> edges) {
  std::vector<bool> used(g.node_count(), false);
  for (const auto& e : edges) used[e.u] = used[e.v] = true;
  std::vector<NodeId> remap(g.node_count(), 0);
  std::vector<std::string> nodes;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (used[i]) {
      remap[i] = static_cast<NodeId>(nodes.size());
      nodes.push_back(g.nodes()[i]);
    }
  }
  for (auto& e : edges) {
    e.u = remap[e.u];
    e.v = remap[e.v];
  }
  return SimilarityGraph::from_indexed(std::move(nodes), std::move(edges), g.metadata());
}

}  // namespace

SimilarityGraph SimilarityGraph::keep_edges(const std::vector<bool>& keep) const {
  std::vector<Edge> kept;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (keep.at(i)) kept.push_back(edges_[i]);
  }
  return compact(*this, std::move(kept));
}

SimilarityGraph SimilarityGraph::remove_nodes(const std::vector<bool>& remove) const {
  std::vector<Edge> kept;
  for (const auto& e : edges_) {
    if (!remove.at(e.u) && !remove.at(e.v)) kept.push_back(e);
  }
  return compact(*this, std::move(kept));
}

std::vector<std::uint32_t> connected_components(const SimilarityGraph& graph) {
  const std::size_t n = graph.node_count();
  constexpr auto kUnset = UINT32_MAX;
  std::vector<std::uint32_t> comp(n, kUnset);
  const auto& adj = graph.adjacency();
  std::uint32_t next = 0;
  std::vector<Eigen::Index> stack;
  for (std::size_t start = 0; start < n; ++start) {
    if (comp[start] != kUnset) continue;
    comp[start] = next;
    stack.push_back(static_cast<Eigen::Index>(start));
    while (!stack.empty()) {
      auto node = stack.back();
      stack.pop_back();
      for (SimilarityGraph::Adjacency::InnerIterator it(adj, node); it; ++it) {
        if (comp[it.row()] == kUnset) {
          comp[it.row()] = next;
          stack.push_back(it.row());
        }
      }
    }
    ++next;
  }
  return comp;
}

CentralityVector eigenvector_centrality(const SimilarityGraph& graph, double tol, std::size_t max_iter) {
  const std::size_t n = graph.node_count();
  CentralityVector result;
  result.scores = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  if (n == 0) return result;

  const auto comp = connected_components(graph);
  const std::uint32_t count = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<std::vector<Eigen::Index>> members(count);
  for (std::size_t i = 0; i < n; ++i) members[comp[i]].push_back(static_cast<Eigen::Index>(i));

  const auto& adj = graph.adjacency();
  for (const auto& nodes : members) {
    const auto m = static_cast<Eigen::Index>(nodes.size());
    if (m == 1) {
      result.scores[nodes[0]] = 1.0;
      continue;
    }
    // Component-local adjacency; `nodes` is ascending, so local order follows
    // global order.
    std::vector<Eigen::Index> local(n, -1);
    for (Eigen::Index k = 0; k < m; ++k) local[nodes[k]] = k;
    std::vector<Eigen::Triplet<double>> triplets;
    for (Eigen::Index k = 0; k < m; ++k) {
      for (SimilarityGraph::Adjacency::InnerIterator it(adj, nodes[k]); it; ++it) {
        triplets.emplace_back(local[it.row()], k, it.value());
      }
    }
    Eigen::SparseMatrix<double> sub(m, m);
    sub.setFromTriplets(triplets.begin(), triplets.end());

    Eigen::VectorXd x = Eigen::VectorXd::Constant(m, 1.0 / std::sqrt(static_cast<double>(m)));
    bool converged = false;
    std::size_t iter = 0;
    while (iter < max_iter) {
      ++iter;
      Eigen::VectorXd y = sub * x;
      y /= y.norm();
      y += x;
      y.normalize();
      const double delta = (y - x).norm();
      x.swap(y);
      if (delta < tol) {
        converged = true;
        break;
      }
    }
    result.max_iterations_used = std::max(result.max_iterations_used, iter);
    if (!converged) result.converged = false;
    x /= x.maxCoeff();
    for (Eigen::Index k = 0; k < m; ++k) result.scores[nodes[k]] = x[k];
  }
  if (!result.converged) {
    log::warn("eigenvector centrality did not converge within " + std::to_string(max_iter) + " iterations");
  }
  return result;
}

double modularity(const SimilarityGraph& graph, std::span<const int> assignment, double resolution) {
  if (assignment.size() != graph.node_count()) {
    throw DataError("partition covers " + std::to_string(assignment.size()) + " nodes, graph has " +
                    std::to_string(graph.node_count()));
  }
  const double total = graph.total_weight();
  if (graph.edge_count() == 0 || !(total > 0.0)) throw DataError("modularity is undefined for an edgeless graph");
  const int communities = assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
  if (!assignment.empty() && *std::min_element(assignment.begin(), assignment.end()) < 0) {
    throw DataError("negative community id");
  }
  std::vector<double> internal(static_cast<std::size_t>(communities), 0.0);
  std::vector<double> strength(static_cast<std::size_t>(communities), 0.0);
  for (const auto& e : graph.edges()) {
    if (assignment[e.u] == assignment[e.v]) internal[static_cast<std::size_t>(assignment[e.u])] += e.weight;
  }
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    strength[static_cast<std::size_t>(assignment[i])] += graph.strengths()[static_cast<Eigen::Index>(i)];
  }
  double q = 0.0;
  for (std::size_t c = 0; c < internal.size(); ++c) {
    const double s = strength[c] / (2.0 * total);
    q += internal[c] / total - resolution * s * s;
  }
  return q;
}

std::size_t Partition::community_count() const {
  return assignment.empty() ? 0 : static_cast<std::size_t>(*std::max_element(assignment.begin(), assignment.end())) + 1;
}

std::vector<int> canonical_labels(std::span<const int> labels) {
  std::map<int, int> remap;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, _] = remap.emplace(labels[i], static_cast<int>(remap.size()));
    out[i] = it->second;
  }
  return out;
}

namespace {

// Weighted graph with self-loops, as produced by Louvain aggregation.
struct LevelGraph {
  std::vector<std::vector<std::pair<int, double>>> adj;  // no self entries
  std::vector<double> loop;                                // self-loop weight, counted once
  std::vector<double> strength;                            // sum of incident weights + 2*loop
  double total = 0.0;                                      // W
};

LevelGraph level_from(const SimilarityGraph& g) {
  LevelGraph lg;
  const std::size_t n = g.node_count();
  lg.adj.resize(n);
  lg.loop.assign(n, 0.0);
  lg.strength.assign(n, 0.0);
  for (const auto& e : g.edges()) {
    lg.adj[e.u].emplace_back(static_cast<int>(e.v), e.weight);
    lg.adj[e.v].emplace_back(static_cast<int>(e.u), e.weight);
    lg.strength[e.u] += e.weight;
    lg.strength[e.v] += e.weight;
    lg.total += e.weight;
  }
  return lg;
}

// Local moving phase. Returns true when any node changed community.
bool local_moving(const LevelGraph& g, double resolution, Rng& rng, std::vector<int>& community) {
  const std::size_t n = g.adj.size();
  community.resize(n);
  std::iota(community.begin(), community.end(), 0);
  std::vector<double> tot(g.strength);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span(order));

  std::vector<double> link(n, 0.0);
  std::vector<int> touched;
  bool any_move = false;
  constexpr double kMinGain = 1e-12;
  constexpr int kMaxPasses = 10000;
  const double two_w = 2.0 * g.total;

  for (int pass = 0; pass < kMaxPasses; ++pass) {
    bool moved = false;
    for (int node : order) {
      const int old = community[static_cast<std::size_t>(node)];
      const double k = g.strength[static_cast<std::size_t>(node)];
      touched.clear();
      for (auto [nbr, w] : g.adj[static_cast<std::size_t>(node)]) {
        const int c = community[static_cast<std::size_t>(nbr)];
        if (link[static_cast<std::size_t>(c)] == 0.0) touched.push_back(c);
        link[static_cast<std::size_t>(c)] += w;
      }
      tot[static_cast<std::size_t>(old)] -= k;
      auto gain = [&](int c) {
        return link[static_cast<std::size_t>(c)] - resolution * tot[static_cast<std::size_t>(c)] * k / two_w;
      };
      const double stay = gain(old);
      std::sort(touched.begin(), touched.end());
      int best = old;
      double best_gain = stay;
      for (int c : touched) {
        if (c == old) continue;
        const double gc = gain(c);
        if (gc > best_gain + kMinGain || (best != old && gc > best_gain)) {
          best = c;
          best_gain = gc;
        }
      }
      tot[static_cast<std::size_t>(best)] += k;
      if (best != old) {
        community[static_cast<std::size_t>(node)] = best;
        moved = true;
      }
      for (int c : touched) link[static_cast<std::size_t>(c)] = 0.0;
    }
    if (!moved) break;
    any_move = true;
  }
  return any_move;
}

LevelGraph aggregate(const LevelGraph& g, const std::vector<int>& community, int count) {
  LevelGraph out;
  out.adj.resize(static_cast<std::size_t>(count));
  out.loop.assign(static_cast<std::size_t>(count), 0.0);
  out.strength.assign(static_cast<std::size_t>(count), 0.0);
  out.total = g.total;
  std::vector<std::map<int, double>> acc(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < g.adj.size(); ++i) {
    const int ci = community[i];
    out.loop[static_cast<std::size_t>(ci)] += g.loop[i];
    out.strength[static_cast<std::size_t>(ci)] += g.strength[i];
    for (auto [j, w] : g.adj[i]) {
      const int cj = community[static_cast<std::size_t>(j)];
      if (ci == cj) {
        if (static_cast<int>(i) < j) out.loop[static_cast<std::size_t>(ci)] += w;
      } else {
        acc[static_cast<std::size_t>(ci)][cj] += w;
      }
    }
  }
  for (std::size_t c = 0; c < acc.size(); ++c) {
    out.adj[c].assign(acc[c].begin(), acc[c].end());
  }
  return out;
}

std::vector<int> louvain_once(const SimilarityGraph& graph, double resolution, Rng& rng) {
  LevelGraph level = level_from(graph);
  std::vector<int> membership(graph.node_count());
  std::iota(membership.begin(), membership.end(), 0);

  while (true) {
    std::vector<int> community;
    if (!local_moving(level, resolution, rng, community)) break;
    community = canonical_labels(community);
    const int count = *std::max_element(community.begin(), community.end()) + 1;
    for (auto& m : membership) m = community[static_cast<std::size_t>(m)];
    if (count == static_cast<int>(level.adj.size())) break;
    level = aggregate(level, community, count);
  }

  return canonical_labels(membership);
}

}  // namespace

Partition louvain(const SimilarityGraph& graph, double resolution, std::uint64_t seed) {
  if (graph.edge_count() == 0) throw DataError("louvain requires a graph with at least one edge");
  // A few independently shuffled restarts; the first best partition wins.
  constexpr int kRestarts = 8;
  Rng seeds(seed);
  Partition p;
  p.resolution = resolution;
  for (int r = 0; r < kRestarts; ++r) {
    Rng rng(seeds.next());
    auto assignment = louvain_once(graph, resolution, rng);
    const double q = modularity(graph, assignment, resolution);
    if (r == 0 || q > p.modularity + 1e-12) {
      p.assignment = std::move(assignment);
      p.modularity = q;
    }
  }

  std::vector<int> singletons(graph.node_count());
  std::iota(singletons.begin(), singletons.end(), 0);
  const double q_single = modularity(graph, singletons, resolution);
  if (p.modularity < q_single) {
    p.assignment = std::move(singletons);
    p.modularity = q_single;
  }
  return p;
}

SimilarityGraph fuse(std::span<const SimilarityGraph> graphs, const FuseOptions& options) {
  if (graphs.size() < 2) throw ConfigError("fusion needs at least two graphs");

  std::vector<std::string> nodes;
  std::map<std::pair<std::string_view, std::string_view>, std::vector<double>> contributions;
  GraphMetadata meta;
  meta.fused = true;
  for (const auto& g : graphs) {
    for (const auto& kind : g.metadata().trace_kinds) meta.trace_kinds.push_back(kind);
    if (options.keep_isolates) nodes.insert(nodes.end(), g.nodes().begin(), g.nodes().end());
    if (g.edge_count() == 0) continue;
    auto [lo, hi] = std::minmax_element(g.edges().begin(), g.edges().end(),
                                        [](const Edge& a, const Edge& b) { return a.weight < b.weight; });
    const double min_w = lo->weight;
    const double range = hi->weight - min_w;
    for (const auto& e : g.edges()) {
      const double norm = range > 0.0 ? (e.weight - min_w) / range : 1.0;
      contributions[{g.user(e.u), g.user(e.v)}].push_back(norm);
    }
  }
  std::sort(meta.trace_kinds.begin(), meta.trace_kinds.end());
  meta.trace_kinds.erase(std::unique(meta.trace_kinds.begin(), meta.trace_kinds.end()), meta.trace_kinds.end());

  std::vector<UserEdge> edges;
  edges.reserve(contributions.size());
  for (auto& [key, values] : contributions) {
    // Summation in sorted order keeps the result independent of input order.
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    edges.push_back({std::string(key.first), std::string(key.second), std::max(mean, kFusedWeightFloor),
                     static_cast<std::uint32_t>(values.size())});
  }
  return SimilarityGraph::from_edges(std::move(nodes), edges, std::move(meta));
}

}  // namespace coordnet
