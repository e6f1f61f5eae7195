#include "coordnet/graph_io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "coordnet/error.hpp"

namespace coordnet {

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw Error(ErrorKind::Internal, "cannot format double");
  return std::string(buf, end);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    auto comma = line.find(',', pos);
    fields.push_back(line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return fields;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

void write_edge_csv(std::ostream& out, const SimilarityGraph& graph) {
  const bool support = graph.metadata().fused;
  out << (support ? "u,v,weight,support\n" : "u,v,weight\n");
  for (const auto& e : graph.edges()) {
    out << graph.user(e.u) << ',' << graph.user(e.v) << ',' << format_double(e.weight);
    if (support) out << ',' << e.support;
    out << '\n';
  }
}

void write_edge_csv_file(const std::string& path, const SimilarityGraph& graph) {
  auto out = open_out(path);
  write_edge_csv(out, graph);
}

SimilarityGraph read_edge_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("edge list is empty (missing header)");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv(line);
  const bool support = header.size() == 4 && header[3] == "support";
  if (header.size() < 3 || header[0] != "u" || header[1] != "v" || header[2] != "weight") {
    throw DataError("edge list header must be 'u,v,weight[,support]'");
  }
  std::vector<UserEdge> edges;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split_csv(line);
    if (f.size() != header.size()) throw DataError("edge list line " + std::to_string(lineno) + ": wrong field count");
    UserEdge e{f[0], f[1], 0.0, 1};
    char* end = nullptr;
    e.weight = std::strtod(f[2].c_str(), &end);
    if (f[2].empty() || *end != '\0') throw DataError("edge list line " + std::to_string(lineno) + ": bad weight");
    if (support) {
      auto [p, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), e.support);
      if (ec != std::errc{} || p != f[3].data() + f[3].size()) {
        throw DataError("edge list line " + std::to_string(lineno) + ": bad support");
      }
    }
    edges.push_back(std::move(e));
  }
  GraphMetadata meta;
  meta.fused = support;
  return SimilarityGraph::from_edges({}, edges, std::move(meta));
}

SimilarityGraph read_edge_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read edge list " + path);
  return read_edge_csv(in);
}

void write_gexf(std::ostream& out, const SimilarityGraph& graph, const NodeAttributes& attrs) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<gexf xmlns=\"http://gexf.net/1.2\" version=\"1.2\">\n"
      << "  <graph mode=\"static\" defaultedgetype=\"undirected\">\n"
      << "    <attributes class=\"node\">\n"
      << "      <attribute id=\"0\" title=\"centrality\" type=\"double\"/>\n"
      << "      <attribute id=\"1\" title=\"community\" type=\"integer\"/>\n"
      << "      <attribute id=\"2\" title=\"language\" type=\"string\"/>\n"
      << "      <attribute id=\"3\" title=\"is_driver\" type=\"boolean\"/>\n"
      << "    </attributes>\n"
      << "    <nodes>\n";
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    const double c = attrs.centrality && idx < attrs.centrality->size() ? (*attrs.centrality)[idx] : 0.0;
    const int community = i < attrs.community.size() ? attrs.community[i] : -1;
    const std::string lang = i < attrs.language.size() ? attrs.language[i] : "";
    const bool driver = i < attrs.is_driver.size() && attrs.is_driver[i];
    const auto id = xml_escape(graph.user(static_cast<NodeId>(i)));
    out << "      <node id=\"" << id << "\" label=\"" << id << "\">\n"
        << "        <attvalues>\n"
        << "          <attvalue for=\"0\" value=\"" << format_double(c) << "\"/>\n"
        << "          <attvalue for=\"1\" value=\"" << community << "\"/>\n"
        << "          <attvalue for=\"2\" value=\"" << xml_escape(lang) << "\"/>\n"
        << "          <attvalue for=\"3\" value=\"" << (driver ? "true" : "false") << "\"/>\n"
        << "        </attvalues>\n"
        << "      </node>\n";
  }
  out << "    </nodes>\n    <edges>\n";
  std::size_t k = 0;
  for (const auto& e : graph.edges()) {
    out << "      <edge id=\"" << k++ << "\" source=\"" << xml_escape(graph.user(e.u)) << "\" target=\""
        << xml_escape(graph.user(e.v)) << "\" weight=\"" << format_double(e.weight) << "\"/>\n";
  }
  out << "    </edges>\n  </graph>\n</gexf>\n";
}

void write_gexf_file(const std::string& path, const SimilarityGraph& graph, const NodeAttributes& attrs) {
  auto out = open_out(path);
  write_gexf(out, graph, attrs);
}

void write_partition_csv(std::ostream& out, const SimilarityGraph& graph, const Partition& partition) {
  out << "user_id,community\n";
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    out << graph.user(static_cast<NodeId>(i)) << ',' << partition.assignment.at(i) << '\n';
  }
}

void write_partition_csv_file(const std::string& path, const SimilarityGraph& graph, const Partition& partition) {
  auto out = open_out(path);
  write_partition_csv(out, graph, partition);
}

Partition read_partition_csv_file(const std::string& path, const SimilarityGraph& graph, double resolution) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read partition " + path);
  std::string line;
  std::getline(in, line);
  std::vector<int> labels(graph.node_count(), -1);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split_csv(line);
    if (f.size() != 2) throw DataError("partition line '" + line + "' must be user_id,community");
    auto id = graph.find(f[0]);
    if (!id) throw DataError("partition names unknown node " + f[0]);
    int c = 0;
    auto [p, ec] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), c);
    if (ec != std::errc{} || c < 0) throw DataError("bad community id for " + f[0]);
    labels[*id] = c;
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) throw DataError("partition does not cover node " + graph.user(static_cast<NodeId>(i)));
  }
  Partition p;
  p.resolution = resolution;
  p.assignment = canonical_labels(labels);
  p.modularity = graph.edge_count() ? modularity(graph, p.assignment, resolution) : 0.0;
  return p;
}

}  // namespace coordnet
