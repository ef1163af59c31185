#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace logdim {

using NodeId = std::uint32_t;

/// Undirected edge stored with u < v once normalized.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable simple undirected graph on nodes 0..node_count()-1.
///
/// Holds the sorted edge list (u < v, lexicographic) and a CSR adjacency
/// with sorted neighbor lists. Safe for concurrent reads.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from arbitrary pairs: orients each pair as u < v, drops
  /// self-loops and duplicates. Throws InputError if an endpoint is not below
  /// node_count.
  static Graph from_edges(std::size_t node_count, std::vector<Edge> edges);

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return node_count_ == 0; }

  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(NodeId u, NodeId v) const noexcept;

  friend bool operator==(const Graph& a, const Graph& b) noexcept {
    return a.node_count_ == b.node_count_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
};

struct LoadSummary {
  std::size_t lines = 0;
  std::size_t edges_read = 0;
  std::size_t duplicate_edges = 0;
  std::size_t self_loops = 0;
};

struct LoadedGraph {
  Graph graph;
  LoadSummary summary;
  /// original_ids[new_id] is the id as written in the file.
  std::vector<std::uint64_t> original_ids;
};

/// Parses "u v" lines; '#' lines and blank lines are skipped. Ids are
/// compacted to 0..n-1 in order of first appearance.
LoadedGraph read_edge_list(std::istream& in, const std::string& source_name = "<stream>");
LoadedGraph load_edge_list(const std::filesystem::path& path);

void write_edge_list(const Graph& g, std::ostream& out);
void save_edge_list(const Graph& g, const std::filesystem::path& path);

/// A recompacted subgraph with the map back to the parent's node ids.
struct Subgraph {
  Graph graph;
  std::vector<NodeId> parent_ids;  // parent_ids[new_id] = old id
};

Subgraph induced_subgraph(const Graph& g, std::span<const NodeId> nodes);

/// Maximal induced subgraph with minimum degree >= k, by iterative peeling.
Subgraph k_core(const Graph& g, std::size_t k);

/// Connected components, largest first; ties ordered by smallest member.
/// Each component's node list is sorted.
std::vector<std::vector<NodeId>> connected_components(const Graph& g);

struct DegreeStats {
  std::vector<std::size_t> degrees;
  double average = 0.0;
};

/// Degree sequence indexed by node id and average degree 2|E|/n.
/// Throws InputError on the empty graph.
DegreeStats degree_stats(const Graph& g);

}  // namespace logdim
