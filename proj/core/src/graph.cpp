#include "logdim/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>

#include "logdim/error.hpp"

namespace logdim {

namespace {

struct NormalizeCounts {
  std::size_t loops = 0;
  std::size_t duplicates = 0;
};

// Orients every pair as u < v, sorts, and strips loops and duplicates.
NormalizeCounts normalize_edges(std::vector<Edge>& edges) {
  NormalizeCounts counts;
  std::size_t kept = 0;
  for (auto e : edges) {
    if (e.u == e.v) {
      ++counts.loops;
      continue;
    }
    if (e.u > e.v) std::swap(e.u, e.v);
    edges[kept++] = e;
  }
  edges.resize(kept);
  std::sort(edges.begin(), edges.end());
  const auto last = std::unique(edges.begin(), edges.end());
  counts.duplicates = static_cast<std::size_t>(edges.end() - last);
  edges.erase(last, edges.end());
  return counts;
}

}  // namespace

Graph Graph::from_edges(std::size_t node_count, std::vector<Edge> edges) {
  for (const auto& e : edges) {
    if (e.u >= node_count || e.v >= node_count) {
      throw InputError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                       ") references a node outside a graph of " +
                       std::to_string(node_count) + " nodes");
    }
  }
  normalize_edges(edges);

  Graph g;
  g.node_count_ = node_count;
  g.offsets_.assign(node_count + 1, 0);
  for (const auto& e : edges) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < node_count; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.adjacency_.resize(2 * edges.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // Edges are sorted by (u, v), so filling in edge order leaves each
  // neighbor list sorted: for node x, neighbors w < x arrive (as e.u) before
  // neighbors w > x (as e.v), each group in increasing order.
  for (const auto& e : edges) {
    g.adjacency_[cursor[e.v]++] = e.u;
  }
  for (const auto& e : edges) {
    g.adjacency_[cursor[e.u]++] = e.v;
  }
  g.edges_ = std::move(edges);
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const noexcept {
  if (u >= node_count_ || v >= node_count_ || u == v) return false;
  if (degree(u) > degree(v)) std::swap(u, v);
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

LoadedGraph read_edge_list(std::istream& in, const std::string& source_name) {
  LoadedGraph out;
  std::unordered_map<std::uint64_t, NodeId> ids;
  std::vector<Edge> edges;

  auto intern = [&](std::uint64_t raw) {
    auto [it, inserted] = ids.try_emplace(raw, static_cast<NodeId>(out.original_ids.size()));
    if (inserted) out.original_ids.push_back(raw);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest(line);
    auto skip_space = [&] {
      while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t' ||
                               rest.front() == '\r'))
        rest.remove_prefix(1);
    };
    skip_space();
    if (rest.empty() || rest.front() == '#') continue;

    std::uint64_t endpoints[2];
    for (auto& value : endpoints) {
      skip_space();
      const auto token_end = rest.find_first_of(" \t\r");
      const std::string_view token = rest.substr(0, token_end);
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
        throw InputError(source_name + ":" + std::to_string(line_no) +
                         ": expected two non-negative integers, got '" + line + "'");
      }
      rest.remove_prefix(token.size());
    }
    skip_space();
    if (!rest.empty()) {
      throw InputError(source_name + ":" + std::to_string(line_no) +
                       ": trailing tokens after edge in '" + line + "'");
    }
    edges.push_back({intern(endpoints[0]), intern(endpoints[1])});
    ++out.summary.edges_read;
  }
  if (in.bad()) throw InputError(source_name + ": read failure");

  out.summary.lines = line_no;
  const auto counts = normalize_edges(edges);
  out.summary.self_loops = counts.loops;
  out.summary.duplicate_edges = counts.duplicates;
  out.graph = Graph::from_edges(out.original_ids.size(), std::move(edges));
  return out;
}

LoadedGraph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open edge list '" + path.string() + "'");
  return read_edge_list(in, path.string());
}

void write_edge_list(const Graph& g, std::ostream& out) {
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void save_edge_list(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  write_edge_list(g, out);
  out.flush();
  if (!out) throw InputError("write failure on '" + path.string() + "'");
}

Subgraph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
  constexpr NodeId kAbsent = static_cast<NodeId>(-1);
  std::vector<NodeId> remap(g.node_count(), kAbsent);
  Subgraph sub;
  sub.parent_ids.assign(nodes.begin(), nodes.end());
  std::sort(sub.parent_ids.begin(), sub.parent_ids.end());
  sub.parent_ids.erase(std::unique(sub.parent_ids.begin(), sub.parent_ids.end()),
                       sub.parent_ids.end());
  for (std::size_t i = 0; i < sub.parent_ids.size(); ++i) {
    remap.at(sub.parent_ids[i]) = static_cast<NodeId>(i);
  }
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    if (remap[e.u] != kAbsent && remap[e.v] != kAbsent) {
      edges.push_back({remap[e.u], remap[e.v]});
    }
  }
  sub.graph = Graph::from_edges(sub.parent_ids.size(), std::move(edges));
  return sub;
}

Subgraph k_core(const Graph& g, std::size_t k) {
  if (k == 0) throw InputError("k_core requires k >= 1");
  const std::size_t n = g.node_count();
  std::vector<std::size_t> degree(n);
  std::vector<char> removed(n, 0);
  std::vector<NodeId> stack;
  for (NodeId v = 0; v < n; ++v) {
    degree[v] = g.degree(v);
    if (degree[v] < k) {
      removed[v] = 1;
      stack.push_back(v);
    }
  }
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (NodeId w : g.neighbors(v)) {
      if (removed[w]) continue;
      if (--degree[w] < k) {
        removed[w] = 1;
        stack.push_back(w);
      }
    }
  }
  std::vector<NodeId> survivors;
  for (NodeId v = 0; v < n; ++v) {
    if (!removed[v]) survivors.push_back(v);
  }
  return induced_subgraph(g, survivors);
}

std::vector<std::vector<NodeId>> connected_components(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<char> seen(n, 0);
  std::vector<std::vector<NodeId>> components;
  std::vector<NodeId> frontier;
  for (NodeId root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::vector<NodeId> members{root};
    seen[root] = 1;
    frontier.assign(1, root);
    while (!frontier.empty()) {
      const NodeId v = frontier.back();
      frontier.pop_back();
      for (NodeId w : g.neighbors(v)) {
        if (!seen[w]) {
          seen[w] = 1;
          members.push_back(w);
          frontier.push_back(w);
        }
      }
    }
    std::sort(members.begin(), members.end());
    components.push_back(std::move(members));
  }
  // Roots were visited in increasing order, so a stable sort by size keeps
  // equal-size components ordered by their smallest member.
  std::stable_sort(components.begin(), components.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return components;
}

DegreeStats degree_stats(const Graph& g) {
  if (g.node_count() == 0) throw InputError("average degree is undefined on an empty graph");
  DegreeStats stats;
  stats.degrees.resize(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) stats.degrees[v] = g.degree(v);
  stats.average = 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
  return stats;
}

}  // namespace logdim
