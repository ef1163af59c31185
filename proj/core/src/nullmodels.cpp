#include "logdim/nullmodels.hpp"

#include <cmath>
#include <string>
#include <unordered_set>
#include <vector>

#include "logdim/error.hpp"

namespace logdim {

namespace {

std::uint64_t edge_key(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

double pair_count(std::size_t n) {
  return 0.5 * static_cast<double>(n) * (static_cast<double>(n) - 1.0);
}

}  // namespace

double er_edge_probability(std::size_t n, std::size_t target_edges) {
  const double pairs = pair_count(n);
  if (static_cast<double>(target_edges) > pairs) {
    throw InputError("cannot place " + std::to_string(target_edges) + " edges on " +
                     std::to_string(n) + " nodes");
  }
  return pairs == 0.0 ? 0.0 : static_cast<double>(target_edges) / pairs;
}

Graph er_matched(std::size_t n, std::size_t target_edges, Seed seed) {
  const double p = er_edge_probability(n, target_edges);
  std::vector<Edge> edges;
  if (p <= 0.0) return Graph::from_edges(n, {});
  Rng rng(derive_seed(seed, "null/er"));
  if (p >= 1.0) {
    for (NodeId v = 1; v < n; ++v) {
      for (NodeId u = 0; u < v; ++u) edges.push_back({u, v});
    }
    return Graph::from_edges(n, std::move(edges));
  }
  // Geometric skipping over the pairs (u < v) in row order (Batagelj-Brandes).
  const double log_q = std::log1p(-p);
  std::int64_t v = 1;
  std::int64_t u = -1;
  const auto count = static_cast<std::int64_t>(n);
  while (v < count) {
    const double r = uniform01(rng);
    u += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
    while (u >= v && v < count) {
      u -= v;
      ++v;
    }
    if (v < count) edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  }
  return Graph::from_edges(n, std::move(edges));
}

Graph degree_preserving_rewire(const Graph& g, double swaps_per_edge, Seed seed) {
  if (g.edge_count() < 2) throw InputError("degree-preserving rewiring needs at least two edges");
  if (!(swaps_per_edge >= 0.0)) throw InputError("swaps per edge must be non-negative");
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  std::unordered_set<std::uint64_t> present;
  present.reserve(edges.size() * 2);
  for (const auto& e : edges) present.insert(edge_key(e.u, e.v));

  Rng rng(derive_seed(seed, "null/rewire"));
  const auto attempts =
      static_cast<std::size_t>(std::ceil(swaps_per_edge * static_cast<double>(edges.size())));
  for (std::size_t t = 0; t < attempts; ++t) {
    const std::size_t i = uniform_below(rng, edges.size());
    const std::size_t j = uniform_below(rng, edges.size());
    if (i == j) continue;
    const NodeId a = edges[i].u;
    const NodeId b = edges[i].v;
    NodeId c = edges[j].u;
    NodeId d = edges[j].v;
    // Random orientation of the second edge reaches both rewirings.
    if (rng() & 1) std::swap(c, d);
    if (a == d || c == b) continue;
    if (present.contains(edge_key(a, d)) || present.contains(edge_key(c, b))) continue;
    present.erase(edge_key(a, b));
    present.erase(edge_key(c, d));
    present.insert(edge_key(a, d));
    present.insert(edge_key(c, b));
    edges[i] = {a, d};
    edges[j] = {c, b};
  }
  return Graph::from_edges(g.node_count(), std::move(edges));
}

Graph percolate(const Graph& g, double fraction, Seed seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw InputError("percolation fraction must lie in [0, 1]");
  const std::size_t m = g.edge_count();
  const auto steps = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(m)));
  if (steps == 0) return g;
  const std::size_t n = g.node_count();
  if (static_cast<double>(m) >= pair_count(n)) return g;  // complete graph: nothing to move to

  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  std::unordered_set<std::uint64_t> present;
  present.reserve(edges.size() * 2);
  for (const auto& e : edges) present.insert(edge_key(e.u, e.v));

  Rng rng(derive_seed(seed, "null/percolate"));
  for (std::size_t t = 0; t < steps; ++t) {
    const std::size_t i = uniform_below(rng, edges.size());
    present.erase(edge_key(edges[i].u, edges[i].v));
    NodeId u;
    NodeId v;
    do {
      u = static_cast<NodeId>(uniform_below(rng, n));
      v = static_cast<NodeId>(uniform_below(rng, n));
    } while (u == v || present.contains(edge_key(u, v)));
    present.insert(edge_key(u, v));
    edges[i] = {u, v};
  }
  return Graph::from_edges(n, std::move(edges));
}

}  // namespace logdim
