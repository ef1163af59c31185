#pragma once

#include <cstddef>

#include "logdim/graph.hpp"
#include "logdim/rng.hpp"

namespace logdim {

/// Edge probability target_edges / C(n, 2) of the matched G(n, p).
double er_edge_probability(std::size_t n, std::size_t target_edges);

/// G(n, p) with p chosen so the expected edge count is target_edges.
/// Throws InputError if target_edges > C(n, 2).
Graph er_matched(std::size_t n, std::size_t target_edges, Seed seed);

/// ceil(swaps_per_edge * |E|) attempted double-edge swaps
/// {a,b},{c,d} -> {a,d},{c,b}; swaps that would create a loop or a repeated
/// edge are rejected. The degree sequence is preserved exactly.
Graph degree_preserving_rewire(const Graph& g, double swaps_per_edge, Seed seed);

/// ceil(fraction * |E|) times: delete a uniformly random edge and insert one
/// between two uniform random nodes, redrawing on loops and existing edges.
/// |E| is preserved.
Graph percolate(const Graph& g, double fraction, Seed seed);

}  // namespace logdim
