#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "logdim/graph.hpp"
#include "logdim/rng.hpp"

namespace logdim {

/// Generative parameters of the memoryless geometric protean model.
struct MgeopParams {
  std::size_t n = 1;      ///< node count
  std::size_t m = 1;      ///< dimension of the torus [0,1)^m
  double alpha = 0.5;     ///< attachment strength, 0 < alpha < 1
  double beta = 0.25;     ///< density, 0 < beta < 1 - alpha
  double p = 1.0;         ///< link probability, 0 < p <= 1

  /// Throws InputError naming the first violated constraint.
  void validate() const;
};

/// Half side of the L-infinity ball of volume r^-alpha n^-beta.
double influence_radius(std::size_t rank, const MgeopParams& params);

/// Wrap-around L-infinity distance on the unit torus.
double torus_distance(std::span<const double> x, std::span<const double> y);

enum class SpatialIndex {
  automatic,  ///< naive scan for n <= 2000, grid otherwise
  grid,
  naive,
};

/// A generated graph plus the latent state of every node. Node ids are
/// arrival order (id 0 arrived first).
struct MgeopSample {
  Graph graph;
  std::size_t dimension = 0;
  std::vector<std::uint32_t> ranks;  ///< ranks[id] in 1..n, a permutation
  std::vector<double> positions;     ///< row-major, n x dimension

  std::span<const double> position(NodeId id) const {
    return {positions.data() + static_cast<std::size_t>(id) * dimension, dimension};
  }
};

/// Samples MGEO-P(n, m, alpha, beta, p). Deterministic in (params, seed).
///
/// Ranks, positions and link coins come from independent substreams of the
/// seed; the coin for pair (t, u) is a hash of the coin stream and the pair,
/// so the edge set does not depend on the spatial index or on candidate
/// visiting order, and a point cloud is shared across values of p.
MgeopSample generate(const MgeopParams& params, Seed seed,
                     SpatialIndex index = SpatialIndex::automatic);

/// Deletes uniformly random edges until exactly target_edges remain. Graphs
/// with at most target_edges edges are returned unchanged.
Graph match_edge_count(const Graph& g, std::size_t target_edges, Seed seed);

/// TSV dump: "id<TAB>rank<TAB>x_1 ... x_m" per node.
void write_positions(const MgeopSample& sample, std::ostream& out);

}  // namespace logdim
