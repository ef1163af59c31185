#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "logdim/graph.hpp"
#include "logdim/rng.hpp"

namespace logdim {

/// The eight connected graphlets on three and four nodes.
enum class Graphlet : std::uint8_t {
  path3 = 0,
  triangle = 1,
  path4 = 2,
  star4 = 3,
  cycle4 = 4,
  paw = 5,      ///< tailed triangle
  diamond = 6,
  clique4 = 7,
};

inline constexpr std::size_t kGraphletCount = 8;

std::string_view graphlet_name(Graphlet g);

struct GraphletVector {
  std::array<double, kGraphletCount> counts{};
  std::size_t edge_count = 0;
  bool sampled = false;
  double sample_prob = 1.0;

  double operator[](Graphlet g) const { return counts[static_cast<std::size_t>(g)]; }
};

/// Classifies a connected induced subgraph on 3 or 4 nodes from its edge
/// count and maximum degree.
Graphlet classify_graphlet(std::size_t nodes, std::size_t edges, std::size_t max_degree);

/// Counts every connected induced 3- and 4-node subgraph exactly once (ESU).
GraphletVector count_graphlets_exact(const Graph& g);

/// rand-ESU estimate. Each enumeration depth 2..k continues with probability
/// q^(1/(k-1)); each reached k-subgraph adds 1/q to its class. With q = 1 the
/// result equals count_graphlets_exact exactly.
GraphletVector count_graphlets_sampled(const Graph& g, double q, Seed seed);

/// The default continuation probability min(1, 10/n).
double default_sampling_probability(std::size_t node_count);

/// Classifier features: log10(count + 1) per graphlet; optionally the edge
/// count (same transform) appended as a ninth component.
std::vector<double> graphlet_features(const GraphletVector& v, bool include_edge_count = false);

}  // namespace logdim
