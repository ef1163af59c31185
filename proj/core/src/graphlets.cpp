#include "logdim/graphlets.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "logdim/error.hpp"
#include "logdim/parallel.hpp"

namespace logdim {

std::string_view graphlet_name(Graphlet g) {
  switch (g) {
    case Graphlet::path3: return "path3";
    case Graphlet::triangle: return "triangle";
    case Graphlet::path4: return "path4";
    case Graphlet::star4: return "star4";
    case Graphlet::cycle4: return "cycle4";
    case Graphlet::paw: return "paw";
    case Graphlet::diamond: return "diamond";
    case Graphlet::clique4: return "clique4";
  }
  return "unknown";
}

Graphlet classify_graphlet(std::size_t nodes, std::size_t edges, std::size_t max_degree) {
  if (nodes == 3) {
    if (edges == 2) return Graphlet::path3;
    if (edges == 3) return Graphlet::triangle;
  } else if (nodes == 4) {
    switch (edges) {
      case 3: return max_degree == 3 ? Graphlet::star4 : Graphlet::path4;
      case 4: return max_degree == 3 ? Graphlet::paw : Graphlet::cycle4;
      case 5: return Graphlet::diamond;
      case 6: return Graphlet::clique4;
      default: break;
    }
  }
  throw NumericError("not a connected graphlet: " + std::to_string(nodes) + " nodes, " +
                     std::to_string(edges) + " edges");
}

namespace {

using Hits = std::array<std::uint64_t, kGraphletCount>;

// One ESU search tree rooted at a vertex, for subgraphs of exactly k nodes.
// Children at depth 2..k survive with probability keep (never sampled when
// keep >= 1).
class EsuWalker {
 public:
  EsuWalker(const Graph& g, std::size_t k, double keep, Hits& hits)
      : g_(g), k_(k), keep_(keep), hits_(hits) {}

  void run(NodeId root, Seed stream) {
    state_ = stream;
    root_ = root;
    sub_[0] = root;
    std::vector<NodeId> ext;
    for (NodeId u : g_.neighbors(root)) {
      if (u > root) ext.push_back(u);
    }
    extend(1, std::move(ext));
  }

 private:
  void extend(std::size_t size, std::vector<NodeId> ext) {
    if (size == k_) {
      record();
      return;
    }
    while (!ext.empty()) {
      const NodeId w = ext.back();
      ext.pop_back();
      if (keep_ < 1.0 && next_unit() >= keep_) continue;

      std::vector<NodeId> next = ext;
      if (size + 1 < k_) {
        for (NodeId u : g_.neighbors(w)) {
          if (u <= root_) continue;
          bool exclusive = true;
          for (std::size_t i = 0; i < size && exclusive; ++i) {
            if (sub_[i] == u || g_.has_edge(sub_[i], u)) exclusive = false;
          }
          if (exclusive) next.push_back(u);
        }
      }
      sub_[size] = w;
      extend(size + 1, std::move(next));
    }
  }

  void record() {
    std::array<std::size_t, 4> degree{};
    std::size_t edges = 0;
    for (std::size_t i = 0; i < k_; ++i) {
      for (std::size_t j = i + 1; j < k_; ++j) {
        if (g_.has_edge(sub_[i], sub_[j])) {
          ++edges;
          ++degree[i];
          ++degree[j];
        }
      }
    }
    const std::size_t max_degree = *std::max_element(degree.begin(), degree.begin() + k_);
    ++hits_[static_cast<std::size_t>(classify_graphlet(k_, edges, max_degree))];
  }

  // SplitMix64 counter stream; an mt19937_64 reseed per root costs more than
  // the sampled walk itself.
  double next_unit() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return to_unit(mix64(state_));
  }

  const Graph& g_;
  std::size_t k_;
  double keep_;
  Hits& hits_;
  std::uint64_t state_ = 0;
  NodeId root_ = 0;
  std::array<NodeId, 4> sub_{};
};

GraphletVector count_impl(const Graph& g, double q, Seed seed) {
  const std::size_t n = g.node_count();
  constexpr std::size_t kBlocks = 64;
  const std::size_t blocks = std::max<std::size_t>(1, std::min(kBlocks, n));
  std::vector<Hits> block_hits(blocks, Hits{});

  parallel_for(blocks, [&](std::size_t b) {
    for (std::size_t k : {std::size_t{3}, std::size_t{4}}) {
      const double keep = q >= 1.0 ? 1.0 : std::pow(q, 1.0 / static_cast<double>(k - 1));
      EsuWalker walker(g, k, keep, block_hits[b]);
      for (std::size_t root = b; root < n; root += blocks) {
        walker.run(static_cast<NodeId>(root), derive_seed(seed, "graphlets/esu", k, root));
      }
    }
  });

  Hits total{};
  for (const auto& hits : block_hits) {
    for (std::size_t i = 0; i < kGraphletCount; ++i) total[i] += hits[i];
  }
  GraphletVector out;
  out.edge_count = g.edge_count();
  out.sampled = q < 1.0;
  out.sample_prob = q;
  for (std::size_t i = 0; i < kGraphletCount; ++i) {
    out.counts[i] = static_cast<double>(total[i]) / q;
  }
  return out;
}

}  // namespace

GraphletVector count_graphlets_exact(const Graph& g) { return count_impl(g, 1.0, 0); }

GraphletVector count_graphlets_sampled(const Graph& g, double q, Seed seed) {
  if (!(q > 0.0 && q <= 1.0)) {
    throw InputError("graphlet sampling probability must lie in (0, 1], got " + std::to_string(q));
  }
  return count_impl(g, q, seed);
}

double default_sampling_probability(std::size_t node_count) {
  if (node_count == 0) return 1.0;
  return std::min(1.0, 10.0 / static_cast<double>(node_count));
}

std::vector<double> graphlet_features(const GraphletVector& v, bool include_edge_count) {
  std::vector<double> features;
  features.reserve(kGraphletCount + 1);
  for (double c : v.counts) features.push_back(std::log10(c + 1.0));
  if (include_edge_count) features.push_back(std::log10(static_cast<double>(v.edge_count) + 1.0));
  return features;
}

}  // namespace logdim
