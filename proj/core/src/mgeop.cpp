#include "logdim/mgeop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "logdim/error.hpp"

namespace logdim {

void MgeopParams::validate() const {
  if (n < 1) throw InputError("MGEO-P requires n >= 1");
  if (n > std::numeric_limits<NodeId>::max()) throw InputError("MGEO-P node count too large");
  if (m < 1) throw InputError("MGEO-P requires dimension m >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InputError("MGEO-P requires 0 < alpha < 1, got " + std::to_string(alpha));
  }
  if (!(beta > 0.0 && beta < 1.0 - alpha)) {
    throw InputError("MGEO-P requires 0 < beta < 1 - alpha, got beta=" + std::to_string(beta) +
                     " with alpha=" + std::to_string(alpha));
  }
  if (!(p > 0.0 && p <= 1.0)) {
    throw InputError("MGEO-P requires 0 < p <= 1, got " + std::to_string(p));
  }
}

double influence_radius(std::size_t rank, const MgeopParams& params) {
  if (rank < 1 || rank > params.n) {
    throw InputError("rank " + std::to_string(rank) + " outside 1.." + std::to_string(params.n));
  }
  const double log_volume = -params.alpha * std::log(static_cast<double>(rank)) -
                            params.beta * std::log(static_cast<double>(params.n));
  return 0.5 * std::exp(log_volume / static_cast<double>(params.m));
}

double torus_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw InputError("torus_distance: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                     std::to_string(y.size()) + ")");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = std::abs(x[i] - y[i]);
    worst = std::max(worst, std::min(d, 1.0 - d));
  }
  return worst;
}

namespace {

// True iff every coordinate's wrap-around gap is within radius. Branch-free
// over coordinates; the early-exit form mispredicts badly for large radii.
inline bool within(const double* x, const double* y, std::size_t m, double radius) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double d = std::abs(x[i] - y[i]);
    worst = std::max(worst, std::min(d, 1.0 - d));
  }
  return worst <= radius;
}

// Multi-resolution bucket grid over the torus. Level l has 2^(l+1) cells per
// axis; every inserted point is stored at every level, and each query picks
// the level whose box scan is cheapest (or asks for a linear scan).
class TorusGrid {
 public:
  TorusGrid(std::size_t n, std::size_t m) : m_(m) {
    const double cell_cap = std::max(64.0, 2.0 * static_cast<double>(n));
    for (std::size_t side = 2;; side *= 2) {
      const double cells = std::pow(static_cast<double>(side), static_cast<double>(m));
      if (cells > cell_cap) break;
      Level level;
      level.side = side;
      level.cells.resize(static_cast<std::size_t>(cells));
      levels_.push_back(std::move(level));
    }
  }

  bool usable() const { return !levels_.empty(); }

  void insert(NodeId id, const double* x) {
    for (auto& level : levels_) level.cells[cell_of(level, x)].push_back(id);
  }

  // Calls visit(id) for every stored point whose cell meets the box of half
  // side radius around x. Returns false (without visiting) when a linear scan
  // over the `stored` points is estimated to be cheaper.
  template <class Visit>
  bool query(const double* x, double radius, std::size_t stored, Visit&& visit) {
    const Level* best = nullptr;
    double best_cost = static_cast<double>(stored);
    for (const auto& level : levels_) {
      const auto g = static_cast<double>(level.side);
      double cells = 1.0;
      double fraction = 1.0;
      for (std::size_t i = 0; i < m_; ++i) {
        double span = std::floor((x[i] + radius) * g) - std::floor((x[i] - radius) * g) + 1.0;
        span = std::min(span, g);
        cells *= span;
        fraction *= span / g;
      }
      const double cost = cells + 2.0 * fraction * static_cast<double>(stored);
      if (cost < best_cost) {
        best_cost = cost;
        best = &level;
      }
    }
    if (best == nullptr) return false;

    const auto side = static_cast<std::int64_t>(best->side);
    lo_.resize(m_);
    count_.resize(m_);
    digit_.assign(m_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      const auto g = static_cast<double>(side);
      const auto lo = static_cast<std::int64_t>(std::floor((x[i] - radius) * g));
      const auto hi = static_cast<std::int64_t>(std::floor((x[i] + radius) * g));
      if (hi - lo + 1 >= side) {
        lo_[i] = 0;
        count_[i] = side;
      } else {
        lo_[i] = lo;
        count_[i] = hi - lo + 1;
      }
    }
    for (;;) {
      std::size_t index = 0;
      std::size_t stride = 1;
      for (std::size_t i = 0; i < m_; ++i) {
        const std::int64_t c = ((lo_[i] + digit_[i]) % side + side) % side;
        index += static_cast<std::size_t>(c) * stride;
        stride *= best->side;
      }
      for (NodeId id : best->cells[index]) visit(id);

      std::size_t axis = 0;
      while (axis < m_ && ++digit_[axis] == count_[axis]) {
        digit_[axis] = 0;
        ++axis;
      }
      if (axis == m_) break;
    }
    return true;
  }

 private:
  struct Level {
    std::size_t side = 0;
    std::vector<std::vector<NodeId>> cells;
  };

  std::size_t cell_of(const Level& level, const double* x) const {
    std::size_t index = 0;
    std::size_t stride = 1;
    for (std::size_t i = 0; i < m_; ++i) {
      auto c = static_cast<std::size_t>(x[i] * static_cast<double>(level.side));
      c = std::min(c, level.side - 1);
      index += c * stride;
      stride *= level.side;
    }
    return index;
  }

  std::size_t m_;
  std::vector<Level> levels_;
  std::vector<std::int64_t> lo_;
  std::vector<std::int64_t> count_;
  std::vector<std::int64_t> digit_;
};

constexpr std::size_t kNaiveLimit = 2000;

}  // namespace

MgeopSample generate(const MgeopParams& params, Seed seed, SpatialIndex index) {
  params.validate();
  const std::size_t n = params.n;
  const std::size_t m = params.m;

  MgeopSample sample;
  sample.dimension = m;

  Rng rank_rng(derive_seed(seed, "mgeop/ranks"));
  sample.ranks.resize(n);
  std::iota(sample.ranks.begin(), sample.ranks.end(), 1u);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(sample.ranks[i - 1], sample.ranks[uniform_below(rank_rng, i)]);
  }

  Rng position_rng(derive_seed(seed, "mgeop/positions"));
  sample.positions.resize(n * m);
  for (auto& coordinate : sample.positions) coordinate = uniform01(position_rng);

  const Seed coin_seed = derive_seed(seed, "mgeop/coins");
  const bool always_link = params.p >= 1.0;
  auto coin = [&](std::uint64_t t, std::uint64_t u) {
    return to_unit(mix64(coin_seed ^ mix64((t << 32) | u))) < params.p;
  };

  const bool use_grid = index == SpatialIndex::grid ||
                        (index == SpatialIndex::automatic && n > kNaiveLimit);
  TorusGrid grid(use_grid ? n : 0, m);

  std::vector<Edge> edges;
  const double* pos = sample.positions.data();
  for (std::size_t t = 0; t < n; ++t) {
    const double radius = influence_radius(sample.ranks[t], params);
    const double* xt = pos + t * m;
    auto consider = [&](NodeId u) {
      if (within(xt, pos + static_cast<std::size_t>(u) * m, m, radius) &&
          (always_link || coin(t, u))) {
        edges.push_back({u, static_cast<NodeId>(t)});
      }
    };
    const bool scanned = use_grid && grid.usable() && grid.query(xt, radius, t, consider);
    if (!scanned) {
      for (std::size_t u = 0; u < t; ++u) consider(static_cast<NodeId>(u));
    }
    if (use_grid) grid.insert(static_cast<NodeId>(t), xt);
  }
  sample.graph = Graph::from_edges(n, std::move(edges));
  return sample;
}

Graph match_edge_count(const Graph& g, std::size_t target_edges, Seed seed) {
  const std::size_t total = g.edge_count();
  if (total <= target_edges) return g;
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  Rng rng(derive_seed(seed, "mgeop/match"));
  // Partial Fisher-Yates: the first (total - target) slots become the
  // deleted edges, drawn without replacement.
  const std::size_t deletions = total - target_edges;
  for (std::size_t i = 0; i < deletions; ++i) {
    const std::size_t j = i + uniform_below(rng, total - i);
    std::swap(edges[i], edges[j]);
  }
  edges.erase(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(deletions));
  return Graph::from_edges(g.node_count(), std::move(edges));
}

void write_positions(const MgeopSample& sample, std::ostream& out) {
  const auto precision = out.precision(17);
  for (std::size_t id = 0; id < sample.ranks.size(); ++id) {
    out << id << '\t' << sample.ranks[id];
    for (double x : sample.position(static_cast<NodeId>(id))) out << '\t' << x;
    out << '\n';
  }
  out.precision(precision);
}

}  // namespace logdim
