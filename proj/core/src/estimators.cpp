#include "logdim/estimators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "logdim/error.hpp"
#include "logdim/parallel.hpp"

namespace logdim {

// ---------------------------------------------------------------------------
// Power law

double hurwitz_zeta(double s, double a) {
  if (!(s > 1.0) || !(a > 0.0)) throw NumericError("hurwitz_zeta requires s > 1 and a > 0");
  // Euler-Maclaurin summation after N explicit terms.
  constexpr int kDirect = 9;
  constexpr double kBernoulliOverFactorial[] = {
      1.0 / 12.0,                  // B2 / 2!
      -1.0 / 720.0,                // B4 / 4!
      1.0 / 30240.0,               // B6 / 6!
      -1.0 / 1209600.0,            // B8 / 8!
      1.0 / 47900160.0,            // B10 / 10!
      -691.0 / 1307674368000.0,    // B12 / 12!
  };
  double sum = 0.0;
  for (int k = 0; k < kDirect; ++k) sum += std::pow(a + k, -s);
  const double x = a + kDirect;
  sum += std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
  double rising = s;               // s (s+1) ... (s+2j-2)
  double power = std::pow(x, -s - 1.0);
  for (int j = 0; j < 6; ++j) {
    sum += kBernoulliOverFactorial[j] * rising * power;
    rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
    power /= x * x;
  }
  return sum;
}

PowerLawFit fit_power_law(std::span<const std::size_t> values, std::size_t max_candidates) {
  std::vector<std::size_t> xs;
  xs.reserve(values.size());
  for (auto v : values) {
    if (v >= 1) xs.push_back(v);
  }
  if (xs.size() < 50) {
    throw NumericError("power-law fit needs at least 50 positive values, got " +
                       std::to_string(xs.size()));
  }
  std::sort(xs.begin(), xs.end());
  if (xs.front() == xs.back()) {
    throw NumericError("power-law fit is degenerate: all values equal " + std::to_string(xs.front()));
  }

  // Distinct values with the index of their first occurrence in xs.
  std::vector<std::size_t> distinct;
  std::vector<std::size_t> first_index;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i == 0 || xs[i] != xs[i - 1]) {
      distinct.push_back(xs[i]);
      first_index.push_back(i);
    }
  }
  // suffix_log[i] = sum_{j >= i} ln xs[j]
  std::vector<double> suffix_log(xs.size() + 1, 0.0);
  for (std::size_t i = xs.size(); i-- > 0;) {
    suffix_log[i] = suffix_log[i + 1] + std::log(static_cast<double>(xs[i]));
  }

  PowerLawFit best;
  best.ks_distance = std::numeric_limits<double>::infinity();
  // The largest distinct value leaves a one-valued tail; skip it.
  const std::size_t candidates = std::min(max_candidates, distinct.size() - 1);
  for (std::size_t c = 0; c < candidates; ++c) {
    const std::size_t x_min = distinct[c];
    const std::size_t start = first_index[c];
    const std::size_t tail = xs.size() - start;
    const double shift = static_cast<double>(x_min) - 0.5;
    const double log_sum =
        suffix_log[start] - static_cast<double>(tail) * std::log(shift);
    const double eta = 1.0 + static_cast<double>(tail) / log_sum;

    const double norm = hurwitz_zeta(eta, static_cast<double>(x_min));
    double ks = 0.0;
    for (std::size_t d = c; d < distinct.size(); ++d) {
      const std::size_t at_most =
          (d + 1 < distinct.size() ? first_index[d + 1] : xs.size()) - start;
      const double empirical = static_cast<double>(at_most) / static_cast<double>(tail);
      const double model =
          1.0 - hurwitz_zeta(eta, static_cast<double>(distinct[d]) + 1.0) / norm;
      ks = std::max(ks, std::abs(empirical - model));
    }
    if (ks < best.ks_distance) {
      best = {eta, x_min, tail, ks};
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Effective diameter

std::string_view to_string(DiameterBackend backend) {
  switch (backend) {
    case DiameterBackend::automatic: return "auto";
    case DiameterBackend::exact: return "exact";
    case DiameterBackend::sketch: return "sketch";
  }
  return "unknown";
}

double interpolate_effective_diameter(std::span<const double> hop_pairs, double quantile) {
  if (hop_pairs.size() < 2) throw NumericError("effective diameter needs at least one hop");
  const double target = quantile * hop_pairs.back();
  for (std::size_t h = 1; h < hop_pairs.size(); ++h) {
    if (hop_pairs[h] >= target) {
      const double below = hop_pairs[h - 1];
      const double step = hop_pairs[h] - below;
      if (step <= 0.0) return static_cast<double>(h - 1);
      return static_cast<double>(h - 1) + (target - below) / step;
    }
  }
  return static_cast<double>(hop_pairs.size() - 1);
}

namespace {

std::vector<double> exact_hop_pairs(const Graph& g) {
  const std::size_t n = g.node_count();
  constexpr std::size_t kBlocks = 64;
  const std::size_t blocks = std::min(kBlocks, n);
  std::vector<std::vector<std::uint64_t>> histograms(blocks);

  parallel_for(blocks, [&](std::size_t b) {
    auto& hist = histograms[b];
    std::vector<std::uint32_t> dist(n, std::numeric_limits<std::uint32_t>::max());
    std::vector<NodeId> queue(n);
    for (std::size_t source = b; source < n; source += blocks) {
      std::size_t head = 0;
      std::size_t tail = 0;
      queue[tail++] = static_cast<NodeId>(source);
      dist[source] = 0;
      while (head < tail) {
        const NodeId v = queue[head++];
        const std::uint32_t d = dist[v];
        if (d > 0) {
          if (hist.size() <= d) hist.resize(d + 1, 0);
          ++hist[d];
        }
        for (NodeId w : g.neighbors(v)) {
          if (dist[w] == std::numeric_limits<std::uint32_t>::max()) {
            dist[w] = d + 1;
            queue[tail++] = w;
          }
        }
      }
      for (std::size_t i = 0; i < tail; ++i) dist[queue[i]] = std::numeric_limits<std::uint32_t>::max();
    }
  });

  std::vector<std::uint64_t> total;
  for (const auto& hist : histograms) {
    if (total.size() < hist.size()) total.resize(hist.size(), 0);
    for (std::size_t d = 0; d < hist.size(); ++d) total[d] += hist[d];
  }
  std::vector<double> cumulative(std::max<std::size_t>(total.size(), 1), 0.0);
  std::uint64_t running = 0;
  for (std::size_t d = 1; d < total.size(); ++d) {
    running += total[d];
    cumulative[d] = static_cast<double>(running);
  }
  return cumulative;
}

// Flajolet-Martin estimate from the mean lowest-zero-bit index, with the
// small-cardinality correction of Scheuermann and Mauve.
double fm_estimate(const std::uint32_t* masks, std::size_t registers) {
  constexpr double kPhi = 0.77351;
  constexpr double kKappa = 1.75;
  double z = 0.0;
  for (std::size_t r = 0; r < registers; ++r) z += std::countr_one(masks[r]);
  z /= static_cast<double>(registers);
  return (std::exp2(z) - std::exp2(-kKappa * z)) / kPhi;
}

std::vector<double> sketch_hop_pairs(const Graph& g, Seed seed, std::size_t registers,
                                     std::size_t runs) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<double>> curves(runs);

  parallel_for(runs, [&](std::size_t run) {
    const Seed run_seed = derive_seed(seed, "anf/run", run);
    std::vector<std::uint32_t> current(n * registers);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t r = 0; r < registers; ++r) {
        const std::uint64_t h = mix64(run_seed ^ mix64(v * registers + r));
        const int bit = std::min(31, std::countr_zero(h | (std::uint64_t{1} << 31)));
        current[v * registers + r] = std::uint32_t{1} << bit;
      }
    }
    std::vector<std::uint32_t> next(current.size());
    auto& curve = curves[run];
    curve.push_back(0.0);
    const double self = static_cast<double>(n);
    for (std::size_t hop = 1; hop <= n; ++hop) {
      bool changed = false;
      double total = 0.0;
      for (std::size_t v = 0; v < n; ++v) {
        std::uint32_t* out = next.data() + v * registers;
        const std::uint32_t* own = current.data() + v * registers;
        std::copy(own, own + registers, out);
        for (NodeId w : g.neighbors(static_cast<NodeId>(v))) {
          const std::uint32_t* theirs = current.data() + static_cast<std::size_t>(w) * registers;
          for (std::size_t r = 0; r < registers; ++r) out[r] |= theirs[r];
        }
        if (!changed && !std::equal(own, own + registers, out)) changed = true;
        total += fm_estimate(out, registers);
      }
      if (!changed) break;
      curve.push_back(std::max(0.0, total - self));
      current.swap(next);
    }
    // A run whose sketches never changed still reached hop 1 (the graph has
    // edges), so give it one flat step.
    if (curve.size() == 1) curve.push_back(0.0);
  });

  std::size_t hops = 0;
  for (const auto& c : curves) hops = std::max(hops, c.size());
  std::vector<double> mean(hops, 0.0);
  for (const auto& c : curves) {
    for (std::size_t h = 0; h < hops; ++h) mean[h] += h < c.size() ? c[h] : c.back();
  }
  for (auto& value : mean) value /= static_cast<double>(runs);
  // Keep the curve non-decreasing.
  for (std::size_t h = 1; h < hops; ++h) mean[h] = std::max(mean[h], mean[h - 1]);
  return mean;
}

}  // namespace

EffectiveDiameter effective_diameter(const Graph& g, Seed seed, const DiameterOptions& options) {
  if (g.edge_count() == 0) throw NumericError("effective diameter is undefined on an edgeless graph");
  if (!(options.quantile > 0.0 && options.quantile <= 1.0)) {
    throw InputError("effective diameter quantile must lie in (0, 1]");
  }
  EffectiveDiameter result;
  result.quantile = options.quantile;
  result.graph_nodes = g.node_count();

  const auto components = connected_components(g);
  const bool connected = components.front().size() == g.node_count();
  result.restricted = !connected;
  result.component_nodes = components.front().size();
  Graph restricted_graph;
  if (!connected) restricted_graph = induced_subgraph(g, components.front()).graph;
  const Graph& core = connected ? g : restricted_graph;

  DiameterBackend backend = options.backend;
  if (backend == DiameterBackend::automatic) {
    backend = core.node_count() <= options.exact_limit ? DiameterBackend::exact
                                                       : DiameterBackend::sketch;
  }
  result.backend = backend;
  if (backend == DiameterBackend::exact) {
    result.hop_pairs = exact_hop_pairs(core);
  } else {
    if (options.sketch_registers == 0 || options.sketch_runs == 0) {
      throw InputError("sketch backend needs at least one register and one run");
    }
    result.sketch_registers = options.sketch_registers;
    result.sketch_runs = options.sketch_runs;
    result.hop_pairs = sketch_hop_pairs(core, seed, options.sketch_registers, options.sketch_runs);
  }
  result.value = interpolate_effective_diameter(result.hop_pairs, options.quantile);
  return result;
}

// ---------------------------------------------------------------------------
// Parameter inversion

ModelParameters invert_parameters(std::size_t n, double rho, double eta) {
  if (!(eta > 2.0)) {
    throw NumericError("power-law exponent " + std::to_string(eta) +
                       " <= 2 gives attachment strength alpha >= 1 (out of range)");
  }
  if (!(rho > 1.0)) throw NumericError("average degree " + std::to_string(rho) + " <= 1");
  if (!(static_cast<double>(n) > rho)) {
    throw NumericError("node count must exceed the average degree");
  }
  ModelParameters out;
  out.alpha = 1.0 / (eta - 1.0);
  out.beta = 1.0 - std::log(rho) / std::log(static_cast<double>(n)) - out.alpha;
  if (!(out.beta > 0.0)) {
    out.beta = 0.01;
    out.clamped = true;
  }
  return out;
}

double predicted_dimension(double n, double d_eff) {
  if (!(d_eff > 1.0)) {
    throw NumericError("model dimension needs an effective diameter > 1, got " + std::to_string(d_eff));
  }
  return std::log(n) / std::log(d_eff);
}

EstimatedParams estimate_parameters(const Graph& g, Seed seed, const DiameterOptions& diameter) {
  EstimatedParams est;
  est.n = g.node_count();
  est.edges = g.edge_count();
  const auto stats = degree_stats(g);
  est.rho = stats.average;
  try {
    const auto fit = fit_power_law(stats.degrees);
    est.eta = fit.eta;
    est.x_min = fit.x_min;
  } catch (const NumericError& e) {
    throw NumericError(std::string("parameter estimation (power-law fit): ") + e.what());
  }
  try {
    const auto inverted = invert_parameters(est.n, est.rho, est.eta);
    est.alpha = inverted.alpha;
    est.beta = inverted.beta;
    est.clamped = inverted.clamped;
  } catch (const NumericError& e) {
    throw NumericError(std::string("parameter estimation (inversion): ") + e.what());
  }
  est.diameter = effective_diameter(g, derive_seed(seed, "estimators/diameter"), diameter);
  if (est.diameter.value > 1.0) {
    est.m_model = predicted_dimension(static_cast<double>(est.n), est.diameter.value);
  }
  return est;
}

}  // namespace logdim
