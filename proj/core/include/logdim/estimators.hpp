#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "logdim/graph.hpp"
#include "logdim/rng.hpp"

namespace logdim {

/// Discrete power-law fit, Clauset-Shalizi-Newman style.
struct PowerLawFit {
  double eta = 0.0;         ///< exponent estimate
  std::size_t x_min = 0;    ///< lower cutoff chosen by minimum KS distance
  std::size_t tail_size = 0;
  double ks_distance = 0.0;
};

/// Fits P(x) ~ x^-eta on the tail x >= x_min of the positive values.
///
/// eta = 1 + N / sum_{x >= x_min} ln(x / (x_min - 0.5)); x_min ranges over
/// the `max_candidates` smallest distinct values and minimizes the KS distance between
/// the empirical tail CDF and the discrete power law (Hurwitz zeta
/// normalization). Zeros are ignored. Throws NumericError with fewer than 50
/// positive values or when all positive values are equal.
inline constexpr std::size_t kPowerLawCandidates = 100;
PowerLawFit fit_power_law(std::span<const std::size_t> values,
                          std::size_t max_candidates = kPowerLawCandidates);

/// Hurwitz zeta sum_{k>=0} (a + k)^-s for s > 1, a > 0.
double hurwitz_zeta(double s, double a);

enum class DiameterBackend {
  automatic,  ///< exact when the largest component has <= exact_limit nodes
  exact,      ///< all-sources BFS
  sketch,     ///< Flajolet-Martin neighborhood sketches (ANF)
};

struct DiameterOptions {
  double quantile = 0.99;
  DiameterBackend backend = DiameterBackend::automatic;
  std::size_t exact_limit = 5000;
  std::size_t sketch_registers = 64;
  std::size_t sketch_runs = 8;
};

struct EffectiveDiameter {
  double value = 0.0;
  double quantile = 0.99;
  DiameterBackend backend = DiameterBackend::exact;  ///< backend actually used
  std::size_t component_nodes = 0;  ///< size of the largest component
  std::size_t graph_nodes = 0;
  bool restricted = false;          ///< true if the graph was disconnected
  std::size_t sketch_registers = 0;
  std::size_t sketch_runs = 0;
  /// hop_pairs[h] = (estimated) ordered pairs u != v at distance <= h; [0] = 0.
  std::vector<double> hop_pairs;
};

/// Interpolated quantile effective diameter of the largest component.
/// Throws NumericError on graphs without edges.
EffectiveDiameter effective_diameter(const Graph& g, Seed seed, const DiameterOptions& options = {});

/// Interpolates the quantile hop count from a cumulative pair curve with
/// hop_pairs[0] == 0.
double interpolate_effective_diameter(std::span<const double> hop_pairs, double quantile);

struct ModelParameters {
  double alpha = 0.0;
  double beta = 0.0;
  bool clamped = false;  ///< beta was raised to 0.01
};

/// alpha = 1/(eta-1), alpha + beta = 1 - log(rho)/log(n).
ModelParameters invert_parameters(std::size_t n, double rho, double eta);

/// log(n) / log(d_eff); requires d_eff > 1.
double predicted_dimension(double n, double d_eff);

struct EstimatedParams {
  std::size_t n = 0;
  std::size_t edges = 0;
  double rho = 0.0;
  double eta = 0.0;
  std::size_t x_min = 0;
  double alpha = 0.0;
  double beta = 0.0;
  bool clamped = false;
  EffectiveDiameter diameter;
  std::optional<double> m_model;  ///< empty when the effective diameter is <= 1
};

/// Average degree, power-law exponent, inverted (alpha, beta), effective
/// diameter and model dimension of g. Failures carry the failing step in
/// their message.
EstimatedParams estimate_parameters(const Graph& g, Seed seed,
                                    const DiameterOptions& diameter = {});

std::string_view to_string(DiameterBackend backend);

}  // namespace logdim
