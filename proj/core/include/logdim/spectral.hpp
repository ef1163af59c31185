#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "logdim/graph.hpp"

namespace logdim {

inline constexpr std::size_t kSpectralBins = 201;
inline constexpr std::size_t kDefaultEigenCap = 10000;

/// Add-one smoothed 201-bin density of eigenvalues on [0, 2]. Bin i covers
/// [2i/201, 2(i+1)/201); the last bin is closed at 2.
struct SpectralHistogram {
  std::array<double, kSpectralBins> bins{};
  std::array<std::uint64_t, kSpectralBins> raw_counts{};
  std::size_t n_eigs = 0;

  static double bin_lower(std::size_t i) { return 2.0 * static_cast<double>(i) / kSpectralBins; }
  static double bin_upper(std::size_t i) { return 2.0 * static_cast<double>(i + 1) / kSpectralBins; }
};

/// Sorted eigenvalues of I - D^-1/2 A D^-1/2, one per node. Isolated nodes
/// contribute 0. Values are clamped into [0, 2]; a pre-clamp excursion beyond
/// 1e-9 raises NumericError. Throws InputError when n exceeds cap.
std::vector<double> normalized_laplacian_eigenvalues(const Graph& g,
                                                     std::size_t cap = kDefaultEigenCap);

std::size_t spectral_bin(double eigenvalue);

SpectralHistogram spectral_histogram(std::span<const double> eigenvalues);

/// sum_i P_i ln(P_i / Q_i) over two strictly positive distributions.
double kl_divergence(std::span<const double> p, std::span<const double> q);
double kl_divergence(const SpectralHistogram& a, const SpectralHistogram& b);

struct DimensionInterval {
  int best = 0;
  int lo = 0;
  int hi = 0;
};

/// best = argmin (ties to the smaller dimension); [lo, hi] is the maximal
/// consecutive run around best whose divergences are <= tolerance * min.
/// The keys must be consecutive integers.
DimensionInterval dimension_interval(const std::map<int, double>& divergences,
                                     double tolerance = 1.05);

}  // namespace logdim
