#include "logdim/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "logdim/error.hpp"

namespace logdim {

std::vector<double> normalized_laplacian_eigenvalues(const Graph& g, std::size_t cap) {
  const std::size_t n = g.node_count();
  if (n == 0) throw InputError("normalized Laplacian needs at least one node");
  if (n > cap) {
    throw InputError("graph has " + std::to_string(n) + " nodes, above the dense eigensolver cap of " +
                     std::to_string(cap) + "; raise the cap to proceed");
  }

  std::vector<double> inv_sqrt_degree(n, 0.0);
  for (NodeId v = 0; v < n; ++v) {
    if (g.degree(v) > 0) inv_sqrt_degree[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(v)));
  }
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd laplacian = Eigen::MatrixXd::Zero(dim, dim);
  for (NodeId v = 0; v < n; ++v) {
    if (g.degree(v) > 0) laplacian(v, v) = 1.0;
  }
  for (const auto& e : g.edges()) {
    const double w = -inv_sqrt_degree[e.u] * inv_sqrt_degree[e.v];
    laplacian(e.u, e.v) = w;
    laplacian(e.v, e.u) = w;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("symmetric eigensolver failed to converge");
  }
  const auto& values = solver.eigenvalues();
  std::vector<double> out(values.data(), values.data() + values.size());
  for (double& lambda : out) {
    if (lambda < -1e-9 || lambda > 2.0 + 1e-9) {
      throw NumericError("normalized Laplacian eigenvalue " + std::to_string(lambda) +
                         " lies outside [0, 2]");
    }
    lambda = std::clamp(lambda, 0.0, 2.0);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t spectral_bin(double eigenvalue) {
  const auto raw = static_cast<std::size_t>(eigenvalue * (kSpectralBins / 2.0));
  return std::min(raw, kSpectralBins - 1);
}

SpectralHistogram spectral_histogram(std::span<const double> eigenvalues) {
  SpectralHistogram h;
  for (double lambda : eigenvalues) {
    if (!(lambda >= -1e-9 && lambda <= 2.0 + 1e-9)) {
      throw InputError("eigenvalue " + std::to_string(lambda) + " outside [0, 2]");
    }
    ++h.raw_counts[spectral_bin(std::clamp(lambda, 0.0, 2.0))];
  }
  h.n_eigs = eigenvalues.size();
  const double total = static_cast<double>(h.n_eigs + kSpectralBins);
  for (std::size_t i = 0; i < kSpectralBins; ++i) {
    h.bins[i] = (static_cast<double>(h.raw_counts[i]) + 1.0) / total;
  }
  return h;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InputError("KL divergence: distributions differ in length");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(q[i] > 0.0)) throw NumericError("KL divergence: reference bin is not positive");
    if (p[i] > 0.0) sum += p[i] * std::log(p[i] / q[i]);
  }
  return sum;
}

double kl_divergence(const SpectralHistogram& a, const SpectralHistogram& b) {
  return kl_divergence(a.bins, b.bins);
}

DimensionInterval dimension_interval(const std::map<int, double>& divergences, double tolerance) {
  if (divergences.empty()) throw InputError("dimension interval needs at least one divergence");
  int expected = divergences.begin()->first;
  for (const auto& [m, value] : divergences) {
    if (m != expected++) throw InputError("dimension interval needs consecutive dimensions");
  }
  auto best = divergences.begin();
  for (auto it = divergences.begin(); it != divergences.end(); ++it) {
    if (it->second < best->second) best = it;
  }
  const double limit = tolerance * best->second;
  DimensionInterval out{best->first, best->first, best->first};
  for (auto it = best; it != divergences.begin();) {
    --it;
    if (it->second > limit) break;
    out.lo = it->first;
  }
  for (auto it = std::next(best); it != divergences.end() && it->second <= limit; ++it) {
    out.hi = it->first;
  }
  return out;
}

}  // namespace logdim
