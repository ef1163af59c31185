#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "logdim/rng.hpp"

namespace logdim {

struct LabeledSample {
  std::vector<double> features;
  int label = 0;
};

/// Per-feature z-score transform fitted on training data. Features with zero
/// variance keep scale 1, get weight 0 in every binary model, and are listed
/// in `dropped`.
struct Standardization {
  std::vector<double> mean;
  std::vector<double> scale;
  std::vector<std::size_t> dropped;

  static Standardization fit(std::span<const LabeledSample> samples);
  std::vector<double> apply(std::span<const double> x) const;
  std::size_t dimension() const { return mean.size(); }
};

struct SmoOptions {
  double c = 1.0;               ///< box constraint
  double tol = 1e-3;            ///< KKT tolerance
  std::size_t max_passes = 200; ///< full sweeps over the samples before giving up
  double eps = 1e-8;            ///< minimum relative alpha step
};

/// Dual solution of one soft-margin linear SVM; decision f(x) = w.x + b.
struct BinarySolution {
  std::vector<double> alphas;
  std::vector<double> weights;
  double bias = 0.0;
  std::size_t passes = 0;
  bool converged = false;
};

/// Platt's SMO with a linear kernel. Labels must be +1 or -1. Working pairs
/// are chosen deterministically (first-violator scan, then max |E1 - E2|).
BinarySolution solve_smo(std::span<const std::vector<double>> x, std::span<const int> y,
                         const SmoOptions& options = {});

/// Largest KKT violation of a solution: alpha = 0 needs y f >= 1,
/// 0 < alpha < C needs y f = 1, alpha = C needs y f <= 1.
double max_kkt_violation(std::span<const std::vector<double>> x, std::span<const int> y,
                         const BinarySolution& solution, double c);

/// Binary model for labels a < b; a non-negative decision votes for a.
struct BinaryModel {
  int a = 0;
  int b = 0;
  std::vector<double> weights;
  double bias = 0.0;
  bool constant = false;  ///< trained without both classes: always votes the same way
  bool converged = true;

  double decision(std::span<const double> z) const;
  int vote(std::span<const double> z) const { return decision(z) >= 0.0 ? a : b; }
};

/// One-vs-one ensemble: one binary model per unordered label pair.
struct PairwiseSvmModel {
  std::vector<int> labels;  ///< sorted
  Standardization standardization;
  std::vector<BinaryModel> pairs;

  /// Votes per label (same order as labels); sums to pairs.size().
  std::vector<std::size_t> votes(std::span<const double> x) const;
  /// Label with the most votes; ties go to the smaller label.
  int predict(std::span<const double> x) const;
};

/// Requires at least two distinct labels and equal-length feature vectors.
PairwiseSvmModel train_svm(std::span<const LabeledSample> samples, const SmoOptions& options = {});

std::string model_to_json(const PairwiseSvmModel& model);
PairwiseSvmModel model_from_json(std::string_view text);

struct CrossValidation {
  double accuracy = 0.0;
  std::vector<int> labels;
  /// confusion[i][j]: samples of labels[i] predicted as labels[j].
  std::vector<std::vector<std::size_t>> confusion;
};

/// Stratified k-fold cross-validation.
CrossValidation cross_validate(std::span<const LabeledSample> samples, std::size_t folds, Seed seed,
                               const SmoOptions& options = {});

/// Trains on `repeats` random subsets holding `fraction` of the samples and
/// returns each run's prediction for `query`.
std::vector<int> subsample_predictions(std::span<const LabeledSample> samples,
                                       std::span<const double> query, double fraction,
                                       std::size_t repeats, Seed seed,
                                       const SmoOptions& options = {});

}  // namespace logdim
