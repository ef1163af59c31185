#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "logdim/estimators.hpp"
#include "logdim/graph.hpp"
#include "logdim/rng.hpp"
#include "logdim/spectral.hpp"
#include "logdim/svm.hpp"

namespace logdim {

enum class FitMethod { graphlets, spectral };

std::string_view to_string(FitMethod method);
FitMethod parse_fit_method(std::string_view text);

struct FitOptions {
  std::vector<int> dims = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  std::size_t samples_per_dim = 50;
  /// rand-ESU continuation probability; empty means 10/n.
  std::optional<double> graphlet_prob;
  bool include_edge_feature = false;
  SmoOptions smo;
  std::size_t eigen_cap = kDefaultEigenCap;
  DiameterOptions diameter;
  /// Optional resampling study: train on this fraction of the training set
  /// `subsample_repeats` times and record each prediction.
  double subsample_fraction = 0.2;
  std::size_t subsample_repeats = 0;
};

/// Outcome of fitting an MGEO-P dimension to one graph.
struct DimensionFit {
  FitMethod method = FitMethod::graphlets;
  std::string input_graph_id;
  int fitted_m = 0;
  /// Votes per dimension (graphlets) or KL divergence per dimension (spectral).
  std::map<int, double> scores;
  std::optional<DimensionInterval> interval;  ///< spectral only
  EstimatedParams params_used;
  Seed master_seed = 0;
  std::vector<std::string> substreams;
  std::size_t training_samples = 0;
  std::vector<int> subsample_predictions;
};

/// One MGEO-P training graph reduced to its features.
struct TrainingSample {
  int m = 0;
  std::size_t index = 0;
  std::size_t edges = 0;
  std::vector<double> features;
};

/// SVM trained on MGEO-P samples matched to a particular input graph.
struct GraphletClassifier {
  std::vector<int> dims;
  EstimatedParams params;
  double sample_prob = 1.0;
  bool include_edge_feature = false;
  std::vector<TrainingSample> training;
  PairwiseSvmModel model;  ///< unused when dims has a single entry
};

/// Substream seed used for the graphlet features of every graph classified
/// against a classifier built from `master`.
Seed target_graphlet_seed(Seed master);

std::vector<LabeledSample> labeled_samples(const GraphletClassifier& classifier);

GraphletClassifier train_graphlet_classifier(const Graph& g, const EstimatedParams& params,
                                             const FitOptions& options, Seed master);

struct GraphletPrediction {
  int m = 0;
  std::map<int, double> votes;
};

/// Features of h (sampled with the classifier's probability and feature
/// seed), then one-vs-one voting.
GraphletPrediction classify_graph(const GraphletClassifier& classifier, const Graph& h, Seed feature_seed);

/// Graphlet + SVM fit: estimate (alpha, beta), simulate samples_per_dim
/// edge-matched MGEO-P graphs per dimension, train, classify g.
DimensionFit fit_dimension_graphlets(const Graph& g, const FitOptions& options, Seed master,
                                     std::string input_graph_id = {});

/// Same as above but reuses parameters the caller already estimated.
DimensionFit fit_dimension_graphlets(const Graph& g, const EstimatedParams& params,
                                     const FitOptions& options, Seed master,
                                     std::string input_graph_id = {});

/// KL divergence of g's spectral histogram against each candidate, g first.
std::map<int, double> spectral_scores(const SpectralHistogram& target,
                                      const std::map<int, SpectralHistogram>& candidates);

/// Spectral fit: one edge-matched MGEO-P sample per dimension, argmin of
/// KL(hist(g), hist(sample_m)), plus the 105% interval.
DimensionFit fit_dimension_spectral(const Graph& g, const FitOptions& options, Seed master,
                                    std::string input_graph_id = {});
DimensionFit fit_dimension_spectral(const Graph& g, const EstimatedParams& params,
                                    const FitOptions& options, Seed master,
                                    std::string input_graph_id = {});

enum class NullStudy { er, rewire, percolation };

std::string_view to_string(NullStudy study);
NullStudy parse_null_study(std::string_view text);

/// Builds the null-model graph for one (level, trial) cell. The level is the
/// percolated fraction, the swaps per edge for rewiring, and ignored for ER.
Graph null_model_graph(const Graph& g, NullStudy study, double level, Seed seed);

struct SensitivityRow {
  NullStudy study = NullStudy::er;
  double level = 0.0;
  std::size_t trial = 0;
  int fitted_m = 0;
};

struct SensitivityResult {
  int baseline_m = 0;
  std::vector<SensitivityRow> rows;
};

/// Trains the graphlet classifier once on g, then classifies null-model
/// variants of g for every level x trial.
SensitivityResult run_sensitivity(const Graph& g, NullStudy study, std::span<const double> levels,
                                  std::size_t trials, const FitOptions& options, Seed master);

/// Same, against an existing classifier (trained from `master`).
SensitivityResult run_sensitivity(const GraphletClassifier& classifier, const Graph& g,
                                  NullStudy study, std::span<const double> levels,
                                  std::size_t trials, Seed master);

struct RegressionPoint {
  double log10_n = 0.0;
  double m = 0.0;
};

struct RegressionReport {
  std::vector<RegressionPoint> points;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::pair<double, double> ci_slope;
  std::pair<double, double> ci_intercept;
  /// (n, log n / log D_eff) for each fit with a model dimension.
  std::vector<std::pair<double, double>> model_curve;
};

/// Ordinary least squares of m on log10 n with 95% t intervals.
RegressionReport fit_regression(std::span<const RegressionPoint> points);
RegressionReport regression_report(std::span<const DimensionFit> fits);

std::string params_to_json(const EstimatedParams& params);
std::string fit_to_json(const DimensionFit& fit);
DimensionFit fit_from_json(std::string_view text);
std::string regression_to_json(const RegressionReport& report);
std::string sensitivity_to_csv(const SensitivityResult& result);

}  // namespace logdim
