#include <gtest/gtest.h>

#include <cmath>

#include "logdim/error.hpp"
#include "logdim/mgeop.hpp"
#include "logdim/parallel.hpp"
#include "logdim/pipeline.hpp"

using namespace logdim;

namespace {

Graph small_input(Seed seed, int m = 2) {
  MgeopParams p;
  p.n = 300;
  p.m = m;
  p.alpha = 0.5;
  p.beta = 0.2;
  return generate(p, seed).graph;
}

FitOptions quick_options() {
  FitOptions o;
  o.dims = {1, 2, 3};
  o.samples_per_dim = 4;
  return o;
}

class Pipeline : public ::testing::Test {
 protected:
  void TearDown() override { set_worker_threads(0); }
};

}  // namespace

TEST_F(Pipeline, ParseNames) {
  EXPECT_EQ(parse_fit_method("spectral"), FitMethod::spectral);
  EXPECT_EQ(to_string(FitMethod::graphlets), "graphlets");
  EXPECT_THROW(parse_fit_method("svd"), InputError);
  EXPECT_EQ(parse_null_study("percolation"), NullStudy::percolation);
  EXPECT_EQ(parse_null_study("rewire"), NullStudy::rewire);
  EXPECT_THROW(parse_null_study("bogus"), InputError);
}

TEST_F(Pipeline, SingleDimensionIsTrivial) {
  FitOptions o = quick_options();
  o.dims = {5};
  const auto fit = fit_dimension_graphlets(small_input(1), o, 3);
  EXPECT_EQ(fit.fitted_m, 5);
  const auto sp = fit_dimension_spectral(small_input(1), o, 3);
  EXPECT_EQ(sp.fitted_m, 5);
  ASSERT_TRUE(sp.interval);
  EXPECT_EQ(sp.interval->lo, 5);
  EXPECT_EQ(sp.interval->hi, 5);
}

TEST_F(Pipeline, InputValidation) {
  FitOptions o = quick_options();
  EXPECT_THROW(fit_dimension_graphlets(Graph::from_edges(10, {}), o, 1), InputError);
  o.dims = {};
  EXPECT_THROW(fit_dimension_graphlets(small_input(1), o, 1), InputError);
  o.dims = {2, 2};
  EXPECT_THROW(fit_dimension_graphlets(small_input(1), o, 1), InputError);
  o.dims = {0, 1};
  EXPECT_THROW(fit_dimension_spectral(small_input(1), o, 1), InputError);
  o = quick_options();
  o.eigen_cap = 100;
  EXPECT_THROW(fit_dimension_spectral(small_input(1), o, 1), InputError);
}

TEST_F(Pipeline, GraphletFitShape) {
  const Graph g = small_input(2);
  const auto o = quick_options();
  const auto fit = fit_dimension_graphlets(g, o, 7, "toy");
  EXPECT_EQ(fit.method, FitMethod::graphlets);
  EXPECT_EQ(fit.input_graph_id, "toy");
  EXPECT_GE(fit.fitted_m, 1);
  EXPECT_LE(fit.fitted_m, 3);
  EXPECT_EQ(fit.training_samples, 12u);
  double votes = 0.0;
  for (const auto& [m, v] : fit.scores) votes += v;
  EXPECT_EQ(votes, 3.0);
  EXPECT_FALSE(fit.interval);
  EXPECT_EQ(fit.master_seed, 7u);
  EXPECT_FALSE(fit.substreams.empty());
  EXPECT_EQ(fit.params_used.n, g.node_count());
  EXPECT_EQ(fit.params_used.edges, g.edge_count());
}

TEST_F(Pipeline, TrainingGraphsAreEdgeMatched) {
  const Graph g = small_input(3);
  const auto params = estimate_parameters(g, 1);
  const auto c = train_graphlet_classifier(g, params, quick_options(), 5);
  ASSERT_EQ(c.training.size(), 12u);
  std::size_t equal = 0;
  for (const auto& t : c.training) {
    EXPECT_LE(t.edges, g.edge_count());
    equal += t.edges == g.edge_count();
    EXPECT_EQ(t.features.size(), 8u);
  }
  // under-production is the exception, not the rule
  EXPECT_GE(equal, 6u);
  EXPECT_DOUBLE_EQ(c.sample_prob, 10.0 / 300.0);
}

TEST_F(Pipeline, SpectralFitShape) {
  const Graph g = small_input(4, 3);
  auto o = quick_options();
  o.dims = {1, 2, 3, 4, 5};
  const auto fit = fit_dimension_spectral(g, o, 9);
  ASSERT_EQ(fit.scores.size(), 5u);
  for (const auto& [m, d] : fit.scores) EXPECT_GE(d, 0.0);
  ASSERT_TRUE(fit.interval);
  EXPECT_EQ(fit.interval->best, fit.fitted_m);
  EXPECT_LE(fit.interval->lo, fit.fitted_m);
  EXPECT_GE(fit.interval->hi, fit.fitted_m);
  for (const auto& [m, d] : fit.scores) EXPECT_GE(d, fit.scores.at(fit.fitted_m));
}

TEST_F(Pipeline, SpectralSelfCandidateWins) {
  const Graph g = small_input(5);
  const auto target = spectral_histogram(normalized_laplacian_eigenvalues(g));
  std::map<int, SpectralHistogram> candidates;
  for (int m : {1, 2, 4}) candidates[m] = spectral_histogram(normalized_laplacian_eigenvalues(small_input(10 + m, m)));
  candidates[3] = target;
  const auto scores = spectral_scores(target, candidates);
  EXPECT_EQ(scores.at(3), 0.0);
  EXPECT_EQ(dimension_interval(scores).best, 3);
  // g is the first argument
  EXPECT_DOUBLE_EQ(scores.at(1), kl_divergence(target, candidates.at(1)));
}

TEST_F(Pipeline, DeterministicAcrossThreadCounts) {
  const Graph g = small_input(6);
  auto o = quick_options();
  o.subsample_repeats = 3;
  set_worker_threads(1);
  const auto a = fit_to_json(fit_dimension_graphlets(g, o, 11));
  const auto sa = fit_to_json(fit_dimension_spectral(g, o, 11));
  set_worker_threads(4);
  const auto b = fit_to_json(fit_dimension_graphlets(g, o, 11));
  const auto sb = fit_to_json(fit_dimension_spectral(g, o, 11));
  EXPECT_EQ(a, b);
  EXPECT_EQ(sa, sb);
  EXPECT_NE(a, fit_to_json(fit_dimension_graphlets(g, o, 12)));
}

TEST_F(Pipeline, FitJsonRoundTrip) {
  auto o = quick_options();
  o.subsample_repeats = 2;
  for (const auto& fit : {fit_dimension_graphlets(small_input(7), o, 1, "a b"),
                          fit_dimension_spectral(small_input(7), o, 1, "x")}) {
    const auto text = fit_to_json(fit);
    const auto back = fit_from_json(text);
    EXPECT_EQ(back.fitted_m, fit.fitted_m);
    EXPECT_EQ(back.scores, fit.scores);
    EXPECT_EQ(back.subsample_predictions, fit.subsample_predictions);
    EXPECT_EQ(fit_to_json(back), text);
  }
  EXPECT_THROW(fit_from_json("{}"), InputError);
  EXPECT_THROW(fit_from_json("[1,"), InputError);
}

TEST_F(Pipeline, SensitivityLevelZeroIsBaseline) {
  const Graph g = small_input(8);
  const std::vector<double> levels{0.0, 0.05};
  const auto r = run_sensitivity(g, NullStudy::percolation, levels, 3, quick_options(), 21);
  ASSERT_EQ(r.rows.size(), 6u);
  for (const auto& row : r.rows) {
    if (row.level == 0.0) {
      EXPECT_EQ(row.fitted_m, r.baseline_m);
    }
    EXPECT_EQ(row.study, NullStudy::percolation);
  }
  EXPECT_EQ(r.baseline_m, fit_dimension_graphlets(g, quick_options(), 21).fitted_m);
  const auto csv = sensitivity_to_csv(r);
  EXPECT_EQ(csv.rfind("study,level,trial,fitted_m,baseline_m,nullmodel\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
  EXPECT_NE(csv.find(",percolate\n"), std::string::npos);
}

TEST_F(Pipeline, NullModelGraphs) {
  const Graph g = small_input(9);
  EXPECT_EQ(null_model_graph(g, NullStudy::percolation, 0.0, 1), g);
  EXPECT_EQ(null_model_graph(g, NullStudy::percolation, 0.3, 1).edge_count(), g.edge_count());
  EXPECT_EQ(null_model_graph(g, NullStudy::er, 0.7, 1).node_count(), g.node_count());
  const Graph r = null_model_graph(g, NullStudy::rewire, 1.0, 1);
  for (NodeId v = 0; v < g.node_count(); ++v) EXPECT_EQ(r.degree(v), g.degree(v));
}

TEST(Regression, ExactLine) {
  const std::vector<RegressionPoint> pts{{3, 3}, {4, 5}, {5, 7}};
  const auto r = fit_regression(pts);
  EXPECT_NEAR(r.slope, 2.0, 1e-12);
  EXPECT_NEAR(r.intercept, -3.0, 1e-12);
  EXPECT_DOUBLE_EQ(r.r_squared, 1.0);
  EXPECT_NEAR(r.ci_slope.first, 2.0, 1e-9);
  EXPECT_NEAR(r.ci_slope.second, 2.0, 1e-9);
}

TEST(Regression, Errors) {
  EXPECT_THROW(fit_regression(std::vector<RegressionPoint>{{3, 3}, {4, 5}}), InputError);
  EXPECT_THROW(fit_regression(std::vector<RegressionPoint>{{3, 3}, {3, 5}, {3, 4}}), NumericError);
}

TEST(Regression, IntervalsAgainstClosedForm) {
  // noisy points; OLS by hand with t(0.975, 3) = 3.182446305
  const std::vector<RegressionPoint> pts{{2, 2.9}, {3, 5.2}, {4, 6.8}, {5, 9.4}, {6, 10.6}};
  const auto r = fit_regression(pts);
  double sx = 0, sy = 0;
  for (const auto& p : pts) {
    sx += p.log10_n;
    sy += p.m;
  }
  const double mx = sx / 5, my = sy / 5;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& p : pts) {
    sxx += (p.log10_n - mx) * (p.log10_n - mx);
    sxy += (p.log10_n - mx) * (p.m - my);
    syy += (p.m - my) * (p.m - my);
  }
  const double b = sxy / sxx, a = my - b * mx;
  double sse = 0;
  for (const auto& p : pts) sse += std::pow(p.m - a - b * p.log10_n, 2);
  const double s2 = sse / 3, t = 3.182446305;
  const double se_b = std::sqrt(s2 / sxx), se_a = std::sqrt(s2 * (1.0 / 5 + mx * mx / sxx));
  EXPECT_NEAR(r.slope, b, 1e-12);
  EXPECT_NEAR(r.intercept, a, 1e-12);
  EXPECT_NEAR(r.r_squared, 1 - sse / syy, 1e-12);
  EXPECT_NEAR(r.ci_slope.first, b - t * se_b, 1e-7);
  EXPECT_NEAR(r.ci_slope.second, b + t * se_b, 1e-7);
  EXPECT_NEAR(r.ci_intercept.first, a - t * se_a, 1e-7);
  EXPECT_NEAR(r.ci_intercept.second, a + t * se_a, 1e-7);
}

TEST(Regression, SyntheticFamilyRecoversSlope) {
  // m = 2 ceil(log10 n) over a spread of sizes
  std::vector<DimensionFit> fits;
  for (double e = 2.1; e <= 5.0; e += 0.2) {
    DimensionFit f;
    f.params_used.n = static_cast<std::size_t>(std::pow(10.0, e));
    f.params_used.m_model = 1.5 * e;
    f.fitted_m = 2 * static_cast<int>(std::ceil(e));
    fits.push_back(f);
  }
  const auto r = regression_report(fits);
  EXPECT_EQ(r.points.size(), fits.size());
  EXPECT_LE(r.ci_slope.first, 2.0);
  EXPECT_GE(r.ci_slope.second, 2.0);
  EXPECT_NEAR(r.slope, 2.0, 0.3);
  EXPECT_GE(r.r_squared, 0.0);
  EXPECT_LE(r.r_squared, 1.0);
  EXPECT_LE(r.ci_intercept.first, r.intercept);
  EXPECT_GE(r.ci_intercept.second, r.intercept);
  ASSERT_EQ(r.model_curve.size(), fits.size());
  EXPECT_TRUE(std::is_sorted(r.model_curve.begin(), r.model_curve.end()));
  const auto json = regression_to_json(r);
  EXPECT_NE(json.find("\"slope\""), std::string::npos);
  EXPECT_NE(json.find("\"model_curve\""), std::string::npos);
}
