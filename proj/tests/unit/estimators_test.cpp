#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "logdim/error.hpp"
#include "logdim/estimators.hpp"
#include "logdim/mgeop.hpp"
#include "oracles.hpp"

using namespace logdim;

namespace {

MgeopParams params(std::size_t n, std::size_t m, double alpha, double beta) {
  MgeopParams p;
  p.n = n;
  p.m = m;
  p.alpha = alpha;
  p.beta = beta;
  return p;
}

// Cumulative ordered-pair counts of the largest component from all-pairs BFS.
std::vector<double> oracle_hop_pairs(const Graph& g) {
  const auto cc = connected_components(g);
  const Graph core = induced_subgraph(g, cc.front()).graph;
  const auto d = oracle::all_pairs_hops(core);
  int diameter = 0;
  for (const auto& row : d)
    for (int x : row) diameter = std::max(diameter, x);
  std::vector<double> n(diameter + 1, 0.0);
  for (const auto& row : d)
    for (int x : row)
      if (x > 0) n[x] += 1.0;
  for (int h = 1; h <= diameter; ++h) n[h] += n[h - 1];
  return n;
}

}  // namespace

TEST(HurwitzZeta, KnownValues) {
  const double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
  EXPECT_NEAR(hurwitz_zeta(2.0, 1.0), pi2_6, 1e-12);
  EXPECT_NEAR(hurwitz_zeta(2.0, 2.0), pi2_6 - 1.0, 1e-12);
  EXPECT_NEAR(hurwitz_zeta(3.0, 1.0), 1.2020569031595943, 1e-12);
  // direct partial sum plus integral tail as an independent check
  double direct = 0.0;
  for (int k = 0; k < 2000000; ++k) direct += std::pow(7.5 + k, -2.5);
  direct += std::pow(7.5 + 2000000 - 0.5, -1.5) / 1.5;
  EXPECT_NEAR(hurwitz_zeta(2.5, 7.5), direct, 1e-10);
  EXPECT_THROW(hurwitz_zeta(1.0, 1.0), NumericError);
}

TEST(PowerLaw, RecoversSyntheticExponent) {
  oracle::PowerLawSampler sample(2.5, 5);
  std::mt19937_64 rng(12);
  std::vector<std::size_t> xs(100000);
  for (auto& x : xs) x = sample(rng);
  const auto fit = fit_power_law(xs);
  EXPECT_GE(fit.eta, 2.4);
  EXPECT_LE(fit.eta, 2.6);
  EXPECT_GT(fit.tail_size, 0u);
}

TEST(PowerLaw, MleMatchesClosedFormAtChosenCutoff) {
  oracle::PowerLawSampler sample(3.0, 2);
  std::mt19937_64 rng(13);
  std::vector<std::size_t> xs(5000);
  for (auto& x : xs) x = sample(rng);
  const auto fit = fit_power_law(xs);
  double n = 0.0, s = 0.0;
  for (auto x : xs) {
    if (x >= fit.x_min) {
      n += 1.0;
      s += std::log(static_cast<double>(x) / (static_cast<double>(fit.x_min) - 0.5));
    }
  }
  EXPECT_NEAR(fit.eta, 1.0 + n / s, 1e-9);
  EXPECT_EQ(fit.tail_size, static_cast<std::size_t>(n));
}

TEST(PowerLaw, DegenerateInputs) {
  std::vector<std::size_t> constant(100, 4);
  EXPECT_THROW(fit_power_law(constant), NumericError);
  std::vector<std::size_t> few(49);
  for (std::size_t i = 0; i < few.size(); ++i) few[i] = 1 + i;
  EXPECT_THROW(fit_power_law(few), NumericError);
  // zeros are ignored, not counted
  std::vector<std::size_t> zeros(200, 0);
  for (std::size_t i = 0; i < 40; ++i) zeros[i] = 1 + i;
  EXPECT_THROW(fit_power_law(zeros), NumericError);
}

TEST(PowerLaw, CandidateScanIsBounded) {
  // 300 distinct values: x_min never goes past the 100th
  std::vector<std::size_t> xs;
  for (std::size_t v = 1; v <= 300; ++v)
    for (std::size_t c = 0; c < 301 - v; ++c) xs.push_back(v);
  EXPECT_LE(fit_power_law(xs).x_min, 100u);
}

TEST(EffectiveDiameter, PathAndClique) {
  const Graph p5 = oracle::make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  EXPECT_NEAR(effective_diameter(p5, 1).value, 3.9, 1e-12);
  const Graph k4 = oracle::make_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  EXPECT_NEAR(effective_diameter(k4, 1).value, 0.99, 1e-12);
  EXPECT_THROW(effective_diameter(Graph::from_edges(3, {}), 1), NumericError);
  DiameterOptions bad;
  bad.quantile = 0.0;
  EXPECT_THROW(effective_diameter(p5, 1, bad), InputError);
}

TEST(EffectiveDiameter, ExactMatchesAllPairsOracle) {
  std::mt19937_64 rng(21);
  DiameterOptions full;
  full.quantile = 1.0;
  for (int trial = 0; trial < 15; ++trial) {
    const Graph g = oracle::random_graph(120, 0.015 + 0.002 * trial, rng);
    if (g.edge_count() == 0) continue;
    const auto expect = oracle_hop_pairs(g);
    const auto got = effective_diameter(g, 1, full);
    ASSERT_EQ(got.hop_pairs.size(), expect.size());
    for (std::size_t h = 0; h < expect.size(); ++h) EXPECT_DOUBLE_EQ(got.hop_pairs[h], expect[h]);
    // q = 1 is the true diameter of the largest component
    EXPECT_DOUBLE_EQ(got.value, static_cast<double>(expect.size() - 1));
    EXPECT_EQ(got.restricted, connected_components(g).size() > 1);
  }
}

TEST(EffectiveDiameter, DisconnectedRestrictsToLargestComponent) {
  // P5 plus a separate edge
  const Graph g = oracle::make_graph(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {5, 6}});
  const auto d = effective_diameter(g, 1);
  EXPECT_TRUE(d.restricted);
  EXPECT_EQ(d.component_nodes, 5u);
  EXPECT_EQ(d.graph_nodes, 7u);
  EXPECT_NEAR(d.value, 3.9, 1e-12);
}

TEST(EffectiveDiameter, SketchAgreesWithExact) {
  DiameterOptions exact, sketch;
  exact.backend = DiameterBackend::exact;
  sketch.backend = DiameterBackend::sketch;
  for (std::size_t m : {1, 3, 6}) {
    const Graph g = generate(params(1500, m, 0.6, 0.2), 30 + m).graph;
    const double e = effective_diameter(g, 1, exact).value;
    const auto s = effective_diameter(g, 1, sketch);
    EXPECT_NEAR(s.value, e, 0.5) << "m=" << m;
    EXPECT_EQ(s.backend, DiameterBackend::sketch);
    EXPECT_EQ(s.sketch_registers, 64u);
    EXPECT_EQ(s.sketch_runs, 8u);
  }
  std::mt19937_64 rng(4);
  const Graph er = oracle::random_graph(800, 0.01, rng);
  EXPECT_NEAR(effective_diameter(er, 2, sketch).value, effective_diameter(er, 2, exact).value, 0.5);
}

TEST(EffectiveDiameter, AutomaticBackendFollowsLimit) {
  const Graph g = generate(params(600, 2, 0.6, 0.2), 3).graph;
  DiameterOptions o;
  o.exact_limit = 100;
  EXPECT_EQ(effective_diameter(g, 1, o).backend, DiameterBackend::sketch);
  o.exact_limit = 5000;
  EXPECT_EQ(effective_diameter(g, 1, o).backend, DiameterBackend::exact);
}

TEST(EffectiveDiameter, InterpolationOnCurve) {
  const std::vector<double> curve{0, 8, 14, 18, 20};
  EXPECT_NEAR(interpolate_effective_diameter(curve, 0.99), 3.9, 1e-12);
  // half of 20 pairs = 10, between 8 at h=1 and 14 at h=2
  EXPECT_NEAR(interpolate_effective_diameter(curve, 0.5), 1.0 + 2.0 / 6.0, 1e-12);
  EXPECT_THROW(interpolate_effective_diameter(std::vector<double>{0}, 0.9), NumericError);
}

TEST(Inversion, Examples) {
  const auto r = invert_parameters(65536, 16.0, 3.0);
  EXPECT_NEAR(r.alpha, 0.5, 1e-12);
  EXPECT_NEAR(r.beta, 0.25, 1e-12);
  EXPECT_FALSE(r.clamped);
  EXPECT_THROW(invert_parameters(1000, 10.0, 2.0), NumericError);
  EXPECT_THROW(invert_parameters(1000, 1.0, 3.0), NumericError);
  EXPECT_THROW(invert_parameters(10, 20.0, 3.0), NumericError);
  // dense: 1 - ln 50 / ln 100 < alpha
  const auto c = invert_parameters(100, 50.0, 2.2);
  EXPECT_TRUE(c.clamped);
  EXPECT_DOUBLE_EQ(c.beta, 0.01);
  EXPECT_NEAR(c.alpha, 1.0 / 1.2, 1e-12);
}

TEST(Inversion, SatisfiesDefiningIdentities) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 100 + rng() % 1000000;
    const double eta = 2.0 + 1e-3 + 5.0 * u(rng);
    const double rho = 1.0 + 1e-3 + (std::sqrt(static_cast<double>(n)) - 1.0) * u(rng);
    const auto r = invert_parameters(n, rho, eta);
    EXPECT_NEAR(r.alpha, 1.0 / (eta - 1.0), 1e-12);
    if (!r.clamped) {
      EXPECT_NEAR(r.alpha + r.beta, 1.0 - std::log(rho) / std::log(static_cast<double>(n)), 1e-12);
      EXPECT_GT(r.beta, 0.0);
    }
  }
}

TEST(PredictedDimension, Examples) {
  EXPECT_NEAR(predicted_dimension(1e4, 10.0), 4.0, 1e-12);
  EXPECT_NEAR(predicted_dimension(42000, 4.1), 7.54, 0.005);
  EXPECT_NEAR(predicted_dimension(7.0, 7.0), 1.0, 1e-12);
  EXPECT_THROW(predicted_dimension(100, 1.0), NumericError);
  EXPECT_THROW(predicted_dimension(100, 0.5), NumericError);
}

TEST(PredictedDimension, Monotone) {
  for (double d : {1.5, 3.0, 6.0}) {
    double prev = 0.0;
    for (double n = 10; n < 1e7; n *= 1.7) {
      const double m = predicted_dimension(n, d);
      EXPECT_GT(m, prev);
      prev = m;
    }
  }
  for (double n : {100.0, 1e5}) {
    double prev = 1e300;
    for (double d = 1.1; d < 20; d += 0.3) {
      const double m = predicted_dimension(n, d);
      EXPECT_LT(m, prev);
      prev = m;
    }
  }
}

TEST(EstimateParameters, FieldsAreConsistent) {
  const Graph g = generate(params(3000, 3, 0.5, 0.25), 17).graph;
  const auto est = estimate_parameters(g, 5);
  EXPECT_EQ(est.n, 3000u);
  EXPECT_EQ(est.edges, g.edge_count());
  EXPECT_DOUBLE_EQ(est.rho, 2.0 * g.edge_count() / 3000.0);
  EXPECT_GT(est.eta, 2.0);
  EXPECT_NEAR(est.alpha, 1.0 / (est.eta - 1.0), 1e-12);
  if (!est.clamped) {
    EXPECT_NEAR(est.alpha + est.beta, 1.0 - std::log(est.rho) / std::log(3000.0), 1e-12);
  }
  EXPECT_GE(est.diameter.value, 1.0);
  ASSERT_TRUE(est.m_model.has_value());
  EXPECT_NEAR(*est.m_model, std::log(3000.0) / std::log(est.diameter.value), 1e-12);
  // same seed, same answer
  const auto again = estimate_parameters(g, 5);
  EXPECT_EQ(again.eta, est.eta);
  EXPECT_EQ(again.diameter.value, est.diameter.value);
}

TEST(EstimateParameters, FailureNamesTheStep) {
  // a 4-regular circulant: all degrees equal
  std::vector<Edge> e;
  for (NodeId v = 0; v < 100; ++v) {
    e.push_back({v, static_cast<NodeId>((v + 1) % 100)});
    e.push_back({v, static_cast<NodeId>((v + 2) % 100)});
  }
  try {
    estimate_parameters(Graph::from_edges(100, e), 1);
    FAIL();
  } catch (const NumericError& err) {
    EXPECT_NE(std::string(err.what()).find("parameter estimation (power-law fit)"), std::string::npos);
  }
}

TEST(EstimateParameters, RoundTripOnLargeSample) {
  // alpha + beta is biased by about ln(1 - alpha) / ln n, so keep alpha small
  for (Seed s = 1; s <= 3; ++s) {
    const Graph g = generate(params(100000, 2, 0.35, 0.35), s).graph;
    const auto est = estimate_parameters(g, s);
    EXPECT_NEAR(est.alpha, 0.35, 0.1) << "seed " << s;
    EXPECT_NEAR(est.alpha + est.beta, 0.70, 0.05) << "seed " << s;
  }
}
