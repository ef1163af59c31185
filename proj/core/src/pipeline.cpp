#include "logdim/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include "logdim/error.hpp"
#include "logdim/graphlets.hpp"
#include "logdim/mgeop.hpp"
#include "logdim/nullmodels.hpp"
#include "logdim/parallel.hpp"

namespace logdim {

using Json = nlohmann::ordered_json;

std::string_view to_string(FitMethod method) {
  return method == FitMethod::graphlets ? "graphlets" : "spectral";
}

FitMethod parse_fit_method(std::string_view text) {
  if (text == "graphlets") return FitMethod::graphlets;
  if (text == "spectral") return FitMethod::spectral;
  throw InputError("unknown fit method '" + std::string(text) + "' (graphlets|spectral)");
}

std::string_view to_string(NullStudy study) {
  switch (study) {
    case NullStudy::er: return "er";
    case NullStudy::rewire: return "rewire";
    case NullStudy::percolation: return "percolation";
  }
  return "unknown";
}

NullStudy parse_null_study(std::string_view text) {
  if (text == "er") return NullStudy::er;
  if (text == "rewire") return NullStudy::rewire;
  if (text == "percolation" || text == "percolate") return NullStudy::percolation;
  throw InputError("unknown null-model study '" + std::string(text) + "' (er|rewire|percolation)");
}

namespace {

std::vector<int> checked_dims(const FitOptions& options) {
  if (options.dims.empty()) throw InputError("no candidate dimensions");
  std::vector<int> dims = options.dims;
  std::sort(dims.begin(), dims.end());
  if (std::adjacent_find(dims.begin(), dims.end()) != dims.end()) {
    throw InputError("candidate dimensions must be distinct");
  }
  if (dims.front() < 1) throw InputError("candidate dimensions must be >= 1");
  return dims;
}

void check_input(const Graph& g) {
  if (g.node_count() == 0 || g.edge_count() == 0) {
    throw InputError("dimension fit needs a graph with at least one edge");
  }
}

MgeopParams model_params(const EstimatedParams& est, int m) {
  MgeopParams p;
  p.n = est.n;
  p.m = static_cast<std::size_t>(m);
  p.alpha = est.alpha;
  p.beta = est.beta;
  p.p = 1.0;
  try {
    p.validate();
  } catch (const InputError& e) {
    throw NumericError(std::string("estimated parameters are outside the model range: ") + e.what());
  }
  return p;
}

// p = 1 sample thinned to the input's edge count.
Graph matched_sample(const EstimatedParams& est, int m, Seed gen_seed, Seed match_seed) {
  const MgeopSample sample = generate(model_params(est, m), gen_seed);
  return match_edge_count(sample.graph, est.edges, match_seed);
}

std::vector<double> features_of(const Graph& g, double q, bool include_edges, Seed seed) {
  const GraphletVector v = q >= 1.0 ? count_graphlets_exact(g) : count_graphlets_sampled(g, q, seed);
  return graphlet_features(v, include_edges);
}

double sampling_prob(const FitOptions& options, std::size_t n) {
  return options.graphlet_prob.value_or(default_sampling_probability(n));
}

}  // namespace

Seed target_graphlet_seed(Seed master) { return derive_seed(master, "pipeline/target/graphlets"); }

std::vector<LabeledSample> labeled_samples(const GraphletClassifier& classifier) {
  std::vector<LabeledSample> out;
  out.reserve(classifier.training.size());
  for (const auto& s : classifier.training) out.push_back({s.features, s.m});
  return out;
}

GraphletClassifier train_graphlet_classifier(const Graph& g, const EstimatedParams& params,
                                             const FitOptions& options, Seed master) {
  check_input(g);
  GraphletClassifier c;
  c.dims = checked_dims(options);
  c.params = params;
  c.sample_prob = sampling_prob(options, g.node_count());
  c.include_edge_feature = options.include_edge_feature;
  if (!(c.sample_prob > 0.0 && c.sample_prob <= 1.0)) {
    throw InputError("graphlet sampling probability must lie in (0, 1]");
  }
  if (c.dims.size() == 1) return c;
  if (options.samples_per_dim == 0) throw InputError("samples_per_dim must be positive");
  for (int m : c.dims) model_params(params, m);

  const std::size_t per = options.samples_per_dim;
  c.training.resize(c.dims.size() * per);
  parallel_for(c.training.size(), [&](std::size_t task) {
    const int m = c.dims[task / per];
    const std::size_t i = task % per;
    const auto um = static_cast<std::uint64_t>(m);
    const Graph h = matched_sample(params, m, derive_seed(master, "pipeline/train/mgeop", um, i),
                                   derive_seed(master, "pipeline/train/match", um, i));
    TrainingSample& s = c.training[task];
    s.m = m;
    s.index = i;
    s.edges = h.edge_count();
    s.features = features_of(h, c.sample_prob, c.include_edge_feature,
                             derive_seed(master, "pipeline/train/graphlets", um, i));
  });

  const auto samples = labeled_samples(c);
  c.model = train_svm(samples, options.smo);
  return c;
}

GraphletPrediction classify_graph(const GraphletClassifier& classifier, const Graph& h, Seed feature_seed) {
  GraphletPrediction out;
  if (classifier.dims.size() == 1) {
    out.m = classifier.dims.front();
    out.votes[out.m] = 0.0;
    return out;
  }
  const auto x = features_of(h, classifier.sample_prob, classifier.include_edge_feature, feature_seed);
  const auto votes = classifier.model.votes(x);
  for (std::size_t i = 0; i < votes.size(); ++i) {
    out.votes[classifier.model.labels[i]] = static_cast<double>(votes[i]);
  }
  out.m = classifier.model.predict(x);
  return out;
}

DimensionFit fit_dimension_graphlets(const Graph& g, const FitOptions& options, Seed master,
                                     std::string input_graph_id) {
  check_input(g);
  const EstimatedParams est =
      estimate_parameters(g, derive_seed(master, "pipeline/params"), options.diameter);
  return fit_dimension_graphlets(g, est, options, master, std::move(input_graph_id));
}

DimensionFit fit_dimension_graphlets(const Graph& g, const EstimatedParams& params,
                                     const FitOptions& options, Seed master,
                                     std::string input_graph_id) {
  const GraphletClassifier c = train_graphlet_classifier(g, params, options, master);
  const GraphletPrediction pred = classify_graph(c, g, target_graphlet_seed(master));

  DimensionFit fit;
  fit.method = FitMethod::graphlets;
  fit.input_graph_id = std::move(input_graph_id);
  fit.fitted_m = pred.m;
  fit.scores = pred.votes;
  fit.params_used = params;
  fit.master_seed = master;
  fit.substreams = {"pipeline/params", "pipeline/train/mgeop", "pipeline/train/match",
                    "pipeline/train/graphlets", "pipeline/target/graphlets"};
  fit.training_samples = c.training.size();

  if (options.subsample_repeats > 0 && c.dims.size() > 1) {
    const auto x = features_of(g, c.sample_prob, c.include_edge_feature, target_graphlet_seed(master));
    const auto samples = labeled_samples(c);
    fit.subsample_predictions =
        subsample_predictions(samples, x, options.subsample_fraction, options.subsample_repeats,
                              derive_seed(master, "pipeline/subsample"), options.smo);
    fit.substreams.emplace_back("pipeline/subsample");
  }
  return fit;
}

std::map<int, double> spectral_scores(const SpectralHistogram& target,
                                      const std::map<int, SpectralHistogram>& candidates) {
  std::map<int, double> out;
  for (const auto& [m, hist] : candidates) out[m] = kl_divergence(target, hist);
  return out;
}

DimensionFit fit_dimension_spectral(const Graph& g, const FitOptions& options, Seed master,
                                    std::string input_graph_id) {
  check_input(g);
  if (g.node_count() > options.eigen_cap) {
    throw InputError("graph has " + std::to_string(g.node_count()) +
                     " nodes, above the eigensolver cap of " + std::to_string(options.eigen_cap));
  }
  const EstimatedParams est =
      estimate_parameters(g, derive_seed(master, "pipeline/params"), options.diameter);
  return fit_dimension_spectral(g, est, options, master, std::move(input_graph_id));
}

DimensionFit fit_dimension_spectral(const Graph& g, const EstimatedParams& params,
                                    const FitOptions& options, Seed master,
                                    std::string input_graph_id) {
  check_input(g);
  const std::vector<int> dims = checked_dims(options);
  for (int m : dims) model_params(params, m);

  const auto target_eigs = normalized_laplacian_eigenvalues(g, options.eigen_cap);
  const SpectralHistogram target = spectral_histogram(target_eigs);

  std::vector<SpectralHistogram> hists(dims.size());
  parallel_for(dims.size(), [&](std::size_t k) {
    const auto um = static_cast<std::uint64_t>(dims[k]);
    const Graph h = matched_sample(params, dims[k], derive_seed(master, "pipeline/spectral/mgeop", um),
                                   derive_seed(master, "pipeline/spectral/match", um));
    hists[k] = spectral_histogram(normalized_laplacian_eigenvalues(h, options.eigen_cap));
  });
  std::map<int, SpectralHistogram> candidates;
  for (std::size_t k = 0; k < dims.size(); ++k) candidates.emplace(dims[k], hists[k]);

  DimensionFit fit;
  fit.method = FitMethod::spectral;
  fit.input_graph_id = std::move(input_graph_id);
  fit.scores = spectral_scores(target, candidates);
  fit.interval = dimension_interval(fit.scores);
  fit.fitted_m = fit.interval->best;
  fit.params_used = params;
  fit.master_seed = master;
  fit.substreams = {"pipeline/params", "pipeline/spectral/mgeop", "pipeline/spectral/match"};
  fit.training_samples = dims.size();
  return fit;
}

Graph null_model_graph(const Graph& g, NullStudy study, double level, Seed seed) {
  switch (study) {
    case NullStudy::er: return er_matched(g.node_count(), g.edge_count(), seed);
    case NullStudy::rewire: return degree_preserving_rewire(g, level, seed);
    case NullStudy::percolation: return percolate(g, level, seed);
  }
  throw InputError("unknown null-model study");
}

SensitivityResult run_sensitivity(const Graph& g, NullStudy study, std::span<const double> levels,
                                  std::size_t trials, const FitOptions& options, Seed master) {
  check_input(g);
  const EstimatedParams est =
      estimate_parameters(g, derive_seed(master, "pipeline/params"), options.diameter);
  const GraphletClassifier c = train_graphlet_classifier(g, est, options, master);
  return run_sensitivity(c, g, study, levels, trials, master);
}

SensitivityResult run_sensitivity(const GraphletClassifier& classifier, const Graph& g,
                                  NullStudy study, std::span<const double> levels,
                                  std::size_t trials, Seed master) {
  const Seed feature_seed = target_graphlet_seed(master);
  SensitivityResult out;
  out.baseline_m = classify_graph(classifier, g, feature_seed).m;

  const std::string tag = "pipeline/null/" + std::string(to_string(study));
  out.rows.resize(levels.size() * trials);
  parallel_for(out.rows.size(), [&](std::size_t cell) {
    const std::size_t li = cell / trials;
    const std::size_t t = cell % trials;
    const Graph h = null_model_graph(g, study, levels[li], derive_seed(master, tag, li, t));
    out.rows[cell] = {study, levels[li], t, classify_graph(classifier, h, feature_seed).m};
  });
  return out;
}

RegressionReport fit_regression(std::span<const RegressionPoint> points) {
  if (points.size() < 3) {
    throw InputError("regression needs at least 3 points, got " + std::to_string(points.size()));
  }
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    mx += p.log10_n;
    my += p.m;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : points) {
    sxx += (p.log10_n - mx) * (p.log10_n - mx);
    sxy += (p.log10_n - mx) * (p.m - my);
    syy += (p.m - my) * (p.m - my);
  }
  if (!(sxx > 1e-12 * std::max(1.0, mx * mx))) {
    throw NumericError("regression is degenerate: all log10(n) values are equal");
  }

  RegressionReport r;
  r.points.assign(points.begin(), points.end());
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double ss_res = 0.0;
  for (const auto& p : points) {
    const double e = p.m - (r.intercept + r.slope * p.log10_n);
    ss_res += e * e;
  }
  r.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;

  const double s2 = ss_res / (n - 2.0);
  const double se_slope = std::sqrt(s2 / sxx);
  const double se_int = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  const boost::math::students_t dist(n - 2.0);
  const double t = boost::math::quantile(dist, 0.975);
  r.ci_slope = {r.slope - t * se_slope, r.slope + t * se_slope};
  r.ci_intercept = {r.intercept - t * se_int, r.intercept + t * se_int};
  return r;
}

RegressionReport regression_report(std::span<const DimensionFit> fits) {
  std::vector<RegressionPoint> points;
  points.reserve(fits.size());
  for (const auto& f : fits) {
    points.push_back({std::log10(static_cast<double>(f.params_used.n)), static_cast<double>(f.fitted_m)});
  }
  RegressionReport r = fit_regression(points);
  for (const auto& f : fits) {
    if (f.params_used.m_model) {
      r.model_curve.emplace_back(static_cast<double>(f.params_used.n), *f.params_used.m_model);
    }
  }
  std::sort(r.model_curve.begin(), r.model_curve.end());
  return r;
}

namespace {

Json params_json(const EstimatedParams& p) {
  Json j;
  j["n"] = p.n;
  j["edges"] = p.edges;
  j["rho"] = p.rho;
  j["eta"] = p.eta;
  j["x_min"] = p.x_min;
  j["alpha"] = p.alpha;
  j["beta"] = p.beta;
  j["clamped"] = p.clamped;
  j["eff_diameter"] = p.diameter.value;
  j["m_model"] = p.m_model ? Json(*p.m_model) : Json(nullptr);
  Json d;
  d["quantile"] = p.diameter.quantile;
  d["backend"] = std::string(to_string(p.diameter.backend));
  d["component_nodes"] = p.diameter.component_nodes;
  d["graph_nodes"] = p.diameter.graph_nodes;
  d["restricted"] = p.diameter.restricted;
  d["sketch_registers"] = p.diameter.sketch_registers;
  d["sketch_runs"] = p.diameter.sketch_runs;
  j["diameter"] = d;
  return j;
}

EstimatedParams params_from(const Json& j) {
  EstimatedParams p;
  p.n = j.at("n").get<std::size_t>();
  p.edges = j.at("edges").get<std::size_t>();
  p.rho = j.at("rho").get<double>();
  p.eta = j.at("eta").get<double>();
  p.x_min = j.at("x_min").get<std::size_t>();
  p.alpha = j.at("alpha").get<double>();
  p.beta = j.at("beta").get<double>();
  p.clamped = j.at("clamped").get<bool>();
  p.diameter.value = j.at("eff_diameter").get<double>();
  if (!j.at("m_model").is_null()) p.m_model = j.at("m_model").get<double>();
  if (j.contains("diameter")) {
    const Json& d = j["diameter"];
    p.diameter.quantile = d.value("quantile", 0.99);
    const std::string backend = d.value("backend", "exact");
    p.diameter.backend = backend == "sketch" ? DiameterBackend::sketch : DiameterBackend::exact;
    p.diameter.component_nodes = d.value("component_nodes", std::size_t{0});
    p.diameter.graph_nodes = d.value("graph_nodes", std::size_t{0});
    p.diameter.restricted = d.value("restricted", false);
    p.diameter.sketch_registers = d.value("sketch_registers", std::size_t{0});
    p.diameter.sketch_runs = d.value("sketch_runs", std::size_t{0});
  }
  return p;
}

std::string number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string params_to_json(const EstimatedParams& params) { return params_json(params).dump(2); }

std::string fit_to_json(const DimensionFit& fit) {
  Json j;
  j["method"] = std::string(to_string(fit.method));
  j["input_graph_id"] = fit.input_graph_id;
  j["fitted_m"] = fit.fitted_m;
  Json scores = Json::object();
  for (const auto& [m, s] : fit.scores) scores[std::to_string(m)] = s;
  j["scores"] = scores;
  if (fit.interval) {
    j["interval"] = {{"best", fit.interval->best}, {"lo", fit.interval->lo}, {"hi", fit.interval->hi}};
  } else {
    j["interval"] = nullptr;
  }
  j["params"] = params_json(fit.params_used);
  j["seeds"] = {{"master", fit.master_seed}, {"substreams", fit.substreams}};
  j["training_samples"] = fit.training_samples;
  j["subsample_predictions"] = fit.subsample_predictions;
  return j.dump(2);
}

DimensionFit fit_from_json(std::string_view text) {
  try {
    const Json j = Json::parse(text);
    DimensionFit fit;
    fit.method = parse_fit_method(j.at("method").get<std::string>());
    fit.input_graph_id = j.value("input_graph_id", std::string{});
    fit.fitted_m = j.at("fitted_m").get<int>();
    for (const auto& [key, value] : j.at("scores").items()) fit.scores[std::stoi(key)] = value.get<double>();
    if (j.contains("interval") && !j["interval"].is_null()) {
      const Json& iv = j["interval"];
      fit.interval = DimensionInterval{iv.at("best").get<int>(), iv.at("lo").get<int>(), iv.at("hi").get<int>()};
    }
    fit.params_used = params_from(j.at("params"));
    if (j.contains("seeds")) {
      fit.master_seed = j["seeds"].value("master", Seed{0});
      fit.substreams = j["seeds"].value("substreams", std::vector<std::string>{});
    }
    fit.training_samples = j.value("training_samples", std::size_t{0});
    fit.subsample_predictions = j.value("subsample_predictions", std::vector<int>{});
    return fit;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed fit JSON: ") + e.what());
  }
}

std::string regression_to_json(const RegressionReport& r) {
  Json j;
  Json points = Json::array();
  for (const auto& p : r.points) points.push_back({{"log10_n", p.log10_n}, {"fitted_m", p.m}});
  j["points"] = points;
  j["slope"] = r.slope;
  j["intercept"] = r.intercept;
  j["r_squared"] = r.r_squared;
  j["ci_slope"] = {r.ci_slope.first, r.ci_slope.second};
  j["ci_intercept"] = {r.ci_intercept.first, r.ci_intercept.second};
  Json curve = Json::array();
  for (const auto& [n, m] : r.model_curve) curve.push_back({{"n", n}, {"m_model", m}});
  j["model_curve"] = curve;
  return j.dump(2);
}

std::string sensitivity_to_csv(const SensitivityResult& result) {
  std::ostringstream out;
  out << "study,level,trial,fitted_m,baseline_m,nullmodel\n";
  for (const auto& row : result.rows) {
    const char* model = row.study == NullStudy::er ? "gnp" : row.study == NullStudy::rewire ? "swap" : "percolate";
    out << to_string(row.study) << ',' << number(row.level) << ',' << row.trial << ',' << row.fitted_m
        << ',' << result.baseline_m << ',' << model << '\n';
  }
  return out.str();
}

}  // namespace logdim
