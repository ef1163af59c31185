// logdim command-line front end.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "logdim/error.hpp"
#include "logdim/estimators.hpp"
#include "logdim/graph.hpp"
#include "logdim/graphlets.hpp"
#include "logdim/mgeop.hpp"
#include "logdim/nullmodels.hpp"
#include "logdim/parallel.hpp"
#include "logdim/pipeline.hpp"
#include "logdim/spectral.hpp"
#include "logdim/svm.hpp"

namespace fs = std::filesystem;
using logdim::InputError;
using Json = nlohmann::ordered_json;

namespace {

struct Globals {
  logdim::Seed seed = 1;
  std::size_t threads = 0;
  std::string out = "-";
  std::string format = "json";
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw InputError("cannot write " + g.out);
  f << text;
  if (!f) throw InputError("write failed: " + g.out);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string num(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string graph_text(const logdim::Graph& g) {
  std::ostringstream ss;
  logdim::write_edge_list(g, ss);
  return ss.str();
}

logdim::Graph load(const std::string& path) {
  auto loaded = logdim::load_edge_list(path);
  const auto& s = loaded.summary;
  if (s.duplicate_edges + s.self_loops > 0) {
    std::cerr << path << ": dropped " << s.duplicate_edges << " duplicate edges, " << s.self_loops
              << " self-loops\n";
  }
  return std::move(loaded.graph);
}

// "1-12", "2,3,5", "1-4,8"
std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> dims;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    const auto dash = part.find('-', 1);
    try {
      if (dash == std::string::npos) {
        dims.push_back(std::stoi(part));
      } else {
        const int lo = std::stoi(part.substr(0, dash));
        const int hi = std::stoi(part.substr(dash + 1));
        if (hi < lo) throw InputError("empty dimension range " + part);
        for (int m = lo; m <= hi; ++m) dims.push_back(m);
      }
    } catch (const std::logic_error&) {
      throw InputError("bad dimension list '" + text + "'");
    }
  }
  if (dims.empty()) throw InputError("empty dimension list");
  return dims;
}

std::vector<double> parse_levels(const std::string& text) {
  std::vector<double> levels;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    try {
      levels.push_back(std::stod(part));
    } catch (const std::logic_error&) {
      throw InputError("bad level list '" + text + "'");
    }
  }
  if (levels.empty()) throw InputError("empty level list");
  return levels;
}

// Feature CSV: header row required; a column named "label" holds the class.
struct FeatureTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;  // empty without a label column
};

FeatureTable read_features(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  FeatureTable t;
  std::string line;
  std::size_t lineno = 0;
  int label_col = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (t.columns.empty()) {
      t.columns = cells;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == "label") label_col = static_cast<int>(i);
      }
      continue;
    }
    if (cells.size() != t.columns.size()) {
      throw InputError(path + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(t.columns.size()) + " columns");
    }
    std::vector<double> row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      double v = 0.0;
      const char* b = cells[i].data();
      auto res = std::from_chars(b, b + cells[i].size(), v);
      if (res.ec != std::errc() || res.ptr != b + cells[i].size()) {
        throw InputError(path + ":" + std::to_string(lineno) + ": bad number '" + cells[i] + "'");
      }
      if (static_cast<int>(i) == label_col) {
        t.labels.push_back(static_cast<int>(v));
      } else {
        row.push_back(v);
      }
    }
    t.rows.push_back(std::move(row));
  }
  if (t.columns.empty()) throw InputError(path + ": no header row");
  return t;
}

std::string graphlet_header(bool with_edges) {
  std::string h;
  for (std::size_t i = 0; i < logdim::kGraphletCount; ++i) {
    if (i) h += ',';
    h += logdim::graphlet_name(static_cast<logdim::Graphlet>(i));
  }
  if (with_edges) h += ",edges";
  return h;
}

void add_fit_options(CLI::App* cmd, logdim::FitOptions& opt, std::string& dims, double& prob) {
  cmd->add_option("--dims", dims, "candidate dimensions, e.g. 1-12 or 2,4,8")->capture_default_str();
  cmd->add_option("--samples-per-dim", opt.samples_per_dim, "MGEO-P training graphs per dimension")
      ->capture_default_str();
  cmd->add_option("--prob", prob, "rand-ESU probability (default 10/n)");
  cmd->add_flag("--edge-feature", opt.include_edge_feature, "append log10(edges+1) to the features");
  cmd->add_option("--svm-c", opt.smo.c, "SVM box constraint")->capture_default_str();
  cmd->add_option("--svm-tol", opt.smo.tol, "SMO KKT tolerance")->capture_default_str();
  cmd->add_option("--svm-max-passes", opt.smo.max_passes, "SMO pass limit")->capture_default_str();
  cmd->add_option("--eig-cap", opt.eigen_cap, "largest n for the dense eigensolver")->capture_default_str();
  cmd->add_option("--quantile", opt.diameter.quantile, "effective diameter quantile")->capture_default_str();
}

void finish_fit_options(logdim::FitOptions& opt, const std::string& dims, double prob) {
  opt.dims = parse_dims(dims);
  if (prob > 0.0) opt.graphlet_prob = prob;
}

int run(int argc, char** argv) {
  CLI::App app{"logdim: MGEO-P generation and latent dimension fitting"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "master seed")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--out", g.out, "output file ('-' = stdout)")->capture_default_str();
  app.add_option("--format", g.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  // generate
  auto* gen = app.add_subcommand("generate", "sample an MGEO-P graph");
  logdim::MgeopParams mp;
  std::string positions;
  std::string index = "auto";
  gen->add_option("--n", mp.n, "nodes")->required();
  gen->add_option("--m", mp.m, "dimension")->required();
  gen->add_option("--alpha", mp.alpha)->required();
  gen->add_option("--beta", mp.beta)->required();
  gen->add_option("--p", mp.p, "link probability")->capture_default_str();
  gen->add_option("--positions", positions, "write id/rank/coordinates TSV here");
  gen->add_option("--index", index, "spatial index")
      ->check(CLI::IsMember({"auto", "grid", "naive"}))
      ->capture_default_str();

  // params
  auto* par = app.add_subcommand("params", "estimate rho, eta, alpha, beta and the effective diameter");
  std::string graph_path;
  logdim::DiameterOptions dopt;
  std::string backend = "auto";
  par->add_option("--graph", graph_path)->required();
  par->add_option("--quantile", dopt.quantile)->capture_default_str();
  par->add_option("--diameter-backend", backend)
      ->check(CLI::IsMember({"auto", "exact", "sketch"}))
      ->capture_default_str();

  // graphlets
  auto* gl = app.add_subcommand("graphlets", "count 3- and 4-node graphlets");
  bool exact = false, prob_auto = false, with_edges = false;
  double gl_prob = 0.0;
  gl->add_option("--graph", graph_path)->required();
  auto* ex_flag = gl->add_flag("--exact", exact, "full ESU enumeration");
  auto* prob_opt = gl->add_option("--prob", gl_prob, "rand-ESU probability");
  auto* auto_flag = gl->add_flag("--prob-auto", prob_auto, "rand-ESU with q = 10/n");
  ex_flag->excludes(prob_opt)->excludes(auto_flag);
  prob_opt->excludes(auto_flag);
  gl->add_flag("--edge-feature", with_edges, "append the edge-count feature");

  // spectrum
  auto* sp = app.add_subcommand("spectrum", "normalized Laplacian histogram (201 bins)");
  std::size_t eig_cap = logdim::kDefaultEigenCap;
  sp->add_option("--graph", graph_path)->required();
  sp->add_option("--eig-cap", eig_cap)->capture_default_str();

  // svm-train / svm-predict
  auto* st = app.add_subcommand("svm-train", "train the one-vs-one linear SVM on a feature CSV");
  std::string features_path, model_path;
  logdim::SmoOptions smo;
  std::size_t folds = 0;
  st->add_option("--features", features_path, "CSV with header; 'label' column required")->required();
  st->add_option("--c", smo.c)->capture_default_str();
  st->add_option("--tol", smo.tol)->capture_default_str();
  st->add_option("--max-passes", smo.max_passes)->capture_default_str();
  st->add_option("--cv", folds, "also report stratified k-fold accuracy on stderr");

  auto* spred = app.add_subcommand("svm-predict", "predict labels for a feature CSV");
  spred->add_option("--model", model_path)->required();
  spred->add_option("--features", features_path)->required();

  // fit
  auto* fit = app.add_subcommand("fit", "fit the MGEO-P dimension of a graph");
  logdim::FitOptions fopt;
  std::string dims = "1-12";
  double fit_prob = 0.0;
  std::string method = "graphlets", graph_id, training_out;
  fit->add_option("--graph", graph_path)->required();
  fit->add_option("--method", method)->check(CLI::IsMember({"graphlets", "spectral"}))->capture_default_str();
  fit->add_option("--id", graph_id, "identifier stored in the fit (default: file name)");
  fit->add_option("--subsample-repeats", fopt.subsample_repeats, "train on random subsets this many times");
  fit->add_option("--subsample-fraction", fopt.subsample_fraction)->capture_default_str();
  fit->add_option("--training-out", training_out, "write the graphlet training features as CSV");
  add_fit_options(fit, fopt, dims, fit_prob);

  // nullmodel
  auto* nm = app.add_subcommand("nullmodel", "ER, rewired or percolated copy of a graph");
  std::string nm_type;
  double fraction = 0.0, swaps = 10.0;
  nm->add_option("--type", nm_type)->required()->check(CLI::IsMember({"er", "rewire", "percolate"}));
  nm->add_option("--graph", graph_path)->required();
  nm->add_option("--fraction", fraction, "percolated edge fraction")->capture_default_str();
  nm->add_option("--swaps-per-edge", swaps, "attempted double-edge swaps per edge")->capture_default_str();

  // sensitivity
  auto* sens = app.add_subcommand("sensitivity", "null-model sweep against one trained classifier");
  std::string study, levels = "0";
  std::size_t trials = 10;
  sens->add_option("--graph", graph_path)->required();
  sens->add_option("--study", study)->required()->check(CLI::IsMember({"er", "rewire", "percolation"}));
  sens->add_option("--levels", levels, "comma list; fraction (percolation) or swaps per edge (rewire)")
      ->capture_default_str();
  sens->add_option("--trials", trials)->capture_default_str();
  add_fit_options(sens, fopt, dims, fit_prob);

  // report
  auto* rep = app.add_subcommand("report", "m vs log10(n) regression over fit JSON files");
  std::vector<std::string> fit_paths;
  rep->add_option("--fits", fit_paths, "fit JSON files or directories")->required();

  // kcore
  auto* kc = app.add_subcommand("kcore", "k-core of a graph (edge list)");
  std::size_t k = 5;
  kc->add_option("--graph", graph_path)->required();
  kc->add_option("--k", k)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  logdim::set_worker_threads(g.threads);
  const bool csv = g.format == "csv";

  if (*gen) {
    const auto index_kind = index == "grid"    ? logdim::SpatialIndex::grid
                            : index == "naive" ? logdim::SpatialIndex::naive
                                               : logdim::SpatialIndex::automatic;
    const auto sample = logdim::generate(mp, g.seed, index_kind);
    if (!positions.empty()) {
      std::ofstream f(positions);
      if (!f) throw InputError("cannot write " + positions);
      logdim::write_positions(sample, f);
    }
    emit(g, graph_text(sample.graph));
  } else if (*par) {
    dopt.backend = backend == "exact"    ? logdim::DiameterBackend::exact
                   : backend == "sketch" ? logdim::DiameterBackend::sketch
                                         : logdim::DiameterBackend::automatic;
    const auto est = logdim::estimate_parameters(load(graph_path), g.seed, dopt);
    if (csv) {
      std::string s = "n,edges,rho,eta,x_min,alpha,beta,clamped,eff_diameter,m_model\n";
      s += std::to_string(est.n) + ',' + std::to_string(est.edges) + ',' + num(est.rho) + ',' +
           num(est.eta) + ',' + std::to_string(est.x_min) + ',' + num(est.alpha) + ',' + num(est.beta) +
           ',' + (est.clamped ? "true" : "false") + ',' + num(est.diameter.value) + ',' +
           (est.m_model ? num(*est.m_model) : std::string()) + '\n';
      emit(g, s);
    } else {
      emit(g, logdim::params_to_json(est) + "\n");
    }
  } else if (*gl) {
    const auto graph = load(graph_path);
    double q = 1.0;
    if (prob_auto) q = logdim::default_sampling_probability(graph.node_count());
    if (gl_prob > 0.0) q = gl_prob;
    if (*prob_opt && !(gl_prob > 0.0)) throw InputError("--prob must be positive");
    const auto v = q >= 1.0 && !*prob_opt ? logdim::count_graphlets_exact(graph)
                                          : logdim::count_graphlets_sampled(graph, q, g.seed);
    const auto features = logdim::graphlet_features(v, with_edges);
    if (csv) {
      std::string s = graphlet_header(with_edges) + "\n";
      for (std::size_t i = 0; i < features.size(); ++i) s += (i ? "," : "") + num(features[i]);
      emit(g, s + "\n");
    } else {
      Json j;
      j["counts"] = v.counts;
      j["edge_count"] = v.edge_count;
      j["sampled"] = v.sampled;
      j["q"] = v.sample_prob;
      j["features"] = features;
      emit(g, j.dump(2) + "\n");
    }
  } else if (*sp) {
    const auto eigs = logdim::normalized_laplacian_eigenvalues(load(graph_path), eig_cap);
    const auto h = logdim::spectral_histogram(eigs);
    std::string s = "bin_lo,bin_hi,count,probability\n";
    for (std::size_t i = 0; i < logdim::kSpectralBins; ++i) {
      s += num(logdim::SpectralHistogram::bin_lower(i)) + ',' + num(logdim::SpectralHistogram::bin_upper(i)) +
           ',' + std::to_string(h.raw_counts[i]) + ',' + num(h.bins[i]) + '\n';
    }
    emit(g, s);
  } else if (*st) {
    const auto table = read_features(features_path);
    if (table.labels.empty()) throw InputError(features_path + ": no 'label' column");
    std::vector<logdim::LabeledSample> samples;
    for (std::size_t i = 0; i < table.rows.size(); ++i) samples.push_back({table.rows[i], table.labels[i]});
    const auto model = logdim::train_svm(samples, smo);
    if (folds > 0) {
      const auto cv = logdim::cross_validate(samples, folds, g.seed, smo);
      std::cerr << "cv accuracy " << num(cv.accuracy) << " over " << folds << " folds\n";
    }
    emit(g, logdim::model_to_json(model) + "\n");
  } else if (*spred) {
    const auto model = logdim::model_from_json(read_file(model_path));
    const auto table = read_features(features_path);
    std::string s = table.labels.empty() ? "row,predicted\n" : "row,predicted,label\n";
    std::size_t correct = 0;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      const int p = model.predict(table.rows[i]);
      s += std::to_string(i) + ',' + std::to_string(p);
      if (!table.labels.empty()) {
        s += ',' + std::to_string(table.labels[i]);
        correct += p == table.labels[i];
      }
      s += '\n';
    }
    if (!table.labels.empty() && !table.rows.empty()) {
      std::cerr << "accuracy " << num(static_cast<double>(correct) / static_cast<double>(table.rows.size()))
                << "\n";
    }
    emit(g, s);
  } else if (*fit) {
    finish_fit_options(fopt, dims, fit_prob);
    const auto graph = load(graph_path);
    const std::string id = graph_id.empty() ? fs::path(graph_path).filename().string() : graph_id;
    const auto m = logdim::parse_fit_method(method);
    logdim::DimensionFit result;
    if (m == logdim::FitMethod::spectral) {
      result = logdim::fit_dimension_spectral(graph, fopt, g.seed, id);
    } else if (!training_out.empty()) {
      const auto est = logdim::estimate_parameters(graph, logdim::derive_seed(g.seed, "pipeline/params"),
                                                   fopt.diameter);
      const auto c = logdim::train_graphlet_classifier(graph, est, fopt, g.seed);
      std::string s = "label,index,edges," + graphlet_header(fopt.include_edge_feature) + "\n";
      for (const auto& t : c.training) {
        s += std::to_string(t.m) + ',' + std::to_string(t.index) + ',' + std::to_string(t.edges);
        for (double x : t.features) s += ',' + num(x);
        s += '\n';
      }
      write_file(training_out, s);
      result = logdim::fit_dimension_graphlets(graph, est, fopt, g.seed, id);
    } else {
      result = logdim::fit_dimension_graphlets(graph, fopt, g.seed, id);
    }
    if (csv) {
      std::string s = "input_graph_id,method,m,score,fitted_m\n";
      for (const auto& [dim, score] : result.scores) {
        s += result.input_graph_id + ',' + std::string(logdim::to_string(result.method)) + ',' +
             std::to_string(dim) + ',' + num(score) + ',' + std::to_string(result.fitted_m) + '\n';
      }
      emit(g, s);
    } else {
      emit(g, logdim::fit_to_json(result) + "\n");
    }
  } else if (*nm) {
    const auto graph = load(graph_path);
    logdim::Graph outg;
    if (nm_type == "er") {
      outg = logdim::er_matched(graph.node_count(), graph.edge_count(), g.seed);
    } else if (nm_type == "rewire") {
      outg = logdim::degree_preserving_rewire(graph, swaps, g.seed);
    } else {
      outg = logdim::percolate(graph, fraction, g.seed);
    }
    std::string s = nm_type == "rewire" ? "# nullmodel=swap\n" : "# nullmodel=" + nm_type + "\n";
    emit(g, s + graph_text(outg));
  } else if (*sens) {
    finish_fit_options(fopt, dims, fit_prob);
    const auto lv = parse_levels(levels);
    const auto result =
        logdim::run_sensitivity(load(graph_path), logdim::parse_null_study(study), lv, trials, fopt, g.seed);
    emit(g, logdim::sensitivity_to_csv(result));
  } else if (*rep) {
    std::vector<fs::path> files;
    for (const auto& p : fit_paths) {
      if (fs::is_directory(p)) {
        for (const auto& e : fs::directory_iterator(p)) {
          if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
        }
      } else {
        files.emplace_back(p);
      }
    }
    std::sort(files.begin(), files.end());
    std::vector<logdim::DimensionFit> fits;
    for (const auto& f : files) fits.push_back(logdim::fit_from_json(read_file(f)));
    const auto r = logdim::regression_report(fits);
    if (csv) {
      std::string s = "kind,x,y\n";
      for (const auto& p : r.points) s += "point," + num(p.log10_n) + ',' + num(p.m) + '\n';
      for (const auto& [n, m] : r.model_curve) s += "model," + num(n) + ',' + num(m) + '\n';
      s += "slope," + num(r.ci_slope.first) + ',' + num(r.ci_slope.second) + '\n';
      s += "intercept," + num(r.ci_intercept.first) + ',' + num(r.ci_intercept.second) + '\n';
      s += "fit," + num(r.slope) + ',' + num(r.intercept) + '\n';
      s += "r_squared," + num(r.r_squared) + ",\n";
      emit(g, s);
    } else {
      emit(g, logdim::regression_to_json(r) + "\n");
    }
  } else if (*kc) {
    const auto core = logdim::k_core(load(graph_path), k);
    emit(g, graph_text(core.graph));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const logdim::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const logdim::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
