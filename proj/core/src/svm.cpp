#include "logdim/svm.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <map>
#include <numeric>

#include "logdim/error.hpp"
#include "logdim/parallel.hpp"

namespace logdim {

// ---------------------------------------------------------------------------
// Standardization

Standardization Standardization::fit(std::span<const LabeledSample> samples) {
  if (samples.empty()) throw InputError("cannot standardize an empty training set");
  const std::size_t d = samples.front().features.size();
  Standardization s;
  s.mean.assign(d, 0.0);
  s.scale.assign(d, 1.0);
  for (const auto& sample : samples) {
    if (sample.features.size() != d) throw InputError("training samples differ in feature count");
    for (std::size_t j = 0; j < d; ++j) s.mean[j] += sample.features[j];
  }
  const auto count = static_cast<double>(samples.size());
  for (auto& mu : s.mean) mu /= count;
  for (std::size_t j = 0; j < d; ++j) {
    double var = 0.0;
    for (const auto& sample : samples) {
      const double diff = sample.features[j] - s.mean[j];
      var += diff * diff;
    }
    const double sd = std::sqrt(var / count);
    if (sd <= 1e-12 * (1.0 + std::abs(s.mean[j]))) {
      s.dropped.push_back(j);
    } else {
      s.scale[j] = sd;
    }
  }
  return s;
}

std::vector<double> Standardization::apply(std::span<const double> x) const {
  if (x.size() != mean.size()) {
    throw InputError("feature vector has " + std::to_string(x.size()) + " components, model expects " +
                     std::to_string(mean.size()));
  }
  std::vector<double> z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - mean[j]) / scale[j];
  for (std::size_t j : dropped) z[j] = 0.0;
  return z;
}

// ---------------------------------------------------------------------------
// SMO

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

// Platt's outer loop with the two-threshold bookkeeping of Keerthi et al.
// (b_up / b_low, "modification 1"), as in Weka's SMO. F_i = w.x_i - y_i;
// optimal when b_low <= b_up + 2 tol.
class SmoSolver {
 public:
  SmoSolver(std::span<const std::vector<double>> x, std::span<const int> y, const SmoOptions& opt)
      : x_(x), y_(y), opt_(opt), n_(x.size()) {
    sol_.alphas.assign(n_, 0.0);
    sol_.weights.assign(n_ == 0 ? 0 : x_[0].size(), 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      if (y_[i] > 0 && i_up_ == n_) i_up_ = i;
      if (y_[i] < 0 && i_low_ == n_) i_low_ = i;
    }
  }

  BinarySolution solve() {
    if (i_up_ == n_ || i_low_ == n_) {
      // one class only: nothing to separate
      sol_.bias = i_up_ == n_ ? -1.0 : 1.0;
      sol_.converged = true;
      return std::move(sol_);
    }
    std::size_t changed = 0;
    bool examine_all = true;
    sol_.converged = true;
    // passes count full sweeps; the sweeps over I0 in between are capped
    // separately so a stalled run still ends
    std::size_t inner = 0;
    const std::size_t inner_cap = 1000 * std::max<std::size_t>(opt_.max_passes, 1);
    while (changed > 0 || examine_all) {
      if (examine_all ? sol_.passes >= opt_.max_passes : inner >= inner_cap) {
        sol_.converged = false;
        break;
      }
      ++(examine_all ? sol_.passes : inner);
      changed = 0;
      if (examine_all) {
        for (std::size_t i = 0; i < n_; ++i) changed += examine(i);
      } else {
        for (std::size_t i = 0; i < n_; ++i) {
          if (!in_i0(i)) continue;
          changed += examine(i);
          if (b_up_ > b_low_ - 2.0 * opt_.tol) {
            changed = 0;
            break;
          }
        }
      }
      if (examine_all) {
        examine_all = false;
      } else if (changed == 0) {
        examine_all = true;
      }
    }
    const bool up = std::isfinite(b_up_), low = std::isfinite(b_low_);
    sol_.bias = up && low ? -0.5 * (b_low_ + b_up_) : up ? -b_up_ : low ? -b_low_ : 0.0;
    return std::move(sol_);
  }

 private:
  bool in_i0(std::size_t i) const { return sol_.alphas[i] > 0.0 && sol_.alphas[i] < opt_.c; }
  // I0 u I1 u I2: may still lower F toward b_up
  bool in_up(std::size_t i) const {
    const double a = sol_.alphas[i];
    return in_i0(i) || (y_[i] > 0 && a <= 0.0) || (y_[i] < 0 && a >= opt_.c);
  }
  // I0 u I3 u I4
  bool in_low(std::size_t i) const {
    const double a = sol_.alphas[i];
    return in_i0(i) || (y_[i] > 0 && a >= opt_.c) || (y_[i] < 0 && a <= 0.0);
  }

  double f(std::size_t i) const { return dot(sol_.weights, x_[i]) - static_cast<double>(y_[i]); }

  int examine(std::size_t i2) {
    const double f2 = f(i2);
    if (!in_i0(i2)) {
      if (in_up(i2) && f2 < b_up_) {
        b_up_ = f2;
        i_up_ = i2;
      } else if (in_low(i2) && f2 > b_low_) {
        b_low_ = f2;
        i_low_ = i2;
      }
    }
    bool optimal = true;
    std::size_t i1 = n_;
    if (in_up(i2) && b_low_ - f2 > 2.0 * opt_.tol) {
      optimal = false;
      i1 = i_low_;
    }
    if (in_low(i2) && f2 - b_up_ > 2.0 * opt_.tol) {
      optimal = false;
      i1 = i_up_;
    }
    if (optimal) return 0;
    // in I0 both tests can fire; take the larger violation
    if (in_i0(i2)) i1 = b_low_ - f2 > f2 - b_up_ ? i_low_ : i_up_;
    return step(i1, i2) ? 1 : 0;
  }

  bool step(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const double c = opt_.c;
    const double a1 = sol_.alphas[i1];
    const double a2 = sol_.alphas[i2];
    const double y1 = y_[i1];
    const double y2 = y_[i2];
    const double f1 = f(i1);
    const double f2 = f(i2);
    const double s = y1 * y2;

    double lo;
    double hi;
    if (s < 0) {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(c, c + a2 - a1);
    } else {
      lo = std::max(0.0, a1 + a2 - c);
      hi = std::min(c, a1 + a2);
    }
    if (lo >= hi) return false;

    const double k11 = dot(x_[i1], x_[i1]);
    const double k12 = dot(x_[i1], x_[i2]);
    const double k22 = dot(x_[i2], x_[i2]);
    const double eta = k11 + k22 - 2.0 * k12;

    // along the feasible line the dual objective changes by
    // y2 (f2 - f1) d + eta d^2 / 2 when a2 moves by d
    double a2_new;
    if (eta > 0.0) {
      a2_new = std::clamp(a2 + y2 * (f1 - f2) / eta, lo, hi);
    } else {
      const auto obj = [&](double d) { return y2 * (f2 - f1) * d + 0.5 * eta * d * d; };
      const double obj_lo = obj(lo - a2);
      const double obj_hi = obj(hi - a2);
      if (obj_lo < obj_hi - opt_.eps) {
        a2_new = lo;
      } else if (obj_lo > obj_hi + opt_.eps) {
        a2_new = hi;
      } else {
        a2_new = a2;
      }
    }
    const double bound_eps = 1e-12 * c;
    if (a2_new < bound_eps) a2_new = 0.0;
    if (a2_new > c - bound_eps) a2_new = c;
    if (std::abs(a2_new - a2) < opt_.eps * (a2_new + a2 + opt_.eps)) return false;

    double a1_new = a1 + s * (a2 - a2_new);
    if (a1_new < bound_eps) a1_new = 0.0;
    if (a1_new > c - bound_eps) a1_new = c;

    const double d1 = y1 * (a1_new - a1);
    const double d2 = y2 * (a2_new - a2);
    for (std::size_t j = 0; j < sol_.weights.size(); ++j) {
      sol_.weights[j] += d1 * x_[i1][j] + d2 * x_[i2][j];
    }
    sol_.alphas[i1] = a1_new;
    sol_.alphas[i2] = a2_new;

    // thresholds over I0 plus the two changed points
    b_up_ = std::numeric_limits<double>::infinity();
    b_low_ = -std::numeric_limits<double>::infinity();
    const auto consider = [&](std::size_t i) {
      const double fi = f(i);
      if (in_up(i) && fi < b_up_) {
        b_up_ = fi;
        i_up_ = i;
      }
      if (in_low(i) && fi > b_low_) {
        b_low_ = fi;
        i_low_ = i;
      }
    };
    for (std::size_t i = 0; i < n_; ++i) {
      if (in_i0(i)) consider(i);
    }
    consider(i1);
    consider(i2);
    return true;
  }

  std::span<const std::vector<double>> x_;
  std::span<const int> y_;
  SmoOptions opt_;
  std::size_t n_;
  BinarySolution sol_;
  double b_up_ = -1.0;
  double b_low_ = 1.0;
  std::size_t i_up_ = n_;
  std::size_t i_low_ = n_;
};

}  // namespace

BinarySolution solve_smo(std::span<const std::vector<double>> x, std::span<const int> y,
                         const SmoOptions& options) {
  if (x.size() != y.size()) throw InputError("SMO: sample and label counts differ");
  for (int label : y) {
    if (label != 1 && label != -1) throw InputError("SMO labels must be +1 or -1");
  }
  if (!(options.c > 0.0)) throw InputError("SMO box constraint C must be positive");
  return SmoSolver(x, y, options).solve();
}

double max_kkt_violation(std::span<const std::vector<double>> x, std::span<const int> y,
                         const BinarySolution& solution, double c) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double margin = y[i] * (dot(solution.weights, x[i]) + solution.bias) - 1.0;
    const double a = solution.alphas[i];
    double violation;
    if (a <= 0.0) {
      violation = std::max(0.0, -margin);
    } else if (a >= c) {
      violation = std::max(0.0, margin);
    } else {
      violation = std::abs(margin);
    }
    worst = std::max(worst, violation);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// One-vs-one ensemble

double BinaryModel::decision(std::span<const double> z) const { return dot(weights, z) + bias; }

std::vector<std::size_t> PairwiseSvmModel::votes(std::span<const double> x) const {
  const auto z = standardization.apply(x);
  std::vector<std::size_t> tally(labels.size(), 0);
  for (const auto& pair : pairs) {
    const int winner = pair.vote(z);
    const auto it = std::lower_bound(labels.begin(), labels.end(), winner);
    ++tally[static_cast<std::size_t>(it - labels.begin())];
  }
  return tally;
}

int PairwiseSvmModel::predict(std::span<const double> x) const {
  const auto tally = votes(x);
  std::size_t best = 0;
  for (std::size_t i = 1; i < tally.size(); ++i) {
    if (tally[i] > tally[best]) best = i;
  }
  return labels.at(best);
}

PairwiseSvmModel train_svm(std::span<const LabeledSample> samples, const SmoOptions& options) {
  PairwiseSvmModel model;
  for (const auto& s : samples) model.labels.push_back(s.label);
  std::sort(model.labels.begin(), model.labels.end());
  model.labels.erase(std::unique(model.labels.begin(), model.labels.end()), model.labels.end());
  if (model.labels.size() < 2) throw InputError("SVM training needs at least two distinct labels");

  model.standardization = Standardization::fit(samples);
  std::vector<std::vector<double>> z;
  z.reserve(samples.size());
  for (const auto& s : samples) z.push_back(model.standardization.apply(s.features));

  std::vector<std::pair<int, int>> label_pairs;
  for (std::size_t i = 0; i < model.labels.size(); ++i) {
    for (std::size_t j = i + 1; j < model.labels.size(); ++j) {
      label_pairs.emplace_back(model.labels[i], model.labels[j]);
    }
  }
  const std::size_t d = model.standardization.dimension();
  model.pairs.resize(label_pairs.size());
  parallel_for(label_pairs.size(), [&](std::size_t p) {
    const auto [a, b] = label_pairs[p];
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (samples[i].label == a || samples[i].label == b) {
        x.push_back(z[i]);
        y.push_back(samples[i].label == a ? 1 : -1);
      }
    }
    BinaryModel& pair = model.pairs[p];
    pair.a = a;
    pair.b = b;
    const auto positives = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
    const std::size_t negatives = y.size() - positives;
    if (positives == 0 || negatives == 0 || model.standardization.dropped.size() == d) {
      pair.constant = true;
      pair.weights.assign(d, 0.0);
      pair.bias = positives >= negatives ? 1.0 : -1.0;
      return;
    }
    auto solution = solve_smo(x, y, options);
    pair.weights = std::move(solution.weights);
    pair.bias = solution.bias;
    pair.converged = solution.converged;
  });
  return model;
}

// ---------------------------------------------------------------------------
// Serialization

std::string model_to_json(const PairwiseSvmModel& model) {
  nlohmann::json j;
  j["labels"] = model.labels;
  j["standardization"] = {{"mean", model.standardization.mean},
                          {"std", model.standardization.scale},
                          {"dropped", model.standardization.dropped}};
  auto& pairs = j["pairs"] = nlohmann::json::array();
  for (const auto& p : model.pairs) {
    pairs.push_back({{"a", p.a},
                     {"b", p.b},
                     {"weights", p.weights},
                     {"bias", p.bias},
                     {"constant", p.constant},
                     {"converged", p.converged}});
  }
  return j.dump(2);
}

PairwiseSvmModel model_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    PairwiseSvmModel model;
    model.labels = j.at("labels").get<std::vector<int>>();
    const auto& s = j.at("standardization");
    model.standardization.mean = s.at("mean").get<std::vector<double>>();
    model.standardization.scale = s.at("std").get<std::vector<double>>();
    model.standardization.dropped = s.value("dropped", std::vector<std::size_t>{});
    if (model.standardization.mean.size() != model.standardization.scale.size()) {
      throw InputError("model standardization vectors differ in length");
    }
    for (const auto& p : j.at("pairs")) {
      BinaryModel pair;
      pair.a = p.at("a").get<int>();
      pair.b = p.at("b").get<int>();
      pair.weights = p.at("weights").get<std::vector<double>>();
      pair.bias = p.at("bias").get<double>();
      pair.constant = p.value("constant", false);
      pair.converged = p.value("converged", true);
      if (pair.weights.size() != model.standardization.dimension()) {
        throw InputError("model pair weights do not match the feature dimension");
      }
      model.pairs.push_back(std::move(pair));
    }
    if (!std::is_sorted(model.labels.begin(), model.labels.end())) {
      throw InputError("model labels must be sorted");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed SVM model JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Evaluation

CrossValidation cross_validate(std::span<const LabeledSample> samples, std::size_t folds, Seed seed,
                               const SmoOptions& options) {
  if (folds < 2) throw InputError("cross-validation needs at least two folds");
  if (folds > samples.size()) {
    throw InputError("cross-validation with " + std::to_string(folds) + " folds needs at least as many samples");
  }
  std::map<int, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < samples.size(); ++i) by_label[samples[i].label].push_back(i);
  for (const auto& [label, members] : by_label) {
    if (members.size() < folds) {
      throw InputError("stratification error: label " + std::to_string(label) + " has " +
                       std::to_string(members.size()) + " samples for " + std::to_string(folds) +
                       " folds");
    }
  }

  CrossValidation cv;
  for (const auto& [label, members] : by_label) cv.labels.push_back(label);
  const std::size_t l = cv.labels.size();
  cv.confusion.assign(l, std::vector<std::size_t>(l, 0));

  std::vector<std::size_t> fold_of(samples.size());
  Rng rng(derive_seed(seed, "svm/cv"));
  std::size_t offset = 0;
  for (auto& [label, members] : by_label) {
    for (std::size_t i = members.size(); i > 1; --i) {
      std::swap(members[i - 1], members[uniform_below(rng, i)]);
    }
    for (std::size_t k = 0; k < members.size(); ++k) fold_of[members[k]] = (offset + k) % folds;
    offset += members.size();
  }

  std::vector<std::vector<std::pair<int, int>>> outcomes(folds);
  parallel_for(folds, [&](std::size_t f) {
    std::vector<LabeledSample> train;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (fold_of[i] != f) train.push_back(samples[i]);
    }
    const auto model = train_svm(train, options);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (fold_of[i] == f) outcomes[f].emplace_back(samples[i].label, model.predict(samples[i].features));
    }
  });

  std::size_t correct = 0;
  std::size_t total = 0;
  auto index_of = [&](int label) {
    return static_cast<std::size_t>(std::lower_bound(cv.labels.begin(), cv.labels.end(), label) -
                                    cv.labels.begin());
  };
  for (const auto& fold : outcomes) {
    for (const auto& [truth, predicted] : fold) {
      ++cv.confusion[index_of(truth)][index_of(predicted)];
      correct += truth == predicted;
      ++total;
    }
  }
  cv.accuracy = static_cast<double>(correct) / static_cast<double>(total);
  return cv;
}

std::vector<int> subsample_predictions(std::span<const LabeledSample> samples,
                                       std::span<const double> query, double fraction,
                                       std::size_t repeats, Seed seed, const SmoOptions& options) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw InputError("subsample fraction must lie in (0, 1]");
  if (samples.empty()) throw InputError("subsampling needs training samples");
  const auto take = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(samples.size()))));
  std::vector<int> predictions(repeats);
  parallel_for(repeats, [&](std::size_t r) {
    Rng rng(derive_seed(seed, "svm/subsample", r));
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < take; ++i) {
      std::swap(order[i], order[i + uniform_below(rng, order.size() - i)]);
    }
    std::vector<LabeledSample> subset;
    for (std::size_t i = 0; i < take; ++i) subset.push_back(samples[order[i]]);
    const bool single_label = std::all_of(subset.begin(), subset.end(), [&](const auto& s) {
      return s.label == subset.front().label;
    });
    predictions[r] = single_label ? subset.front().label : train_svm(subset, options).predict(query);
  });
  return predictions;
}

}  // namespace logdim
