#include "eegshift/models.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <list>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "eegshift/rng.hpp"

namespace eegshift {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

void check_training_data(const LabeledMatrix& data) {
  data.validate();
  if (data.size() == 0) throw std::invalid_argument("cannot train on an empty matrix");
}

std::vector<double> labels_as_double(const LabeledMatrix& data) { return {data.y.begin(), data.y.end()}; }

double positive_rate(const LabeledMatrix& data) {
  const double ones = static_cast<double>(std::count(data.y.begin(), data.y.end(), 1));
  return ones / static_cast<double>(data.size());
}

// Log-odds with the rate clipped away from 0 and 1 so single-class data stays finite.
double log_odds(double p) {
  constexpr double eps = 1e-12;
  p = std::clamp(p, eps, 1.0 - eps);
  return std::log(p / (1.0 - p));
}

TrainedModel make_model(ModelKind kind, std::uint64_t seed, const LabeledMatrix& data) {
  TrainedModel m;
  m.kind = kind;
  m.seed = seed;
  m.n_features = data.features();
  return m;
}

Tree constant_tree(double value) {
  TreeNode leaf;
  leaf.value = value;
  return Tree({leaf});
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

}  // namespace

std::string_view display_name(ModelKind k) noexcept {
  switch (k) {
    case ModelKind::DecisionTree: return "DecisionTree";
    case ModelKind::RandomForest: return "RandomForest";
    case ModelKind::GradientBoost: return "GradientBoost";
    case ModelKind::XGBoostStyle: return "XGBoost";
    case ModelKind::AdaBoost: return "AdaBoost";
    case ModelKind::GaussianNB: return "GaussianNB";
    case ModelKind::LinearSVC: return "LinearSVC";
    case ModelKind::RbfSVC: return "RBF SVC";
  }
  return "?";
}

std::string_view short_name(ModelKind k) noexcept {
  switch (k) {
    case ModelKind::DecisionTree: return "tree";
    case ModelKind::RandomForest: return "rf";
    case ModelKind::GradientBoost: return "gboost";
    case ModelKind::XGBoostStyle: return "xgb";
    case ModelKind::AdaBoost: return "ada";
    case ModelKind::GaussianNB: return "gnb";
    case ModelKind::LinearSVC: return "linsvc";
    case ModelKind::RbfSVC: return "rbfsvc";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view s) {
  for (std::uint8_t i = 0; i < 8; ++i) {
    const auto k = static_cast<ModelKind>(i);
    if (s == short_name(k) || s == display_name(k)) return k;
  }
  throw std::invalid_argument("unknown model '" + std::string(s) +
                              "' (expected one of tree, rf, gboost, xgb, ada, gnb, linsvc, rbfsvc)");
}

Standardizer Standardizer::fit(const Matrix& X) {
  Standardizer s;
  const std::size_t n = X.rows(), F = X.cols();
  s.mean.assign(F, 0.0);
  s.scale.assign(F, 1.0);
  if (n == 0) return s;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < F; ++j) s.mean[j] += X(i, j);
  }
  for (double& m : s.mean) m /= static_cast<double>(n);
  std::vector<double> var(F, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < F; ++j) {
      const double d = X(i, j) - s.mean[j];
      var[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < F; ++j) {
    const double sd = std::sqrt(var[j] / static_cast<double>(n));
    s.scale[j] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

void Standardizer::apply_row(std::span<const double> x, std::span<double> out) const {
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - mean[j]) / scale[j];
}

Matrix Standardizer::apply(const Matrix& X) const {
  Matrix Z(X.rows(), X.cols());
  for (std::size_t i = 0; i < X.rows(); ++i) apply_row(X.row(i), Z.row(i));
  return Z;
}

// ---------------------------------------------------------------- trees

TrainedModel train_decision_tree(const LabeledMatrix& data, const HyperParams& hp, std::uint64_t seed) {
  const auto start = Clock::now();
  check_training_data(data);
  TrainedModel model = make_model(ModelKind::DecisionTree, seed, data);
  const SortedColumns sorted(data.X);
  const auto target = labels_as_double(data);
  GrowInput in;
  in.X = &data.X;
  in.sorted = &sorted;
  in.target = target;
  GrowParams gp{hp.tree.max_depth, hp.tree.min_leaf, 0};
  model.params = TreeModel{grow_tree(SplitCriterion::Gini, in, gp).tree};
  model.train_seconds = seconds_since(start);
  return model;
}

TrainedModel train_random_forest(const LabeledMatrix& data, const HyperParams& hp, std::uint64_t seed) {
  const auto start = Clock::now();
  check_training_data(data);
  TrainedModel model = make_model(ModelKind::RandomForest, seed, data);
  const std::size_t n = data.size();
  const std::size_t F = data.features();
  const SortedColumns sorted(data.X);
  const auto target = labels_as_double(data);
  std::size_t mtry = hp.forest.features_per_split;
  if (mtry == 0) mtry = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(F))));
  mtry = std::clamp<std::size_t>(mtry, 1, std::max<std::size_t>(F, 1));

  ForestModel forest;
  forest.trees.reserve(hp.forest.n_trees);
  std::vector<double> counts(n);
  for (std::size_t t = 0; t < hp.forest.n_trees; ++t) {
    Rng rng(derive_seed(seed, t));
    if (hp.forest.bootstrap) {
      std::fill(counts.begin(), counts.end(), 0.0);
      for (std::size_t k = 0; k < n; ++k) counts[static_cast<std::size_t>(rng.below(n))] += 1.0;
    } else {
      std::fill(counts.begin(), counts.end(), 1.0);
    }
    GrowInput in;
    in.X = &data.X;
    in.sorted = &sorted;
    in.target = target;
    in.multiplicity = counts;
    GrowParams gp{hp.tree.max_depth, hp.tree.min_leaf, mtry};
    forest.trees.push_back(grow_tree(SplitCriterion::Gini, in, gp, &rng).tree);
  }
  model.params = std::move(forest);
  model.train_seconds = seconds_since(start);
  return model;
}

TrainedModel train_gradient_boost(const LabeledMatrix& data, const HyperParams& hp, std::uint64_t seed) {
  const auto start = Clock::now();
  check_training_data(data);
  TrainedModel model = make_model(ModelKind::GradientBoost, seed, data);
  const std::size_t n = data.size();
  BoostModel boost;
  boost.learning_rate = hp.gboost.learning_rate;
  boost.base_score = log_odds(positive_rate(data));
  if (data.has_both_classes()) {
    const SortedColumns sorted(data.X);
    std::vector<double> logit(n, boost.base_score), residual(n), p(n);
    for (std::size_t m = 0; m < hp.gboost.rounds; ++m) {
      for (std::size_t i = 0; i < n; ++i) {
        p[i] = sigmoid(logit[i]);
        residual[i] = static_cast<double>(data.y[i]) - p[i];
      }
      GrowInput in;
      in.X = &data.X;
      in.sorted = &sorted;
      in.target = residual;
      GrownTree grown = grow_tree(SplitCriterion::Squared, in, GrowParams{hp.gboost.max_depth, 1.0, 0});
      // Replace least-squares leaves with one Newton step on the logistic loss.
      auto& nodes = grown.tree.nodes();
      std::vector<double> num(nodes.size(), 0.0), den(nodes.size(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const auto leaf = static_cast<std::size_t>(grown.leaf_of[i]);
        num[leaf] += residual[i];
        den[leaf] += p[i] * (1.0 - p[i]);
      }
      for (std::size_t id = 0; id < nodes.size(); ++id) {
        if (nodes[id].is_leaf()) nodes[id].value = den[id] > 1e-150 ? num[id] / den[id] : 0.0;
      }
      for (std::size_t i = 0; i < n; ++i) {
        logit[i] += boost.learning_rate * nodes[static_cast<std::size_t>(grown.leaf_of[i])].value;
      }
      boost.trees.push_back(std::move(grown.tree));
    }
  }
  model.params = std::move(boost);
  model.train_seconds = seconds_since(start);
  return model;
}

TrainedModel train_xgboost_style(const LabeledMatrix& data, const HyperParams& hp, std::uint64_t seed) {
  const auto start = Clock::now();
  check_training_data(data);
  TrainedModel model = make_model(ModelKind::XGBoostStyle, seed, data);
  const std::size_t n = data.size();
  BoostModel boost;
  boost.learning_rate = hp.xgb.learning_rate;
  boost.base_score = log_odds(positive_rate(data));
  if (data.has_both_classes()) {
    const SortedColumns sorted(data.X);
    std::vector<double> logit(n, boost.base_score), grad(n), hess(n);
    for (std::size_t m = 0; m < hp.xgb.rounds; ++m) {
      for (std::size_t i = 0; i < n; ++i) {
        const double p = sigmoid(logit[i]);
        grad[i] = p - static_cast<double>(data.y[i]);
        hess[i] = p * (1.0 - p);
      }
      GrowInput in;
      in.X = &data.X;
      in.sorted = &sorted;
      in.target = grad;
      in.hessian = hess;
      in.lambda = hp.xgb.lambda;
      in.gamma = hp.xgb.gamma;
      GrownTree grown = grow_tree(SplitCriterion::Newton, in, GrowParams{hp.xgb.max_depth, 1.0, 0});
      const auto& nodes = grown.tree.nodes();
      for (std::size_t i = 0; i < n; ++i) {
        logit[i] += boost.learning_rate * nodes[static_cast<std::size_t>(grown.leaf_of[i])].value;
      }
      boost.trees.push_back(std::move(grown.tree));
    }
  }
  model.params = std::move(boost);
  model.train_seconds = seconds_since(start);
  return model;
}

TrainedModel train_adaboost(const LabeledMatrix& data, const HyperParams& hp, std::uint64_t seed) {
  const auto start = Clock::now();
  check_training_data(data);
  TrainedModel model = make_model(ModelKind::AdaBoost, seed, data);
  const std::size_t n = data.size();
  const SortedColumns sorted(data.X);
  const auto target = labels_as_double(data);
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  std::vector<double> h(n);
  AdaModel ada;
  for (std::size_t m = 0; m < hp.ada.rounds; ++m) {
    GrowInput in;
    in.X = &data.X;
    in.sorted = &sorted;
    in.target = target;
    in.weight = w;
    GrownTree stump = grow_tree(SplitCriterion::Gini, in, GrowParams{hp.ada.stump_depth, 1.0, 0});
    double err = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      h[i] = stump.tree.value(data.X.row(i)) > 0.5 ? 1.0 : -1.0;
      const double yi = data.y[i] == 1 ? 1.0 : -1.0;
      if (h[i] != yi) err += w[i];
      total += w[i];
    }
    err /= total;
    if (err <= 0.0) {
      // Perfect stump: its vote alone decides every sample.
      ada.stumps.push_back(std::move(stump.tree));
      ada.alphas.push_back(1.0);
      break;
    }
    if (err >= 0.5) {
      if (ada.stumps.empty()) {
        ada.stumps.push_back(std::move(stump.tree));
        ada.alphas.push_back(1.0);
      }
      break;
    }
    const double alpha = 0.5 * std::log((1.0 - err) / err);
    ada.stumps.push_back(std::move(stump.tree));
    ada.alphas.push_back(alpha);
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double yi = data.y[i] == 1 ? 1.0 : -1.0;
      w[i] *= std::exp(-alpha * yi * h[i]);
      norm += w[i];
    }
    for (double& v : w) v /= norm;
  }
  model.params = std::move(ada);
  model.train_seconds = seconds_since(start);
  return model;
}

// ---------------------------------------------------------------- naive Bayes

TrainedModel train_gaussian_nb(const LabeledMatrix& data, const HyperParams& hp) {
  const auto start = Clock::now();
  check_training_data(data);
  TrainedModel model = make_model(ModelKind::GaussianNB, 0, data);
  const std::size_t n = data.size(), F = data.features();

  // Smoothing is relative to the largest per-feature variance over all rows.
  const Standardizer all = Standardizer::fit(data.X);
  double max_var = 0.0;
  for (std::size_t j = 0; j < F; ++j) {
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = data.X(i, j) - all.mean[j];
      v += d * d;
    }
    max_var = std::max(max_var, v / static_cast<double>(n));
  }
  const double eps = hp.gnb.var_smoothing * (max_var > 0.0 ? max_var : 1.0);

  NbModel nb;
  for (int k = 0; k < 2; ++k) {
    std::size_t count = 0;
    std::vector<double> mean(F, 0.0), var(F, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (data.y[i] != k) continue;
      ++count;
      for (std::size_t j = 0; j < F; ++j) mean[j] += data.X(i, j);
    }
    if (count == 0) {
      nb.log_prior[static_cast<std::size_t>(k)] = -std::numeric_limits<double>::infinity();
      continue;
    }
    for (double& v : mean) v /= static_cast<double>(count);
    for (std::size_t i = 0; i < n; ++i) {
      if (data.y[i] != k) continue;
      for (std::size_t j = 0; j < F; ++j) {
        const double d = data.X(i, j) - mean[j];
        var[j] += d * d;
      }
    }
    for (double& v : var) v = v / static_cast<double>(count) + eps;
    nb.log_prior[static_cast<std::size_t>(k)] = std::log(static_cast<double>(count) / static_cast<double>(n));
    nb.mean[static_cast<std::size_t>(k)] = std::move(mean);
    nb.var[static_cast<std::size_t>(k)] = std::move(var);
  }
  model.params = std::move(nb);
  model.train_seconds = seconds_since(start);
  return model;
}

// ---------------------------------------------------------------- linear SVM

TrainedModel train_linear_svc(const LabeledMatrix& data, const HyperParams& hp, std::uint64_t seed) {
  const auto start = Clock::now();
  check_training_data(data);
  if (!(hp.linsvc.C > 0.0)) throw std::invalid_argument("linsvc C must be positive");
  TrainedModel model = make_model(ModelKind::LinearSVC, seed, data);
  const std::size_t n = data.size(), F = data.features();
  LinearModel lin;
  lin.standardizer = Standardizer::fit(data.X);
  lin.w.assign(F, 0.0);

  if (!data.has_both_classes()) {
    lin.b = data.y[0] == 1 ? 1.0 : -1.0;
    model.params = std::move(lin);
    model.train_seconds = seconds_since(start);
    return model;
  }

  // Dual coordinate descent on the hinge loss; the bias is an extra constant feature.
  const Matrix Z = lin.standardizer.apply(data.X);
  const double C = hp.linsvc.C;
  std::vector<double> w(F + 1, 0.0), alpha(n, 0.0), qd(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    ys[i] = data.y[i] == 1 ? 1.0 : -1.0;
    double s = 1.0;
    for (double v : Z.row(i)) s += v * v;
    qd[i] = s;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  bool converged = false;
  for (std::size_t epoch = 0; epoch < hp.linsvc.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double pg_max = -std::numeric_limits<double>::infinity();
    double pg_min = std::numeric_limits<double>::infinity();
    for (std::size_t i : order) {
      const auto zi = Z.row(i);
      double margin = w[F];
      for (std::size_t j = 0; j < F; ++j) margin += w[j] * zi[j];
      const double g = ys[i] * margin - 1.0;
      double pg = g;
      if (alpha[i] == 0.0) pg = std::min(g, 0.0);
      else if (alpha[i] == C) pg = std::max(g, 0.0);
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (pg == 0.0) continue;
      const double old = alpha[i];
      alpha[i] = std::clamp(old - g / qd[i], 0.0, C);
      const double step = (alpha[i] - old) * ys[i];
      for (std::size_t j = 0; j < F; ++j) w[j] += step * zi[j];
      w[F] += step;
    }
    if (pg_max - pg_min < hp.linsvc.tol) {
      converged = true;
      break;
    }
  }
  std::copy(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(F), lin.w.begin());
  lin.b = w[F];
  model.converged = converged;
  model.params = std::move(lin);
  model.train_seconds = seconds_since(start);
  return model;
}

// ---------------------------------------------------------------- kernel SVM

namespace {

/// LRU cache of RBF kernel rows K(i, .) over the training set.
class KernelRows {
 public:
  KernelRows(const Matrix& Z, double gamma, std::size_t capacity) : Z_(Z), gamma_(gamma), capacity_(capacity) {
    norms_.resize(Z.rows());
    for (std::size_t i = 0; i < Z.rows(); ++i) {
      double s = 0.0;
      for (double v : Z.row(i)) s += v * v;
      norms_[i] = s;
    }
  }

  const std::vector<double>& row(std::size_t i) {
    auto it = index_.find(i);
    if (it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->second;
    }
    if (lru_.size() >= capacity_) {
      index_.erase(lru_.back().first);
      lru_.pop_back();
    }
    lru_.emplace_front(i, compute(i));
    index_[i] = lru_.begin();
    return lru_.front().second;
  }

 private:
  std::vector<double> compute(std::size_t i) const {
    const std::size_t n = Z_.rows();
    std::vector<double> out(n);
    const auto zi = Z_.row(i);
    for (std::size_t t = 0; t < n; ++t) {
      const auto zt = Z_.row(t);
      double dot = 0.0;
      for (std::size_t k = 0; k < zi.size(); ++k) dot += zi[k] * zt[k];
      const double d2 = std::max(norms_[i] + norms_[t] - 2.0 * dot, 0.0);
      out[t] = std::exp(-gamma_ * d2);
    }
    out[i] = 1.0;
    return out;
  }

  const Matrix& Z_;
  double gamma_;
  std::size_t capacity_;
  std::vector<double> norms_;
  std::list<std::pair<std::size_t, std::vector<double>>> lru_;
  std::unordered_map<std::size_t, std::list<std::pair<std::size_t, std::vector<double>>>::iterator> index_;
};

double dual_objective(std::span<const double> alpha, std::span<const double> grad) {
  // grad = Q alpha - e, so alpha'Q alpha = sum alpha (grad + 1).
  double s = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) s += alpha[i] * (grad[i] - 1.0);
  return -0.5 * s;
}

}  // namespace

TrainedModel train_rbf_svc(const LabeledMatrix& data, const HyperParams& hp, std::uint64_t seed, SmoTrace* trace) {
  const auto start = Clock::now();
  check_training_data(data);
  if (!(hp.rbfsvc.C > 0.0)) throw std::invalid_argument("rbfsvc C must be positive");
  TrainedModel model = make_model(ModelKind::RbfSVC, seed, data);
  const std::size_t n = data.size(), F = data.features();
  KernelModel km;
  km.standardizer = Standardizer::fit(data.X);
  const Matrix Z = km.standardizer.apply(data.X);

  if (hp.rbfsvc.gamma > 0.0) {
    km.gamma = hp.rbfsvc.gamma;
  } else {
    double sum = 0.0, sq = 0.0;
    for (double v : Z.data()) {
      sum += v;
      sq += v * v;
    }
    const double cnt = static_cast<double>(Z.data().size());
    const double var = cnt > 0 ? sq / cnt - (sum / cnt) * (sum / cnt) : 0.0;
    km.gamma = var > 0.0 ? 1.0 / (static_cast<double>(F) * var) : 1.0 / static_cast<double>(std::max<std::size_t>(F, 1));
  }

  if (!data.has_both_classes()) {
    km.support = Matrix(0, F);
    km.rho = data.y[0] == 1 ? -1.0 : 1.0;
    if (trace) *trace = SmoTrace{{0.0}, std::vector<double>(n, 0.0), 0};
    model.params = std::move(km);
    model.train_seconds = seconds_since(start);
    return model;
  }

  const double C = hp.rbfsvc.C;
  constexpr double kTau = 1e-12;
  std::vector<double> ys(n), alpha(n, 0.0), grad(n, -1.0);
  for (std::size_t i = 0; i < n; ++i) ys[i] = data.y[i] == 1 ? 1.0 : -1.0;
  KernelRows kernel(Z, km.gamma, std::clamp<std::size_t>((std::size_t{64} << 20) / (8 * n + 1), 2, n));
  if (trace) {
    trace->dual_objective.assign(1, 0.0);
    trace->iterations = 0;
  }

  auto in_up = [&](std::size_t t) { return ys[t] > 0 ? alpha[t] < C : alpha[t] > 0.0; };
  auto in_low = [&](std::size_t t) { return ys[t] > 0 ? alpha[t] > 0.0 : alpha[t] < C; };

  bool converged = false;
  std::size_t iter = 0;
  for (; iter < hp.rbfsvc.max_iterations; ++iter) {
    // Working-set selection using second-order information.
    double g_max = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (in_up(t) && -ys[t] * grad[t] > g_max) {
        g_max = -ys[t] * grad[t];
        i = t;
      }
    }
    if (i == n) {
      converged = true;
      break;
    }
    const std::vector<double>& Ki = kernel.row(i);
    double g_max2 = -std::numeric_limits<double>::infinity();
    double best_obj = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      g_max2 = std::max(g_max2, ys[t] * grad[t]);
      const double diff = g_max + ys[t] * grad[t];
      if (diff > 0.0) {
        double quad = 2.0 - 2.0 * Ki[t];
        if (quad <= 0.0) quad = kTau;
        const double obj = -(diff * diff) / quad;
        if (obj < best_obj) {
          best_obj = obj;
          j = t;
        }
      }
    }
    if (g_max + g_max2 < hp.rbfsvc.tol || j == n) {
      converged = true;
      break;
    }

    const std::vector<double> Ki_copy = Ki;  // the next row() call may evict it
    const std::vector<double>& Kj = kernel.row(j);
    const double Qij = ys[i] * ys[j] * Ki_copy[j];
    const double old_i = alpha[i], old_j = alpha[j];
    if (ys[i] != ys[j]) {
      double quad = 2.0 + 2.0 * Qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = diff; }
      } else {
        if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = -diff; }
      }
      if (diff > 0.0) {
        if (alpha[i] > C) { alpha[i] = C; alpha[j] = C - diff; }
      } else {
        if (alpha[j] > C) { alpha[j] = C; alpha[i] = C + diff; }
      }
    } else {
      double quad = 2.0 - 2.0 * Qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) { alpha[i] = C; alpha[j] = sum - C; }
      } else {
        if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = sum; }
      }
      if (sum > C) {
        if (alpha[j] > C) { alpha[j] = C; alpha[i] = sum - C; }
      } else {
        if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = sum; }
      }
    }
    const double di = (alpha[i] - old_i) * ys[i];
    const double dj = (alpha[j] - old_j) * ys[j];
    for (std::size_t t = 0; t < n; ++t) grad[t] += ys[t] * (Ki_copy[t] * di + Kj[t] * dj);
    if (trace) trace->dual_objective.push_back(dual_objective(alpha, grad));
  }

  // Bias: average over free vectors, otherwise the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity(), lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = ys[t] * grad[t];
    if (alpha[t] >= C) {
      if (ys[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (ys[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      free_sum += yg;
      ++free_count;
    }
  }
  km.rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : (ub + lb) / 2.0;

  std::size_t n_sv = 0;
  for (double a : alpha) n_sv += a > 0.0 ? 1 : 0;
  km.support = Matrix(n_sv, F);
  km.coef.reserve(n_sv);
  for (std::size_t t = 0, r = 0; t < n; ++t) {
    if (!(alpha[t] > 0.0)) continue;
    const auto src = Z.row(t);
    std::copy(src.begin(), src.end(), km.support.row(r++).begin());
    km.coef.push_back(alpha[t] * ys[t]);
  }
  if (trace) {
    trace->alpha = alpha;
    trace->iterations = iter;
  }
  model.converged = converged;
  model.params = std::move(km);
  model.train_seconds = seconds_since(start);
  return model;
}

TrainedModel train_model(ModelKind kind, const LabeledMatrix& data, const HyperParams& hp, std::uint64_t seed) {
  switch (kind) {
    case ModelKind::DecisionTree: return train_decision_tree(data, hp, seed);
    case ModelKind::RandomForest: return train_random_forest(data, hp, seed);
    case ModelKind::GradientBoost: return train_gradient_boost(data, hp, seed);
    case ModelKind::XGBoostStyle: return train_xgboost_style(data, hp, seed);
    case ModelKind::AdaBoost: return train_adaboost(data, hp, seed);
    case ModelKind::GaussianNB: {
      TrainedModel m = train_gaussian_nb(data, hp);
      m.seed = seed;
      return m;
    }
    case ModelKind::LinearSVC: return train_linear_svc(data, hp, seed);
    case ModelKind::RbfSVC: return train_rbf_svc(data, hp, seed);
  }
  throw std::invalid_argument("unknown model kind");
}

// ---------------------------------------------------------------- prediction

namespace {

struct DecisionVisitor {
  std::span<const double> x;
  std::vector<double>& scratch;

  double operator()(const TreeModel& m) const { return m.tree.value(x) - 0.5; }

  double operator()(const ForestModel& m) const {
    double votes = 0.0;
    for (const Tree& t : m.trees) votes += t.value(x) > 0.5 ? 1.0 : -1.0;
    return votes;
  }

  double operator()(const BoostModel& m) const {
    double z = m.base_score;
    for (const Tree& t : m.trees) z += m.learning_rate * t.value(x);
    return z;
  }

  double operator()(const AdaModel& m) const {
    double s = 0.0;
    for (std::size_t k = 0; k < m.stumps.size(); ++k) s += m.alphas[k] * (m.stumps[k].value(x) > 0.5 ? 1.0 : -1.0);
    return s;
  }

  double operator()(const NbModel& m) const {
    std::array<double, 2> lp{};
    for (std::size_t k = 0; k < 2; ++k) {
      lp[k] = m.log_prior[k];
      if (!std::isfinite(lp[k])) continue;
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double d = x[j] - m.mean[k][j];
        lp[k] -= 0.5 * (std::log(2.0 * std::numbers::pi * m.var[k][j]) + d * d / m.var[k][j]);
      }
    }
    return lp[1] - lp[0];
  }

  double operator()(const LinearModel& m) const {
    scratch.resize(x.size());
    m.standardizer.apply_row(x, scratch);
    double s = m.b;
    for (std::size_t j = 0; j < x.size(); ++j) s += m.w[j] * scratch[j];
    return s;
  }

  double operator()(const KernelModel& m) const {
    scratch.resize(x.size());
    m.standardizer.apply_row(x, scratch);
    double s = -m.rho;
    for (std::size_t r = 0; r < m.support.rows(); ++r) {
      s += m.coef[r] * std::exp(-m.gamma * squared_distance(m.support.row(r), scratch));
    }
    return s;
  }
};

}  // namespace

std::vector<double> decision_function(const TrainedModel& model, const Matrix& X) {
  if (X.cols() != model.n_features) {
    throw std::invalid_argument("feature dimension " + std::to_string(X.cols()) + " does not match the model's " +
                                std::to_string(model.n_features));
  }
  std::vector<double> out(X.rows());
  std::vector<double> scratch;
  for (std::size_t i = 0; i < X.rows(); ++i) out[i] = std::visit(DecisionVisitor{X.row(i), scratch}, model.params);
  return out;
}

std::vector<int> predict(const TrainedModel& model, const Matrix& X) {
  const auto scores = decision_function(model, X);
  std::vector<int> labels(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) labels[i] = scores[i] > 0.0 ? 1 : 0;
  return labels;
}

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) throw std::invalid_argument("prediction and label counts differ");
  if (truth.empty()) throw std::invalid_argument("accuracy of an empty set is undefined");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) correct += predicted[i] == truth[i] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

double predict_accuracy(const TrainedModel& model, const LabeledMatrix& data) {
  return accuracy(predict(model, data.X), data.y);
}

std::vector<double> boosting_loss_curve(const TrainedModel& model, const LabeledMatrix& data) {
  const auto* boost = std::get_if<BoostModel>(&model.params);
  if (boost == nullptr) throw std::invalid_argument("loss curve requires a boosted model");
  std::vector<double> logit(data.size(), boost->base_score);
  std::vector<double> curve;
  curve.reserve(boost->trees.size() + 1);
  auto loss = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) s += softplus(data.y[i] == 1 ? -logit[i] : logit[i]);
    return s / static_cast<double>(data.size());
  };
  curve.push_back(loss());
  for (const Tree& t : boost->trees) {
    for (std::size_t i = 0; i < data.size(); ++i) logit[i] += boost->learning_rate * t.value(data.X.row(i));
    curve.push_back(loss());
  }
  return curve;
}

}  // namespace eegshift
