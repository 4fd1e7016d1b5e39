#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eegshift/matrix.hpp"
#include "eegshift/tree.hpp"

namespace eegshift {

enum class ModelKind : std::uint8_t {
  DecisionTree = 0,
  RandomForest = 1,
  GradientBoost = 2,
  XGBoostStyle = 3,
  AdaBoost = 4,
  GaussianNB = 5,
  LinearSVC = 6,
  RbfSVC = 7,
};

/// Row order of the summary table.
inline constexpr std::array<ModelKind, 8> kAllModels = {
    ModelKind::XGBoostStyle, ModelKind::GradientBoost, ModelKind::RandomForest, ModelKind::AdaBoost,
    ModelKind::DecisionTree, ModelKind::LinearSVC,     ModelKind::RbfSVC,       ModelKind::GaussianNB,
};

/// The tree-based learners (single tree plus the four ensembles).
inline constexpr std::array<ModelKind, 5> kTreeEnsembleModels = {
    ModelKind::XGBoostStyle, ModelKind::GradientBoost, ModelKind::RandomForest, ModelKind::AdaBoost,
    ModelKind::DecisionTree,
};

/// "XGBoost", "RBF SVC", ... as printed in result tables.
std::string_view display_name(ModelKind k) noexcept;
/// CLI token: tree, rf, gboost, xgb, ada, gnb, linsvc, rbfsvc.
std::string_view short_name(ModelKind k) noexcept;
/// Accepts either the short or the display name. Throws std::invalid_argument.
ModelKind parse_model_kind(std::string_view s);

struct TreeHyper {
  int max_depth = 8;
  double min_leaf = 2;
};

struct ForestHyper {
  std::size_t n_trees = 100;
  bool bootstrap = true;
  /// 0 selects ceil(sqrt(F)).
  std::size_t features_per_split = 0;
};

struct BoostHyper {
  std::size_t rounds = 100;
  double learning_rate = 0.1;
  int max_depth = 3;
};

struct XgbHyper {
  std::size_t rounds = 100;
  double learning_rate = 0.1;
  int max_depth = 3;
  double lambda = 1.0;
  double gamma = 0.0;
};

struct AdaHyper {
  std::size_t rounds = 50;
  int stump_depth = 1;
};

struct NbHyper {
  /// Added to every variance, as a fraction of the largest feature variance.
  double var_smoothing = 1e-9;
};

struct LinearSvcHyper {
  double C = 1.0;
  std::size_t epochs = 200;
  /// Stop early once the projected-gradient spread falls below this.
  double tol = 1e-4;
};

struct RbfSvcHyper {
  double C = 1.0;
  /// 0 selects 1 / (F * Var(X)) on standardized inputs.
  double gamma = 0.0;
  double tol = 1e-3;
  std::size_t max_iterations = 100000;
};

struct HyperParams {
  TreeHyper tree;
  ForestHyper forest;
  BoostHyper gboost;
  XgbHyper xgb;
  AdaHyper ada;
  NbHyper gnb;
  LinearSvcHyper linsvc;
  RbfSvcHyper rbfsvc;
};

/// Per-feature (x - mean) / scale, fitted on training rows; zero-variance features get scale 1.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const Matrix& X);
  Matrix apply(const Matrix& X) const;
  void apply_row(std::span<const double> x, std::span<double> out) const;
};

struct TreeModel {
  Tree tree;
};

struct ForestModel {
  std::vector<Tree> trees;
};

/// Logit = base_score + learning_rate * sum of tree leaf values.
struct BoostModel {
  double base_score = 0.0;
  double learning_rate = 0.1;
  std::vector<Tree> trees;
};

/// Stumps vote +1 (label 1) or -1 (label 0), weighted by alphas.
struct AdaModel {
  std::vector<Tree> stumps;
  std::vector<double> alphas;
};

struct NbModel {
  std::array<double, 2> log_prior{};
  std::array<std::vector<double>, 2> mean;
  std::array<std::vector<double>, 2> var;
};

struct LinearModel {
  Standardizer standardizer;
  std::vector<double> w;
  double b = 0.0;
};

/// Decision = sum_i coef_i K(sv_i, x) - rho, on standardized inputs.
struct KernelModel {
  Standardizer standardizer;
  double gamma = 1.0;
  Matrix support;
  std::vector<double> coef;
  double rho = 0.0;
};

using ModelParams = std::variant<TreeModel, ForestModel, BoostModel, AdaModel, NbModel, LinearModel, KernelModel>;

struct TrainedModel {
  ModelKind kind = ModelKind::DecisionTree;
  std::uint64_t seed = 0;
  double train_seconds = 0.0;
  bool converged = true;
  std::size_t n_features = 0;
  ModelParams params;
};

/// Optional optimizer trace for the kernel SVM.
struct SmoTrace {
  /// Dual objective sum(alpha) - 1/2 alpha' Q alpha after every update (index 0 = start).
  std::vector<double> dual_objective;
  std::vector<double> alpha;
  std::size_t iterations = 0;
};

TrainedModel train_decision_tree(const LabeledMatrix& data, const HyperParams& hp, std::uint64_t seed);
TrainedModel train_random_forest(const LabeledMatrix& data, const HyperParams& hp, std::uint64_t seed);
TrainedModel train_gradient_boost(const LabeledMatrix& data, const HyperParams& hp, std::uint64_t seed);
TrainedModel train_xgboost_style(const LabeledMatrix& data, const HyperParams& hp, std::uint64_t seed);
TrainedModel train_adaboost(const LabeledMatrix& data, const HyperParams& hp, std::uint64_t seed);
TrainedModel train_gaussian_nb(const LabeledMatrix& data, const HyperParams& hp);
TrainedModel train_linear_svc(const LabeledMatrix& data, const HyperParams& hp, std::uint64_t seed);
TrainedModel train_rbf_svc(const LabeledMatrix& data, const HyperParams& hp, std::uint64_t seed,
                           SmoTrace* trace = nullptr);

TrainedModel train_model(ModelKind kind, const LabeledMatrix& data, const HyperParams& hp, std::uint64_t seed);

/// Real-valued score whose sign decides the label (> 0 -> 1). Throws on dimension mismatch.
std::vector<double> decision_function(const TrainedModel& model, const Matrix& X);
std::vector<int> predict(const TrainedModel& model, const Matrix& X);
double predict_accuracy(const TrainedModel& model, const LabeledMatrix& data);
double accuracy(std::span<const int> predicted, std::span<const int> truth);

/// Mean logistic loss of the boosted model truncated to its first m trees, for m = 0..M.
std::vector<double> boosting_loss_curve(const TrainedModel& model, const LabeledMatrix& data);

/// Versioned binary blob: "EEGM" u16 version u8 kind, then kind-specific parameters.
std::vector<std::uint8_t> serialize_model(const TrainedModel& model);
TrainedModel deserialize_model(std::span<const std::uint8_t> bytes);

}  // namespace eegshift
