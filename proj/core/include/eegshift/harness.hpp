#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eegshift/datamodel.hpp"
#include "eegshift/matrix.hpp"
#include "eegshift/models.hpp"

namespace eegshift {

struct SplitSpec {
  double train_frac = 0.70;
  double cv_frac = 0.15;
  double test_frac = 0.15;
  std::uint64_t split_seed = 1;

  /// Throws std::invalid_argument unless all fractions are > 0 and sum to 1.
  void validate() const;
};

/// Subject ids per part; disjoint, union = all subjects.
struct SubjectSplit {
  std::vector<std::uint32_t> train;
  std::vector<std::uint32_t> cv;
  std::vector<std::uint32_t> test;
};

/// Shuffles the ascending subject list with split_seed, then takes floor(train_frac*S)
/// subjects for train, floor(cv_frac*S) for cv and the remainder for test. Needs S >= 3.
SubjectSplit split_subjects(const std::set<std::uint32_t>& subjects, const SplitSpec& spec);

struct DatasetSplit {
  Dataset train;
  Dataset cv;
  Dataset test;
};

DatasetSplit split_by_subject(const Dataset& ds, const SplitSpec& spec);

/// All rows belonging to the given subjects, original order preserved.
LabeledMatrix select_subjects(const LabeledMatrix& m, std::span<const std::uint32_t> subjects);

struct FeatureSplit {
  LabeledMatrix train;
  LabeledMatrix cv;
  LabeledMatrix test;
};

FeatureSplit split_features(const LabeledMatrix& m, const SplitSpec& spec);

enum class Combo : std::uint8_t { PA_PA = 0, LG_LG = 1, PA_LG = 2, LG_PA = 3 };
inline constexpr std::array<Combo, 4> kAllCombos = {Combo::PA_PA, Combo::LG_LG, Combo::PA_LG, Combo::LG_PA};

/// "PA-PA", "LG-LG", "PA-LG", "LG-PA".
std::string_view combo_name(Combo c) noexcept;
Combo parse_combo(std::string_view s);

struct ResultCell {
  ModelKind model = ModelKind::DecisionTree;
  double mean_accuracy = 0.0;
  /// Population standard deviation over seeds; only meaningful when converged.
  double std_accuracy = 0.0;
  double mean_seconds = 0.0;
  /// False when any seed's optimizer stopped at its iteration cap.
  bool converged = true;
  std::vector<double> accuracies;
};

/// cells[combo][k] belongs to models[k].
struct ResultMatrix {
  std::vector<ModelKind> models;
  std::array<std::vector<ResultCell>, 4> cells;
  std::string config_hash;

  const ResultCell& at(Combo combo, ModelKind model) const;
  bool has_model(ModelKind model) const;
};

struct RunOptions {
  unsigned threads = 1;
  std::vector<ModelKind> models{kAllModels.begin(), kAllModels.end()};
};

/// Trains on `train` with seeds 1..n_seeds and scores on `test`.
ResultCell run_cell(const LabeledMatrix& train, const LabeledMatrix& test, ModelKind kind, const HyperParams& hp,
                    std::size_t n_seeds);

/// Splits both featurized paradigms with the same SplitSpec, trains on each train split
/// and scores on both test splits. One model per (paradigm, kind, seed) serves the in- and
/// cross-paradigm cell of that row.
ResultMatrix run_matrix(const LabeledMatrix& pa, const LabeledMatrix& lg, const SplitSpec& spec, const HyperParams& hp,
                        std::size_t n_seeds, const RunOptions& options = {});

struct ModelGap {
  ModelKind model = ModelKind::DecisionTree;
  double drop_pa = 0.0;  // acc(PA-PA) - acc(PA-LG)
  double drop_lg = 0.0;  // acc(LG-LG) - acc(LG-PA)
};

/// Drops are in the accuracy unit of the matrix (fractions).
struct GapReport {
  std::vector<ModelGap> per_model;
  double avg_drop_pa = 0.0;
  double avg_drop_lg = 0.0;
  double gap = 0.0;  // avg_drop_pa - avg_drop_lg
};

GapReport robustness_gap(const ResultMatrix& matrix);
GapReport robustness_gap(const ResultMatrix& matrix, std::span<const ModelKind> models);

}  // namespace eegshift
