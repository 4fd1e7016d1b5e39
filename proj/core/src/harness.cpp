#include "eegshift/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "eegshift/parallel.hpp"
#include "eegshift/rng.hpp"

namespace eegshift {

void SplitSpec::validate() const {
  if (!(train_frac > 0.0 && cv_frac > 0.0 && test_frac > 0.0)) throw std::invalid_argument("split fractions must all be > 0");
  if (std::fabs(train_frac + cv_frac + test_frac - 1.0) > 1e-9) throw std::invalid_argument("split fractions must sum to 1");
}

namespace {

// floor(frac * S) robust to representation error, e.g. 0.7 * 30 = 20.999999999999996.
std::size_t floor_share(double frac, std::size_t s) {
  return static_cast<std::size_t>(std::floor(frac * static_cast<double>(s) + 1e-9));
}

}  // namespace

SubjectSplit split_subjects(const std::set<std::uint32_t>& subjects, const SplitSpec& spec) {
  spec.validate();
  const std::size_t S = subjects.size();
  if (S < 3) throw std::invalid_argument("subject split needs at least 3 subjects, got " + std::to_string(S));
  std::vector<std::uint32_t> order(subjects.begin(), subjects.end());
  Rng rng(spec.split_seed);
  rng.shuffle(std::span<std::uint32_t>(order));
  const std::size_t n_train = floor_share(spec.train_frac, S);
  const std::size_t n_cv = floor_share(spec.cv_frac, S);
  SubjectSplit out;
  out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.cv.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                order.begin() + static_cast<std::ptrdiff_t>(n_train + n_cv));
  out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_cv), order.end());
  return out;
}

DatasetSplit split_by_subject(const Dataset& ds, const SplitSpec& spec) {
  const SubjectSplit parts = split_subjects(ds.subjects(), spec);
  const std::unordered_set<std::uint32_t> train(parts.train.begin(), parts.train.end());
  const std::unordered_set<std::uint32_t> cv(parts.cv.begin(), parts.cv.end());
  DatasetSplit out;
  out.train.manifest = out.cv.manifest = out.test.manifest = ds.manifest;
  for (const Trial& t : ds.trials) {
    Dataset& dst = train.count(t.subject_id) ? out.train : cv.count(t.subject_id) ? out.cv : out.test;
    dst.trials.push_back(t);
  }
  return out;
}

LabeledMatrix select_subjects(const LabeledMatrix& m, std::span<const std::uint32_t> subjects) {
  const std::unordered_set<std::uint32_t> keep(subjects.begin(), subjects.end());
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (keep.count(m.subject_ids[i])) rows.push_back(i);
  }
  return m.subset(rows);
}

FeatureSplit split_features(const LabeledMatrix& m, const SplitSpec& spec) {
  const std::set<std::uint32_t> subjects(m.subject_ids.begin(), m.subject_ids.end());
  const SubjectSplit parts = split_subjects(subjects, spec);
  return {select_subjects(m, parts.train), select_subjects(m, parts.cv), select_subjects(m, parts.test)};
}

std::string_view combo_name(Combo c) noexcept {
  switch (c) {
    case Combo::PA_PA: return "PA-PA";
    case Combo::LG_LG: return "LG-LG";
    case Combo::PA_LG: return "PA-LG";
    case Combo::LG_PA: return "LG-PA";
  }
  return "?";
}

Combo parse_combo(std::string_view s) {
  for (Combo c : kAllCombos) {
    if (combo_name(c) == s) return c;
  }
  throw std::invalid_argument("unknown combo '" + std::string(s) + "'");
}

const ResultCell& ResultMatrix::at(Combo combo, ModelKind model) const {
  for (std::size_t k = 0; k < models.size(); ++k) {
    if (models[k] == model) return cells[static_cast<std::size_t>(combo)].at(k);
  }
  throw std::out_of_range("model " + std::string(display_name(model)) + " not in result matrix");
}

bool ResultMatrix::has_model(ModelKind model) const {
  return std::find(models.begin(), models.end(), model) != models.end();
}

namespace {

using Clock = std::chrono::steady_clock;

struct SeedOutcome {
  std::vector<double> accuracy;  // one per test set
  std::vector<double> seconds;   // train + predict, per test set
  bool converged = true;
};

SeedOutcome evaluate_seed(const LabeledMatrix& train, std::span<const LabeledMatrix* const> tests, ModelKind kind,
                          const HyperParams& hp, std::uint64_t seed) {
  const auto t0 = Clock::now();
  const TrainedModel model = train_model(kind, train, hp, seed);
  const double train_s = std::chrono::duration<double>(Clock::now() - t0).count();
  SeedOutcome out;
  out.converged = model.converged;
  for (const LabeledMatrix* test : tests) {
    const auto t1 = Clock::now();
    out.accuracy.push_back(predict_accuracy(model, *test));
    out.seconds.push_back(train_s + std::chrono::duration<double>(Clock::now() - t1).count());
  }
  return out;
}

ResultCell reduce_cell(ModelKind kind, std::span<const SeedOutcome> seeds, std::size_t test_index) {
  ResultCell cell;
  cell.model = kind;
  double acc_sum = 0.0, time_sum = 0.0;
  for (const SeedOutcome& s : seeds) {
    cell.accuracies.push_back(s.accuracy[test_index]);
    acc_sum += s.accuracy[test_index];
    time_sum += s.seconds[test_index];
    cell.converged = cell.converged && s.converged;
  }
  const double n = static_cast<double>(seeds.size());
  cell.mean_accuracy = acc_sum / n;
  cell.mean_seconds = time_sum / n;
  double var = 0.0;
  for (double a : cell.accuracies) var += (a - cell.mean_accuracy) * (a - cell.mean_accuracy);
  cell.std_accuracy = std::sqrt(var / n);
  return cell;
}

}  // namespace

ResultCell run_cell(const LabeledMatrix& train, const LabeledMatrix& test, ModelKind kind, const HyperParams& hp,
                    std::size_t n_seeds) {
  if (n_seeds < 1) throw std::invalid_argument("n_seeds must be >= 1");
  std::vector<SeedOutcome> seeds;
  const LabeledMatrix* tests[] = {&test};
  for (std::size_t s = 1; s <= n_seeds; ++s) seeds.push_back(evaluate_seed(train, tests, kind, hp, s));
  return reduce_cell(kind, seeds, 0);
}

ResultMatrix run_matrix(const LabeledMatrix& pa, const LabeledMatrix& lg, const SplitSpec& spec, const HyperParams& hp,
                        std::size_t n_seeds, const RunOptions& options) {
  if (n_seeds < 1) throw std::invalid_argument("n_seeds must be >= 1");
  if (pa.features() != lg.features()) throw std::invalid_argument("paradigms were featurized with different dimensions");
  const FeatureSplit pa_split = split_features(pa, spec);
  const FeatureSplit lg_split = split_features(lg, spec);
  const std::vector<ModelKind>& models = options.models;

  // Tasks: (train paradigm, model, seed). Test set 0 is in-paradigm, 1 is cross-paradigm.
  const std::size_t per_paradigm = models.size() * n_seeds;
  std::vector<SeedOutcome> outcomes(2 * per_paradigm);
  parallel_for(outcomes.size(), options.threads, [&](std::size_t task) {
    const bool from_pa = task < per_paradigm;
    const std::size_t rest = task % per_paradigm;
    const ModelKind kind = models[rest / n_seeds];
    const std::uint64_t seed = rest % n_seeds + 1;
    const LabeledMatrix* tests[2];
    tests[0] = from_pa ? &pa_split.test : &lg_split.test;
    tests[1] = from_pa ? &lg_split.test : &pa_split.test;
    outcomes[task] = evaluate_seed(from_pa ? pa_split.train : lg_split.train, tests, kind, hp, seed);
  });

  ResultMatrix result;
  result.models = models;
  for (std::size_t k = 0; k < models.size(); ++k) {
    const std::span<const SeedOutcome> from_pa(outcomes.data() + k * n_seeds, n_seeds);
    const std::span<const SeedOutcome> from_lg(outcomes.data() + per_paradigm + k * n_seeds, n_seeds);
    result.cells[static_cast<std::size_t>(Combo::PA_PA)].push_back(reduce_cell(models[k], from_pa, 0));
    result.cells[static_cast<std::size_t>(Combo::LG_LG)].push_back(reduce_cell(models[k], from_lg, 0));
    result.cells[static_cast<std::size_t>(Combo::PA_LG)].push_back(reduce_cell(models[k], from_pa, 1));
    result.cells[static_cast<std::size_t>(Combo::LG_PA)].push_back(reduce_cell(models[k], from_lg, 1));
  }
  return result;
}

GapReport robustness_gap(const ResultMatrix& matrix) { return robustness_gap(matrix, matrix.models); }

GapReport robustness_gap(const ResultMatrix& matrix, std::span<const ModelKind> models) {
  GapReport report;
  if (models.empty()) return report;
  for (ModelKind k : models) {
    ModelGap g;
    g.model = k;
    g.drop_pa = matrix.at(Combo::PA_PA, k).mean_accuracy - matrix.at(Combo::PA_LG, k).mean_accuracy;
    g.drop_lg = matrix.at(Combo::LG_LG, k).mean_accuracy - matrix.at(Combo::LG_PA, k).mean_accuracy;
    report.avg_drop_pa += g.drop_pa;
    report.avg_drop_lg += g.drop_lg;
    report.per_model.push_back(g);
  }
  const double n = static_cast<double>(models.size());
  report.avg_drop_pa /= n;
  report.avg_drop_lg /= n;
  report.gap = report.avg_drop_pa - report.avg_drop_lg;
  return report;
}

}  // namespace eegshift
