#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "eegshift/harness.hpp"
#include "eegshift/synth.hpp"
#include "test_util.hpp"

using namespace eegshift;

namespace {

std::set<std::uint32_t> ids(std::size_t s) {
  std::set<std::uint32_t> out;
  for (std::uint32_t i = 1; i <= s; ++i) out.insert(i * 3);
  return out;
}

// Features whose label depends on subject parity a little, so cells differ.
LabeledMatrix subject_blobs(std::size_t subjects, std::size_t per_subject, double shift, std::uint64_t seed) {
  LabeledMatrix m = testutil::blobs(subjects * per_subject, 3, shift, seed);
  for (std::size_t i = 0; i < m.size(); ++i) m.subject_ids[i] = static_cast<std::uint32_t>(i / per_subject + 1);
  return m;
}

ResultMatrix table_matrix(const std::vector<std::array<double, 4>>& rows) {
  ResultMatrix m;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    m.models.push_back(kAllModels[k]);
    for (Combo c : kAllCombos) {
      ResultCell cell;
      cell.model = kAllModels[k];
      cell.mean_accuracy = rows[k][static_cast<std::size_t>(c)];
      m.cells[static_cast<std::size_t>(c)].push_back(cell);
    }
  }
  return m;
}

}  // namespace

TEST(SplitSubjects, TwentySubjects) {
  const SubjectSplit s = split_subjects(ids(20), SplitSpec{});
  EXPECT_EQ(s.train.size(), 14u);
  EXPECT_EQ(s.cv.size(), 3u);
  EXPECT_EQ(s.test.size(), 3u);
}

TEST(SplitSubjects, FuzzPartitionAndSizes) {
  Rng pick(77);
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    const std::size_t S = 3 + static_cast<std::size_t>(pick.below(48));
    SplitSpec spec;
    spec.split_seed = seed;
    const auto all = ids(S);
    const SubjectSplit s = split_subjects(all, spec);
    ASSERT_EQ(s.train.size(), 70 * S / 100) << S;
    ASSERT_EQ(s.cv.size(), 15 * S / 100) << S;
    ASSERT_EQ(s.test.size(), S - 70 * S / 100 - 15 * S / 100) << S;
    std::set<std::uint32_t> seen;
    for (const auto* part : {&s.train, &s.cv, &s.test})
      for (std::uint32_t id : *part) ASSERT_TRUE(seen.insert(id).second) << "overlap at seed " << seed;
    ASSERT_EQ(seen, all);
  }
}

TEST(SplitSubjects, DeterministicAndSeedSensitive) {
  SplitSpec a;
  a.split_seed = 5;
  EXPECT_EQ(split_subjects(ids(30), a).train, split_subjects(ids(30), a).train);
  SplitSpec b = a;
  b.split_seed = 6;
  EXPECT_NE(split_subjects(ids(30), a).train, split_subjects(ids(30), b).train);
}

TEST(SplitSubjects, Errors) {
  EXPECT_THROW(split_subjects(ids(2), SplitSpec{}), std::invalid_argument);
  SplitSpec s;
  s.test_frac = 0.2;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = SplitSpec{0.85, 0.0, 0.15, 1};
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(SplitBySubject, TrialsTravelTogether) {
  GeneratorConfig cfg;
  cfg.n_subjects = 10;
  cfg.trials_per_subject = 4;
  cfg.n_channels = 1;
  cfg.trial_seconds = 0.1;
  const Dataset ds = generate_dataset(Paradigm::LargeGrid, cfg);
  const DatasetSplit parts = split_by_subject(ds, SplitSpec{});
  EXPECT_EQ(parts.train.trials.size() + parts.cv.trials.size() + parts.test.trials.size(), ds.trials.size());
  EXPECT_EQ(parts.train.subjects().size(), 7u);
  EXPECT_EQ(parts.cv.subjects().size(), 1u);
  EXPECT_EQ(parts.test.subjects().size(), 2u);
  for (const Dataset* part : {&parts.train, &parts.cv, &parts.test})
    for (std::uint32_t s : part->subjects()) {
      std::size_t n = 0;
      for (const Trial& t : part->trials) n += t.subject_id == s;
      EXPECT_EQ(n, 4u);
    }
}

TEST(RunCell, SeparableToyIsPerfect) {
  const LabeledMatrix d = testutil::from_rows({{0.0}, {1.0}, {2.0}, {3.0}, {4.0}, {5.0}}, {0, 0, 0, 1, 1, 1});
  const ResultCell c = run_cell(d, d, ModelKind::DecisionTree, HyperParams{}, 3);
  EXPECT_EQ(c.mean_accuracy, 1.0);
  EXPECT_EQ(c.std_accuracy, 0.0);
  EXPECT_EQ(c.accuracies.size(), 3u);
}

TEST(RunCell, StdZeroCases) {
  const LabeledMatrix train = testutil::blobs(200, 3, 1.0, 1), test = testutil::blobs(200, 3, 1.0, 2);
  EXPECT_EQ(run_cell(train, test, ModelKind::LinearSVC, HyperParams{}, 1).std_accuracy, 0.0);
  EXPECT_EQ(run_cell(train, test, ModelKind::GaussianNB, HyperParams{}, 5).std_accuracy, 0.0);
  HyperParams hp;
  hp.forest.n_trees = 5;
  const ResultCell rf = run_cell(train, test, ModelKind::RandomForest, hp, 4);
  EXPECT_GE(rf.std_accuracy, 0.0);
  EXPECT_EQ(rf.accuracies.size(), 4u);
}

TEST(RunMatrix, ShapeSymmetryAndThreads) {
  const LabeledMatrix pa = subject_blobs(10, 20, 2.0, 3);
  const LabeledMatrix lg = subject_blobs(10, 20, 1.0, 4);
  HyperParams hp;
  hp.forest.n_trees = 5;
  hp.gboost.rounds = hp.xgb.rounds = 10;
  const ResultMatrix m = run_matrix(pa, lg, SplitSpec{}, hp, 2);
  for (Combo c : kAllCombos) ASSERT_EQ(m.cells[static_cast<std::size_t>(c)].size(), 8u);

  const ResultMatrix swapped = run_matrix(lg, pa, SplitSpec{}, hp, 2);
  RunOptions threaded;
  threaded.threads = 4;
  const ResultMatrix par = run_matrix(pa, lg, SplitSpec{}, hp, 2, threaded);
  for (ModelKind k : kAllModels) {
    EXPECT_EQ(swapped.at(Combo::PA_LG, k).accuracies, m.at(Combo::LG_PA, k).accuracies);
    EXPECT_EQ(swapped.at(Combo::LG_PA, k).accuracies, m.at(Combo::PA_LG, k).accuracies);
    EXPECT_EQ(swapped.at(Combo::PA_PA, k).accuracies, m.at(Combo::LG_LG, k).accuracies);
    for (Combo c : kAllCombos) EXPECT_EQ(par.at(c, k).accuracies, m.at(c, k).accuracies);
  }
}

TEST(RunMatrix, ModelSubset) {
  const LabeledMatrix pa = subject_blobs(10, 10, 2.0, 5), lg = subject_blobs(10, 10, 2.0, 6);
  RunOptions opts;
  opts.models = {ModelKind::XGBoostStyle, ModelKind::GaussianNB};
  const ResultMatrix m = run_matrix(pa, lg, SplitSpec{}, HyperParams{}, 1, opts);
  EXPECT_EQ(m.models, opts.models);
  EXPECT_TRUE(m.has_model(ModelKind::GaussianNB));
  EXPECT_FALSE(m.has_model(ModelKind::AdaBoost));
  EXPECT_THROW(m.at(Combo::PA_PA, ModelKind::AdaBoost), std::out_of_range);
}

TEST(RunMatrix, TrainingNeverReadsTestRows) {
  const LabeledMatrix m = subject_blobs(20, 10, 1.5, 7);
  const FeatureSplit parts = split_features(m, SplitSpec{});
  LabeledMatrix poisoned = m;
  const std::set<std::uint32_t> test_ids(parts.test.subject_ids.begin(), parts.test.subject_ids.end());
  for (std::size_t i = 0; i < m.size(); ++i)
    if (test_ids.count(m.subject_ids[i]))
      for (double& v : poisoned.X.row(i)) v = 1e6;
  const FeatureSplit poisoned_parts = split_features(poisoned, SplitSpec{});
  ASSERT_EQ(poisoned_parts.train, parts.train);
  HyperParams hp;
  hp.forest.n_trees = 5;
  for (ModelKind k : kAllModels) {
    TrainedModel a = train_model(k, parts.train, hp, 1);
    TrainedModel b = train_model(k, poisoned_parts.train, hp, 1);
    a.train_seconds = b.train_seconds = 0.0;
    EXPECT_EQ(serialize_model(a), serialize_model(b)) << display_name(k);
  }
}

TEST(RobustnessGap, PublishedAccuracyGrid) {
  // rows in summary order: XGBoost, GradientBoost, RandomForest, AdaBoost, DecisionTree, LinearSVC, RBF SVC, GaussianNB
  const ResultMatrix m = table_matrix({{.979, .955, .934, .965},
                                       {.974, .956, .921, .960},
                                       {.965, .946, .912, .950},
                                       {.963, .935, .910, .950},
                                       {.962, .920, .884, .919},
                                       {.920, .920, .914, .908},
                                       {.894, .889, .872, .863},
                                       {.877, .872, .854, .837}});
  const GapReport g = robustness_gap(m);
  EXPECT_NEAR(100 * g.avg_drop_pa, 4.1625, 1e-9);
  EXPECT_NEAR(100 * g.avg_drop_lg, 0.5125, 1e-9);
  EXPECT_NEAR(100 * g.gap, 3.65, 1e-9);
  EXPECT_NEAR(100 * g.per_model[0].drop_pa, 4.5, 1e-9);
  EXPECT_NEAR(100 * g.per_model[0].drop_lg, -1.0, 1e-9);
}

TEST(RobustnessGap, EqualCellsAndLinearity) {
  const ResultMatrix flat = table_matrix(std::vector<std::array<double, 4>>(8, {0.8, 0.8, 0.8, 0.8}));
  const GapReport z = robustness_gap(flat);
  EXPECT_EQ(z.avg_drop_pa, 0.0);
  EXPECT_EQ(z.avg_drop_lg, 0.0);
  EXPECT_EQ(z.gap, 0.0);

  Rng rng(3);
  for (int rep = 0; rep < 3; ++rep) {
    std::vector<std::array<double, 4>> rows(8);
    for (auto& r : rows)
      for (double& v : r) v = rng.uniform();
    double pa = 0, lg = 0;
    for (const auto& r : rows) {
      pa += r[0] - r[2];
      lg += r[1] - r[3];
    }
    const GapReport g = robustness_gap(table_matrix(rows));
    EXPECT_NEAR(g.avg_drop_pa, pa / 8, 1e-12);
    EXPECT_NEAR(g.avg_drop_lg, lg / 8, 1e-12);
    EXPECT_NEAR(g.gap, (pa - lg) / 8, 1e-12);
  }
}
