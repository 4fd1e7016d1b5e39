#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "eegshift/labels.hpp"
#include "eegshift/synth.hpp"

using namespace eegshift;
using std::numbers::pi;

TEST(AngleToDirection, NamedAngles) {
  EXPECT_EQ(angle_to_direction(0.0), Direction::Right);
  EXPECT_EQ(angle_to_direction(pi), Direction::Left);
  EXPECT_EQ(angle_to_direction(-pi), Direction::Left);
  EXPECT_EQ(angle_to_direction(pi / 2), Direction::Right);
  EXPECT_EQ(angle_to_direction(-pi / 2), Direction::Right);
  EXPECT_EQ(angle_to_direction(-3 * pi / 4), Direction::Left);
  EXPECT_EQ(angle_to_direction(std::nextafter(pi / 2, 4.0)), Direction::Left);
}

TEST(AngleToDirection, OutOfRange) {
  EXPECT_THROW(angle_to_direction(3.5), AngleOutOfRange);
  EXPECT_THROW(angle_to_direction(-3.5), AngleOutOfRange);
  EXPECT_THROW(angle_to_direction(std::nextafter(pi, 4.0)), AngleOutOfRange);
  EXPECT_THROW(angle_to_direction(std::numeric_limits<double>::quiet_NaN()), AngleOutOfRange);
  EXPECT_THROW(angle_to_direction(3.5), std::out_of_range);
}

TEST(AngleToDirection, GridAgreesAndIsSymmetric) {
  const int n = 10001;
  for (int i = 0; i < n; ++i) {
    const double a = -pi + 2.0 * pi * i / (n - 1);
    const Direction want = std::fabs(a) <= pi / 2 ? Direction::Right : Direction::Left;
    ASSERT_EQ(angle_to_direction(a), want) << a;
    ASSERT_EQ(angle_to_direction(-a), want) << a;
  }
}

TEST(Relabel, ProAntisaccadeIsTwoPoint) {
  GeneratorConfig cfg;
  cfg.n_subjects = 2;
  cfg.trials_per_subject = 50;
  cfg.n_channels = 2;
  cfg.trial_seconds = 0.6;
  Dataset ds = generate_dataset(Paradigm::ProAntisaccade, cfg);
  for (Trial& t : ds.trials) t.label.direction = Direction::Right;
  const Dataset r = relabel_dataset(ds);
  for (std::size_t i = 0; i < r.trials.size(); ++i) {
    const Trial& t = r.trials[i];
    EXPECT_EQ(t.label.direction, t.label.angle == 0.0 ? Direction::Right : Direction::Left);
    EXPECT_EQ(t.subject_id, ds.trials[i].subject_id);
    EXPECT_EQ(t.label.amplitude, ds.trials[i].label.amplitude);
  }
  EXPECT_EQ(relabel_dataset(r), r);
}

TEST(Relabel, EmptyAndPropagation) {
  Dataset empty;
  EXPECT_TRUE(relabel_dataset(empty).trials.empty());
  Dataset bad;
  bad.trials.push_back(Trial{});
  bad.trials[0].label.angle = 4.0;
  EXPECT_THROW(relabel_dataset(bad), AngleOutOfRange);
}
