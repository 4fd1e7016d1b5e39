#include "eegshift/labels.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace eegshift {

AngleOutOfRange::AngleOutOfRange(double angle)
    : std::out_of_range("gaze angle " + std::to_string(angle) + " rad is outside [-pi, pi]"), angle_(angle) {}

Direction angle_to_direction(double angle) {
  const double a = std::fabs(angle);
  if (!(a <= std::numbers::pi)) throw AngleOutOfRange(angle);
  return a <= std::numbers::pi / 2.0 ? Direction::Right : Direction::Left;
}

Dataset relabel_dataset(Dataset ds) {
  for (Trial& t : ds.trials) t.label.direction = angle_to_direction(t.label.angle);
  return ds;
}

}  // namespace eegshift
