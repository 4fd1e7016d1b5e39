#pragma once

#include <stdexcept>

#include "eegshift/datamodel.hpp"

namespace eegshift {

class AngleOutOfRange : public std::out_of_range {
 public:
  explicit AngleOutOfRange(double angle);
  double angle() const noexcept { return angle_; }

 private:
  double angle_;
};

/// Right iff |angle| <= pi/2 (pure vertical saccades are Right), Left otherwise.
/// Throws AngleOutOfRange when |angle| > pi or angle is NaN.
Direction angle_to_direction(double angle);

/// Recomputes every trial's direction from its angle. Everything else is kept.
Dataset relabel_dataset(Dataset ds);

}  // namespace eegshift
