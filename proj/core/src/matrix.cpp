#include "eegshift/matrix.hpp"

#include <cmath>
#include <string>

namespace eegshift {

void LabeledMatrix::validate() const {
  if (X.rows() != y.size()) throw std::invalid_argument("feature rows and labels differ in length");
  if (subject_ids.size() != y.size()) throw std::invalid_argument("subject ids and labels differ in length");
  for (int v : y) {
    if (v != 0 && v != 1) throw std::invalid_argument("labels must be 0 or 1, got " + std::to_string(v));
  }
  for (double v : X.data()) {
    if (!std::isfinite(v)) throw std::invalid_argument("feature matrix contains a non-finite value");
  }
}

bool LabeledMatrix::has_both_classes() const {
  bool zero = false, one = false;
  for (int v : y) (v == 1 ? one : zero) = true;
  return zero && one;
}

LabeledMatrix LabeledMatrix::subset(std::span<const std::size_t> rows) const {
  LabeledMatrix out;
  out.X = Matrix(rows.size(), X.cols());
  out.y.reserve(rows.size());
  out.subject_ids.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = X.row(rows[i]);
    std::copy(src.begin(), src.end(), out.X.row(i).begin());
    out.y.push_back(y[rows[i]]);
    out.subject_ids.push_back(subject_ids[rows[i]]);
  }
  return out;
}

}  // namespace eegshift
