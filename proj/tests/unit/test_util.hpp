#pragma once

#include <cmath>
#include <numbers>

#include "eegshift/matrix.hpp"
#include "eegshift/rng.hpp"

namespace testutil {

// Gaussian blobs with centers at +-shift/2 along the first feature.
inline eegshift::LabeledMatrix blobs(std::size_t n, std::size_t f, double shift, std::uint64_t seed) {
  eegshift::Rng rng(seed);
  eegshift::LabeledMatrix m;
  m.X = eegshift::Matrix(n, f);
  m.y.resize(n);
  m.subject_ids.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    m.y[i] = static_cast<int>(rng.below(2));
    m.subject_ids[i] = static_cast<std::uint32_t>(i % 10 + 1);
    for (std::size_t j = 0; j < f; ++j) m.X(i, j) = rng.normal();
    m.X(i, 0) += (m.y[i] ? 0.5 : -0.5) * shift;
  }
  return m;
}

// Inner disc (label 1, r < 1) and outer ring (label 0, 2 < r < 3).
inline eegshift::LabeledMatrix circles(std::size_t n, std::uint64_t seed) {
  eegshift::Rng rng(seed);
  eegshift::LabeledMatrix m;
  m.X = eegshift::Matrix(n, 2);
  m.y.resize(n);
  m.subject_ids.assign(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const int inner = static_cast<int>(i % 2);
    const double r = inner ? rng.uniform() : 2.0 + rng.uniform();
    const double t = 2.0 * std::numbers::pi * rng.uniform();
    m.X(i, 0) = r * std::cos(t);
    m.X(i, 1) = r * std::sin(t);
    m.y[i] = inner;
  }
  return m;
}

inline eegshift::LabeledMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows,
                                         std::initializer_list<int> labels) {
  eegshift::LabeledMatrix m;
  m.X = eegshift::Matrix(rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (const auto& r : rows) {
    std::size_t j = 0;
    for (double v : r) m.X(i, j++) = v;
    ++i;
  }
  m.y.assign(labels.begin(), labels.end());
  m.subject_ids.assign(rows.size(), 1);
  return m;
}

}  // namespace testutil
