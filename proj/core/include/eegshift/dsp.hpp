#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "eegshift/datamodel.hpp"
#include "eegshift/matrix.hpp"

namespace eegshift {

/// Linear-phase windowed-sinc (Hamming) band-pass.
struct FilterSpec {
  double low_hz = 8.0;
  double high_hz = 13.0;
  double fs = 500.0;
  std::size_t taps = 257;

  /// Alpha band with the tap count scaled from 257 @ 500 Hz, rounded to odd.
  static FilterSpec for_rate(double fs);
  /// Throws std::invalid_argument.
  void validate() const;
};

std::vector<double> design_bandpass(const FilterSpec& spec);

/// |H(f)| of an FIR filter.
double magnitude_response(std::span<const double> coeffs, double freq_hz, double fs);

/// Zero-phase FIR filtering: symmetric-reflection padding of (taps-1)/2 samples
/// per side, then valid convolution. Requires x.size() >= coeffs.size().
std::vector<double> filter_signal(std::span<const double> x, std::span<const double> coeffs);

/// Analytic signal via the DFT: bin 0 (and the Nyquist bin for even lengths) kept,
/// positive bins doubled, negative bins zeroed. Requires x.size() >= 4.
std::vector<std::complex<double>> analytic_signal(std::span<const double> x);

/// [begin, end) of the central 80% of a series of length n.
struct InteriorRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};
InteriorRange interior_range(std::size_t n) noexcept;

/// Per channel: (mean envelope, R cos(mean phase), R sin(mean phase)) over the interior 80%.
struct FeatureVector {
  std::vector<double> values;
  std::size_t trial_index = 0;
};

inline constexpr std::size_t kFeaturesPerChannel = 3;

class FeatureExtractor {
 public:
  explicit FeatureExtractor(FilterSpec spec);

  const FilterSpec& spec() const noexcept { return spec_; }
  const std::vector<double>& coefficients() const noexcept { return coeffs_; }

  FeatureVector operator()(const Trial& trial, std::size_t trial_index = 0) const;

 private:
  FilterSpec spec_;
  std::vector<double> coeffs_;
};

FeatureVector extract_features(const Trial& trial, const FilterSpec& spec);

/// One feature row per trial, labels from trial directions (Left = 1).
LabeledMatrix featurize_dataset(const Dataset& ds, const FilterSpec& spec, unsigned threads = 1);

/// CSV with header subject_id,direction,f_0..f_{k-1}; values printed round-trip exact.
void write_feature_csv(std::ostream& out, const LabeledMatrix& m);

}  // namespace eegshift
