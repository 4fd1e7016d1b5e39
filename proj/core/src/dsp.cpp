#include "eegshift/dsp.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "eegshift/fft.hpp"
#include "eegshift/parallel.hpp"

namespace eegshift {

namespace {

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

const FftPlan& plan_for(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<FftPlan>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<FftPlan>(n);
  return *slot;
}

}  // namespace

FilterSpec FilterSpec::for_rate(double fs) {
  FilterSpec s;
  s.fs = fs;
  auto taps = static_cast<std::size_t>(std::llround(257.0 * fs / 500.0));
  if (taps % 2 == 0) ++taps;
  s.taps = std::max<std::size_t>(taps, 3);
  return s;
}

void FilterSpec::validate() const {
  if (!std::isfinite(fs) || !(fs > 0.0)) throw std::invalid_argument("filter fs must be positive");
  if (!(low_hz > 0.0 && low_hz < high_hz && high_hz < fs / 2.0)) {
    throw std::invalid_argument("filter band must satisfy 0 < low < high < fs/2");
  }
  if (taps < 3 || taps % 2 == 0) throw std::invalid_argument("filter taps must be odd and >= 3");
}

std::vector<double> design_bandpass(const FilterSpec& spec) {
  spec.validate();
  const std::size_t n = spec.taps;
  const double mid = static_cast<double>(n - 1) / 2.0;
  const double fl = spec.low_hz / spec.fs;
  const double fh = spec.high_hz / spec.fs;
  // Difference of two windowed low-pass prototypes, each scaled to unit DC gain,
  // so the band-pass sums to zero instead of leaking the window's ripple at 0 Hz.
  std::vector<double> hi(n), lo(n);
  double sum_hi = 0.0, sum_lo = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double m = static_cast<double>(k) - mid;
    const double window = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n - 1));
    hi[k] = window * 2.0 * fh * sinc(2.0 * fh * m);
    lo[k] = window * 2.0 * fl * sinc(2.0 * fl * m);
    sum_hi += hi[k];
    sum_lo += lo[k];
  }
  std::vector<double> h(n);
  for (std::size_t k = 0; k < n; ++k) h[k] = hi[k] / sum_hi - lo[k] / sum_lo;
  // Mirror to make symmetry exact in floating point.
  for (std::size_t k = 0; k < n / 2; ++k) h[n - 1 - k] = h[k];
  // Unity gain at the band centre.
  const double g = magnitude_response(h, 0.5 * (spec.low_hz + spec.high_hz), spec.fs);
  for (double& v : h) v /= g;
  return h;
}

double magnitude_response(std::span<const double> coeffs, double freq_hz, double fs) {
  const double w = 2.0 * std::numbers::pi * freq_hz / fs;
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    re += coeffs[k] * std::cos(w * static_cast<double>(k));
    im -= coeffs[k] * std::sin(w * static_cast<double>(k));
  }
  return std::hypot(re, im);
}

std::vector<double> filter_signal(std::span<const double> x, std::span<const double> coeffs) {
  const std::size_t taps = coeffs.size();
  if (taps == 0 || taps % 2 == 0) throw std::invalid_argument("filter needs an odd number of taps");
  if (x.size() < taps) {
    throw std::invalid_argument("series of length " + std::to_string(x.size()) + " is shorter than the " +
                                std::to_string(taps) + "-tap filter");
  }
  const std::size_t pad = (taps - 1) / 2;
  const std::size_t n = x.size();
  std::vector<double> padded(n + 2 * pad);
  for (std::size_t j = 0; j < pad; ++j) {
    padded[pad - 1 - j] = x[j];
    padded[pad + n + j] = x[n - 1 - j];
  }
  std::copy(x.begin(), x.end(), padded.begin() + static_cast<std::ptrdiff_t>(pad));

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* src = padded.data() + i;
    double acc = 0.0;
    for (std::size_t k = 0; k < taps; ++k) acc += coeffs[k] * src[k];
    y[i] = acc;
  }
  return y;
}

std::vector<std::complex<double>> analytic_signal(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 4) throw std::invalid_argument("analytic signal needs at least 4 samples");
  std::vector<std::complex<double>> a(x.begin(), x.end());
  const FftPlan& plan = plan_for(n);
  plan.forward(a);
  const std::size_t half = n / 2;
  // Positive bins 1 .. ceil(n/2)-1 doubled; Nyquist (even n) kept; the rest zeroed.
  const std::size_t last_positive = (n % 2 == 0) ? half - 1 : half;
  for (std::size_t k = 1; k <= last_positive; ++k) a[k] *= 2.0;
  for (std::size_t k = last_positive + 1 + (n % 2 == 0 ? 1 : 0); k < n; ++k) a[k] = 0.0;
  plan.inverse(a);
  return a;
}

InteriorRange interior_range(std::size_t n) noexcept {
  const std::size_t margin = n / 10;
  return {margin, n - margin};
}

FeatureExtractor::FeatureExtractor(FilterSpec spec) : spec_(spec), coeffs_(design_bandpass(spec)) {}

FeatureVector FeatureExtractor::operator()(const Trial& trial, std::size_t trial_index) const {
  if (trial.fs != spec_.fs) throw std::invalid_argument("trial sampling rate does not match filter spec");
  const std::size_t channels = trial.samples.channels();
  const std::size_t n = trial.samples.samples();
  FeatureVector fv;
  fv.trial_index = trial_index;
  fv.values.assign(kFeaturesPerChannel * channels, 0.0);

  std::vector<double> x(n);
  const InteriorRange range = interior_range(n);
  const double count = static_cast<double>(range.end - range.begin);
  for (std::size_t c = 0; c < channels; ++c) {
    const float* src = trial.samples.channel(c);
    for (std::size_t t = 0; t < n; ++t) x[t] = src[t];
    const auto filtered = filter_signal(x, coeffs_);
    const auto analytic = analytic_signal(filtered);

    double envelope = 0.0, cos_sum = 0.0, sin_sum = 0.0;
    for (std::size_t t = range.begin; t < range.end; ++t) {
      const double mag = std::abs(analytic[t]);
      envelope += mag;
      if (mag > 0.0) {
        cos_sum += analytic[t].real() / mag;
        sin_sum += analytic[t].imag() / mag;
      }
    }
    fv.values[kFeaturesPerChannel * c + 0] = envelope / count;
    // Mean unit phasor = R (cos theta_bar, sin theta_bar); zero when R = 0.
    fv.values[kFeaturesPerChannel * c + 1] = cos_sum / count;
    fv.values[kFeaturesPerChannel * c + 2] = sin_sum / count;
  }
  return fv;
}

FeatureVector extract_features(const Trial& trial, const FilterSpec& spec) { return FeatureExtractor(spec)(trial); }

LabeledMatrix featurize_dataset(const Dataset& ds, const FilterSpec& spec, unsigned threads) {
  const FeatureExtractor extractor(spec);
  const std::size_t cols = kFeaturesPerChannel * ds.manifest.n_channels;
  LabeledMatrix out;
  out.X = Matrix(ds.trials.size(), cols);
  out.y.resize(ds.trials.size());
  out.subject_ids.resize(ds.trials.size());
  parallel_for(ds.trials.size(), threads, [&](std::size_t i) {
    const Trial& t = ds.trials[i];
    const FeatureVector fv = extractor(t, i);
    std::copy(fv.values.begin(), fv.values.end(), out.X.row(i).begin());
    out.y[i] = static_cast<int>(t.label.direction);
    out.subject_ids[i] = t.subject_id;
  });
  return out;
}

void write_feature_csv(std::ostream& out, const LabeledMatrix& m) {
  out << "subject_id,direction";
  for (std::size_t j = 0; j < m.features(); ++j) out << ",f_" << j;
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << m.subject_ids[i] << ',' << m.y[i];
    for (double v : m.X.row(i)) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace eegshift
