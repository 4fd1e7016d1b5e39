#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include "eegshift/dsp.hpp"
#include "eegshift/fft.hpp"
#include "eegshift/rng.hpp"
#include "eegshift/synth.hpp"

using namespace eegshift;
using cd = std::complex<double>;
using std::numbers::pi;

namespace {

std::vector<cd> naive_dft(const std::vector<cd>& x) {
  const std::size_t n = x.size();
  std::vector<cd> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cd s = 0;
    for (std::size_t t = 0; t < n; ++t) s += x[t] * std::polar(1.0, -2.0 * pi * double((k * t) % n) / double(n));
    out[k] = s;
  }
  return out;
}

std::vector<double> tone(double f, double fs, double seconds, double phase = 0.0) {
  const std::size_t n = static_cast<std::size_t>(std::lround(fs * seconds));
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(2.0 * pi * f * double(i) / fs + phase);
  return x;
}

double interior_rms(const std::vector<double>& x) {
  const InteriorRange r = interior_range(x.size());
  double s = 0;
  for (std::size_t i = r.begin; i < r.end; ++i) s += x[i] * x[i];
  return std::sqrt(s / double(r.end - r.begin));
}

double db(double g) { return 20.0 * std::log10(g); }

}  // namespace

class FftSizes : public ::testing::TestWithParam<std::size_t> {};

TEST_P(FftSizes, MatchesNaiveDft) {
  const std::size_t n = GetParam();
  Rng rng(n);
  std::vector<cd> x(n);
  for (cd& v : x) v = {rng.normal(), rng.normal()};
  const auto want = naive_dft(x);
  std::vector<cd> got = x;
  FftPlan plan(n);
  plan.forward(got);
  double scale = 0;
  for (const cd& v : want) scale = std::max(scale, std::abs(v));
  for (std::size_t k = 0; k < n; ++k) ASSERT_LT(std::abs(got[k] - want[k]), 1e-10 * scale) << "k=" << k;
  plan.inverse(got);
  for (std::size_t t = 0; t < n; ++t) ASSERT_LT(std::abs(got[t] - x[t]), 1e-12 * scale);
}

INSTANTIATE_TEST_SUITE_P(Lengths, FftSizes, ::testing::Values(1, 2, 3, 4, 5, 7, 8, 12, 16, 97, 100, 250, 256, 500));

TEST(Fft, SizeMismatchThrows) {
  FftPlan plan(8);
  std::vector<cd> x(7);
  EXPECT_THROW(plan.forward(x), std::invalid_argument);
  EXPECT_THROW(plan.inverse(x), std::invalid_argument);
}

TEST(AnalyticSignal, CosineEnvelopeAndPhase) {
  const double fs = 500.0;
  std::vector<double> x(500);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::cos(2 * pi * 10 * double(i) / fs);
  const auto a = analytic_signal(x);
  const InteriorRange r = interior_range(x.size());
  const double step = 2 * pi * 10 / fs;
  for (std::size_t i = r.begin; i < r.end; ++i) {
    EXPECT_NEAR(std::abs(a[i]), 1.0, 0.01);
    if (i > r.begin) {
      double d = std::arg(a[i]) - std::arg(a[i - 1]);
      if (d < -pi) d += 2 * pi;
      EXPECT_NEAR(d, step, 0.01 * step);
    }
  }
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(a[i].real(), x[i], 1e-10 * std::max(1.0, std::fabs(x[i])));
}

TEST(AnalyticSignal, RealPartIsInput) {
  Rng rng(9);
  for (std::size_t n : {4u, 5u, 64u, 333u, 1000u}) {
    std::vector<double> x(n);
    double scale = 0;
    for (double& v : x) {
      v = rng.normal();
      scale = std::max(scale, std::fabs(v));
    }
    const auto a = analytic_signal(x);
    for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(a[i].real(), x[i], 1e-10 * scale);
  }
}

TEST(AnalyticSignal, ConstantIsExact) {
  const std::vector<double> x(64, 2.5);
  for (const cd& v : analytic_signal(x)) {
    EXPECT_EQ(v.real(), 2.5);
    EXPECT_EQ(v.imag(), 0.0);
  }
}

TEST(AnalyticSignal, Parseval) {
  // with DC removed: sum|a|^2 = 2 sum x^2 - |X_{n/2}|^2 / n
  Rng rng(4);
  for (std::size_t n : {64u, 500u, 1000u}) {
    std::vector<double> x(n);
    double mean = 0;
    for (double& v : x) mean += (v = rng.normal());
    mean /= double(n);
    for (double& v : x) v -= mean;
    double nyq = 0, e = 0;
    for (std::size_t t = 0; t < n; ++t) {
      nyq += (t % 2 ? -1.0 : 1.0) * x[t];
      e += x[t] * x[t];
    }
    const auto a = analytic_signal(x);
    double ea = 0;
    for (const cd& v : a) ea += std::norm(v);
    const double want = 2 * e - nyq * nyq / double(n);
    EXPECT_NEAR(ea, want, 1e-8 * want);
  }
}

TEST(AnalyticSignal, TooShort) { EXPECT_THROW(analytic_signal(std::vector<double>(3)), std::invalid_argument); }

TEST(Bandpass, SymmetricAndDcFree) {
  const auto c = design_bandpass(FilterSpec{});
  ASSERT_EQ(c.size(), 257u);
  for (std::size_t k = 0; k < c.size(); ++k) EXPECT_EQ(c[k], c[c.size() - 1 - k]);
  double s = 0;
  for (double v : c) s += v;
  EXPECT_LT(std::fabs(s), 1e-3);
}

class FilterRates : public ::testing::TestWithParam<double> {};

TEST_P(FilterRates, PassbandAndStopband) {
  const double fs = GetParam();
  const FilterSpec spec = FilterSpec::for_rate(fs);
  EXPECT_EQ(spec.taps % 2, 1u);
  const auto c = design_bandpass(spec);
  EXPECT_LE(std::fabs(db(magnitude_response(c, 10.5, fs))), 1.0);
  EXPECT_LE(db(magnitude_response(c, 8.0 / 4.0, fs)), -30.0);
  EXPECT_LE(db(magnitude_response(c, 2.0 * 13.0, fs)), -30.0);

  const auto pass = tone(10.0, fs, 2.0);
  const double r10 = interior_rms(filter_signal(pass, c)) / interior_rms(pass);
  EXPECT_GE(r10, 0.89);
  EXPECT_LE(r10, 1.12);
  const auto inband = tone(10.5, fs, 2.0, 0.4);
  EXPECT_LE(std::fabs(db(interior_rms(filter_signal(inband, c)) / interior_rms(inband))), 1.0);
  for (double f : {2.0, 26.0}) {
    const auto stop = tone(f, fs, 2.0, 0.2);
    EXPECT_LT(interior_rms(filter_signal(stop, c)) / interior_rms(stop), 0.032) << f;
  }
}

INSTANTIATE_TEST_SUITE_P(Rates, FilterRates, ::testing::Values(250.0, 500.0, 1000.0));

TEST(Bandpass, InvalidSpecs) {
  FilterSpec s;
  s.taps = 256;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = FilterSpec{};
  s.low_hz = 13.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = FilterSpec{};
  s.fs = 20.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  EXPECT_THROW(design_bandpass(s), std::invalid_argument);
}

TEST(FilterSignal, ZeroAndShort) {
  const auto c = design_bandpass(FilterSpec{});
  const auto y = filter_signal(std::vector<double>(500, 0.0), c);
  ASSERT_EQ(y.size(), 500u);
  for (double v : y) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(filter_signal(std::vector<double>(100, 1.0), c), std::invalid_argument);
}

TEST(InteriorRange, CentralEightyPercent) {
  EXPECT_EQ(interior_range(500).begin, 50u);
  EXPECT_EQ(interior_range(500).end, 450u);
  EXPECT_EQ(interior_range(10).begin, 1u);
  EXPECT_EQ(interior_range(10).end, 9u);
}

namespace {

Trial clean_trial(double angle, std::size_t channels) {
  GeneratorConfig cfg;
  cfg.n_channels = static_cast<std::uint16_t>(channels);
  cfg.noise_sd = 0.0;
  Rng rng(1);
  return synthesize_trial(GazeLabel{angle, 300.0, angle == 0.0 ? Direction::Right : Direction::Left},
                          SubjectParams{1, 1.0, 0.5}, Paradigm::ProAntisaccade, cfg, rng);
}

}  // namespace

TEST(Features, LateralizedEnvelope) {
  const Trial t = clean_trial(0.0, 8);
  const FeatureVector f = extract_features(t, FilterSpec{});
  ASSERT_EQ(f.values.size(), 24u);
  EXPECT_GT(f.values[3 * 7], f.values[0]);
  for (std::size_t c = 0; c < 8; ++c) {
    const double cs = f.values[3 * c + 1], sn = f.values[3 * c + 2];
    EXPECT_GE(f.values[3 * c], 0.0);
    EXPECT_LE(cs * cs + sn * sn, 1.0 + 1e-12);
  }
}

TEST(Features, ZeroTrialIsAllZero) {
  Trial t = clean_trial(0.0, 3);
  for (float& v : t.samples.data()) v = 0.0f;
  for (double v : extract_features(t, FilterSpec{}).values) EXPECT_EQ(v, 0.0);
}

TEST(Features, EnvelopeIsHomogeneous) {
  const Trial t = clean_trial(std::numbers::pi, 4);
  Trial twice = t;
  for (float& v : twice.samples.data()) v *= 2.0f;
  const auto a = extract_features(t, FilterSpec{}).values;
  const auto b = extract_features(twice, FilterSpec{}).values;
  for (std::size_t c = 0; c < 4; ++c) {
    EXPECT_NEAR(b[3 * c] / a[3 * c], 2.0, 2e-6);
    EXPECT_NEAR(b[3 * c + 1], a[3 * c + 1], 1e-6);
    EXPECT_NEAR(b[3 * c + 2], a[3 * c + 2], 1e-6);
  }
}

TEST(Features, DatasetMatrixIsThreadIndependent) {
  GeneratorConfig cfg;
  cfg.n_subjects = 3;
  cfg.trials_per_subject = 10;
  cfg.n_channels = 4;
  const Dataset ds = generate_dataset(Paradigm::LargeGrid, cfg);
  const LabeledMatrix a = featurize_dataset(ds, FilterSpec{}, 1);
  const LabeledMatrix b = featurize_dataset(ds, FilterSpec{}, 4);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.size(), 30u);
  EXPECT_EQ(a.features(), 12u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.y[i], static_cast<int>(ds.trials[i].label.direction));
    EXPECT_EQ(a.subject_ids[i], ds.trials[i].subject_id);
    // order independence: a single trial featurizes the same in isolation
    const auto row = extract_features(ds.trials[i], FilterSpec{}).values;
    for (std::size_t j = 0; j < row.size(); ++j) ASSERT_EQ(a.X(i, j), row[j]);
  }
}

TEST(Features, CsvLayout) {
  LabeledMatrix m;
  m.X = Matrix(2, 3);
  m.X(0, 0) = 0.1;
  m.X(1, 2) = -2.5;
  m.y = {1, 0};
  m.subject_ids = {4, 5};
  std::ostringstream out;
  write_feature_csv(out, m);
  EXPECT_EQ(out.str(), "subject_id,direction,f_0,f_1,f_2\n4,1,0.10000000000000001,0,0\n5,0,0,0,-2.5\n");
}
