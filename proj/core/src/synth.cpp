#include "eegshift/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "eegshift/binary_io.hpp"
#include "eegshift/labels.hpp"
#include "eegshift/parallel.hpp"

namespace eegshift {

namespace {

// Stream tags live at the top of the u64 range so they never collide with trial indices.
constexpr std::uint64_t kSubjectStream = ~std::uint64_t{0};
constexpr std::uint64_t kLabelStream = ~std::uint64_t{0} - 1;

[[noreturn]] void bad_field(const std::string& field, const std::string& rule) {
  throw std::invalid_argument(field + " " + rule);
}

}  // namespace

void GeneratorConfig::validate() const {
  if (n_subjects < 1) bad_field("n_subjects (--subjects)", "must be >= 1");
  if (trials_per_subject < 1) bad_field("trials_per_subject (--trials)", "must be >= 1");
  if (n_channels < 1) bad_field("n_channels (--channels)", "must be >= 1");
  if (!std::isfinite(fs) || !(fs > 26.0)) bad_field("fs (--fs)", "must exceed 26 Hz");
  if (!std::isfinite(trial_seconds) || !(trial_seconds > 0.0)) bad_field("trial_seconds (--seconds)", "must be > 0");
  if (!(alpha_hz > 8.0 && alpha_hz < 13.0)) bad_field("alpha_hz (--alpha-hz)", "must lie strictly inside (8, 13) Hz");
  if (!(alpha_hz < fs / 2.0)) bad_field("alpha_hz (--alpha-hz)", "must be below Nyquist");
  if (!std::isfinite(lateralization_gain) || !(lateralization_gain >= 0.0)) bad_field("lateralization_gain (--kappa)", "must be >= 0");
  if (!std::isfinite(noise_sd) || !(noise_sd >= 0.0)) bad_field("noise_sd (--noise)", "must be >= 0");
  if (!std::isfinite(subject_gain_spread) || !(subject_gain_spread >= 0.0)) {
    bad_field("subject_gain_spread (--gain-spread)", "must be >= 0");
  }
  if (samples_per_trial() < 2) bad_field("trial_seconds (--seconds)", "gives fewer than 2 samples per trial");
}

std::size_t GeneratorConfig::samples_per_trial() const {
  return static_cast<std::size_t>(std::llround(trial_seconds * fs));
}

std::uint64_t GeneratorConfig::hash() const {
  ByteWriter w;
  w.u32(n_subjects);
  w.u32(trials_per_subject);
  w.u16(n_channels);
  w.f64(fs);
  w.f64(trial_seconds);
  w.f64(alpha_hz);
  w.f64(lateralization_gain);
  w.f64(noise_sd);
  w.f64(subject_gain_spread);
  w.u64(master_seed);
  const auto& b = w.bytes();
  return fnv1a64(std::string_view(reinterpret_cast<const char*>(b.data()), b.size()));
}

GridLayout GridLayout::standard() {
  static constexpr double xs[5] = {40.0, 220.0, 400.0, 580.0, 760.0};
  static constexpr double ys[5] = {30.0, 165.0, 300.0, 435.0, 570.0};
  GridLayout g;
  for (std::size_t row = 0; row < 5; ++row) {
    for (std::size_t col = 0; col < 5; ++col) g.dots[row * 5 + col] = {xs[col], ys[row]};
  }
  g.center = 12;
  return g;
}

SubjectParams draw_subject(const GeneratorConfig& cfg, std::uint32_t subject_id) {
  Rng rng(derive_seed(cfg.master_seed, subject_id, kSubjectStream));
  SubjectParams p;
  p.subject_id = subject_id;
  p.gain = std::exp(cfg.subject_gain_spread * rng.normal());
  p.phase = 2.0 * std::numbers::pi * rng.uniform();
  return p;
}

GazeLabel saccade_label(ScreenPoint from, ScreenPoint to) {
  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  GazeLabel l;
  l.angle = std::atan2(dy, dx);
  l.amplitude = std::hypot(dx, dy);
  l.direction = angle_to_direction(l.angle);
  return l;
}

std::vector<GazeLabel> pa_trial_labels(std::size_t n, Rng& rng) {
  std::vector<GazeLabel> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    GazeLabel l;
    l.angle = (rng.next() >> 63) ? std::numbers::pi : 0.0;
    l.amplitude = kProAntisaccadeAmplitude;
    l.direction = angle_to_direction(l.angle);
    out.push_back(l);
  }
  return out;
}

std::vector<GazeLabel> lg_trial_labels(const GridLayout& layout, std::size_t n_blocks, Rng& rng) {
  std::vector<GazeLabel> out;
  out.reserve(n_blocks * (GridLayout::kDots + 1));
  std::vector<std::size_t> order(GridLayout::kDots + 2);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    for (std::size_t i = 0; i < GridLayout::kDots; ++i) order[i] = i;
    order[GridLayout::kDots] = layout.center;
    order[GridLayout::kDots + 1] = layout.center;
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (order[i] == order[i - 1]) continue;
      const ScreenPoint from = layout.dots[order[i - 1]];
      const ScreenPoint to = layout.dots[order[i]];
      if (from.x == to.x && from.y == to.y) continue;
      out.push_back(saccade_label(from, to));
    }
  }
  return out;
}

std::vector<double> lateralization_map(std::size_t n_channels) {
  std::vector<double> m(n_channels, 0.0);
  if (n_channels < 2) return m;
  const double last = static_cast<double>(n_channels - 1);
  for (std::size_t c = 0; c < n_channels; ++c) m[c] = (2.0 * static_cast<double>(c) - last) / last;
  // Exact antisymmetry, independent of rounding in the expression above.
  for (std::size_t c = 0; c < n_channels / 2; ++c) m[n_channels - 1 - c] = -m[c];
  if (n_channels % 2 == 1) m[n_channels / 2] = 0.0;
  return m;
}

Trial synthesize_trial(const GazeLabel& label, const SubjectParams& subject, Paradigm paradigm,
                       const GeneratorConfig& cfg, Rng& rng) {
  const std::size_t n = cfg.samples_per_trial();
  const std::size_t channels = cfg.n_channels;
  const auto lateral = lateralization_map(channels);
  const double horizontal = std::cos(label.angle) * std::min(label.amplitude / kProAntisaccadeAmplitude, 1.0);
  const double omega = 2.0 * std::numbers::pi * cfg.alpha_hz / cfg.fs;

  std::vector<double> carrier(n);
  for (std::size_t t = 0; t < n; ++t) carrier[t] = std::sin(omega * static_cast<double>(t) + subject.phase);

  Trial trial;
  trial.subject_id = subject.subject_id;
  trial.paradigm = paradigm;
  trial.label = label;
  trial.fs = cfg.fs;
  trial.samples = SampleMatrix(channels, n);
  for (std::size_t c = 0; c < channels; ++c) {
    const double envelope = subject.gain * (1.0 + cfg.lateralization_gain * lateral[c] * horizontal);
    float* out = trial.samples.channel(c);
    for (std::size_t t = 0; t < n; ++t) {
      double v = envelope * carrier[t];
      if (cfg.noise_sd > 0.0) v += cfg.noise_sd * rng.normal();
      out[t] = static_cast<float>(v);
    }
  }
  return trial;
}

Dataset generate_dataset(Paradigm paradigm, const GeneratorConfig& cfg, unsigned threads) {
  cfg.validate();
  const std::size_t per_subject = cfg.trials_per_subject;
  const GridLayout layout = GridLayout::standard();

  Dataset ds;
  ds.manifest.fs = cfg.fs;
  ds.manifest.n_channels = cfg.n_channels;
  ds.manifest.paradigm = paradigm;
  ds.manifest.config_hash = hex_digest(derive_seed(cfg.hash(), static_cast<std::uint64_t>(paradigm)));
  ds.trials.resize(static_cast<std::size_t>(cfg.n_subjects) * per_subject);

  // Subject ids are 1-based. Subject gain/phase are shared across paradigms
  // (same person, two tasks); label and noise streams are per paradigm.
  parallel_for(cfg.n_subjects, threads, [&](std::size_t s) {
    const auto subject_id = static_cast<std::uint32_t>(s + 1);
    const SubjectParams subject = draw_subject(cfg, subject_id);
    const std::uint64_t stream_root = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(paradigm));
    Rng label_rng(derive_seed(stream_root, subject_id, kLabelStream));
    std::vector<GazeLabel> labels;
    if (paradigm == Paradigm::ProAntisaccade) {
      labels = pa_trial_labels(per_subject, label_rng);
    } else {
      while (labels.size() < per_subject) {
        const auto block = lg_trial_labels(layout, 1, label_rng);
        labels.insert(labels.end(), block.begin(), block.end());
      }
      labels.resize(per_subject);
    }
    for (std::size_t i = 0; i < per_subject; ++i) {
      Rng trial_rng(derive_seed(stream_root, subject_id, i));
      ds.trials[s * per_subject + i] = synthesize_trial(labels[i], subject, paradigm, cfg, trial_rng);
    }
  });
  return ds;
}

}  // namespace eegshift
