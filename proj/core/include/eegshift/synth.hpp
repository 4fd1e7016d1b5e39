#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "eegshift/datamodel.hpp"
#include "eegshift/rng.hpp"

namespace eegshift {

struct GeneratorConfig {
  std::uint32_t n_subjects = 20;
  std::uint32_t trials_per_subject = 200;
  std::uint16_t n_channels = 8;
  double fs = 500.0;
  double trial_seconds = 1.0;
  double alpha_hz = 10.0;
  double lateralization_gain = 0.6;
  double noise_sd = 1.0;
  double subject_gain_spread = 0.2;
  std::uint64_t master_seed = 1;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  std::size_t samples_per_trial() const;
  /// Stable digest over every field.
  std::uint64_t hash() const;
};

struct ScreenPoint {
  double x = 0.0;
  double y = 0.0;
};

/// 5x5 dot grid on an 800x600 screen, 40 px horizontal / 30 px vertical margins.
struct GridLayout {
  static constexpr std::size_t kDots = 25;
  static constexpr double kWidth = 800.0;
  static constexpr double kHeight = 600.0;

  std::array<ScreenPoint, kDots> dots{};
  std::size_t center = 12;

  static GridLayout standard();
};

/// Eccentricity of the horizontal pro/antisaccade targets, in pixels.
inline constexpr double kProAntisaccadeAmplitude = 300.0;

/// Per-subject recording parameters drawn from the subject's own stream.
struct SubjectParams {
  std::uint32_t subject_id = 0;
  double gain = 1.0;
  double phase = 0.0;
};

SubjectParams draw_subject(const GeneratorConfig& cfg, std::uint32_t subject_id);

/// Saccade label between two screen points (y grows downward).
GazeLabel saccade_label(ScreenPoint from, ScreenPoint to);

/// Horizontal saccades: angle 0 or pi with equal probability.
std::vector<GazeLabel> pa_trial_labels(std::size_t n, Rng& rng);

/// Per block: the 25 dots shuffled with the center shown twice more (27 dots);
/// consecutive dots yield saccade labels, zero-length moves are dropped.
std::vector<GazeLabel> lg_trial_labels(const GridLayout& layout, std::size_t n_blocks, Rng& rng);

/// Lateralization weight per channel: -1 (far left) .. +1 (far right), antisymmetric.
std::vector<double> lateralization_map(std::size_t n_channels);

/// Alpha rhythm whose per-channel envelope is modulated by the horizontal gaze component.
Trial synthesize_trial(const GazeLabel& label, const SubjectParams& subject, Paradigm paradigm,
                       const GeneratorConfig& cfg, Rng& rng);

/// threads bounds the worker count; output does not depend on it.
Dataset generate_dataset(Paradigm paradigm, const GeneratorConfig& cfg, unsigned threads = 1);

}  // namespace eegshift
