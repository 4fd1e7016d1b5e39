#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eegshift {

/// Binary gaze direction. The integer values are the on-disk / CSV encoding.
enum class Direction : std::uint8_t { Right = 0, Left = 1 };

enum class Paradigm : std::uint8_t { ProAntisaccade = 0, LargeGrid = 1 };

std::string_view to_string(Direction d) noexcept;
std::string_view to_string(Paradigm p) noexcept;
/// Short tag used in file names and combo labels: "PA" / "LG".
std::string_view short_name(Paradigm p) noexcept;
/// Accepts "pa", "lg", "PA", "LG", "pro-antisaccade", "large-grid".
Paradigm parse_paradigm(std::string_view s);

/// Saccade vector. angle is in radians with 0 = right and +pi/2 = down
/// (screen y grows downward); amplitude is the displacement in pixels.
struct GazeLabel {
  double angle = 0.0;
  double amplitude = 0.0;
  Direction direction = Direction::Right;

  friend bool operator==(const GazeLabel&, const GazeLabel&) = default;
};

/// Channel-major EEG samples: value(c, t) = data[c * n_samples + t].
class SampleMatrix {
 public:
  SampleMatrix() = default;
  SampleMatrix(std::size_t channels, std::size_t samples, float fill = 0.0f)
      : channels_(channels), samples_(samples), data_(channels * samples, fill) {}

  std::size_t channels() const noexcept { return channels_; }
  std::size_t samples() const noexcept { return samples_; }

  float& operator()(std::size_t c, std::size_t t) noexcept { return data_[c * samples_ + t]; }
  float operator()(std::size_t c, std::size_t t) const noexcept { return data_[c * samples_ + t]; }

  const float* channel(std::size_t c) const noexcept { return data_.data() + c * samples_; }
  float* channel(std::size_t c) noexcept { return data_.data() + c * samples_; }

  const std::vector<float>& data() const noexcept { return data_; }
  std::vector<float>& data() noexcept { return data_; }

  friend bool operator==(const SampleMatrix&, const SampleMatrix&) = default;

 private:
  std::size_t channels_ = 0;
  std::size_t samples_ = 0;
  std::vector<float> data_;
};

struct Trial {
  std::uint32_t subject_id = 0;
  Paradigm paradigm = Paradigm::ProAntisaccade;
  GazeLabel label;
  SampleMatrix samples;
  double fs = 500.0;

  friend bool operator==(const Trial&, const Trial&) = default;
};

struct Manifest {
  static constexpr std::uint16_t kSchemaVersion = 1;

  std::uint16_t schema_version = kSchemaVersion;
  double fs = 500.0;
  std::uint16_t n_channels = 0;
  Paradigm paradigm = Paradigm::ProAntisaccade;
  /// Hex digest of the generator config; empty for hand-built datasets.
  std::string config_hash;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

struct Dataset {
  Manifest manifest;
  std::vector<Trial> trials;

  /// Distinct subject ids, ascending.
  std::set<std::uint32_t> subjects() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

enum class DatasetErrorKind { Io, BadMagic, UnsupportedVersion, Truncated, InvalidData };

class DatasetError : public std::runtime_error {
 public:
  DatasetError(DatasetErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  DatasetErrorKind kind() const noexcept { return kind_; }

 private:
  DatasetErrorKind kind_;
};

/// Throws DatasetError{InvalidData} describing the first violated invariant.
void validate_dataset(const Dataset& ds);

/// EEGT container. Layout (little-endian):
///   "EEGT" u16 version | f64 fs | u16 n_channels | u8 paradigm | u32 n_trials
///   per trial: u32 subject | f64 angle | f64 amplitude | u32 n_samples | f32[C*n] channel-major
///   optional trailer: u32 length | UTF-8 JSON manifest (present when config_hash is set)
std::vector<std::uint8_t> encode_dataset(const Dataset& ds);
Dataset decode_dataset(std::span<const std::uint8_t> bytes);

void write_dataset(const Dataset& ds, const std::string& path);
Dataset read_dataset(const std::string& path);

inline constexpr std::size_t kDatasetHeaderBytes = 4 + 2 + 8 + 2 + 1 + 4;
inline constexpr std::size_t kTrialRecordFixedBytes = 4 + 8 + 8 + 4;

}  // namespace eegshift
