#pragma once

#include <cstdint>
#include <string>

#include "eegshift/dsp.hpp"
#include "eegshift/harness.hpp"
#include "eegshift/models.hpp"
#include "eegshift/synth.hpp"

namespace eegbench {

/// Everything that determines a run's results. Serialized as versioned JSON;
/// command-line flags override individual fields after loading.
struct RunConfig {
  static constexpr int kVersion = 1;

  eegshift::GeneratorConfig pa;
  eegshift::GeneratorConfig lg;
  double filter_low_hz = 8.0;
  double filter_high_hz = 13.0;
  /// 0 scales the tap count with the sampling rate (257 at 500 Hz).
  std::size_t filter_taps = 0;
  eegshift::HyperParams hp;
  eegshift::SplitSpec split;
  std::size_t n_seeds = 5;

  static RunConfig defaults();
  static RunConfig from_json(const std::string& text);
  static RunConfig load(const std::string& path);
  std::string to_json() const;

  const eegshift::GeneratorConfig& generator(eegshift::Paradigm p) const { return p == eegshift::Paradigm::LargeGrid ? lg : pa; }
  eegshift::GeneratorConfig& generator(eegshift::Paradigm p) { return p == eegshift::Paradigm::LargeGrid ? lg : pa; }

  eegshift::FilterSpec filter_for(double fs) const;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  /// Digest of the canonical JSON.
  std::string hash() const;
};

}  // namespace eegbench
