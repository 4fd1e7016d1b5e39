#include "eegshift/datamodel.hpp"

#include <cmath>
#include <ios>
#include "json.hpp"

#include "eegshift/binary_io.hpp"
#include "eegshift/labels.hpp"

namespace eegshift {

namespace {

constexpr char kMagic[4] = {'E', 'E', 'G', 'T'};

[[noreturn]] void invalid(const std::string& what) { throw DatasetError(DatasetErrorKind::InvalidData, what); }

nlohmann::json manifest_json(const Dataset& ds) {
  return {{"schema_version", ds.manifest.schema_version},
          {"fs", ds.manifest.fs},
          {"n_channels", ds.manifest.n_channels},
          {"paradigm", std::string(short_name(ds.manifest.paradigm))},
          {"n_trials", ds.trials.size()},
          {"config_hash", ds.manifest.config_hash}};
}

}  // namespace

std::string_view to_string(Direction d) noexcept { return d == Direction::Left ? "left" : "right"; }

std::string_view to_string(Paradigm p) noexcept {
  return p == Paradigm::ProAntisaccade ? "pro-antisaccade" : "large-grid";
}

std::string_view short_name(Paradigm p) noexcept { return p == Paradigm::ProAntisaccade ? "PA" : "LG"; }

Paradigm parse_paradigm(std::string_view s) {
  if (s == "pa" || s == "PA" || s == "pro-antisaccade") return Paradigm::ProAntisaccade;
  if (s == "lg" || s == "LG" || s == "large-grid") return Paradigm::LargeGrid;
  throw std::invalid_argument("unknown paradigm '" + std::string(s) + "' (expected pa or lg)");
}

std::set<std::uint32_t> Dataset::subjects() const {
  std::set<std::uint32_t> out;
  for (const Trial& t : trials) out.insert(t.subject_id);
  return out;
}

void validate_dataset(const Dataset& ds) {
  const Manifest& m = ds.manifest;
  if (m.schema_version != Manifest::kSchemaVersion) invalid("unsupported schema version");
  if (!(m.fs > 26.0) || !std::isfinite(m.fs)) invalid("sampling rate must exceed 26 Hz");
  if (m.n_channels < 1) invalid("dataset needs at least one channel");
  if (ds.trials.size() > UINT32_MAX) invalid("too many trials");
  for (std::size_t i = 0; i < ds.trials.size(); ++i) {
    const Trial& t = ds.trials[i];
    const std::string where = "trial " + std::to_string(i) + ": ";
    if (t.fs != m.fs) invalid(where + "sampling rate differs from manifest");
    if (t.paradigm != m.paradigm) invalid(where + "paradigm differs from manifest");
    if (t.samples.channels() != m.n_channels) invalid(where + "channel count differs from manifest");
    if (t.samples.samples() < 1 || t.samples.samples() > UINT32_MAX) invalid(where + "bad sample count");
    if (!(t.label.amplitude >= 0.0) || !std::isfinite(t.label.amplitude)) invalid(where + "negative amplitude");
    Direction expected;
    try {
      expected = angle_to_direction(t.label.angle);
    } catch (const AngleOutOfRange&) {
      invalid(where + "angle outside [-pi, pi]");
    }
    if (expected != t.label.direction) invalid(where + "direction inconsistent with angle");
  }
}

std::vector<std::uint8_t> encode_dataset(const Dataset& ds) {
  validate_dataset(ds);
  ByteWriter w;
  w.raw(std::string_view(kMagic, 4));
  w.u16(ds.manifest.schema_version);
  w.f64(ds.manifest.fs);
  w.u16(ds.manifest.n_channels);
  w.u8(static_cast<std::uint8_t>(ds.manifest.paradigm));
  w.u32(static_cast<std::uint32_t>(ds.trials.size()));
  for (const Trial& t : ds.trials) {
    w.u32(t.subject_id);
    w.f64(t.label.angle);
    w.f64(t.label.amplitude);
    w.u32(static_cast<std::uint32_t>(t.samples.samples()));
    for (float v : t.samples.data()) w.f32(v);
  }
  if (!ds.manifest.config_hash.empty()) {
    const std::string blob = manifest_json(ds).dump();
    w.u32(static_cast<std::uint32_t>(blob.size()));
    w.raw(blob);
  }
  return w.release();
}

Dataset decode_dataset(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  Dataset ds;
  try {
    if (r.remaining() < 4 || r.raw(4) != std::string_view(kMagic, 4)) {
      throw DatasetError(DatasetErrorKind::BadMagic, "not an EEGT file (bad magic)");
    }
    ds.manifest.schema_version = r.u16();
    if (ds.manifest.schema_version != Manifest::kSchemaVersion) {
      throw DatasetError(DatasetErrorKind::UnsupportedVersion,
                         "unsupported EEGT schema version " + std::to_string(ds.manifest.schema_version));
    }
    ds.manifest.fs = r.f64();
    ds.manifest.n_channels = r.u16();
    const std::uint8_t paradigm = r.u8();
    if (paradigm > 1) invalid("unknown paradigm code " + std::to_string(paradigm));
    ds.manifest.paradigm = static_cast<Paradigm>(paradigm);
    const std::uint32_t n_trials = r.u32();
    const std::size_t channels = ds.manifest.n_channels;

    // Each record is at least its fixed part; reject absurd counts before reserving.
    if (static_cast<std::uint64_t>(n_trials) * kTrialRecordFixedBytes > r.remaining()) {
      throw DatasetError(DatasetErrorKind::Truncated, "file too short for declared trial count");
    }
    ds.trials.reserve(n_trials);
    for (std::uint32_t i = 0; i < n_trials; ++i) {
      Trial t;
      t.subject_id = r.u32();
      t.label.angle = r.f64();
      t.label.amplitude = r.f64();
      const std::uint32_t n_samples = r.u32();
      if (static_cast<std::uint64_t>(n_samples) * channels * 4 > r.remaining()) {
        throw DatasetError(DatasetErrorKind::Truncated, "trial " + std::to_string(i) + " truncated");
      }
      t.samples = SampleMatrix(channels, n_samples);
      for (float& v : t.samples.data()) v = r.f32();
      t.paradigm = ds.manifest.paradigm;
      t.fs = ds.manifest.fs;
      try {
        t.label.direction = angle_to_direction(t.label.angle);
      } catch (const AngleOutOfRange&) {
        invalid("trial " + std::to_string(i) + ": angle outside [-pi, pi]");
      }
      ds.trials.push_back(std::move(t));
    }
    if (r.remaining() > 0) {
      const std::uint32_t len = r.u32();
      if (r.remaining() < len) throw DatasetError(DatasetErrorKind::Truncated, "manifest trailer truncated");
      if (r.remaining() > len) invalid("trailing bytes after manifest trailer");
      const auto j = nlohmann::json::parse(r.raw(len), nullptr, false);
      if (j.is_discarded() || !j.is_object()) invalid("manifest trailer is not a JSON object");
      ds.manifest.config_hash = j.value("config_hash", std::string{});
    }
  } catch (const TruncatedInput& e) {
    throw DatasetError(DatasetErrorKind::Truncated, std::string("truncated EEGT file: ") + e.what());
  }
  validate_dataset(ds);
  return ds;
}

void write_dataset(const Dataset& ds, const std::string& path) {
  const auto bytes = encode_dataset(ds);
  try {
    write_file_bytes(path, bytes);
  } catch (const std::ios_base::failure& e) {
    throw DatasetError(DatasetErrorKind::Io, e.what());
  }
}

Dataset read_dataset(const std::string& path) {
  std::vector<std::uint8_t> bytes;
  try {
    bytes = read_file_bytes(path);
  } catch (const std::ios_base::failure& e) {
    throw DatasetError(DatasetErrorKind::Io, e.what());
  }
  return decode_dataset(bytes);
}

}  // namespace eegshift
