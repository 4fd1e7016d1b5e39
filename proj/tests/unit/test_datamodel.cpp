#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <vector>

#include "eegshift/binary_io.hpp"
#include "eegshift/datamodel.hpp"
#include "eegshift/synth.hpp"

using namespace eegshift;

namespace {

Dataset tiny(std::size_t channels, std::size_t samples, std::size_t n_trials) {
  Dataset ds;
  ds.manifest.fs = 500.0;
  ds.manifest.n_channels = static_cast<std::uint16_t>(channels);
  ds.manifest.paradigm = Paradigm::LargeGrid;
  for (std::size_t i = 0; i < n_trials; ++i) {
    Trial t;
    t.subject_id = static_cast<std::uint32_t>(7 + i);
    t.paradigm = Paradigm::LargeGrid;
    t.label = GazeLabel{i % 2 ? 2.5 : -0.25, 180.0 + i, i % 2 ? Direction::Left : Direction::Right};
    t.samples = SampleMatrix(channels, samples);
    for (std::size_t c = 0; c < channels; ++c)
      for (std::size_t s = 0; s < samples; ++s) t.samples(c, s) = 0.125f * static_cast<float>(c * 10 + s) - 1.0f;
    ds.trials.push_back(t);
  }
  return ds;
}

std::filesystem::path temp_path(const char* name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST(Dataset, EmptyIsHeaderOnly) {
  const Dataset ds = tiny(2, 4, 0);
  const auto bytes = encode_dataset(ds);
  // magic 4, version 2, fs 8, channels 2, paradigm 1, count 4
  EXPECT_EQ(bytes.size(), 21u);
  EXPECT_EQ(bytes.size(), kDatasetHeaderBytes);
  EXPECT_EQ(decode_dataset(bytes), ds);
}

TEST(Dataset, OneTrialSize) {
  const Dataset ds = tiny(2, 4, 1);
  const auto bytes = encode_dataset(ds);
  EXPECT_EQ(bytes.size(), 21u + (4 + 8 + 8 + 4) + 2 * 4 * 4);
  EXPECT_EQ(bytes[0], 'E');
  EXPECT_EQ(bytes[3], 'T');
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 0);
  EXPECT_EQ(decode_dataset(bytes), ds);
}

TEST(Dataset, SamplesAreBitExact) {
  Dataset ds = tiny(3, 9, 2);
  ds.trials[0].samples(1, 2) = 1.0e-38f;
  ds.trials[1].samples(2, 8) = -3.4e38f;
  ds.trials[1].label.angle = 3.141592653589793;
  const Dataset back = decode_dataset(encode_dataset(ds));
  ASSERT_EQ(back.trials.size(), 2u);
  EXPECT_EQ(back.trials[0].samples.data(), ds.trials[0].samples.data());
  EXPECT_EQ(back.trials[1].label.angle, ds.trials[1].label.angle);
}

TEST(Dataset, GeneratedRoundTripThroughFile) {
  GeneratorConfig cfg;
  cfg.n_subjects = 3;
  cfg.trials_per_subject = 5;
  cfg.n_channels = 4;
  cfg.trial_seconds = 0.6;
  const Dataset ds = generate_dataset(Paradigm::LargeGrid, cfg);
  const auto path = temp_path("eegshift_roundtrip.eegt");
  write_dataset(ds, path.string());
  const Dataset back = read_dataset(path.string());
  EXPECT_EQ(back, ds);
  EXPECT_FALSE(back.manifest.config_hash.empty());
  std::filesystem::remove(path);
}

TEST(Dataset, BadMagic) {
  auto bytes = encode_dataset(tiny(2, 4, 1));
  bytes[0] = bytes[1] = bytes[2] = bytes[3] = 'X';
  try {
    decode_dataset(bytes);
    FAIL() << "expected an error";
  } catch (const DatasetError& e) {
    EXPECT_EQ(e.kind(), DatasetErrorKind::BadMagic);
  }
}

TEST(Dataset, UnsupportedVersion) {
  auto bytes = encode_dataset(tiny(2, 4, 1));
  bytes[4] = 9;
  try {
    decode_dataset(bytes);
    FAIL() << "expected an error";
  } catch (const DatasetError& e) {
    EXPECT_EQ(e.kind(), DatasetErrorKind::UnsupportedVersion);
  }
}

TEST(Dataset, TruncatedAtEveryLength) {
  const auto bytes = encode_dataset(tiny(2, 4, 2));
  for (std::size_t n = 4; n < bytes.size(); ++n) {
    try {
      decode_dataset(std::span(bytes.data(), n));
      ADD_FAILURE() << "length " << n << " decoded";
    } catch (const DatasetError& e) {
      EXPECT_EQ(e.kind(), DatasetErrorKind::Truncated) << "length " << n;
    }
  }
}

TEST(Dataset, RefusesInvalidWrites) {
  Dataset ds = tiny(2, 4, 1);
  ds.trials[0].label.amplitude = -1.0;
  EXPECT_THROW(encode_dataset(ds), DatasetError);

  ds = tiny(2, 4, 1);
  ds.trials[0].samples = SampleMatrix(3, 4);
  EXPECT_THROW(encode_dataset(ds), DatasetError);

  ds = tiny(2, 4, 1);
  ds.trials[0].label.direction = Direction::Left;  // angle -0.25 is Right
  EXPECT_THROW(encode_dataset(ds), DatasetError);

  ds = tiny(2, 4, 1);
  ds.manifest.fs = 20.0;
  ds.trials[0].fs = 20.0;
  EXPECT_THROW(encode_dataset(ds), DatasetError);
}

TEST(Dataset, MissingFileIsIoError) {
  try {
    read_dataset("/nonexistent/dir/file.eegt");
    FAIL();
  } catch (const DatasetError& e) {
    EXPECT_EQ(e.kind(), DatasetErrorKind::Io);
  } catch (const std::ios_base::failure&) {
  }
}

TEST(Dataset, SubjectsAscendingAndDistinct) {
  Dataset ds = tiny(1, 4, 3);
  ds.trials[2].subject_id = 7;
  const auto s = ds.subjects();
  EXPECT_EQ(std::vector<std::uint32_t>(s.begin(), s.end()), (std::vector<std::uint32_t>{7, 8}));
}

TEST(BinaryIo, ReaderThrowsPastEnd) {
  const std::vector<std::uint8_t> bytes{1, 2, 3};
  ByteReader r(bytes);
  EXPECT_EQ(r.u16(), 0x0201);
  EXPECT_THROW(r.u16(), TruncatedInput);
}

TEST(BinaryIo, Fnv1aKnownValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(hex_digest(0xabcULL), "0000000000000abc");
}
