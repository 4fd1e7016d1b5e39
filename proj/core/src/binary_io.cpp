#include "eegshift/binary_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

namespace eegshift {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

namespace {

template <typename T>
void append_le(std::vector<std::uint8_t>& out, T v) {
  std::uint8_t buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.insert(out.end(), buf, buf + sizeof(T));
}

}  // namespace

void ByteWriter::u16(std::uint16_t v) { append_le(bytes_, v); }
void ByteWriter::u32(std::uint32_t v) { append_le(bytes_, v); }
void ByteWriter::u64(std::uint64_t v) { append_le(bytes_, v); }
void ByteWriter::f32(float v) { append_le(bytes_, v); }
void ByteWriter::f64(double v) { append_le(bytes_, v); }
void ByteWriter::raw(std::string_view s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }
void ByteWriter::raw(std::span<const std::uint8_t> s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }

void ByteReader::need(std::size_t n) const {
  if (remaining() < n) {
    throw TruncatedInput("unexpected end of input at byte " + std::to_string(pos_));
  }
}

namespace {

template <typename T>
T read_le(std::span<const std::uint8_t> bytes, std::size_t& pos) {
  T v;
  std::memcpy(&v, bytes.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

}  // namespace

std::uint8_t ByteReader::u8() { need(1); return bytes_[pos_++]; }
std::uint16_t ByteReader::u16() { need(2); return read_le<std::uint16_t>(bytes_, pos_); }
std::uint32_t ByteReader::u32() { need(4); return read_le<std::uint32_t>(bytes_, pos_); }
std::uint64_t ByteReader::u64() { need(8); return read_le<std::uint64_t>(bytes_, pos_); }
float ByteReader::f32() { need(4); return read_le<float>(bytes_, pos_); }
double ByteReader::f64() { need(8); return read_le<double>(bytes_, pos_); }

std::string ByteReader::raw(std::size_t n) {
  need(n);
  std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
  pos_ += n;
  return s;
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path + " for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw std::ios_base::failure("read error on " + path);
  return bytes;
}

void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
  // Write to a sibling temp file and rename so readers never see a partial file.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::ios_base::failure("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw std::ios_base::failure("write error on " + path);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::ios_base::failure("cannot move " + tmp + " to " + path);
  }
}

std::uint64_t fnv1a64(std::string_view data) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : data) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex_digest(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace eegshift
