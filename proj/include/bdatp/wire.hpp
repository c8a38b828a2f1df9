#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "bdatp/bitvec.hpp"
#include "bdatp/errors.hpp"

namespace bdatp::wire {

// Little-endian byte writer for the packed on-disk formats. A format is a
// magic + version prefix, fixed-layout fields or length-prefixed sections,
// and a trailing CRC-32 (zlib polynomial) over everything before it.
class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v) {
    for (int i = 0; i < 2; ++i) buf_.push_back(std::uint8_t(v >> (8 * i)));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(std::uint8_t(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(std::uint8_t(v >> (8 * i)));
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    u64(bits);
  }
  void raw(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    buf_.insert(buf_.end(), p, p + n);
  }
  void str16(const std::string& s) {
    if (s.size() > 0xFFFF) throw InvalidArgument("string too long for str16");
    u16(static_cast<std::uint16_t>(s.size()));
    raw(s.data(), s.size());
  }
  // Bit count, then MSB-first packed bytes.
  void bitvec(const BitVec& v) {
    u32(static_cast<std::uint32_t>(v.size()));
    auto packed = v.to_packed_bytes();
    raw(packed.data(), packed.size());
  }

  // Opens a length-prefixed section; returns the patch position.
  std::size_t begin_section() {
    u32(0);
    return buf_.size();
  }
  void end_section(std::size_t start) {
    std::uint32_t len = static_cast<std::uint32_t>(buf_.size() - start);
    for (int i = 0; i < 4; ++i)
      buf_[start - 4 + i] = std::uint8_t(len >> (8 * i));
  }

  void append_crc32_trailer();

  std::size_t size() const { return buf_.size(); }
  std::vector<std::uint8_t> take() && { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

class Reader {
 public:
  Reader(const std::vector<std::uint8_t>& data, std::string what)
      : data_(data), what_(std::move(what)) {}

  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = 0;
    for (int i = 0; i < 2; ++i) v |= std::uint16_t(data_[pos_ + i]) << (8 * i);
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(data_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(data_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() {
    std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
  std::string str16() {
    std::uint16_t n = u16();
    need(n);
    std::string s(reinterpret_cast<const char*>(data_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  BitVec bitvec() {
    std::uint32_t nbits = u32();
    std::size_t nbytes = (std::size_t(nbits) + 7) / 8;
    need(nbytes);
    std::vector<std::uint8_t> packed(data_.begin() + pos_,
                                     data_.begin() + pos_ + nbytes);
    pos_ += nbytes;
    return BitVec::from_packed_bytes(packed, nbits);
  }

  void expect_magic(const char* magic, std::size_t n) {
    if (data_.size() < n + 1) throw ParseError(what_ + ": truncated");
    if (std::memcmp(data_.data(), magic, n) != 0)
      throw ParseError(what_ + ": bad magic");
    pos_ = n;
  }

  // Validates the trailing CRC-32 and fences reads off it. Call right after
  // the version byte so any later corruption surfaces as a checksum error.
  void check_crc32_trailer();

  // Opens a section: returns the position where it must end.
  std::size_t begin_section() {
    std::uint32_t len = u32();
    if (pos_ + len > limit()) throw ParseError(what_ + ": truncated section");
    return pos_ + len;
  }
  void end_section(std::size_t end) {
    if (pos_ != end) throw ParseError(what_ + ": malformed section");
  }

  void expect_end_before_trailer() {
    if (pos_ != limit()) throw ParseError(what_ + ": trailing bytes");
  }

 private:
  std::size_t limit() const {
    return trailer_checked_ ? data_.size() - 4 : data_.size();
  }
  void need(std::size_t n) {
    if (pos_ + n > limit()) throw ParseError(what_ + ": truncated");
  }

  const std::vector<std::uint8_t>& data_;
  std::string what_;
  std::size_t pos_ = 0;
  bool trailer_checked_ = false;
};

}  // namespace bdatp::wire
