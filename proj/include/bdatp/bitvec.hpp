#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bdatp/errors.hpp"

namespace bdatp {

// Bit string with one byte of storage per bit. Sizes in this codebase stay
// in the thousands, so transparency beats packing; the packed wire form is
// produced on demand by to_packed_bytes().
//
// Bit order contract: index 0 is the coefficient of x^0 in polynomial
// contexts. Packed bytes are MSB-first: bit i lands in byte i/8 at bit
// position 7 - i%8.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : bits_(n, 0) {}
  BitVec(std::initializer_list<int> init) {
    bits_.reserve(init.size());
    for (int b : init) bits_.push_back(b ? 1 : 0);
  }

  // Parses a string of '0'/'1' characters, index 0 first.
  static BitVec from_string(const std::string& s) {
    BitVec v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] != '0' && s[i] != '1')
        throw InvalidArgument("BitVec::from_string: invalid character");
      v.bits_[i] = static_cast<std::uint8_t>(s[i] - '0');
    }
    return v;
  }

  static BitVec from_packed_bytes(const std::vector<std::uint8_t>& bytes,
                                  std::size_t nbits) {
    if (bytes.size() != (nbits + 7) / 8)
      throw InvalidArgument("BitVec::from_packed_bytes: size mismatch");
    BitVec v(nbits);
    for (std::size_t i = 0; i < nbits; ++i)
      v.bits_[i] = (bytes[i / 8] >> (7 - i % 8)) & 1u;
    return v;
  }

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }

  int get(std::size_t i) const { return bits_[i]; }
  void set(std::size_t i, int value) {
    bits_[i] = static_cast<std::uint8_t>(value ? 1 : 0);
  }
  void flip(std::size_t i) { bits_[i] ^= 1u; }

  int operator[](std::size_t i) const { return bits_[i]; }

  BitVec operator^(const BitVec& other) const {
    if (size() != other.size())
      throw InvalidArgument("BitVec xor: length mismatch");
    BitVec out(size());
    for (std::size_t i = 0; i < size(); ++i)
      out.bits_[i] = bits_[i] ^ other.bits_[i];
    return out;
  }

  bool operator==(const BitVec& other) const = default;

  std::size_t count_ones() const {
    std::size_t c = 0;
    for (auto b : bits_) c += b;
    return c;
  }

  // Packed MSB-first; trailing pad bits of the last byte are zero.
  std::vector<std::uint8_t> to_packed_bytes() const {
    std::vector<std::uint8_t> out((size() + 7) / 8, 0);
    for (std::size_t i = 0; i < size(); ++i)
      if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(1u << (7 - i % 8));
    return out;
  }

  std::string to_string() const {
    std::string s(size(), '0');
    for (std::size_t i = 0; i < size(); ++i)
      if (bits_[i]) s[i] = '1';
    return s;
  }

  // Slice [begin, begin+len).
  BitVec slice(std::size_t begin, std::size_t len) const {
    if (begin + len > size()) throw InvalidArgument("BitVec::slice: out of range");
    BitVec out(len);
    for (std::size_t i = 0; i < len; ++i) out.bits_[i] = bits_[begin + i];
    return out;
  }

  void append(const BitVec& other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
  }

 private:
  std::vector<std::uint8_t> bits_;
};

// Count of differing positions. The binary metric used throughout.
inline std::size_t hamming(const BitVec& a, const BitVec& b) {
  if (a.size() != b.size()) throw InvalidArgument("hamming: length mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

}  // namespace bdatp
