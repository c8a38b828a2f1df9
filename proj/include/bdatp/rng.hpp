#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>

#include "bdatp/bitvec.hpp"

namespace bdatp {

// Deterministic seeded generator used everywhere randomness enters the
// pipeline. The bit source is std::mt19937_64, which ISO C++ specifies
// bit-exactly, so integer-valued streams (messages, salts, bits) are
// portable across builds. Floating-point draws use explicit, documented
// transforms on top of that stream rather than the implementation-defined
// standard distributions:
//
//   uniform01(): (next_u64() >> 11) * 2^-53, in [0, 1)
//   normal():    Box-Muller, sqrt(-2 ln u1) * cos(2 pi u2), one value per
//                pair of draws, no caching, so stream consumption is always
//                exactly two words per call
//   bits(n):     MSB-first bits of consecutive words
//   bytes(n):    big-endian bytes of consecutive words
//
// Draw order is part of each caller's documented contract.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double normal() {
    // u1 in (0, 1] keeps the log argument positive.
    double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Unbiased integer in [0, bound) by rejection.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound == 0) throw InvalidArgument("uniform_below: zero bound");
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % bound;
  }

  BitVec bits(std::size_t count) {
    BitVec out(count);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < count; ++i) {
      if (i % 64 == 0) word = next_u64();
      out.set(i, (word >> (63 - i % 64)) & 1u);
    }
    return out;
  }

  std::vector<std::uint8_t> bytes(std::size_t count) {
    std::vector<std::uint8_t> out(count);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < count; ++i) {
      if (i % 8 == 0) word = next_u64();
      out[i] = static_cast<std::uint8_t>(word >> (56 - 8 * (i % 8)));
    }
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bdatp
