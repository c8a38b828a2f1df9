#pragma once

#include <cstdint>
#include <vector>

#include "bdatp/errors.hpp"

namespace bdatp {

// GF(2^m) arithmetic over log/antilog tables, 3 <= m <= 10. The field is
// generated by a fixed primitive polynomial per m (see kPrimitivePoly in
// gf2m.cpp) so that codewords are portable across builds. alpha = 2 is the
// primitive element: exp_table[i] = alpha^i, log_table[alpha^i] = i.
class GF2m {
 public:
  explicit GF2m(int m);

  int m() const { return m_; }
  int n() const { return n_; }  // 2^m - 1, the multiplicative order

  std::uint16_t alpha_pow(int i) const {
    i %= n_;
    if (i < 0) i += n_;
    return exp_[static_cast<std::size_t>(i)];
  }

  int log(std::uint16_t x) const {
    if (x == 0) throw InvalidArgument("GF2m::log of zero");
    return log_[x];
  }

  std::uint16_t mul(std::uint16_t a, std::uint16_t b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[(log_[a] + log_[b]) % n_];
  }

  std::uint16_t div(std::uint16_t a, std::uint16_t b) const {
    if (b == 0) throw InvalidArgument("GF2m::div by zero");
    if (a == 0) return 0;
    return exp_[(log_[a] - log_[b] + n_) % n_];
  }

  std::uint16_t inv(std::uint16_t a) const { return div(1, a); }

  static std::uint32_t primitive_poly(int m);

 private:
  int m_;
  int n_;
  std::vector<std::uint16_t> exp_;
  std::vector<int> log_;
};

}  // namespace bdatp
