#include "bdatp/gf2m.hpp"

namespace bdatp {

namespace {
// Standard primitive polynomials, coefficient bit i = coefficient of x^i.
// m=3: x^3+x+1, m=4: x^4+x+1, m=5: x^5+x^2+1, m=6: x^6+x+1,
// m=7: x^7+x^3+1, m=8: x^8+x^4+x^3+x^2+1, m=9: x^9+x^4+1, m=10: x^10+x^3+1.
constexpr std::uint32_t kPrimitivePoly[11] = {
    0, 0, 0, 0b1011, 0b10011, 0b100101, 0b1000011, 0b10001001, 0b100011101,
    0b1000010001, 0b10000001001};
}  // namespace

std::uint32_t GF2m::primitive_poly(int m) {
  if (m < 3 || m > 10) throw InvalidArgument("GF2m: m must be in [3, 10]");
  return kPrimitivePoly[m];
}

GF2m::GF2m(int m) : m_(m), n_((1 << m) - 1) {
  std::uint32_t prim = primitive_poly(m);
  exp_.resize(static_cast<std::size_t>(n_));
  log_.assign(static_cast<std::size_t>(n_) + 1, -1);
  std::uint32_t x = 1;
  for (int i = 0; i < n_; ++i) {
    exp_[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(x);
    log_[x] = i;
    x <<= 1;
    if (x & (1u << m)) x ^= prim;
  }
}

}  // namespace bdatp
