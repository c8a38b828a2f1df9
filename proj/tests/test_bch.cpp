#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "bdatp/bch.hpp"
#include "bdatp/rng.hpp"

using namespace bdatp;

namespace {

// Test-side oracles, independent of the decoder under test.

BitVec bits_of(std::uint64_t value, std::size_t n) {
  BitVec out(n);
  for (std::size_t i = 0; i < n; ++i) out.set(i, (value >> i) & 1);
  return out;
}

std::vector<Codeword> all_codewords(const CodeParams& params) {
  std::vector<Codeword> out;
  out.reserve(std::size_t(1) << params.k_msg);
  for (std::uint64_t m = 0; m < (std::uint64_t(1) << params.k_msg); ++m)
    out.push_back(bch_encode(params, bits_of(m, std::size_t(params.k_msg))));
  return out;
}

// Brute-force nearest-codeword search; ties resolved as "ambiguous".
struct Nearest {
  std::size_t index = 0;
  std::size_t distance = 0;
  bool unique = true;
};

Nearest nearest_codeword(const std::vector<Codeword>& codewords,
                         const BitVec& word) {
  Nearest best;
  best.distance = word.size() + 1;
  for (std::size_t i = 0; i < codewords.size(); ++i) {
    std::size_t d = hamming(codewords[i].bits, word);
    if (d < best.distance) {
      best = {i, d, true};
    } else if (d == best.distance) {
      best.unique = false;
    }
  }
  return best;
}

// Polynomial remainder of a(x) by g(x) over GF(2), long division.
BitVec poly_mod(const BitVec& a, const BitVec& g) {
  std::vector<std::uint8_t> work(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    work[i] = static_cast<std::uint8_t>(a[i]);
  std::size_t deg_g = g.size() - 1;
  for (std::size_t i = a.size(); i-- > deg_g;) {
    if (!work[i]) continue;
    for (std::size_t j = 0; j <= deg_g; ++j)
      work[i - deg_g + j] ^= static_cast<std::uint8_t>(g[j]);
  }
  BitVec out(deg_g);
  for (std::size_t i = 0; i < deg_g; ++i) out.set(i, work[i]);
  return out;
}

bool divisible_by(const BitVec& word, const BitVec& g) {
  return poly_mod(word, g).count_ones() == 0;
}

}  // namespace

TEST_CASE("GF(2^m) tables: antilog(log(x)) == x and alpha^n == 1") {
  for (int m = 3; m <= 10; ++m) {
    GF2m field(m);
    CHECK(field.alpha_pow(field.n()) == 1);
    for (int x = 1; x <= field.n(); ++x)
      CHECK(field.alpha_pow(field.log(static_cast<std::uint16_t>(x))) == x);
    // Spot-check multiplicative structure.
    CHECK(field.mul(0, 5 % (field.n() + 1)) == 0);
    for (int x = 1; x <= field.n(); ++x) {
      CHECK(field.mul(static_cast<std::uint16_t>(x),
                      field.inv(static_cast<std::uint16_t>(x))) == 1);
    }
  }
  CHECK_THROWS_AS(GF2m(2), InvalidArgument);
  CHECK_THROWS_AS(GF2m(11), InvalidArgument);
}

TEST_CASE("BCH(7,4): generator is x^3+x+1") {
  auto params = build_code(3, 1);
  CHECK(params.n == 7);
  CHECK(params.k_msg == 4);
  CHECK(params.d_min == 3);
  // Coefficient order: index 0 = x^0. x^3 + x + 1 -> 1,1,0,1.
  CHECK(params.generator == BitVec{1, 1, 0, 1});
}

TEST_CASE("BCH(15,7): generator degree 8 and exhaustive minimum distance 5") {
  auto params = build_code(4, 2);
  CHECK(params.n == 15);
  CHECK(params.k_msg == 7);
  CHECK(params.generator.size() == 9);

  auto codewords = all_codewords(params);
  REQUIRE(codewords.size() == 128);
  for (std::size_t i = 0; i < codewords.size(); ++i)
    for (std::size_t j = i + 1; j < codewords.size(); ++j)
      CHECK(hamming(codewords[i].bits, codewords[j].bits) >= 5);
}

TEST_CASE("build_code rejects t that leaves no message bits") {
  CHECK_THROWS_AS(build_code(3, 3), InvalidArgument);
  CHECK_THROWS_AS(build_code(3, 0), InvalidArgument);
  CHECK_THROWS_AS(build_code(2, 1), InvalidArgument);
  CHECK_THROWS_AS(build_code(11, 1), InvalidArgument);
}

TEST_CASE("generator divides x^n - 1 for every supported m, t=1..2") {
  for (int m = 3; m <= 8; ++m) {
    for (int t = 1; t <= 2; ++t) {
      auto params = build_code(m, t);
      // x^n + 1 over GF(2).
      BitVec xn1(std::size_t(params.n) + 1);
      xn1.set(0, 1);
      xn1.set(std::size_t(params.n), 1);
      CHECK(divisible_by(xn1, params.generator));
    }
  }
}

TEST_CASE("encode: zero message gives zero codeword; result divisible by g") {
  auto params = build_code(3, 1);
  auto zero = bch_encode(params, BitVec(4));
  CHECK(zero.bits.count_ones() == 0);

  // message 1000 (m0=1): codeword = x^3 * m(x) + remainder; oracle checks
  // divisibility by the generator via long division.
  auto cw = bch_encode(params, BitVec{1, 0, 0, 0});
  CHECK(divisible_by(cw.bits, params.generator));
  CHECK(is_codeword(params, cw.bits));
  // Systematic: message occupies positions n-k..n-1.
  CHECK(cw.bits[3] == 1);
  CHECK(cw.bits[4] == 0);
  CHECK(cw.bits[5] == 0);
  CHECK(cw.bits[6] == 0);
  CHECK_THROWS_AS(bch_encode(params, BitVec(5)), InvalidArgument);
}

TEST_CASE("encode is injective: all 128 BCH(15,7) codewords distinct") {
  auto params = build_code(4, 2);
  std::set<std::string> seen;
  for (const auto& cw : all_codewords(params))
    CHECK(seen.insert(cw.bits.to_string()).second);
}

TEST_CASE("codeword set is linear and has minimum weight >= 2t+1 (n <= 15)") {
  for (auto [m, t] : {std::pair{3, 1}, std::pair{4, 2}, std::pair{4, 3}}) {
    auto params = build_code(m, t);
    auto codewords = all_codewords(params);
    std::set<std::string> members;
    for (const auto& cw : codewords) members.insert(cw.bits.to_string());
    for (std::size_t i = 0; i < codewords.size(); ++i) {
      if (codewords[i].bits.count_ones() != 0)
        CHECK(codewords[i].bits.count_ones() >=
              static_cast<std::size_t>(params.d_min));
      for (std::size_t j = i; j < codewords.size(); ++j)
        CHECK(members.count(
                  (codewords[i].bits ^ codewords[j].bits).to_string()) == 1);
    }
  }
}

TEST_CASE("decode: clean codeword, wrong length, zero syndrome") {
  auto params = build_code(4, 2);
  auto cw = bch_encode(params, BitVec{1, 0, 1, 1, 0, 0, 1});
  auto decoded = bch_decode(params, cw.bits);
  REQUIRE(decoded.has_value());
  CHECK(decoded->codeword.bits == cw.bits);
  CHECK(decoded->errors_corrected == 0);
  CHECK_THROWS_AS(bch_decode(params, BitVec(14)), InvalidArgument);
}

TEST_CASE("BCH(15,7,5): every codeword with every weight<=2 error decodes back") {
  auto params = build_code(4, 2);
  auto codewords = all_codewords(params);
  std::size_t cases = 0;
  for (const auto& cw : codewords) {
    for (int a = 0; a < 15; ++a) {
      {
        BitVec word = cw.bits;
        word.flip(std::size_t(a));
        auto decoded = bch_decode(params, word);
        REQUIRE(decoded.has_value());
        CHECK(decoded->codeword.bits == cw.bits);
        CHECK(decoded->errors_corrected == 1);
        ++cases;
      }
      for (int b = a + 1; b < 15; ++b) {
        BitVec word = cw.bits;
        word.flip(std::size_t(a));
        word.flip(std::size_t(b));
        auto decoded = bch_decode(params, word);
        REQUIRE(decoded.has_value());
        CHECK(decoded->codeword.bits == cw.bits);
        CHECK(decoded->errors_corrected == 2);
        ++cases;
      }
    }
  }
  CHECK(cases == std::size_t(128) * 120);
}

TEST_CASE("BCH(7,4): decode agrees with brute-force nearest codeword on all 128 words") {
  auto params = build_code(3, 1);
  auto codewords = all_codewords(params);
  for (std::uint64_t w = 0; w < 128; ++w) {
    BitVec word = bits_of(w, 7);
    auto oracle = nearest_codeword(codewords, word);
    auto decoded = bch_decode(params, word);
    // The Hamming(7,4) code is perfect: every word sits within distance 1 of
    // exactly one codeword, so decoding must always succeed and agree.
    REQUIRE(oracle.unique);
    REQUIRE(oracle.distance <= 1);
    REQUIRE(decoded.has_value());
    CHECK(decoded->codeword.bits == codewords[oracle.index].bits);
    CHECK(decoded->errors_corrected == static_cast<int>(oracle.distance));
  }
}

TEST_CASE("beyond-t behavior: failure or a codeword, never a non-codeword") {
  auto params = build_code(4, 2);
  SeededRng rng(99);
  int failures = 0;
  for (int trial = 0; trial < 500; ++trial) {
    BitVec word = rng.bits(15);
    auto decoded = bch_decode(params, word);
    if (!decoded) {
      ++failures;
      continue;
    }
    CHECK(is_codeword(params, decoded->codeword.bits));
    CHECK(decoded->errors_corrected <= params.t);
    CHECK(hamming(decoded->codeword.bits, word) ==
          static_cast<std::size_t>(decoded->errors_corrected));
  }
  CHECK(failures > 0);  // random words are mostly uncorrectable
}

TEST_CASE("BCH(63,36,t=5): sampled error patterns up to t decode exactly") {
  auto params = build_code(6, 5);
  CHECK(params.n == 63);
  CHECK(params.k_msg == 36);
  SeededRng rng(123);
  for (int trial = 0; trial < 10000; ++trial) {
    BitVec message = rng.bits(36);
    auto cw = bch_encode(params, message);
    int weight = static_cast<int>(rng.uniform_below(std::uint64_t(params.t) + 1));
    BitVec word = cw.bits;
    std::set<std::uint64_t> positions;
    while (static_cast<int>(positions.size()) < weight)
      positions.insert(rng.uniform_below(63));
    for (auto p : positions) word.flip(p);
    auto decoded = bch_decode(params, word);
    REQUIRE(decoded.has_value());
    CHECK(decoded->codeword.bits == cw.bits);
    CHECK(decoded->errors_corrected == weight);
  }
}

TEST_CASE("random_codewords: validity, distinctness, capacity") {
  auto params7 = build_code(3, 1);
  auto one = random_codewords(params7, 1, 5);
  REQUIRE(one.size() == 1);
  CHECK(is_codeword(params7, one[0].bits));

  auto params15 = build_code(4, 2);
  auto ten = random_codewords(params15, 10, 3);
  REQUIRE(ten.size() == 10);
  for (std::size_t i = 0; i < ten.size(); ++i)
    for (std::size_t j = i + 1; j < ten.size(); ++j)
      CHECK(hamming(ten[i].bits, ten[j].bits) >= 5);

  CHECK(random_codewords(params7, 16, 1).size() == 16);  // full capacity
  CHECK_THROWS_AS(random_codewords(params7, 17, 1), InvalidArgument);
  auto again = random_codewords(params15, 10, 3);
  for (std::size_t i = 0; i < 10; ++i) CHECK(again[i].bits == ten[i].bits);
}

TEST_CASE("hamming: trivial cases and popcount-of-xor oracle") {
  CHECK(hamming(BitVec{0, 0, 0, 0}, BitVec{0, 0, 0, 0}) == 0);
  CHECK(hamming(BitVec{0, 0, 0, 0}, BitVec{1, 1, 1, 1}) == 4);
  CHECK_THROWS_AS(hamming(BitVec(3), BitVec(4)), InvalidArgument);
  SeededRng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    BitVec a = rng.bits(63), b = rng.bits(63);
    CHECK(hamming(a, b) == (a ^ b).count_ones());
  }
}
