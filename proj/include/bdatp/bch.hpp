#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bdatp/bitvec.hpp"
#include "bdatp/gf2m.hpp"

namespace bdatp {

// Binary primitive BCH code of length n = 2^m - 1 with designed correction
// capability t. The generator is the lcm of the minimal polynomials of
// alpha^1 .. alpha^2t, so the designed minimum distance is >= 2t + 1.
//
// Bit order: index 0 of every bit string is the coefficient of x^0. A
// systematic codeword carries the parity bits in positions
// [0, n - k_msg) and the message bits in positions [n - k_msg, n).
struct CodeParams {
  int m = 0;
  int n = 0;      // 2^m - 1
  int t = 0;      // designed error-correcting capability
  int k_msg = 0;  // n - degree(generator)
  int d_min = 0;  // designed minimum distance, 2t + 1
  BitVec generator;  // degree n - k_msg, coefficient bit order
  std::shared_ptr<const GF2m> field;

  // "bch(n,k_msg;m=?,t=?)" -- stored in records to pin the code.
  std::string ref() const;
};

struct Codeword {
  BitVec bits;  // length n, zero syndrome under its CodeParams
};

// Builds the code tables and generator. Requires 3 <= m <= 10, t >= 1 and
// n - m*t >= 1 (the a-priori lower bound on k_msg; each minimal polynomial
// has degree <= m, and the conservative bound rejects degenerate codes).
CodeParams build_code(int m, int t);

// Systematic encoding: message * x^(n-k) plus the remainder mod generator.
Codeword bch_encode(const CodeParams& params, const BitVec& message);

struct Decoded {
  Codeword codeword;
  int errors_corrected = 0;
};

// Bounded-distance decoding: syndromes, Berlekamp-Massey, Chien search.
// If the word is within Hamming distance t of a codeword, returns that
// codeword with errors_corrected equal to the distance. Beyond t the result
// is nullopt (inconsistent locator) or a different codeword within t of the
// word; callers that need certainty validate against a hash, as the fuzzy
// commitment does. Wrong input length throws.
std::optional<Decoded> bch_decode(const CodeParams& params, const BitVec& word);

// Zero-syndrome check.
bool is_codeword(const CodeParams& params, const BitVec& word);

// count pairwise-distinct codewords obtained by encoding seeded random
// messages; rejection keeps them distinct, so pairwise distance >= d_min.
std::vector<Codeword> random_codewords(const CodeParams& params, std::size_t count,
                                       std::uint64_t seed);

}  // namespace bdatp
