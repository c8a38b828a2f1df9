#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "bdatp/bch.hpp"

namespace bdatp {

// Fuzzy commitment (Juels-Wattenberg): bind a binary template T to a fresh
// random codeword c by storing mask = T xor c and digest = SHA-256(c || salt).
// Verification decodes query xor mask and accepts only if the decoded
// codeword hash-matches, so acceptance means hamming(query, T) <= t up to
// hash collisions. T itself is never stored.
struct Commitment {
  std::string code_ref;
  BitVec mask;  // length n
  std::array<std::uint8_t, 16> salt{};
  std::array<std::uint8_t, 32> digest{};  // SHA-256(packed codeword || salt)
};

// Draw order from seed: k_msg message bits, then 16 salt bytes. Production
// callers pass an OS-entropy seed; tests pass fixed seeds.
Commitment commit(const BitVec& template_bits, const CodeParams& params,
                  std::uint64_t seed);

struct CommitmentAccept {
  int errors_corrected = 0;
};

// nullopt = reject. Wrong query length throws.
std::optional<CommitmentAccept> verify_commitment(const Commitment& commitment,
                                                  const CodeParams& params,
                                                  const BitVec& query);

std::array<std::uint8_t, 32> sha256(const std::uint8_t* data, std::size_t n);

}  // namespace bdatp
