#include "bdatp/commitment.hpp"

#include <openssl/evp.h>

#include <cstring>

#include "bdatp/rng.hpp"

namespace bdatp {

std::array<std::uint8_t, 32> sha256(const std::uint8_t* data, std::size_t n) {
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, data, n) != 1 ||
      EVP_DigestFinal_ex(ctx, out.data(), &len) != 1 || len != 32) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 failed");
  }
  EVP_MD_CTX_free(ctx);
  return out;
}

namespace {

std::array<std::uint8_t, 32> codeword_digest(
    const BitVec& codeword, const std::array<std::uint8_t, 16>& salt) {
  auto packed = codeword.to_packed_bytes();
  packed.insert(packed.end(), salt.begin(), salt.end());
  return sha256(packed.data(), packed.size());
}

}  // namespace

Commitment commit(const BitVec& template_bits, const CodeParams& params,
                  std::uint64_t seed) {
  if (template_bits.size() != static_cast<std::size_t>(params.n))
    throw InvalidArgument("commit: template length " +
                          std::to_string(template_bits.size()) + " != n " +
                          std::to_string(params.n));
  SeededRng rng(seed);
  BitVec message = rng.bits(static_cast<std::size_t>(params.k_msg));
  Codeword codeword = bch_encode(params, message);

  Commitment out;
  out.code_ref = params.ref();
  auto salt_bytes = rng.bytes(16);
  std::memcpy(out.salt.data(), salt_bytes.data(), 16);
  out.mask = template_bits ^ codeword.bits;
  out.digest = codeword_digest(codeword.bits, out.salt);
  return out;
}

std::optional<CommitmentAccept> verify_commitment(const Commitment& commitment,
                                                  const CodeParams& params,
                                                  const BitVec& query) {
  if (query.size() != static_cast<std::size_t>(params.n))
    throw InvalidArgument("verify_commitment: query length " +
                          std::to_string(query.size()) + " != n " +
                          std::to_string(params.n));
  if (commitment.mask.size() != static_cast<std::size_t>(params.n))
    throw InvalidArgument("verify_commitment: commitment/code mismatch");

  BitVec noisy = commitment.mask ^ query;
  auto decoded = bch_decode(params, noisy);
  if (!decoded) return std::nullopt;
  if (codeword_digest(decoded->codeword.bits, commitment.salt) !=
      commitment.digest)
    return std::nullopt;
  return CommitmentAccept{decoded->errors_corrected};
}

}  // namespace bdatp
