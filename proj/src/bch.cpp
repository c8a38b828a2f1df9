#include "bdatp/bch.hpp"

#include <algorithm>
#include <set>

#include "bdatp/rng.hpp"

namespace bdatp {

namespace {

// Polynomial over GF(2), coefficient i = coefficient of x^i.
using Poly = std::vector<std::uint8_t>;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i])
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] ^= b[j];
  return out;
}

// Minimal polynomial of alpha^s: product of (x + alpha^j) over the
// cyclotomic coset of s. Coefficients land in GF(2).
Poly minimal_polynomial(const GF2m& field, const std::vector<int>& coset) {
  // Coefficients live in GF(2^m) during the product.
  std::vector<std::uint16_t> poly{1};
  for (int j : coset) {
    std::uint16_t root = field.alpha_pow(j);
    std::vector<std::uint16_t> next(poly.size() + 1, 0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] ^= poly[i];                 // x * poly
      next[i] ^= field.mul(poly[i], root);    // root * poly
    }
    poly = std::move(next);
  }
  Poly out(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (poly[i] > 1)
      throw InvalidArgument("minimal polynomial has non-binary coefficient");
    out[i] = static_cast<std::uint8_t>(poly[i]);
  }
  return out;
}

int degree(const Poly& p) {
  for (std::size_t i = p.size(); i-- > 0;)
    if (p[i]) return static_cast<int>(i);
  return -1;
}

}  // namespace

std::string CodeParams::ref() const {
  return "bch(" + std::to_string(n) + "," + std::to_string(k_msg) +
         ";m=" + std::to_string(m) + ",t=" + std::to_string(t) + ")";
}

CodeParams build_code(int m, int t) {
  if (m < 3 || m > 10) throw InvalidArgument("build_code: m must be in [3, 10]");
  if (t < 1) throw InvalidArgument("build_code: t must be >= 1");
  int n = (1 << m) - 1;
  if (n - m * t < 1)
    throw InvalidArgument("build_code: t too large for m=" + std::to_string(m) +
                          ", no message bits remain");

  CodeParams params;
  params.m = m;
  params.n = n;
  params.t = t;
  params.d_min = 2 * t + 1;
  params.field = std::make_shared<GF2m>(m);

  // lcm of minimal polynomials of alpha^1 .. alpha^2t: multiply one minimal
  // polynomial per cyclotomic coset touched by [1, 2t].
  Poly gen{1};
  std::vector<bool> covered(static_cast<std::size_t>(n), false);
  for (int i = 1; i <= 2 * t; ++i) {
    if (covered[static_cast<std::size_t>(i)]) continue;
    std::vector<int> coset;
    int j = i;
    do {
      coset.push_back(j);
      covered[static_cast<std::size_t>(j)] = true;
      j = (2 * j) % n;
    } while (j != i);
    gen = poly_mul(gen, minimal_polynomial(*params.field, coset));
  }

  int deg = degree(gen);
  params.k_msg = n - deg;
  if (params.k_msg < 1)
    throw InvalidArgument("build_code: generator degree leaves no message bits");
  params.generator = BitVec(static_cast<std::size_t>(deg) + 1);
  for (int i = 0; i <= deg; ++i) params.generator.set(std::size_t(i), gen[std::size_t(i)]);
  return params;
}

Codeword bch_encode(const CodeParams& params, const BitVec& message) {
  if (message.size() != static_cast<std::size_t>(params.k_msg))
    throw InvalidArgument("bch_encode: message length " +
                          std::to_string(message.size()) + " != k_msg " +
                          std::to_string(params.k_msg));
  std::size_t parity = static_cast<std::size_t>(params.n - params.k_msg);

  // Long division of message * x^parity by the generator; the remainder
  // fills the parity positions.
  std::vector<std::uint8_t> work(static_cast<std::size_t>(params.n), 0);
  for (std::size_t i = 0; i < message.size(); ++i)
    work[parity + i] = static_cast<std::uint8_t>(message[i]);
  for (std::size_t i = static_cast<std::size_t>(params.n); i-- > parity;) {
    if (!work[i]) continue;
    for (std::size_t j = 0; j <= parity; ++j)
      work[i - parity + j] ^= static_cast<std::uint8_t>(params.generator[j]);
  }

  Codeword cw{BitVec(static_cast<std::size_t>(params.n))};
  for (std::size_t i = 0; i < parity; ++i) cw.bits.set(i, work[i]);
  for (std::size_t i = 0; i < message.size(); ++i)
    cw.bits.set(parity + i, message[i]);
  return cw;
}

bool is_codeword(const CodeParams& params, const BitVec& word) {
  if (word.size() != static_cast<std::size_t>(params.n))
    throw InvalidArgument("is_codeword: wrong length");
  const GF2m& field = *params.field;
  for (int i = 1; i <= 2 * params.t; ++i) {
    std::uint16_t s = 0;
    for (int j = 0; j < params.n; ++j)
      if (word[static_cast<std::size_t>(j)]) s ^= field.alpha_pow(i * j);
    if (s != 0) return false;
  }
  return true;
}

std::optional<Decoded> bch_decode(const CodeParams& params, const BitVec& word) {
  if (word.size() != static_cast<std::size_t>(params.n))
    throw InvalidArgument("bch_decode: word length " +
                          std::to_string(word.size()) + " != n " +
                          std::to_string(params.n));
  const GF2m& field = *params.field;
  const int two_t = 2 * params.t;

  // Syndromes S_i = r(alpha^i), i = 1..2t.
  std::vector<std::uint16_t> synd(static_cast<std::size_t>(two_t) + 1, 0);
  bool any = false;
  for (int i = 1; i <= two_t; ++i) {
    std::uint16_t s = 0;
    for (int j = 0; j < params.n; ++j)
      if (word[static_cast<std::size_t>(j)]) s ^= field.alpha_pow(i * j);
    synd[static_cast<std::size_t>(i)] = s;
    any = any || s != 0;
  }
  if (!any) return Decoded{Codeword{word}, 0};

  // Berlekamp-Massey: error locator sigma(x) with sigma(0) = 1, roots at
  // the inverses of the error locations.
  std::vector<std::uint16_t> sigma{1}, prev{1};
  int L = 0, shift = 1;
  std::uint16_t prev_disc = 1;
  for (int step = 0; step < two_t; ++step) {
    std::uint16_t disc = synd[static_cast<std::size_t>(step) + 1];
    for (int i = 1; i <= L; ++i)
      if (static_cast<std::size_t>(i) < sigma.size())
        disc ^= field.mul(sigma[static_cast<std::size_t>(i)],
                          synd[static_cast<std::size_t>(step + 1 - i)]);
    if (disc == 0) {
      ++shift;
      continue;
    }
    std::vector<std::uint16_t> next = sigma;
    std::uint16_t factor = field.div(disc, prev_disc);
    if (next.size() < prev.size() + static_cast<std::size_t>(shift))
      next.resize(prev.size() + static_cast<std::size_t>(shift), 0);
    for (std::size_t i = 0; i < prev.size(); ++i)
      next[i + static_cast<std::size_t>(shift)] ^= field.mul(factor, prev[i]);
    if (2 * L <= step) {
      prev = sigma;
      prev_disc = disc;
      L = step + 1 - L;
      shift = 1;
    } else {
      ++shift;
    }
    sigma = std::move(next);
  }

  int deg = 0;
  for (std::size_t i = sigma.size(); i-- > 0;)
    if (sigma[i]) {
      deg = static_cast<int>(i);
      break;
    }
  if (L > params.t || deg != L) return std::nullopt;

  // Chien search: sigma(alpha^i) == 0 puts an error at position n - i.
  std::vector<int> positions;
  for (int i = 0; i < params.n; ++i) {
    std::uint16_t v = 0;
    for (std::size_t j = 0; j < sigma.size(); ++j)
      if (sigma[j]) v ^= field.mul(sigma[j], field.alpha_pow(static_cast<int>(j) * i));
    if (v == 0) positions.push_back((params.n - i) % params.n);
  }
  if (static_cast<int>(positions.size()) != L) return std::nullopt;

  Codeword corrected{word};
  for (int pos : positions) corrected.bits.flip(static_cast<std::size_t>(pos));
  // A locator that passed BM + Chien can still describe a non-codeword when
  // more than t errors occurred; reject instead of mis-correcting.
  if (!is_codeword(params, corrected.bits)) return std::nullopt;
  return Decoded{std::move(corrected), L};
}

std::vector<Codeword> random_codewords(const CodeParams& params, std::size_t count,
                                       std::uint64_t seed) {
  if (params.k_msg < 64) {
    std::uint64_t capacity = std::uint64_t{1} << params.k_msg;
    if (count > capacity)
      throw InvalidArgument("random_codewords: count " + std::to_string(count) +
                            " exceeds 2^" + std::to_string(params.k_msg) + " = " +
                            std::to_string(capacity) + " codewords");
  }
  SeededRng rng(seed);
  std::set<std::string> seen;
  std::vector<Codeword> out;
  out.reserve(count);
  while (out.size() < count) {
    BitVec message = rng.bits(static_cast<std::size_t>(params.k_msg));
    std::string fingerprint = message.to_string();
    if (!seen.insert(fingerprint).second) continue;
    out.push_back(bch_encode(params, message));
  }
  return out;
}

}  // namespace bdatp
