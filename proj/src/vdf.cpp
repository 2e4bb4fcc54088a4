#include "vixify/vdf.hpp"

#include <boost/multiprecision/miller_rabin.hpp>

#include <random>
#include <stdexcept>

namespace vixify::vdf {

namespace {

// Low-bit flip restricted to the field; an involution on [0, p).
BigInt flip(const BigInt& x, const BigInt& p) {
  BigInt w = x ^ 1;
  return w < p ? w : x;
}

bool is_even(const BigInt& x) { return (x & 1) == 0; }

BigInt expand_candidate(int bit_length, const Bytes& seed, uint64_t attempt) {
  // Concatenate counter hashes until we have enough bits, then trim.
  Bytes material;
  uint64_t block = 0;
  while (static_cast<int>(material.size()) * 8 < bit_length) {
    ByteWriter w;
    w.raw(seed);
    w.u64(attempt);
    w.u64(block++);
    Hash256 h = hash_digest(tag::kVdfSetup, w.bytes());
    material.insert(material.end(), h.begin(), h.end());
  }
  BigInt x = bytes_to_bigint(material);
  int excess = static_cast<int>(material.size()) * 8 - bit_length;
  x >>= excess;
  x |= BigInt(1) << (bit_length - 1);  // exact size
  x |= 3;                              // odd and = 3 (mod 4)
  BigInt r = x % 4;
  if (r != 3) x += 3 - r;
  return x;
}

bool probably_prime(const BigInt& n) {
  // Witnesses from a generator seeded by the candidate itself, so the
  // setup search is reproducible regardless of call order.
  Hash256 h = hash_digest(tag::kVdfSetup, bigint_to_bytes(n));
  uint64_t seed = 0;
  for (int i = 0; i < 8; i++) seed = (seed << 8) | h[i];
  std::mt19937_64 gen(seed);
  return boost::multiprecision::miller_rabin_test(n, 40, gen);
}

}  // namespace

VdfParams vdf_setup(int bit_length, const Bytes& seed) {
  if (bit_length < 16) throw std::invalid_argument("bit_length too small");
  for (uint64_t attempt = 0;; attempt++) {
    BigInt candidate = expand_candidate(bit_length, seed, attempt);
    // Walk upward in steps of 4 (preserving the residue) for a while before
    // drawing a fresh candidate, so the search stays cheap.
    for (int hop = 0; hop < 4096; hop++, candidate += 4) {
      if (boost::multiprecision::msb(candidate) + 1 != static_cast<unsigned>(bit_length)) break;
      if (probably_prime(candidate)) return {candidate, bit_length};
    }
  }
}

BigInt reduce_input(const VdfParams& params, const Bytes& input) {
  return bytes_to_bigint(input) % params.modulus;
}

BigInt round_forward(const VdfParams& params, const BigInt& x) {
  const BigInt& p = params.modulus;
  BigInt w = flip(x, p);
  BigInt e = (p + 1) / 4;
  BigInt t = boost::multiprecision::powm(w, e, p);
  BigInt even_root = is_even(t) ? t : p - t;
  if (t * t % p == w) return even_root;   // w is a residue: even root of w
  return p - even_root;                   // otherwise: odd root of p - w
}

BigInt round_backward(const VdfParams& params, const BigInt& y) {
  const BigInt& p = params.modulus;
  BigInt sq = y * y % p;
  BigInt w = is_even(y) ? sq : (p - sq) % p;
  return flip(w, p);
}

VdfProof vdf_eval(const VdfParams& params, const Bytes& input, uint64_t steps,
                  const std::atomic<bool>* cancel) {
  const BigInt& p = params.modulus;
  BigInt e = (p + 1) / 4;
  BigInt x0 = reduce_input(params, input);
  BigInt y = x0;
  for (uint64_t i = 0; i < steps; i++) {
    if (cancel && (i & 0xff) == 0 && cancel->load(std::memory_order_relaxed)) throw Cancelled();
    BigInt w = flip(y, p);
    BigInt t = boost::multiprecision::powm(w, e, p);
    BigInt even_root = is_even(t) ? t : p - t;
    y = (t * t % p == w) ? even_root : p - even_root;
  }
  return {x0, y, steps};
}

bool vdf_verify(const VdfParams& params, const Bytes& input, const VdfProof& proof) {
  const BigInt& p = params.modulus;
  if (proof.input < 0 || proof.input >= p) return false;
  if (proof.output < 0 || proof.output >= p) return false;
  if (proof.input != reduce_input(params, input)) return false;
  BigInt x = proof.output;
  for (uint64_t i = 0; i < proof.steps; i++) {
    BigInt sq = x * x % p;
    BigInt w = is_even(x) ? sq : (p - sq) % p;
    x = flip(w, p);
  }
  return x == proof.input;
}

BigInt abstract_output(const VdfParams& params, const BigInt& input, uint64_t steps) {
  ByteWriter w;
  w.var_bytes(bigint_to_bytes(input));
  w.u64(steps);
  Hash256 h = hash_digest(tag::kVdfAbstract, w.bytes());
  return bytes_to_bigint(hash_to_bytes(h)) % params.modulus;
}

}  // namespace vixify::vdf
