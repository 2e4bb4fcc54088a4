#pragma once

#include "vixify/bytes.hpp"
#include "vixify/hash.hpp"

namespace vixify::vrf {

// Unique-signature VRF over the NIST P-256 group. The proof is a
// Chaum-Pedersen equality-of-discrete-log signature showing that
// gamma = sk * hash_to_curve(message); the VRF hash is derived from gamma
// alone, so it is unique per (key, message) even across proof randomness.
//
// Proof layouts (first byte of the embedded public key is 0x02/0x03):
//   full:  pk(33) || gamma(33) || c(32) || s(32)   — verifiable
//   lite:  pk(33) || gamma(33)                     — hash-carrying only
// The miner's public key travels inside the proof so that blocks are
// self-contained for verification.

struct VrfKeyPair {
  Bytes secret_key;  // 32-byte big-endian scalar
  Bytes public_key;  // 33-byte compressed point
};

struct VrfOutput {
  Hash256 hash{};  // the pseudorandom output
  Bytes proof;     // see layouts above
};

inline constexpr size_t kPublicKeySize = 33;
inline constexpr size_t kLiteProofSize = 66;
inline constexpr size_t kFullProofSize = 130;

// Deterministic: same seed, same pair. Throws std::invalid_argument if the
// seed is shorter than 32 bytes.
VrfKeyPair vrf_keygen(const Bytes& seed);

// Full evaluation with a verifiable proof. Throws on malformed keys.
VrfOutput vrf_eval(const Bytes& secret_key, const Bytes& message);

// Same hash as vrf_eval but with the lite proof; used where verification
// will be structural only (the hash/gamma binding is still checkable).
VrfOutput vrf_eval_lite(const Bytes& secret_key, const Bytes& message);

// Accepts exactly the outputs of vrf_eval under the paired key.
// Malformed inputs reject (never throw).
bool vrf_verify(const Bytes& public_key, const Bytes& message, const VrfOutput& out);

// Structural check shared by both proof layouts: the embedded public key
// matches and the hash equals the gamma-derived output hash. Does not
// check the discrete-log relation.
bool vrf_check_structure(const Bytes& public_key, const VrfOutput& out);

// Extract the embedded public key from a proof (empty if malformed).
Bytes proof_public_key(const Bytes& proof);

// h interpreted as a big-endian integer, reduced mod n. Throws if n < 1.
BigInt vrf_hash_to_int(const Hash256& h, const BigInt& n);
BigInt vrf_eval_int(const Bytes& secret_key, const Bytes& message, const BigInt& n);

}  // namespace vixify::vrf
