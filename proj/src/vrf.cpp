#include "vixify/vrf.hpp"

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/err.h>
#include <openssl/obj_mac.h>

#include <memory>
#include <stdexcept>

namespace vixify::vrf {

namespace {

struct BnCtxDeleter {
  void operator()(BN_CTX* p) const { BN_CTX_free(p); }
};
struct BnDeleter {
  void operator()(BIGNUM* p) const { BN_free(p); }
};
struct PointDeleter {
  explicit PointDeleter(const EC_GROUP* g = nullptr) : group(g) {}
  void operator()(EC_POINT* p) const { EC_POINT_free(p); }
  const EC_GROUP* group;
};

using BnCtxPtr = std::unique_ptr<BN_CTX, BnCtxDeleter>;
using BnPtr = std::unique_ptr<BIGNUM, BnDeleter>;
using PointPtr = std::unique_ptr<EC_POINT, PointDeleter>;

const EC_GROUP* group() {
  static const EC_GROUP* g = [] {
    EC_GROUP* grp = EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1);
    if (!grp) throw std::runtime_error("P-256 group unavailable");
    return grp;
  }();
  return g;
}

BnPtr group_order(BN_CTX* ctx) {
  BnPtr n(BN_new());
  if (EC_GROUP_get_order(group(), n.get(), ctx) != 1) {
    throw std::runtime_error("group order unavailable");
  }
  return n;
}

BnPtr bn_from_bytes(const Bytes& b) {
  BnPtr x(BN_bin2bn(b.data(), static_cast<int>(b.size()), nullptr));
  if (!x) throw std::runtime_error("BN_bin2bn failed");
  return x;
}

Bytes bn_to_bytes32(const BIGNUM* x) {
  Bytes out(32, 0);
  if (BN_bn2binpad(x, out.data(), 32) != 32) throw std::runtime_error("BN_bn2binpad failed");
  return out;
}

Bytes point_to_bytes(const EC_POINT* p, BN_CTX* ctx) {
  Bytes out(kPublicKeySize, 0);
  size_t n = EC_POINT_point2oct(group(), p, POINT_CONVERSION_COMPRESSED, out.data(), out.size(),
                                ctx);
  if (n != kPublicKeySize) throw std::runtime_error("point encoding failed");
  return out;
}

// Returns nullptr when the bytes are not a valid compressed point.
PointPtr point_from_bytes(const Bytes& b, BN_CTX* ctx) {
  if (b.size() != kPublicKeySize || (b[0] != 0x02 && b[0] != 0x03)) return PointPtr(nullptr);
  PointPtr p(EC_POINT_new(group()));
  if (EC_POINT_oct2point(group(), p.get(), b.data(), b.size(), ctx) != 1) {
    return PointPtr(nullptr);
  }
  return p;
}

// Try-and-increment: interpret sha256(tag || pk || msg || ctr) as a
// compressed x-coordinate until it lands on the curve (~2 tries expected).
PointPtr hash_to_curve(const Bytes& public_key, const Bytes& message, BN_CTX* ctx) {
  for (int ctr = 0; ctr < 256; ctr++) {
    Bytes payload;
    payload.reserve(public_key.size() + message.size() + 1);
    payload.insert(payload.end(), public_key.begin(), public_key.end());
    payload.insert(payload.end(), message.begin(), message.end());
    payload.push_back(static_cast<uint8_t>(ctr));
    Hash256 x = hash_digest(tag::kVrfHashToCurve, payload);
    Bytes candidate;
    candidate.push_back(0x02);
    candidate.insert(candidate.end(), x.begin(), x.end());
    ERR_clear_error();
    if (PointPtr p = point_from_bytes(candidate, ctx)) return p;
  }
  throw std::runtime_error("hash_to_curve exhausted counter");
}

BnPtr scalar_from_hash(const Hash256& h, const BIGNUM* n, BN_CTX* ctx) {
  BnPtr x(BN_bin2bn(h.data(), static_cast<int>(h.size()), nullptr));
  if (!x) throw std::runtime_error("BN_bin2bn failed");
  BnPtr r(BN_new());
  if (BN_mod(r.get(), x.get(), n, ctx) != 1) throw std::runtime_error("BN_mod failed");
  return r;
}

Hash256 challenge_hash(const Bytes& pk, const Bytes& h_point, const Bytes& gamma, const Bytes& u,
                       const Bytes& v) {
  Bytes payload;
  payload.reserve(pk.size() + h_point.size() + gamma.size() + u.size() + v.size());
  for (const Bytes* part : {&pk, &h_point, &gamma, &u, &v}) {
    payload.insert(payload.end(), part->begin(), part->end());
  }
  return hash_digest(tag::kVrfChallenge, payload);
}

Hash256 output_hash(const Bytes& gamma) { return hash_digest(tag::kVrfOutput, gamma); }

struct SecretKey {
  BnPtr scalar;
  Bytes public_key;
};

SecretKey load_secret(const Bytes& secret_key, BN_CTX* ctx) {
  if (secret_key.size() != 32) throw std::invalid_argument("malformed secret key");
  BnPtr n = group_order(ctx);
  BnPtr sk = bn_from_bytes(secret_key);
  if (BN_is_zero(sk.get()) || BN_cmp(sk.get(), n.get()) >= 0) {
    throw std::invalid_argument("malformed secret key");
  }
  PointPtr pk(EC_POINT_new(group()));
  if (EC_POINT_mul(group(), pk.get(), sk.get(), nullptr, nullptr, ctx) != 1) {
    throw std::runtime_error("EC_POINT_mul failed");
  }
  return {std::move(sk), point_to_bytes(pk.get(), ctx)};
}

}  // namespace

VrfKeyPair vrf_keygen(const Bytes& seed) {
  if (seed.size() < 32) throw std::invalid_argument("seed too short");
  BnCtxPtr ctx(BN_CTX_new());
  BnPtr n = group_order(ctx.get());
  // Derive the scalar by hashing; re-hash with a counter in the negligible
  // case the candidate falls outside [1, n).
  for (uint8_t ctr = 0;; ctr++) {
    Bytes payload = seed;
    payload.push_back(ctr);
    Hash256 h = hash_digest(tag::kKeygen, payload);
    BnPtr sk = bn_from_bytes(hash_to_bytes(h));
    if (BN_is_zero(sk.get()) || BN_cmp(sk.get(), n.get()) >= 0) continue;
    Bytes sk_bytes = bn_to_bytes32(sk.get());
    SecretKey loaded = load_secret(sk_bytes, ctx.get());
    return {sk_bytes, loaded.public_key};
  }
}

namespace {

VrfOutput eval_impl(const Bytes& secret_key, const Bytes& message, bool full_proof) {
  BnCtxPtr ctx(BN_CTX_new());
  SecretKey key = load_secret(secret_key, ctx.get());
  PointPtr h_point = hash_to_curve(key.public_key, message, ctx.get());
  PointPtr gamma(EC_POINT_new(group()));
  if (EC_POINT_mul(group(), gamma.get(), nullptr, h_point.get(), key.scalar.get(), ctx.get()) !=
      1) {
    throw std::runtime_error("EC_POINT_mul failed");
  }
  Bytes gamma_bytes = point_to_bytes(gamma.get(), ctx.get());

  VrfOutput out;
  out.hash = output_hash(gamma_bytes);
  out.proof = key.public_key;
  out.proof.insert(out.proof.end(), gamma_bytes.begin(), gamma_bytes.end());
  if (!full_proof) return out;

  BnPtr n = group_order(ctx.get());
  // Deterministic nonce bound to the key and the curve point of the message.
  Bytes h_bytes = point_to_bytes(h_point.get(), ctx.get());
  Bytes nonce_payload = secret_key;
  nonce_payload.insert(nonce_payload.end(), h_bytes.begin(), h_bytes.end());
  BnPtr k = scalar_from_hash(hash_digest(tag::kVrfNonce, nonce_payload), n.get(), ctx.get());
  if (BN_is_zero(k.get())) BN_one(k.get());

  PointPtr u(EC_POINT_new(group()));
  PointPtr v(EC_POINT_new(group()));
  if (EC_POINT_mul(group(), u.get(), k.get(), nullptr, nullptr, ctx.get()) != 1 ||
      EC_POINT_mul(group(), v.get(), nullptr, h_point.get(), k.get(), ctx.get()) != 1) {
    throw std::runtime_error("EC_POINT_mul failed");
  }
  Hash256 c_hash = challenge_hash(key.public_key, h_bytes, gamma_bytes,
                                  point_to_bytes(u.get(), ctx.get()),
                                  point_to_bytes(v.get(), ctx.get()));
  BnPtr c = scalar_from_hash(c_hash, n.get(), ctx.get());
  // s = k + c * sk mod n
  BnPtr s(BN_new());
  if (BN_mod_mul(s.get(), c.get(), key.scalar.get(), n.get(), ctx.get()) != 1 ||
      BN_mod_add(s.get(), s.get(), k.get(), n.get(), ctx.get()) != 1) {
    throw std::runtime_error("scalar arithmetic failed");
  }
  Bytes c_bytes = bn_to_bytes32(c.get());
  Bytes s_bytes = bn_to_bytes32(s.get());
  out.proof.insert(out.proof.end(), c_bytes.begin(), c_bytes.end());
  out.proof.insert(out.proof.end(), s_bytes.begin(), s_bytes.end());
  return out;
}

}  // namespace

VrfOutput vrf_eval(const Bytes& secret_key, const Bytes& message) {
  return eval_impl(secret_key, message, true);
}

VrfOutput vrf_eval_lite(const Bytes& secret_key, const Bytes& message) {
  return eval_impl(secret_key, message, false);
}

Bytes proof_public_key(const Bytes& proof) {
  if (proof.size() != kLiteProofSize && proof.size() != kFullProofSize) return {};
  return Bytes(proof.begin(), proof.begin() + kPublicKeySize);
}

bool vrf_check_structure(const Bytes& public_key, const VrfOutput& out) {
  if (out.proof.size() != kLiteProofSize && out.proof.size() != kFullProofSize) return false;
  if (proof_public_key(out.proof) != public_key) return false;
  Bytes gamma(out.proof.begin() + kPublicKeySize, out.proof.begin() + kLiteProofSize);
  return output_hash(gamma) == out.hash;
}

bool vrf_verify(const Bytes& public_key, const Bytes& message, const VrfOutput& out) {
  if (out.proof.size() != kFullProofSize) return false;
  if (!vrf_check_structure(public_key, out)) return false;
  BnCtxPtr ctx(BN_CTX_new());
  PointPtr pk_point = point_from_bytes(public_key, ctx.get());
  if (!pk_point) return false;
  Bytes gamma_bytes(out.proof.begin() + kPublicKeySize, out.proof.begin() + kLiteProofSize);
  PointPtr gamma = point_from_bytes(gamma_bytes, ctx.get());
  if (!gamma) return false;

  BnPtr n = group_order(ctx.get());
  BnPtr c = bn_from_bytes(Bytes(out.proof.begin() + 66, out.proof.begin() + 98));
  BnPtr s = bn_from_bytes(Bytes(out.proof.begin() + 98, out.proof.end()));
  if (BN_cmp(c.get(), n.get()) >= 0 || BN_cmp(s.get(), n.get()) >= 0) return false;

  PointPtr h_point = hash_to_curve(public_key, message, ctx.get());
  Bytes h_bytes = point_to_bytes(h_point.get(), ctx.get());

  // u = s*G - c*pk ; v = s*H - c*gamma
  BnPtr neg_c(BN_new());
  if (BN_mod_sub(neg_c.get(), n.get(), c.get(), n.get(), ctx.get()) != 1) return false;
  PointPtr u(EC_POINT_new(group()));
  if (EC_POINT_mul(group(), u.get(), s.get(), pk_point.get(), neg_c.get(), ctx.get()) != 1) {
    return false;
  }
  PointPtr sh(EC_POINT_new(group()));
  PointPtr cg(EC_POINT_new(group()));
  PointPtr v(EC_POINT_new(group()));
  if (EC_POINT_mul(group(), sh.get(), nullptr, h_point.get(), s.get(), ctx.get()) != 1 ||
      EC_POINT_mul(group(), cg.get(), nullptr, gamma.get(), neg_c.get(), ctx.get()) != 1 ||
      EC_POINT_add(group(), v.get(), sh.get(), cg.get(), ctx.get()) != 1) {
    return false;
  }
  Hash256 expected = challenge_hash(public_key, h_bytes, gamma_bytes,
                                    point_to_bytes(u.get(), ctx.get()),
                                    point_to_bytes(v.get(), ctx.get()));
  BnPtr c_check = scalar_from_hash(expected, n.get(), ctx.get());
  return BN_cmp(c_check.get(), c.get()) == 0;
}

BigInt vrf_hash_to_int(const Hash256& h, const BigInt& n) {
  if (n < 1) throw std::invalid_argument("modulus must be positive");
  return bytes_to_bigint(hash_to_bytes(h)) % n;
}

BigInt vrf_eval_int(const Bytes& secret_key, const Bytes& message, const BigInt& n) {
  if (n < 1) throw std::invalid_argument("modulus must be positive");
  return vrf_hash_to_int(vrf_eval_lite(secret_key, message).hash, n);
}

}  // namespace vixify::vrf
