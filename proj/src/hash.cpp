#include "vixify/hash.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace vixify {

Hash256 sha256(const Bytes& data) {
  Hash256 out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != 32) {
    throw std::runtime_error("sha256 failed");
  }
  return out;
}

Hash256 hash_digest(uint8_t domain_tag, const Bytes& payload) {
  Bytes buf;
  buf.reserve(payload.size() + 1);
  buf.push_back(domain_tag);
  buf.insert(buf.end(), payload.begin(), payload.end());
  return sha256(buf);
}

Bytes hash_to_bytes(const Hash256& h) { return Bytes(h.begin(), h.end()); }

Hash256 hash_from_bytes(const Bytes& b) {
  if (b.size() != 32) throw std::invalid_argument("digest must be 32 bytes");
  Hash256 h;
  std::copy(b.begin(), b.end(), h.begin());
  return h;
}

std::string hash_to_hex(const Hash256& h) { return to_hex(hash_to_bytes(h)); }

Hash256 hash_xor(const Hash256& a, const Hash256& b) {
  Hash256 out;
  for (size_t i = 0; i < out.size(); i++) out[i] = a[i] ^ b[i];
  return out;
}

}  // namespace vixify
