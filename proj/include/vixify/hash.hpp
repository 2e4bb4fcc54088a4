#pragma once

#include <array>
#include <cstdint>

#include "vixify/bytes.hpp"

namespace vixify {

using Hash256 = std::array<uint8_t, 32>;

// One-byte domain separation tags. Every hash in the system is
// sha256(tag || payload); tags keep unrelated domains from colliding.
namespace tag {
constexpr uint8_t kLeaf = 0x00;
constexpr uint8_t kNode = 0x01;
constexpr uint8_t kEmptyTree = 0x02;
constexpr uint8_t kSectionA = 0x03;
constexpr uint8_t kSectionAB = 0x04;
constexpr uint8_t kAddress = 0x05;
constexpr uint8_t kTransaction = 0x06;
constexpr uint8_t kPowBaseline = 0x07;
constexpr uint8_t kGenesisAlloc = 0x08;
constexpr uint8_t kKeygen = 0x10;
constexpr uint8_t kVrfHashToCurve = 0x11;
constexpr uint8_t kVrfChallenge = 0x12;
constexpr uint8_t kVrfOutput = 0x13;
constexpr uint8_t kVrfNonce = 0x14;
constexpr uint8_t kVdfSetup = 0x20;
constexpr uint8_t kVdfAbstract = 0x21;
constexpr uint8_t kSimRng = 0x30;
constexpr uint8_t kSimKey = 0x31;
}  // namespace tag

Hash256 sha256(const Bytes& data);
Hash256 hash_digest(uint8_t domain_tag, const Bytes& payload);

Bytes hash_to_bytes(const Hash256& h);
Hash256 hash_from_bytes(const Bytes& b);  // throws unless exactly 32 bytes
std::string hash_to_hex(const Hash256& h);

// Bytewise XOR of two digests.
Hash256 hash_xor(const Hash256& a, const Hash256& b);

constexpr Hash256 zero_hash() { return Hash256{}; }

}  // namespace vixify
