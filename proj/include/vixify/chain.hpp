#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vixify/bytes.hpp"
#include "vixify/hash.hpp"
#include "vixify/params.hpp"
#include "vixify/vdf.hpp"
#include "vixify/vrf.hpp"

namespace vixify::chain {

using Address = std::array<uint8_t, 20>;

// First 20 bytes of the address-tagged digest of the public key.
Address address_from_public_key(const Bytes& public_key);
std::string address_to_hex(const Address& a);
Address address_from_hex(const std::string& hex);

struct Transaction {
  Address sender{};
  Address recipient{};
  uint64_t amount = 0;
  uint64_t nonce = 0;  // strictly increasing per sender, starting at 1
  Bytes signature;     // unique-signature VRF proof over the signing digest

  bool operator==(const Transaction&) const = default;
};

Hash256 transaction_signing_digest(const Transaction& tx);
Bytes serialize_transaction(const Transaction& tx);
// Signs with the VRF key; the proof embeds the public key, making the
// transaction self-contained.
Transaction sign_transaction(const Bytes& secret_key, Address recipient, uint64_t amount,
                             uint64_t nonce);
bool verify_transaction_signature(const Transaction& tx);

// Transaction-independent half of a block.
struct SectionA {
  Hash256 prev_hash_a{};
  Address miner_address{};
  vrf::VrfOutput slot_vrf;

  bool operator==(const SectionA&) const = default;
};

// Transaction-dependent half.
struct SectionB {
  Hash256 prev_hash_ab{};
  vdf::VdfProof vdf_proof;
  Hash256 merkle_root{};
  vrf::VrfOutput merkle_vrf;
  int64_t timestamp = 0;

  bool operator==(const SectionB&) const = default;
};

struct Block {
  uint64_t height = 0;
  SectionA section_a;
  SectionB section_b;
  std::vector<Transaction> transactions;

  bool operator==(const Block&) const = default;
};

inline bool operator==(const vrf::VrfOutput& a, const vrf::VrfOutput& b) {
  return a.hash == b.hash && a.proof == b.proof;
}
inline bool operator==(const vdf::VdfProof& a, const vdf::VdfProof& b) {
  return a.input == b.input && a.output == b.output && a.steps == b.steps;
}

// Binary Merkle tree over serialized transactions with leaf/node domain
// separation; an odd level duplicates its last node; the empty list maps to
// the empty-tree digest.
Hash256 merkle_root(const std::vector<Transaction>& transactions);

Hash256 hash_a(const SectionA& section_a);
Hash256 hash_ab(const Block& block);

Bytes serialize_block(const Block& block);
Block deserialize_block(const Bytes& bytes);  // throws std::invalid_argument

struct Ledger {
  std::map<Address, uint64_t> balances;
  std::map<Address, uint64_t> nonces;  // highest applied nonce per sender
  uint64_t total_supply = 0;

  bool operator==(const Ledger&) const = default;
};

Rational stake_fraction(const Ledger& ledger, const Address& address);

struct TxError : std::runtime_error {
  TxError(size_t index, const std::string& what)
      : std::runtime_error("transaction " + std::to_string(index) + ": " + what), index(index) {}
  size_t index;
};

// Applies transfers in order, then credits the block reward to the miner
// (minting it into the supply). Throws TxError naming the offending index.
Ledger apply_block(const Ledger& ledger, const Block& block, uint64_t reward);

// --- genesis ---------------------------------------------------------------

struct GenesisAllocation {
  Address address{};
  uint64_t amount = 0;
};

struct GenesisDoc {
  ConsensusParams params;
  std::vector<GenesisAllocation> allocations;
  int64_t timestamp = 0;
};

// The genesis block is the trust anchor: zero back-pointers, no proofs, and
// a merkle_root slot holding the digest of the allocation table.
Block genesis_block(const GenesisDoc& doc);
Ledger genesis_ledger(const GenesisDoc& doc);

std::string genesis_to_json(const GenesisDoc& doc);
GenesisDoc genesis_from_json(const std::string& text);  // throws with field path

// --- chain files -----------------------------------------------------------
//
// Layout: u32 block count, then per block a u32 length prefix and the block
// bytes, then a 32-byte trailer equal to hash_ab of the last block. The
// trailer lets corruption of any byte be detected even when the mutated
// field (e.g. the tip's timestamp) would otherwise still validate.

Bytes encode_chain(const std::vector<Block>& blocks);
std::vector<Block> decode_chain(const Bytes& bytes);  // throws std::invalid_argument
void write_chain_file(const std::string& path, const std::vector<Block>& blocks);
std::vector<Block> read_chain_file(const std::string& path);

}  // namespace vixify::chain
