#include "vixify/chain.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <limits>

namespace vixify::chain {

using nlohmann::json;

Address address_from_public_key(const Bytes& public_key) {
  Hash256 h = hash_digest(tag::kAddress, public_key);
  Address a{};
  std::copy(h.begin(), h.begin() + a.size(), a.begin());
  return a;
}

std::string address_to_hex(const Address& a) { return to_hex(Bytes(a.begin(), a.end())); }

Address address_from_hex(const std::string& hex) {
  Bytes b = from_hex(hex);
  if (b.size() != 20) throw std::invalid_argument("address must be 20 bytes");
  Address a{};
  std::copy(b.begin(), b.end(), a.begin());
  return a;
}

namespace {

void put_address(ByteWriter& w, const Address& a) { w.raw(a.data(), a.size()); }

Address get_address(ByteReader& r) {
  Bytes b = r.raw(20);
  Address a{};
  std::copy(b.begin(), b.end(), a.begin());
  return a;
}

void put_hash(ByteWriter& w, const Hash256& h) { w.raw(h.data(), h.size()); }

Hash256 get_hash(ByteReader& r) { return hash_from_bytes(r.raw(32)); }

void put_vrf(ByteWriter& w, const vrf::VrfOutput& v) {
  put_hash(w, v.hash);
  w.var_bytes(v.proof);
}

vrf::VrfOutput get_vrf(ByteReader& r) {
  vrf::VrfOutput v;
  v.hash = get_hash(r);
  v.proof = r.var_bytes();
  return v;
}

Bytes tx_signing_bytes(const Transaction& tx) {
  ByteWriter w;
  put_address(w, tx.sender);
  put_address(w, tx.recipient);
  w.u64(tx.amount);
  w.u64(tx.nonce);
  return w.take();
}

Bytes section_a_bytes(const SectionA& a) {
  ByteWriter w;
  put_hash(w, a.prev_hash_a);
  put_address(w, a.miner_address);
  put_vrf(w, a.slot_vrf);
  return w.take();
}

Bytes section_b_bytes(const SectionB& b) {
  ByteWriter w;
  put_hash(w, b.prev_hash_ab);
  put_hash(w, b.merkle_root);
  put_vrf(w, b.merkle_vrf);
  w.var_bytes(bigint_to_bytes(b.vdf_proof.input));
  w.var_bytes(bigint_to_bytes(b.vdf_proof.output));
  w.u64(b.vdf_proof.steps);
  w.i64(b.timestamp);
  return w.take();
}

}  // namespace

Hash256 transaction_signing_digest(const Transaction& tx) {
  return hash_digest(tag::kTransaction, tx_signing_bytes(tx));
}

Bytes serialize_transaction(const Transaction& tx) {
  ByteWriter w;
  w.raw(tx_signing_bytes(tx));
  w.var_bytes(tx.signature);
  return w.take();
}

Transaction sign_transaction(const Bytes& secret_key, Address recipient, uint64_t amount,
                             uint64_t nonce) {
  Transaction tx;
  // The sender address comes from the signing key's public half, recovered
  // via a throwaway lite evaluation (proofs embed the public key).
  vrf::VrfOutput probe = vrf::vrf_eval_lite(secret_key, Bytes{});
  tx.sender = address_from_public_key(vrf::proof_public_key(probe.proof));
  tx.recipient = recipient;
  tx.amount = amount;
  tx.nonce = nonce;
  Hash256 digest = transaction_signing_digest(tx);
  tx.signature = vrf::vrf_eval(secret_key, hash_to_bytes(digest)).proof;
  return tx;
}

bool verify_transaction_signature(const Transaction& tx) {
  Bytes pk = vrf::proof_public_key(tx.signature);
  if (pk.empty()) return false;
  if (address_from_public_key(pk) != tx.sender) return false;
  if (tx.signature.size() != vrf::kFullProofSize) return false;
  Bytes gamma(tx.signature.begin() + vrf::kPublicKeySize,
              tx.signature.begin() + vrf::kLiteProofSize);
  vrf::VrfOutput out;
  out.hash = hash_digest(tag::kVrfOutput, gamma);
  out.proof = tx.signature;
  Hash256 digest = transaction_signing_digest(tx);
  return vrf::vrf_verify(pk, hash_to_bytes(digest), out);
}

Hash256 merkle_root(const std::vector<Transaction>& transactions) {
  if (transactions.empty()) return hash_digest(tag::kEmptyTree, {});
  std::vector<Hash256> level;
  level.reserve(transactions.size());
  for (const Transaction& tx : transactions) {
    level.push_back(hash_digest(tag::kLeaf, serialize_transaction(tx)));
  }
  while (level.size() > 1) {
    if (level.size() % 2 != 0) level.push_back(level.back());
    std::vector<Hash256> next;
    next.reserve(level.size() / 2);
    for (size_t i = 0; i < level.size(); i += 2) {
      Bytes pair;
      pair.insert(pair.end(), level[i].begin(), level[i].end());
      pair.insert(pair.end(), level[i + 1].begin(), level[i + 1].end());
      next.push_back(hash_digest(tag::kNode, pair));
    }
    level = std::move(next);
  }
  return level[0];
}

Hash256 hash_a(const SectionA& section_a) {
  return hash_digest(tag::kSectionA, section_a_bytes(section_a));
}

Hash256 hash_ab(const Block& block) {
  Bytes payload = section_a_bytes(block.section_a);
  Bytes b = section_b_bytes(block.section_b);
  payload.insert(payload.end(), b.begin(), b.end());
  return hash_digest(tag::kSectionAB, payload);
}

Bytes serialize_block(const Block& block) {
  ByteWriter w;
  w.u64(block.height);
  w.raw(section_a_bytes(block.section_a));
  w.raw(section_b_bytes(block.section_b));
  if (block.transactions.size() > std::numeric_limits<uint32_t>::max()) {
    throw std::invalid_argument("too many transactions");
  }
  w.u32(static_cast<uint32_t>(block.transactions.size()));
  for (const Transaction& tx : block.transactions) w.raw(serialize_transaction(tx));
  return w.take();
}

Block deserialize_block(const Bytes& bytes) {
  try {
    ByteReader r(bytes);
    Block b;
    b.height = r.u64();
    b.section_a.prev_hash_a = get_hash(r);
    b.section_a.miner_address = get_address(r);
    b.section_a.slot_vrf = get_vrf(r);
    b.section_b.prev_hash_ab = get_hash(r);
    b.section_b.merkle_root = get_hash(r);
    b.section_b.merkle_vrf = get_vrf(r);
    b.section_b.vdf_proof.input = bytes_to_bigint_strict(r.var_bytes());
    b.section_b.vdf_proof.output = bytes_to_bigint_strict(r.var_bytes());
    b.section_b.vdf_proof.steps = r.u64();
    b.section_b.timestamp = r.i64();
    uint32_t tx_count = r.u32();
    // each transaction occupies well over one byte, so this bounds hostile counts
    b.transactions.reserve(std::min<size_t>(tx_count, r.remaining()));
    for (uint32_t i = 0; i < tx_count; i++) {
      Transaction tx;
      tx.sender = get_address(r);
      tx.recipient = get_address(r);
      tx.amount = r.u64();
      tx.nonce = r.u64();
      tx.signature = r.var_bytes();
      b.transactions.push_back(std::move(tx));
    }
    if (!r.done()) throw std::invalid_argument("trailing bytes after block");
    return b;
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("truncated block");
  }
}

Rational stake_fraction(const Ledger& ledger, const Address& address) {
  if (ledger.total_supply == 0) return Rational(0);
  auto it = ledger.balances.find(address);
  if (it == ledger.balances.end()) return Rational(0);
  return Rational(BigInt(it->second), BigInt(ledger.total_supply));
}

Ledger apply_block(const Ledger& ledger, const Block& block, uint64_t reward) {
  Ledger next = ledger;
  for (size_t i = 0; i < block.transactions.size(); i++) {
    const Transaction& tx = block.transactions[i];
    if (!verify_transaction_signature(tx)) throw TxError(i, "bad signature");
    uint64_t expected = 1;
    if (auto it = next.nonces.find(tx.sender); it != next.nonces.end()) expected = it->second + 1;
    if (tx.nonce != expected) throw TxError(i, "bad nonce");
    auto sender_it = next.balances.find(tx.sender);
    uint64_t sender_balance = sender_it == next.balances.end() ? 0 : sender_it->second;
    if (tx.amount > sender_balance) throw TxError(i, "insufficient balance");
    // debit before reading the recipient so self-transfers conserve value
    next.balances[tx.sender] = sender_balance - tx.amount;
    uint64_t recipient_balance = next.balances[tx.recipient];
    if (recipient_balance > std::numeric_limits<uint64_t>::max() - tx.amount) {
      throw TxError(i, "balance overflow");
    }
    next.balances[tx.recipient] = recipient_balance + tx.amount;
    next.nonces[tx.sender] = tx.nonce;
  }
  if (next.total_supply > std::numeric_limits<uint64_t>::max() - reward) {
    throw std::overflow_error("supply overflow");
  }
  uint64_t miner_balance = next.balances[block.section_a.miner_address];
  if (miner_balance > std::numeric_limits<uint64_t>::max() - reward) {
    throw std::overflow_error("balance overflow");
  }
  next.balances[block.section_a.miner_address] = miner_balance + reward;
  next.total_supply += reward;
  return next;
}

// --- genesis ---------------------------------------------------------------

namespace {

Bytes allocations_bytes(const GenesisDoc& doc) {
  ByteWriter w;
  w.u32(static_cast<uint32_t>(doc.allocations.size()));
  for (const GenesisAllocation& a : doc.allocations) {
    put_address(w, a.address);
    w.u64(a.amount);
  }
  return w.take();
}

}  // namespace

Block genesis_block(const GenesisDoc& doc) {
  Block b;
  b.height = 0;
  b.section_b.merkle_root = hash_digest(tag::kGenesisAlloc, allocations_bytes(doc));
  b.section_b.timestamp = doc.timestamp;
  return b;
}

Ledger genesis_ledger(const GenesisDoc& doc) {
  Ledger ledger;
  for (const GenesisAllocation& a : doc.allocations) {
    ledger.balances[a.address] += a.amount;
    ledger.total_supply += a.amount;
  }
  return ledger;
}

namespace {

std::string rational_str(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational field_rational(const json& j, const std::string& key, const Rational& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    if (j[key].is_number_integer()) return Rational(BigInt(j[key].get<int64_t>()));
    return parse_rational(j[key].get<std::string>());
  } catch (const std::exception& e) {
    throw std::invalid_argument(key + ": " + e.what());
  }
}

template <typename T>
T field_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j[key].get<T>();
  } catch (const std::exception& e) {
    throw std::invalid_argument(key + ": " + e.what());
  }
}

}  // namespace

json params_to_json_obj(const ConsensusParams& p);
ConsensusParams params_from_json_obj(const json& j);

json params_to_json_obj(const ConsensusParams& p) {
  json j;
  j["q0"] = rational_str(p.q0);
  j["r0"] = rational_str(p.r0);
  j["alpha"] = rational_str(p.alpha);
  j["beta"] = rational_str(p.beta);
  j["target_block_time"] = p.target_block_time;
  j["window_a"] = p.window_a;
  j["window_b"] = p.window_b;
  j["q_min"] = rational_str(p.q_min);
  j["q_max"] = rational_str(p.q_max);
  j["r_min"] = rational_str(p.r_min);
  j["r_max"] = rational_str(p.r_max);
  j["step_ceiling"] = p.step_ceiling;
  j["block_reward"] = p.block_reward;
  j["bind_merkle"] = p.bind_merkle;
  j["alg5_literal"] = p.alg5_literal;
  j["timestamp_max_skew"] = p.timestamp_max_skew;
  j["timestamp_median_window"] = p.timestamp_median_window;
  j["vdf_bits"] = p.vdf_bits;
  if (!p.vdf_modulus_hex.empty()) j["vdf_modulus"] = p.vdf_modulus_hex;
  return j;
}

ConsensusParams params_from_json_obj(const json& j) {
  ConsensusParams d;  // defaults
  ConsensusParams p;
  p.q0 = field_rational(j, "q0", d.q0);
  p.r0 = field_rational(j, "r0", d.r0);
  p.alpha = field_rational(j, "alpha", d.alpha);
  p.beta = field_rational(j, "beta", d.beta);
  p.target_block_time = field_or<int64_t>(j, "target_block_time", d.target_block_time);
  p.window_a = field_or<int>(j, "window_a", d.window_a);
  p.window_b = field_or<int>(j, "window_b", d.window_b);
  p.q_min = field_rational(j, "q_min", d.q_min);
  p.q_max = field_rational(j, "q_max", d.q_max);
  p.r_min = field_rational(j, "r_min", d.r_min);
  p.r_max = field_rational(j, "r_max", d.r_max);
  p.step_ceiling = field_or<uint64_t>(j, "step_ceiling", d.step_ceiling);
  p.block_reward = field_or<uint64_t>(j, "block_reward", d.block_reward);
  p.bind_merkle = field_or<bool>(j, "bind_merkle", d.bind_merkle);
  p.alg5_literal = field_or<bool>(j, "alg5_literal", d.alg5_literal);
  p.timestamp_max_skew = field_or<int64_t>(j, "timestamp_max_skew", d.timestamp_max_skew);
  p.timestamp_median_window =
      field_or<int>(j, "timestamp_median_window", d.timestamp_median_window);
  p.vdf_bits = field_or<int>(j, "vdf_bits", d.vdf_bits);
  p.vdf_modulus_hex = field_or<std::string>(j, "vdf_modulus", d.vdf_modulus_hex);
  if (p.window_a < 1) throw std::invalid_argument("window_a: must be >= 1");
  if (p.window_b < 1) throw std::invalid_argument("window_b: must be >= 1");
  if (p.alpha < 0 || p.alpha >= 1) throw std::invalid_argument("alpha: must be in [0, 1)");
  if (p.beta < 0 || p.beta >= 1) throw std::invalid_argument("beta: must be in [0, 1)");
  if (p.q0 <= 0) throw std::invalid_argument("q0: must be positive");
  if (p.r0 <= 1) throw std::invalid_argument("r0: must exceed 1");
  return p;
}

std::string genesis_to_json(const GenesisDoc& doc) {
  json j = params_to_json_obj(doc.params);
  j["genesis_timestamp"] = doc.timestamp;
  json allocs = json::array();
  for (const GenesisAllocation& a : doc.allocations) {
    allocs.push_back({{"address", address_to_hex(a.address)}, {"amount", a.amount}});
  }
  j["allocations"] = allocs;
  return j.dump(2) + "\n";
}

GenesisDoc genesis_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("genesis: malformed JSON: ") + e.what());
  }
  GenesisDoc doc;
  try {
    doc.params = params_from_json_obj(j);
    doc.timestamp = field_or<int64_t>(j, "genesis_timestamp", 0);
    if (!j.contains("allocations") || !j["allocations"].is_array()) {
      throw std::invalid_argument("allocations: required array");
    }
    for (const json& a : j["allocations"]) {
      GenesisAllocation alloc;
      alloc.address = address_from_hex(a.at("address").get<std::string>());
      alloc.amount = a.at("amount").get<uint64_t>();
      doc.allocations.push_back(alloc);
    }
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("genesis: ") + e.what());
  }
  return doc;
}

// --- chain files -----------------------------------------------------------

Bytes encode_chain(const std::vector<Block>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("cannot encode an empty chain");
  ByteWriter w;
  w.u32(static_cast<uint32_t>(blocks.size()));
  for (const Block& b : blocks) {
    Bytes bytes = serialize_block(b);
    w.u32(static_cast<uint32_t>(bytes.size()));
    w.raw(bytes);
  }
  put_hash(w, hash_ab(blocks.back()));
  return w.take();
}

std::vector<Block> decode_chain(const Bytes& bytes) {
  try {
    ByteReader r(bytes);
    uint32_t count = r.u32();
    if (count == 0) throw std::invalid_argument("empty chain");
    std::vector<Block> blocks;
    // each block occupies well over one byte, so this bounds hostile counts
    blocks.reserve(std::min<size_t>(count, r.remaining()));
    for (uint32_t i = 0; i < count; i++) {
      uint32_t len = r.u32();
      blocks.push_back(deserialize_block(r.raw(len)));
    }
    Hash256 trailer = get_hash(r);
    if (!r.done()) throw std::invalid_argument("trailing bytes after chain");
    if (trailer != hash_ab(blocks.back())) throw std::invalid_argument("chain trailer mismatch");
    return blocks;
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("truncated chain file");
  }
}

void write_chain_file(const std::string& path, const std::vector<Block>& blocks) {
  Bytes bytes = encode_chain(blocks);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<Block> read_chain_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_chain(bytes);
}

}  // namespace vixify::chain
