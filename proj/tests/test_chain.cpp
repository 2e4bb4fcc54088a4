#include "doctest.h"

#include "vixify/chain.hpp"
#include "vixify/hash.hpp"
#include "vixify/vrf.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

using namespace vixify;
using namespace vixify::chain;

namespace {

Bytes seed_of(const std::string& label) {
  return hash_to_bytes(sha256(Bytes(label.begin(), label.end())));
}

vrf::VrfKeyPair key_of(const std::string& label) { return vrf::vrf_keygen(seed_of(label)); }

Transaction tx_between(const std::string& from, const std::string& to, uint64_t amount,
                       uint64_t nonce) {
  auto sender = key_of(from);
  auto recipient = key_of(to);
  return sign_transaction(sender.secret_key, address_from_public_key(recipient.public_key),
                          amount, nonce);
}

Block sample_block(uint64_t height, const std::vector<Transaction>& txs) {
  auto kp = key_of("sample-miner");
  Block b;
  b.height = height;
  b.section_a.prev_hash_a = sha256(Bytes{'p', 'a'});
  b.section_a.miner_address = address_from_public_key(kp.public_key);
  b.section_a.slot_vrf = vrf::vrf_eval(kp.secret_key, Bytes{'s'});
  b.section_b.prev_hash_ab = sha256(Bytes{'p', 'b'});
  b.section_b.vdf_proof.input = 12345;
  b.section_b.vdf_proof.output = 67890;
  b.section_b.vdf_proof.steps = 42;
  b.section_b.merkle_root = merkle_root(txs);
  b.section_b.merkle_vrf = vrf::vrf_eval(kp.secret_key, Bytes{'m'});
  b.section_b.timestamp = 1700000123;
  b.transactions = txs;
  return b;
}

}  // namespace

TEST_CASE("addresses") {
  auto kp = key_of("addr");
  Address a = address_from_public_key(kp.public_key);
  std::string hex = address_to_hex(a);
  CHECK(hex.size() == 40);
  CHECK(address_from_hex(hex) == a);
  CHECK_THROWS_AS(address_from_hex("abcd"), std::invalid_argument);
  CHECK(address_from_public_key(key_of("addr2").public_key) != a);
}

TEST_CASE("transaction signatures") {
  auto kp = key_of("payer");
  Address to = address_from_public_key(key_of("payee").public_key);
  Transaction tx = sign_transaction(kp.secret_key, to, 25, 1);
  CHECK(tx.sender == address_from_public_key(kp.public_key));
  CHECK(tx.amount == 25);
  CHECK(tx.nonce == 1);
  CHECK(verify_transaction_signature(tx));

  SUBCASE("any field mutation invalidates") {
    Transaction bad = tx;
    bad.amount = 26;
    CHECK_FALSE(verify_transaction_signature(bad));
    bad = tx;
    bad.nonce = 2;
    CHECK_FALSE(verify_transaction_signature(bad));
    bad = tx;
    bad.recipient[0] ^= 1;
    CHECK_FALSE(verify_transaction_signature(bad));
    bad = tx;
    bad.sender[0] ^= 1;  // sender no longer matches the key in the proof
    CHECK_FALSE(verify_transaction_signature(bad));
    bad = tx;
    bad.signature[40] ^= 1;
    CHECK_FALSE(verify_transaction_signature(bad));
    bad = tx;
    bad.signature.clear();
    CHECK_FALSE(verify_transaction_signature(bad));
  }
}

TEST_CASE("merkle root matches a hand-built three-leaf tree") {
  std::vector<Transaction> txs{tx_between("a", "b", 1, 1), tx_between("b", "c", 2, 1),
                               tx_between("c", "a", 3, 1)};
  auto leaf = [](const Transaction& tx) {
    return hash_digest(tag::kLeaf, serialize_transaction(tx));
  };
  auto node = [](const Hash256& l, const Hash256& r) {
    Bytes cat = hash_to_bytes(l);
    Bytes rb = hash_to_bytes(r);
    cat.insert(cat.end(), rb.begin(), rb.end());
    return hash_digest(tag::kNode, cat);
  };
  Hash256 l0 = leaf(txs[0]), l1 = leaf(txs[1]), l2 = leaf(txs[2]);
  Hash256 n01 = node(l0, l1);
  Hash256 n22 = node(l2, l2);  // odd level duplicates its last node
  CHECK(merkle_root(txs) == node(n01, n22));

  CHECK(merkle_root({}) == hash_digest(tag::kEmptyTree, {}));
  CHECK(merkle_root({txs[0]}) == l0);

  // swapping leaves moves the root
  std::vector<Transaction> swapped{txs[1], txs[0], txs[2]};
  CHECK(merkle_root(swapped) != merkle_root(txs));
}

TEST_CASE("transaction-independent section ignores transactions") {
  std::vector<Transaction> txs{tx_between("a", "b", 5, 1)};
  Block b1 = sample_block(3, txs);
  Block b2 = b1;
  b2.transactions[0] = tx_between("a", "b", 6, 1);
  b2.section_b.merkle_root = merkle_root(b2.transactions);

  CHECK(hash_a(b1.section_a) == hash_a(b2.section_a));   // unaffected by txs
  CHECK(hash_ab(b1) != hash_ab(b2));                      // committed via section b

  // timestamp lives in section b only
  Block b3 = b1;
  b3.section_b.timestamp++;
  CHECK(hash_a(b3.section_a) == hash_a(b1.section_a));
  CHECK(hash_ab(b3) != hash_ab(b1));

  // miner identity lives in section a
  Block b4 = b1;
  b4.section_a.miner_address[0] ^= 1;
  CHECK(hash_a(b4.section_a) != hash_a(b1.section_a));
}

TEST_CASE("block serialization round trip") {
  std::vector<Transaction> txs{tx_between("a", "b", 5, 1), tx_between("b", "a", 2, 1)};
  Block b = sample_block(7, txs);
  Bytes bytes = serialize_block(b);
  Block back = deserialize_block(bytes);
  CHECK(back == b);
  CHECK(hash_ab(back) == hash_ab(b));

  SUBCASE("truncation throws") {
    for (size_t cut : {size_t{1}, bytes.size() / 2, bytes.size() - 1}) {
      Bytes trunc(bytes.begin(), bytes.begin() + cut);
      CHECK_THROWS_AS(deserialize_block(trunc), std::invalid_argument);
    }
  }
  SUBCASE("trailing garbage throws") {
    Bytes extra = bytes;
    extra.push_back(0);
    CHECK_THROWS_AS(deserialize_block(extra), std::invalid_argument);
  }
}

TEST_CASE("apply_block moves coins and mints the reward") {
  auto payer = key_of("payer");
  auto payee = key_of("payee");
  Address payer_addr = address_from_public_key(payer.public_key);
  Address payee_addr = address_from_public_key(payee.public_key);

  Ledger ledger;
  ledger.balances[payer_addr] = 100;
  ledger.total_supply = 100;

  std::vector<Transaction> txs{sign_transaction(payer.secret_key, payee_addr, 30, 1)};
  Block b = sample_block(1, txs);
  Ledger next = apply_block(ledger, b, 10);

  CHECK(next.balances.at(payer_addr) == 70);
  CHECK(next.balances.at(payee_addr) == 30);
  CHECK(next.balances.at(b.section_a.miner_address) == 10);
  CHECK(next.total_supply == 110);
  CHECK(next.nonces.at(payer_addr) == 1);
  // input ledger untouched
  CHECK(ledger.balances.at(payer_addr) == 100);

  SUBCASE("stake fractions") {
    CHECK(stake_fraction(next, payer_addr) == Rational(70, 110));
    CHECK(stake_fraction(next, payee_addr) == Rational(30, 110));
    Address stranger{};
    CHECK(stake_fraction(next, stranger) == Rational(0));
  }

  SUBCASE("self-transfer conserves the balance") {
    std::vector<Transaction> self{sign_transaction(payer.secret_key, payer_addr, 40, 1)};
    Block sb = sample_block(1, self);
    Ledger after = apply_block(ledger, sb, 0);
    CHECK(after.balances.at(payer_addr) == 100);
    CHECK(after.total_supply == 100);
  }
}

TEST_CASE("apply_block rejects bad transactions by index") {
  auto payer = key_of("payer");
  Address payer_addr = address_from_public_key(payer.public_key);
  Address payee_addr = address_from_public_key(key_of("payee").public_key);

  Ledger ledger;
  ledger.balances[payer_addr] = 100;
  ledger.total_supply = 100;

  auto expect_txerror = [](const Ledger& l, const Block& b, size_t index) {
    try {
      apply_block(l, b, 0);
      FAIL("expected TxError");
    } catch (const TxError& e) {
      CHECK(e.index == index);
    }
  };

  SUBCASE("bad signature") {
    std::vector<Transaction> txs{sign_transaction(payer.secret_key, payee_addr, 1, 1)};
    txs[0].amount = 2;
    Block b = sample_block(1, txs);
    expect_txerror(ledger, b, 0);
  }
  SUBCASE("wrong nonce") {
    std::vector<Transaction> txs{sign_transaction(payer.secret_key, payee_addr, 1, 2)};
    Block b = sample_block(1, txs);
    expect_txerror(ledger, b, 0);
  }
  SUBCASE("nonce reuse inside one block") {
    std::vector<Transaction> txs{sign_transaction(payer.secret_key, payee_addr, 1, 1),
                                 sign_transaction(payer.secret_key, payee_addr, 1, 1)};
    Block b = sample_block(1, txs);
    expect_txerror(ledger, b, 1);
  }
  SUBCASE("insufficient balance") {
    std::vector<Transaction> txs{sign_transaction(payer.secret_key, payee_addr, 101, 1)};
    Block b = sample_block(1, txs);
    expect_txerror(ledger, b, 0);
  }
  SUBCASE("sequential spends settle in order") {
    std::vector<Transaction> txs{sign_transaction(payer.secret_key, payee_addr, 60, 1),
                                 sign_transaction(payer.secret_key, payee_addr, 60, 2)};
    Block b = sample_block(1, txs);
    expect_txerror(ledger, b, 1);  // second spend overdraws
  }
}

TEST_CASE("reward overflow is rejected") {
  Ledger ledger;
  ledger.total_supply = UINT64_MAX - 5;
  Block b = sample_block(1, {});
  CHECK_THROWS_AS(apply_block(ledger, b, 10), std::overflow_error);
}

TEST_CASE("genesis documents") {
  GenesisDoc doc;
  doc.params.q0 = 500;
  doc.params.r0 = parse_rational("3/2");
  doc.params.vdf_bits = 64;
  doc.timestamp = 1700000000;
  auto kp = key_of("genesis-holder");
  doc.allocations.push_back({address_from_public_key(kp.public_key), 1000});

  Block g = genesis_block(doc);
  CHECK(g.height == 0);
  CHECK(g.section_a.prev_hash_a == zero_hash());
  CHECK(g.section_b.prev_hash_ab == zero_hash());
  CHECK(g.section_b.timestamp == doc.timestamp);
  CHECK(g.transactions.empty());

  Ledger l = genesis_ledger(doc);
  CHECK(l.total_supply == 1000);
  CHECK(l.balances.at(doc.allocations[0].address) == 1000);

  SUBCASE("json round trip") {
    std::string text = genesis_to_json(doc);
    GenesisDoc back = genesis_from_json(text);
    CHECK(back.timestamp == doc.timestamp);
    CHECK(back.params.q0 == doc.params.q0);
    CHECK(back.params.r0 == doc.params.r0);
    CHECK(back.params.vdf_bits == doc.params.vdf_bits);
    REQUIRE(back.allocations.size() == 1);
    CHECK(back.allocations[0].address == doc.allocations[0].address);
    CHECK(back.allocations[0].amount == 1000);
    CHECK(hash_ab(genesis_block(back)) == hash_ab(g));
  }
  SUBCASE("json errors name the field") {
    CHECK_THROWS_WITH_AS(genesis_from_json("{}"), doctest::Contains("allocations"),
                         std::invalid_argument);
    CHECK_THROWS_AS(genesis_from_json("not json"), std::invalid_argument);
  }
  SUBCASE("different allocations give different genesis identity") {
    GenesisDoc doc2 = doc;
    doc2.allocations[0].amount = 999;
    CHECK(hash_ab(genesis_block(doc2)) != hash_ab(g));
  }
}

TEST_CASE("chain files") {
  namespace fs = std::filesystem;
  std::vector<Block> blocks{sample_block(0, {}), sample_block(1, {tx_between("a", "b", 1, 1)})};
  fs::path path = fs::temp_directory_path() / "vixify_test_chain.bin";
  write_chain_file(path.string(), blocks);
  std::vector<Block> back = read_chain_file(path.string());
  REQUIRE(back.size() == 2);
  CHECK(back[0] == blocks[0]);
  CHECK(back[1] == blocks[1]);

  SUBCASE("no byte flip survives decoding unnoticed") {
    Bytes bytes = encode_chain(blocks);
    // every mutation must either fail to decode or decode to different
    // content (which chain verification then rejects); none may round-trip
    // back to the original blocks
    for (size_t i = 0; i < bytes.size(); ++i) {
      Bytes bad = bytes;
      bad[i] ^= 0x20;
      bool detected;
      try {
        detected = decode_chain(bad) != blocks;
      } catch (const std::invalid_argument&) {
        detected = true;
      }
      CHECK(detected);
    }
    // the trailer itself always rejects
    for (size_t i = bytes.size() - 32; i < bytes.size(); ++i) {
      Bytes bad = bytes;
      bad[i] ^= 0x01;
      CHECK_THROWS_AS(decode_chain(bad), std::invalid_argument);
    }
    Bytes trunc(bytes.begin(), bytes.end() - 1);
    CHECK_THROWS_AS(decode_chain(trunc), std::invalid_argument);
    Bytes extra = bytes;
    extra.push_back(0);
    CHECK_THROWS_AS(decode_chain(extra), std::invalid_argument);
  }
  SUBCASE("empty chains are rejected outright") {
    CHECK_THROWS_AS(encode_chain({}), std::invalid_argument);
  }
  fs::remove(path);
}
