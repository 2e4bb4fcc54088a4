// Regenerates testdata/vectors.json, the committed golden vectors that
// tests/test_vectors.cpp replays. Run after an intentional format change:
//   ./gen-vectors [out_path]

#include <fstream>
#include <iostream>

#include "json.hpp"
#include "vixify/chain.hpp"
#include "vixify/consensus.hpp"

using namespace vixify;
using nlohmann::json;

int main(int argc, char** argv) {
  std::string out_path = argc > 1 ? argv[1] : "testdata/vectors.json";
  json root;

  // VRF: deterministic keys, hashes, and full proofs.
  for (int i = 0; i < 3; ++i) {
    Bytes seed = hash_to_bytes(sha256({uint8_t('v'), uint8_t('r'), uint8_t('f'), uint8_t(i)}));
    auto pair = vrf::vrf_keygen(seed);
    static const std::vector<Bytes> messages = {
        {}, {'a', 'b', 'c'}, Bytes(64, 0x5a)};
    const Bytes& msg = messages[i];
    auto out = vrf::vrf_eval(pair.secret_key, msg);
    json v;
    v["seed"] = to_hex(seed);
    v["message"] = to_hex(msg);
    v["public_key"] = to_hex(pair.public_key);
    v["hash"] = hash_to_hex(out.hash);
    v["proof"] = to_hex(out.proof);
    v["hash_mod_97"] = vrf::vrf_hash_to_int(out.hash, 97).convert_to<uint64_t>();
    root["vrf"].push_back(std::move(v));
  }

  // Delay function: deterministic modulus, forward runs, plus the tiny
  // hand-checkable field.
  {
    auto params = vdf::vdf_setup(64);
    json v;
    v["bits"] = 64;
    v["modulus"] = params.modulus.str();
    Bytes input = {'a', 'b', 'c'};
    for (uint64_t steps : {uint64_t(1), uint64_t(100), uint64_t(10000)}) {
      auto proof = vdf::vdf_eval(params, input, steps);
      json e;
      e["input"] = to_hex(input);
      e["steps"] = steps;
      e["x0"] = proof.input.str();
      e["y"] = proof.output.str();
      v["evals"].push_back(std::move(e));
    }
    root["vdf"].push_back(std::move(v));
  }
  {
    vdf::VdfParams tiny{BigInt(23), 5};
    json v;
    v["modulus"] = "23";
    json e;
    e["x0"] = "5";
    e["steps"] = 1;
    e["y"] = vdf::vdf_eval(tiny, bigint_to_bytes(BigInt(5)), 1).output.str();
    v["evals"].push_back(std::move(e));
    root["vdf"].push_back(std::move(v));
  }

  // Step schedule: includes both hand-checked reference points.
  for (auto [q, r, slot] : {std::tuple{"100", "2", uint64_t(3)},
                            std::tuple{"1000", "101/100", uint64_t(10)},
                            std::tuple{"1000", "3/2", uint64_t(7)},
                            std::tuple{"16", "1", uint64_t(999)}}) {
    json e;
    e["q"] = q;
    e["r"] = r;
    e["slot"] = slot;
    e["steps"] =
        consensus::compute_steps(parse_rational(q), parse_rational(r), slot, uint64_t(1) << 40);
    root["steps"].push_back(std::move(e));
  }

  // Transactions and tree roots under a fixed key.
  {
    Bytes seed = hash_to_bytes(sha256({'t', 'x'}));
    auto pair = vrf::vrf_keygen(seed);
    auto addr = chain::address_from_public_key(pair.public_key);
    std::vector<chain::Transaction> txs;
    for (uint64_t n = 1; n <= 3; ++n)
      txs.push_back(chain::sign_transaction(pair.secret_key, addr, n * 10, n));
    json v;
    v["address"] = chain::address_to_hex(addr);
    v["empty_root"] = hash_to_hex(chain::merkle_root({}));
    v["one_root"] = hash_to_hex(chain::merkle_root({txs[0]}));
    v["three_root"] = hash_to_hex(chain::merkle_root(txs));
    v["tx0_bytes"] = to_hex(chain::serialize_transaction(txs[0]));
    root["chain"] = std::move(v);
  }

  std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
  if (!f) {
    std::cerr << "cannot write " << out_path << "\n";
    return 1;
  }
  f << root.dump(2) << "\n";
  std::cout << "wrote " << out_path << "\n";
  return 0;
}
