#include "vixify/cli.hpp"

#include <sys/stat.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <openssl/rand.h>

#include "json.hpp"
#include "vixify/chain.hpp"
#include "vixify/consensus.hpp"
#include "vixify/simnet.hpp"

namespace vixify::cli {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

vdf::VdfParams vdf_params_for(const ConsensusParams& params) {
  if (!params.vdf_modulus_hex.empty()) {
    vdf::VdfParams p;
    p.modulus = BigInt(std::string("0x") + params.vdf_modulus_hex);
    p.bit_length = int(boost::multiprecision::msb(p.modulus)) + 1;
    return p;
  }
  return vdf::vdf_setup(params.vdf_bits);
}

}  // namespace

int cmd_keygen(const std::string& seed_hex, const std::string& out_path) {
  Bytes seed;
  if (!seed_hex.empty()) {
    if (seed_hex.size() != 64) {
      std::cerr << "error: --seed must be exactly 64 hex characters\n";
      return 2;
    }
    try {
      seed = from_hex(seed_hex);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  } else {
    seed.resize(32);
    if (RAND_bytes(seed.data(), int(seed.size())) != 1) {
      std::cerr << "error: system randomness unavailable\n";
      return 1;
    }
  }

  auto pair = vrf::vrf_keygen(seed);
  auto address = chain::address_from_public_key(pair.public_key);

  nlohmann::json j;
  j["public_key"] = to_hex(pair.public_key);
  j["secret_key"] = to_hex(pair.secret_key);
  j["address"] = chain::address_to_hex(address);

  std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
  if (!f) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return 2;
  }
  f << j.dump(2) << "\n";
  f.close();
  ::chmod(out_path.c_str(), S_IRUSR | S_IWUSR);  // key material: owner-only

  std::cout << "address: " << chain::address_to_hex(address) << "\n";
  std::cout << "public_key: " << to_hex(pair.public_key) << "\n";
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int cmd_bench_vdf(uint64_t steps, int bits) {
  if (steps == 0 || bits < 16) {
    std::cerr << "error: need --steps >= 1 and --bits >= 16\n";
    return 2;
  }
  auto t0 = std::chrono::steady_clock::now();
  vdf::VdfParams params = vdf::vdf_setup(bits);
  double setup_ms = ms_since(t0);

  Bytes input = {'b', 'e', 'n', 'c', 'h'};
  t0 = std::chrono::steady_clock::now();
  vdf::VdfProof proof = vdf::vdf_eval(params, input, steps);
  double eval_ms = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  bool ok = vdf::vdf_verify(params, input, proof);
  double verify_ms = ms_since(t0);
  if (!ok) {
    std::cerr << "error: self-verification failed\n";
    return 1;
  }

  std::cout << "modulus_bits=" << params.bit_length << "\n";
  std::cout << "steps=" << steps << "\n";
  std::cout << "setup_ms=" << fmt(setup_ms) << "\n";
  std::cout << "eval_ms=" << fmt(eval_ms) << "\n";
  std::cout << "verify_ms=" << fmt(verify_ms) << "\n";
  std::cout << "eval_steps_per_sec=" << fmt(eval_ms > 0 ? steps / (eval_ms / 1000.0) : 0)
            << "\n";
  std::cout << "verify_speedup=" << fmt(verify_ms > 0 ? eval_ms / verify_ms : 0) << "\n";
  return 0;
}

int cmd_demo_mine(uint64_t blocks, const std::string& chain_out, const std::string& genesis_out,
                  const std::string& seed_hex) {
  if (blocks == 0) {
    std::cerr << "error: --blocks must be positive\n";
    return 2;
  }
  Bytes seed;
  if (!seed_hex.empty()) {
    if (seed_hex.size() != 64) {
      std::cerr << "error: --seed must be exactly 64 hex characters\n";
      return 2;
    }
    seed = from_hex(seed_hex);
  } else {
    seed = hash_to_bytes(sha256({'d', 'e', 'm', 'o'}));
  }
  auto pair = vrf::vrf_keygen(seed);
  auto miner = chain::address_from_public_key(pair.public_key);

  chain::GenesisDoc doc;
  doc.params.q0 = Rational(2000);  // small enough that real delay runs are quick
  doc.params.vdf_bits = 128;
  doc.timestamp = 1700000000;
  doc.allocations.push_back({miner, 1000});

  vdf::VdfParams vdfp = vdf_params_for(doc.params);
  std::vector<chain::Block> blocks_out;
  blocks_out.push_back(chain::genesis_block(doc));
  chain::Ledger ledger = chain::genesis_ledger(doc);
  auto diff = consensus::initial_difficulty(doc.params);
  std::vector<int64_t> prev_ts = {doc.timestamp};

  for (uint64_t h = 1; h <= blocks; ++h) {
    const chain::Block& parent = blocks_out.back();
    int64_t ts = doc.timestamp + int64_t(h) * doc.params.target_block_time;
    std::vector<chain::Transaction> txs;
    txs.push_back(chain::sign_transaction(pair.secret_key, miner, 1, h));  // self-transfer
    chain::Block b = consensus::mine_block(pair.secret_key, ledger, parent, diff.q, diff.r, txs,
                                           doc.params, vdfp, ts);
    auto res = consensus::verify_block(b, parent, ledger, diff.q, diff.r, doc.params, vdfp,
                                       ts + 1, prev_ts);
    if (!res.ok()) {
      std::cerr << "error: freshly mined block failed check " << res.failed_check << ": "
                << res.reason << "\n";
      return 1;
    }
    ledger = chain::apply_block(ledger, b, doc.params.block_reward);
    consensus::difficulty_on_block(diff, doc.params, b.section_b.vdf_proof.steps,
                                   ts - parent.section_b.timestamp);
    prev_ts.insert(prev_ts.begin(), ts);
    if (prev_ts.size() > size_t(doc.params.timestamp_median_window)) prev_ts.pop_back();
    blocks_out.push_back(std::move(b));
    std::cout << "height " << h << ": steps " << blocks_out.back().section_b.vdf_proof.steps
              << "\n";
  }

  std::ofstream g(genesis_out, std::ios::binary | std::ios::trunc);
  if (!g) {
    std::cerr << "error: cannot write " << genesis_out << "\n";
    return 2;
  }
  g << chain::genesis_to_json(doc);
  chain::write_chain_file(chain_out, blocks_out);
  std::cout << "mined " << blocks << " blocks; tip " << hash_to_hex(chain::hash_ab(blocks_out.back()))
            << "\n";
  std::cout << "wrote " << chain_out << " and " << genesis_out << "\n";
  return 0;
}

int cmd_verify_chain(const std::string& chain_path, const std::string& genesis_path,
                     std::optional<int64_t> now) {
  std::string genesis_text, chain_bytes;
  try {
    genesis_text = read_file(genesis_path);
    chain_bytes = read_file(chain_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  chain::GenesisDoc doc;
  try {
    doc = chain::genesis_from_json(genesis_text);
  } catch (const std::exception& e) {
    std::cerr << "error: genesis: " << e.what() << "\n";
    return 2;
  }

  std::vector<chain::Block> blocks;
  try {
    blocks = chain::decode_chain(Bytes(chain_bytes.begin(), chain_bytes.end()));
  } catch (const std::exception& e) {
    std::cout << "rejected: " << e.what() << "\n";
    return 1;
  }

  if (blocks.front() != chain::genesis_block(doc)) {
    std::cout << "rejected: first block does not match the genesis document\n";
    return 1;
  }
  std::cout << "height 0: genesis ok\n";

  int64_t local_time = now.value_or(int64_t(::time(nullptr)));
  vdf::VdfParams vdfp = vdf_params_for(doc.params);
  chain::Ledger ledger = chain::genesis_ledger(doc);
  auto diff = consensus::initial_difficulty(doc.params);
  std::vector<int64_t> prev_ts = {doc.timestamp};

  for (size_t i = 1; i < blocks.size(); ++i) {
    const chain::Block& b = blocks[i];
    const chain::Block& parent = blocks[i - 1];
    auto res = consensus::verify_block(b, parent, ledger, diff.q, diff.r, doc.params, vdfp,
                                       local_time, prev_ts);
    if (!res.ok()) {
      std::cout << "height " << b.height << ": check " << res.failed_check
                << " rejected: " << res.reason << "\n";
      return 1;
    }
    std::cout << "height " << b.height << ": ok\n";
    ledger = chain::apply_block(ledger, b, doc.params.block_reward);
    consensus::difficulty_on_block(diff, doc.params, b.section_b.vdf_proof.steps,
                                   b.section_b.timestamp - parent.section_b.timestamp);
    prev_ts.insert(prev_ts.begin(), b.section_b.timestamp);
    if (prev_ts.size() > size_t(doc.params.timestamp_median_window)) prev_ts.pop_back();
  }
  std::cout << "chain valid: " << blocks.size() - 1 << " blocks above genesis\n";
  return 0;
}

namespace {

int report_and_write(const simnet::Metrics& m, const std::string& out_dir) {
  simnet::write_outputs(m, out_dir);
  std::cout << "canonical height: " << m.canonical_height << "\n";
  std::cout << "orphans: " << m.orphans << ", rejected deliveries: " << m.rejected << "\n";
  for (size_t i = 0; i < m.miner_names.size(); ++i) {
    std::cout << m.miner_names[i] << " " << m.miner_addresses[i]
              << " stake=" << rational_to_decimal(m.stake_share[i], 4)
              << " won=" << m.blocks_won[i]
              << " share=" << rational_to_decimal(m.reward_share[i], 4) << "\n";
  }
  bool all_pass = true;
  for (const auto& v : m.verdicts) {
    std::cout << (v.pass ? "PASS" : "FAIL") << " " << v.experiment << "/" << v.check << " value "
              << v.value << " wanted " << v.threshold << "\n";
    all_pass = all_pass && v.pass;
  }
  std::cout << "wrote " << out_dir << "/summary.csv, timeseries.csv, verdicts.csv\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int cmd_simulate(const std::string& config_path, std::optional<uint64_t> seed_override,
                 const std::string& out_dir) {
  std::string text;
  try {
    text = read_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  simnet::SimConfig cfg;
  simnet::ExperimentSpec spec;
  try {
    cfg = simnet::config_from_json(text);
    spec = simnet::experiment_from_json(text);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  if (seed_override) cfg.seed = *seed_override;

  simnet::Metrics m;
  try {
    m = simnet::run_experiment(cfg, spec);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "simulation error: " << e.what() << "\n";
    return 1;
  }
  return report_and_write(m, out_dir);
}

int cmd_experiments(const std::string& configs_dir, const std::string& out_dir) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(configs_dir, ec))
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  if (ec || files.empty()) {
    std::cerr << "error: no .json configs found in " << configs_dir << "\n";
    return 2;
  }
  std::sort(files.begin(), files.end());

  int failures = 0;
  for (const auto& path : files) {
    std::cout << "=== " << path.filename().string() << "\n";
    int rc = cmd_simulate(path.string(), std::nullopt,
                          (fs::path(out_dir) / path.stem()).string());
    if (rc == 2) return 2;
    failures += rc != 0;
  }
  std::cout << "=== " << files.size() - failures << "/" << files.size()
            << " experiment configs fully passed\n";
  return failures ? 1 : 0;
}

}  // namespace vixify::cli
