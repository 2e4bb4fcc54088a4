#include <optional>
#include <string>

#include "CLI11.hpp"
#include "vixify/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"stake-slotted delay-mining chain: keys, mining, verification, simulation"};
  app.require_subcommand(1);

  std::string seed_hex, out_path = "key.json";
  auto* keygen = app.add_subcommand("keygen", "derive a key pair and write it to a file");
  keygen->add_option("--seed", seed_hex, "64 hex chars; omitted = system randomness");
  keygen->add_option("--out", out_path, "output key file")->capture_default_str();

  uint64_t steps = 10000;
  int bits = 128;
  auto* bench = app.add_subcommand("bench-vdf", "time delay-function eval vs verify");
  bench->add_option("--steps", steps, "forward rounds to run")->capture_default_str();
  bench->add_option("--bits", bits, "modulus size in bits")->capture_default_str();

  uint64_t blocks = 5;
  std::string chain_out = "chain.bin", genesis_out = "genesis.json", mine_seed;
  auto* demo = app.add_subcommand("demo-mine", "mine a small single-key chain for real");
  demo->add_option("--blocks", blocks, "blocks to mine")->capture_default_str();
  demo->add_option("--out", chain_out, "chain file")->capture_default_str();
  demo->add_option("--genesis-out", genesis_out, "genesis document")->capture_default_str();
  demo->add_option("--seed", mine_seed, "64 hex chars; omitted = fixed demo seed");

  std::string chain_path, genesis_path;
  std::optional<int64_t> now;
  auto* verify = app.add_subcommand("verify-chain", "re-validate every block in a chain file");
  verify->add_option("--chain", chain_path, "chain file")->required();
  verify->add_option("--genesis", genesis_path, "genesis document")->required();
  verify->add_option("--now", now, "local unix time for timestamp checks (default: wall clock)");

  std::string config_path, sim_out = "simout";
  std::optional<uint64_t> seed_override;
  auto* sim = app.add_subcommand("simulate", "run a multi-miner network simulation");
  sim->add_option("--config", config_path, "simulation config (json)")->required();
  sim->add_option("--seed", seed_override, "override the config's seed");
  sim->add_option("--out", sim_out, "output directory for csv reports")->capture_default_str();

  std::string configs_dir = "configs", exp_out = "expout";
  auto* exp = app.add_subcommand("experiments", "run every config in a directory");
  exp->add_option("--configs", configs_dir, "directory of simulation configs")
      ->capture_default_str();
  exp->add_option("--out", exp_out, "output root; one subdirectory per config")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*keygen) return vixify::cli::cmd_keygen(seed_hex, out_path);
    if (*bench) return vixify::cli::cmd_bench_vdf(steps, bits);
    if (*demo) return vixify::cli::cmd_demo_mine(blocks, chain_out, genesis_out, mine_seed);
    if (*verify) return vixify::cli::cmd_verify_chain(chain_path, genesis_path, now);
    if (*sim) return vixify::cli::cmd_simulate(config_path, seed_override, sim_out);
    if (*exp) return vixify::cli::cmd_experiments(configs_dir, exp_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
