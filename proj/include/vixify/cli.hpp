#pragma once

#include <cstdint>
#include <optional>
#include <string>

// Command entry points behind the CLI front-end. Exit-code convention:
// 0 success, 1 verification or verdict failure, 2 invalid input.
namespace vixify::cli {

int cmd_keygen(const std::string& seed_hex, const std::string& out_path);
int cmd_bench_vdf(uint64_t steps, int bits);
int cmd_demo_mine(uint64_t blocks, const std::string& chain_out, const std::string& genesis_out,
                  const std::string& seed_hex);
int cmd_verify_chain(const std::string& chain_path, const std::string& genesis_path,
                     std::optional<int64_t> now);
int cmd_simulate(const std::string& config_path, std::optional<uint64_t> seed_override,
                 const std::string& out_dir);
int cmd_experiments(const std::string& configs_dir, const std::string& out_dir);

}  // namespace vixify::cli
