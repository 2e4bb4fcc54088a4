#pragma once

#include <cstdint>
#include <string>

#include "vixify/bytes.hpp"

namespace vixify {

// Protocol constants. Everything here is config-surfaced; the defaults
// below are what ship when a config omits the field.
struct ConsensusParams {
  Rational q0 = Rational(1000);        // initial base step quantum
  Rational r0 = Rational(101, 100);    // initial exponential slot base
  Rational alpha = Rational(1, 100);   // per-block q change fraction
  Rational beta = Rational(1, 1000);   // per-block r change fraction
  int64_t target_block_time = 10;      // seconds
  int window_a = 100;                  // block-time moving window
  int window_b = 1000;                 // VDF-speed moving window
  Rational q_min = Rational(16);
  Rational q_max = Rational(BigInt(1) << 40);
  Rational r_min = Rational(BigInt(1) * ((BigInt(1) << 20) + 1), BigInt(1) << 20);  // 1 + 2^-20
  Rational r_max = Rational(4);
  uint64_t step_ceiling = uint64_t(1) << 40;
  uint64_t block_reward = 10;
  bool bind_merkle = true;    // false selects the beacon-style unbound input
  bool alg5_literal = false;  // literal speed-difficulty comparison variant
  int64_t timestamp_max_skew = 60;  // seconds ahead of local time tolerated
  int timestamp_median_window = 11;
  int vdf_bits = 128;         // modulus size when no explicit modulus given
  std::string vdf_modulus_hex;  // optional pinned modulus (hex)

  bool operator==(const ConsensusParams&) const = default;
};

}  // namespace vixify
