#pragma once

#include <atomic>
#include <cstdint>

#include "vixify/bytes.hpp"
#include "vixify/hash.hpp"

namespace vixify::vdf {

// Sloth-style delay function over a prime field p = 3 (mod 4).
//
// One forward round is a bijection on [0, p):
//   1. flip the low bit: w = x XOR 1, unless that leaves [0, p) (then w = x;
//      this keeps the flip an involution on the field),
//   2. take the canonical modular square root: when w is a quadratic
//      residue the even root of w, otherwise the odd root of p - w.
// A single exponentiation t = w^((p+1)/4) yields either root family, and
// t^2 mod p tells which case applies.
//
// The backward round inverts with one squaring (even y: w = y^2; odd y:
// w = p - y^2) followed by the same flip, which is why verification runs
// orders of magnitude faster than evaluation.

struct VdfParams {
  BigInt modulus;  // prime p with p % 4 == 3
  int bit_length = 0;
};

struct VdfProof {
  BigInt input;    // x0, the reduced starting value in [0, p)
  BigInt output;   // y after `steps` forward rounds
  uint64_t steps = 0;
};

struct Cancelled : std::runtime_error {
  Cancelled() : std::runtime_error("vdf evaluation cancelled") {}
};

// Deterministic given (bit_length, seed): scans a seeded candidate stream
// for the first prime = 3 (mod 4) of the requested size. Primality is
// checked with enough Miller-Rabin rounds for error < 2^-64, using
// witnesses derived deterministically from the candidate.
// Throws std::invalid_argument for bit_length < 16.
VdfParams vdf_setup(int bit_length, const Bytes& seed = {});

// Reduce arbitrary input bytes into the field.
BigInt reduce_input(const VdfParams& params, const Bytes& input);

// Single forward/backward rounds (exposed for the bijectivity tests).
BigInt round_forward(const VdfParams& params, const BigInt& x);
BigInt round_backward(const VdfParams& params, const BigInt& y);

// Applies `steps` forward rounds to the reduced input. Polls `cancel`
// periodically when provided and throws Cancelled once it reads true.
VdfProof vdf_eval(const VdfParams& params, const Bytes& input, uint64_t steps,
                  const std::atomic<bool>* cancel = nullptr);

// Replays the rounds backward (cheap) and accepts iff the proof matches the
// reduced input. Malformed values reject, never throw.
bool vdf_verify(const VdfParams& params, const Bytes& input, const VdfProof& proof);

// Seeded stand-in output used by the simulator's abstract mode: a hash of
// (input, steps) reduced into the field. Carries no delay property.
BigInt abstract_output(const VdfParams& params, const BigInt& input, uint64_t steps);

}  // namespace vixify::vdf
