#pragma once

#include <deque>
#include <span>
#include <vector>

#include "vixify/chain.hpp"
#include "vixify/params.hpp"

namespace vixify::consensus {

struct ZeroStakeError : std::domain_error {
  ZeroStakeError() : std::domain_error("zero stake: miner cannot participate") {}
};

struct StepCeilingError : std::runtime_error {
  StepCeilingError() : std::runtime_error("step count exceeds configured ceiling") {}
};

// floor(1/stake) in exact rational arithmetic. Throws ZeroStakeError for
// stake = 0 (the divide-by-zero that excludes non-stakers) and
// std::invalid_argument outside (0, 1].
uint64_t compute_range(const Rational& stake);

struct SlotResult {
  uint64_t slot = 0;
  uint64_t range = 1;
  vrf::VrfOutput vrf;  // goes into SectionA
};

// Slot = VRF(sk, prev_meta_hash) mod range. `lite` selects the hash-only
// proof layout for callers that need draws without verifiable proofs;
// mining always embeds full proofs regardless of delay mode.
SlotResult compute_slot(const Bytes& secret_key, const Hash256& prev_meta_hash, uint64_t range,
                        bool lite = false);

struct VdfInputResult {
  Hash256 input{};     // the VRF hash; the delay function's input
  vrf::VrfOutput vrf;  // goes into SectionB
};

// bind_merkle=true: message is prev_hash_ab XOR merkle_root, tying the
// delay run to the transaction set; false: message is prev_hash_ab alone
// (beacon-style, transaction-independent).
VdfInputResult compute_vdf_input(const Bytes& secret_key, const Hash256& prev_hash_ab,
                                 const Hash256& merkle_root, bool bind_merkle, bool lite = false);

// floor(q * r^slot) with exact rational exponentiation; strictly increasing
// in slot when r > 1. Throws StepCeilingError when the result would exceed
// `ceiling` (a cheap logarithmic bound short-circuits absurd slots before
// the exact computation runs).
uint64_t compute_steps(const Rational& q, const Rational& r, uint64_t slot, uint64_t ceiling);

struct MiningSolution {
  uint64_t slot = 0;
  uint64_t range = 1;
  uint64_t steps = 0;
  Hash256 vdf_input{};
  vdf::VdfProof vdf_proof;
  vrf::VrfOutput slot_vrf;
  vrf::VrfOutput merkle_vrf;
};

// kReal runs and replays the sequential delay function; kAbstract substitutes
// a hash stand-in for the delay output so large simulations stay fast. The
// randomness proofs, slot draws, and step counts are identical in both modes.
enum class VdfMode { kReal, kAbstract };

// Assemble a block from the solution pieces (shared by one-shot mining and
// the simulator's deferred completion path).
chain::Block assemble_block(const chain::Block& parent, const chain::Address& miner,
                            const MiningSolution& solution,
                            std::vector<chain::Transaction> transactions, int64_t timestamp);

// One-shot mining against a parent block: computes the slot, runs the delay
// function for exactly the slot's step count, and assembles a block that
// verify_block accepts. Throws ZeroStakeError / StepCeilingError /
// chain::TxError.
chain::Block mine_block(const Bytes& secret_key, const chain::Ledger& ledger_at_parent,
                        const chain::Block& parent, const Rational& q, const Rational& r,
                        std::vector<chain::Transaction> transactions,
                        const ConsensusParams& params, const vdf::VdfParams& vdf_params,
                        int64_t timestamp, VdfMode mode = VdfMode::kReal,
                        const std::atomic<bool>* cancel = nullptr);

struct VerifyResult {
  int failed_check = 0;  // 0 = accept; otherwise the 1-based check number
  std::string reason;
  bool ok() const { return failed_check == 0; }
};

// Ordered checks: (1) parent back-pointers, (2) miner stake > 0,
// (3) slot VRF + address binding, (4) range/slot recomputation,
// (5) merkle root + transaction application, (6) merkle VRF over the bound
// input, (7) step count and delay-function verification, (8) timestamp
// bounds (not ahead of local time + skew; strictly above the median of the
// previous `timestamp_median_window` timestamps, newest first).
VerifyResult verify_block(const chain::Block& block, const chain::Block& parent,
                          const chain::Ledger& ledger_at_parent, const Rational& q,
                          const Rational& r, const ConsensusParams& params,
                          const vdf::VdfParams& vdf_params, int64_t local_time,
                          std::span<const int64_t> prev_timestamps,
                          VdfMode mode = VdfMode::kReal);

// Candidate metric for proposer selection: fewest steps, ties broken by the
// lexicographically smallest vdf_input (VRF-uniform, so the tie is an
// unbiased coin). Returns the winning index; order-invariant.
size_t select_proposer(const std::vector<MiningSolution>& candidates);
bool proposer_prefers(const MiningSolution& a, const MiningSolution& b);

// --- difficulty ------------------------------------------------------------

// Largest multiple of 2^-bits that is at most v. The stateful difficulty
// path floors q, r and the speed observations onto this grid after every
// exact-rational update: the per-step error is below 2^-bits (invisible
// next to the alpha/beta dynamics) while numerator and denominator sizes —
// and hence state size and gcd cost — stay bounded over long runs.
Rational dyadic_floor(const Rational& v, unsigned bits);

struct DifficultyState {
  Rational q;
  Rational r;
  std::deque<int64_t> block_time_window;  // recent inter-block seconds
  int64_t block_time_sum = 0;
  std::deque<Rational> speed_window;      // quantized steps-per-second entries
  Rational speed_sum = 0;
  Rational max_speed_seen = 0;            // high-water reference
  Rational last_windowed_speed = 0;       // previous window mean
};

DifficultyState initial_difficulty(const ConsensusParams& params);

// Block-time control: observed average at or above target means blocks are
// too slow, so the step quantum shrinks; below target it grows. Clamped.
Rational adjust_q(const Rational& q, const Rational& observed_avg_block_time,
                  const ConsensusParams& params);

// Speed control, default (prose) policy: when the windowed speed surpasses
// the high-water mark the slot base grows and the mark rises; otherwise it
// decays. alg5_literal instead compares the windowed speed against the
// previous window and applies the literal (inverted) signs. Clamped.
Rational adjust_r(const Rational& r, const Rational& observed_speed, DifficultyState& state,
                  const ConsensusParams& params);

// Per accepted block: pushes the inter-block time and speed observations
// into their rings and applies both adjustments.
void difficulty_on_block(DifficultyState& state, const ConsensusParams& params,
                         uint64_t winner_steps, int64_t interblock_seconds);

// --- fork choice -----------------------------------------------------------

struct TipInfo {
  uint64_t height = 0;
  BigInt cumulative_steps;  // sum of vdf steps along the chain
  Hash256 tip_hash{};
};

// Greatest height, then least cumulative steps, then smallest tip hash.
size_t fork_choice(const std::vector<TipInfo>& tips);

// --- proof-of-work baseline -------------------------------------------------

struct PowParams {
  BigInt threshold;  // T in [0, 2^256)
};

struct PowCapExceeded : std::runtime_error {
  PowCapExceeded() : std::runtime_error("proof-of-work iteration cap exceeded") {}
};

// Smallest t >= 0 whose tagged digest, read as a 256-bit integer, exceeds
// the threshold (the comparison direction is part of the baseline's
// definition here). Used only for comparison experiments.
uint64_t pow_baseline_mine(const Hash256& merkle_root, const Hash256& prev_hash,
                           const PowParams& pow, uint64_t iteration_cap = uint64_t(1) << 24);

}  // namespace vixify::consensus
