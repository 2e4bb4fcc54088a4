#include "vixify/consensus.hpp"

#include <algorithm>
#include <cmath>

namespace vixify::consensus {

namespace {

// log2 of a positive big integer, accurate to ~1e-13 absolute.
double log2_big(const BigInt& v) {
  size_t bits = boost::multiprecision::msb(v);
  if (bits <= 52) return std::log2(v.convert_to<double>());
  BigInt top = v >> (bits - 52);
  return double(bits - 52) + std::log2(top.convert_to<double>());
}

double log2_rat(const Rational& v) {
  return log2_big(boost::multiprecision::numerator(v)) -
         log2_big(boost::multiprecision::denominator(v));
}

uint64_t floor_to_u64_checked(const Rational& v, uint64_t ceiling) {
  BigInt f = boost::multiprecision::numerator(v) / boost::multiprecision::denominator(v);
  if (f > ceiling) throw StepCeilingError();
  return f.convert_to<uint64_t>();
}

}  // namespace

uint64_t compute_range(const Rational& stake) {
  if (stake <= 0) throw ZeroStakeError();
  if (stake > 1) throw std::invalid_argument("stake fraction above 1");
  BigInt range = boost::multiprecision::denominator(stake) / boost::multiprecision::numerator(stake);
  if (range > std::numeric_limits<uint64_t>::max())
    throw std::overflow_error("slot range does not fit in 64 bits");
  return range.convert_to<uint64_t>();
}

SlotResult compute_slot(const Bytes& secret_key, const Hash256& prev_meta_hash, uint64_t range,
                        bool lite) {
  if (range == 0) throw std::invalid_argument("slot range must be positive");
  SlotResult out;
  out.range = range;
  Bytes message = hash_to_bytes(prev_meta_hash);
  out.vrf = lite ? vrf::vrf_eval_lite(secret_key, message) : vrf::vrf_eval(secret_key, message);
  out.slot = vrf::vrf_hash_to_int(out.vrf.hash, BigInt(range)).convert_to<uint64_t>();
  return out;
}

VdfInputResult compute_vdf_input(const Bytes& secret_key, const Hash256& prev_hash_ab,
                                 const Hash256& merkle_root, bool bind_merkle, bool lite) {
  Bytes message =
      hash_to_bytes(bind_merkle ? hash_xor(prev_hash_ab, merkle_root) : prev_hash_ab);
  VdfInputResult out;
  out.vrf = lite ? vrf::vrf_eval_lite(secret_key, message) : vrf::vrf_eval(secret_key, message);
  out.input = out.vrf.hash;
  return out;
}

uint64_t compute_steps(const Rational& q, const Rational& r, uint64_t slot, uint64_t ceiling) {
  if (q <= 0) throw std::invalid_argument("q must be positive");
  if (r < 1) throw std::invalid_argument("r must be at least 1");
  if (r == 1 || slot == 0) return floor_to_u64_checked(q, ceiling);

  if (slot <= 64) {
    BigInt rn = boost::multiprecision::pow(boost::multiprecision::numerator(r), unsigned(slot));
    BigInt rd = boost::multiprecision::pow(boost::multiprecision::denominator(r), unsigned(slot));
    return floor_to_u64_checked(q * Rational(rn, rd), ceiling);
  }

  // Large slot: a logarithmic bound rejects hopeless cases without touching
  // slot-sized exponents (relative error of the estimate is ~1e-8, dwarfed
  // by the two-bit margin).
  double bits = log2_rat(q) + double(slot) * log2_rat(r);
  if (bits > log2_big(BigInt(ceiling)) + 2.0) throw StepCeilingError();

  // Exact answer via interval fixed-point exponentiation: bracket r^slot
  // between two F-bit fixed-point values and widen F until both ends agree
  // on the floor. Disagreement can only persist while q*r^slot sits within
  // 2^-F of an integer, so a handful of doublings settles every value the
  // difficulty dynamics can reach; the final exact fallback keeps the
  // function total.
  for (int f = 128; f <= 4096; f *= 2) {
    BigInt one = BigInt(1) << f;
    BigInt lo = (boost::multiprecision::numerator(r) << f) / boost::multiprecision::denominator(r);
    BigInt hi = lo + 1;
    BigInt acc_lo = one, acc_hi = one;
    uint64_t e = slot;
    BigInt base_lo = lo, base_hi = hi;
    while (e > 0) {
      if (e & 1) {
        acc_lo = (acc_lo * base_lo) >> f;
        acc_hi = ((acc_hi * base_hi) >> f) + 1;
      }
      e >>= 1;
      if (e == 0) break;
      base_lo = (base_lo * base_lo) >> f;
      base_hi = ((base_hi * base_hi) >> f) + 1;
      if (boost::multiprecision::msb(base_hi) > size_t(f) + 64) break;  // diverging; next f
    }
    if (e != 0) continue;
    BigInt steps_lo =
        (boost::multiprecision::numerator(q) * acc_lo) /
        (boost::multiprecision::denominator(q) << f);
    BigInt steps_hi =
        (boost::multiprecision::numerator(q) * acc_hi) /
        (boost::multiprecision::denominator(q) << f);
    if (steps_lo == steps_hi) {
      if (steps_lo > ceiling) throw StepCeilingError();
      return steps_lo.convert_to<uint64_t>();
    }
    if (steps_lo > ceiling) throw StepCeilingError();
  }

  BigInt rn = boost::multiprecision::pow(boost::multiprecision::numerator(r), unsigned(slot));
  BigInt rd = boost::multiprecision::pow(boost::multiprecision::denominator(r), unsigned(slot));
  return floor_to_u64_checked(q * Rational(rn, rd), ceiling);
}

chain::Block assemble_block(const chain::Block& parent, const chain::Address& miner,
                            const MiningSolution& solution,
                            std::vector<chain::Transaction> transactions, int64_t timestamp) {
  chain::Block block;
  block.height = parent.height + 1;
  block.section_a.prev_hash_a = chain::hash_a(parent.section_a);
  block.section_a.miner_address = miner;
  block.section_a.slot_vrf = solution.slot_vrf;
  block.section_b.prev_hash_ab = chain::hash_ab(parent);
  block.section_b.vdf_proof = solution.vdf_proof;
  block.section_b.merkle_vrf = solution.merkle_vrf;
  block.section_b.timestamp = timestamp;
  block.section_b.merkle_root = chain::merkle_root(transactions);
  block.transactions = std::move(transactions);
  return block;
}

chain::Block mine_block(const Bytes& secret_key, const chain::Ledger& ledger_at_parent,
                        const chain::Block& parent, const Rational& q, const Rational& r,
                        std::vector<chain::Transaction> transactions,
                        const ConsensusParams& params, const vdf::VdfParams& vdf_params,
                        int64_t timestamp, VdfMode mode, const std::atomic<bool>* cancel) {
  // both modes carry real randomness proofs so the two produce byte-identical
  // transaction-independent sections; only the delay run is simulated
  auto probe = vrf::vrf_eval_lite(secret_key, Bytes{});
  chain::Address miner = chain::address_from_public_key(vrf::proof_public_key(probe.proof));

  MiningSolution sol;
  sol.range = compute_range(chain::stake_fraction(ledger_at_parent, miner));
  auto slot_res = compute_slot(secret_key, chain::hash_a(parent.section_a), sol.range, false);
  sol.slot = slot_res.slot;
  sol.slot_vrf = std::move(slot_res.vrf);
  sol.steps = compute_steps(q, r, sol.slot, params.step_ceiling);

  Hash256 merkle = chain::merkle_root(transactions);
  auto input_res = compute_vdf_input(secret_key, chain::hash_ab(parent), merkle,
                                     params.bind_merkle, false);
  sol.vdf_input = input_res.input;
  sol.merkle_vrf = std::move(input_res.vrf);

  Bytes input_bytes = hash_to_bytes(sol.vdf_input);
  if (mode == VdfMode::kReal) {
    sol.vdf_proof = vdf::vdf_eval(vdf_params, input_bytes, sol.steps, cancel);
  } else {
    sol.vdf_proof.input = vdf::reduce_input(vdf_params, input_bytes);
    sol.vdf_proof.steps = sol.steps;
    sol.vdf_proof.output = vdf::abstract_output(vdf_params, sol.vdf_proof.input, sol.steps);
  }

  chain::Block block = assemble_block(parent, miner, sol, std::move(transactions), timestamp);
  chain::apply_block(ledger_at_parent, block, params.block_reward);  // surfaces bad transactions
  return block;
}

VerifyResult verify_block(const chain::Block& block, const chain::Block& parent,
                          const chain::Ledger& ledger_at_parent, const Rational& q,
                          const Rational& r, const ConsensusParams& params,
                          const vdf::VdfParams& vdf_params, int64_t local_time,
                          std::span<const int64_t> prev_timestamps, VdfMode mode) {
  auto fail = [](int check, std::string reason) {
    return VerifyResult{check, std::move(reason)};
  };
  // the mode touches only the delay check: randomness proofs are always real
  bool abstract_delay = mode == VdfMode::kAbstract;

  // 1. linkage to the claimed parent
  if (block.height != parent.height + 1) return fail(1, "height does not extend parent");
  if (block.section_a.prev_hash_a != chain::hash_a(parent.section_a))
    return fail(1, "transaction-independent back-pointer mismatch");
  if (block.section_b.prev_hash_ab != chain::hash_ab(parent))
    return fail(1, "full-block back-pointer mismatch");

  // 2. the miner must hold stake at the parent
  Rational stake = chain::stake_fraction(ledger_at_parent, block.section_a.miner_address);
  if (stake <= 0) return fail(2, "miner holds no stake");

  // 3. slot randomness: proof key matches the miner address and the proof
  //    verifies against the parent's transaction-independent hash
  Bytes pk = vrf::proof_public_key(block.section_a.slot_vrf.proof);
  if (pk.empty() || chain::address_from_public_key(pk) != block.section_a.miner_address)
    return fail(3, "slot proof key does not match miner address");
  Bytes slot_msg = hash_to_bytes(chain::hash_a(parent.section_a));
  if (!vrf::vrf_verify(pk, slot_msg, block.section_a.slot_vrf))
    return fail(3, "slot proof does not verify");

  // 4. the slot the randomness selects
  uint64_t range = 0, slot = 0;
  try {
    range = compute_range(stake);
    slot = vrf::vrf_hash_to_int(block.section_a.slot_vrf.hash, BigInt(range))
               .convert_to<uint64_t>();
  } catch (const std::exception&) {
    return fail(4, "slot range not computable from stake");
  }

  // 5. transactions: root matches and every transfer applies
  if (chain::merkle_root(block.transactions) != block.section_b.merkle_root)
    return fail(5, "transaction root mismatch");
  try {
    chain::apply_block(ledger_at_parent, block, params.block_reward);
  } catch (const chain::TxError& e) {
    return fail(5, e.what());
  }

  // 6. delay-input randomness over the bound message, same key as the slot
  Bytes mpk = vrf::proof_public_key(block.section_b.merkle_vrf.proof);
  if (mpk != pk) return fail(6, "delay-input proof key mismatch");
  Hash256 bound = params.bind_merkle
                      ? hash_xor(block.section_b.prev_hash_ab, block.section_b.merkle_root)
                      : block.section_b.prev_hash_ab;
  if (!vrf::vrf_verify(pk, hash_to_bytes(bound), block.section_b.merkle_vrf))
    return fail(6, "delay-input proof does not verify");

  // 7. the delay run: exact step count for the slot, correct input, output replays
  uint64_t expected_steps = 0;
  try {
    expected_steps = compute_steps(q, r, slot, params.step_ceiling);
  } catch (const std::exception&) {
    return fail(7, "step count not computable for slot");
  }
  if (block.section_b.vdf_proof.steps != expected_steps)
    return fail(7, "step count does not match slot");
  Bytes input_bytes = hash_to_bytes(block.section_b.merkle_vrf.hash);
  if (abstract_delay) {
    if (block.section_b.vdf_proof.input != vdf::reduce_input(vdf_params, input_bytes))
      return fail(7, "delay input does not match randomness");
    if (block.section_b.vdf_proof.output !=
        vdf::abstract_output(vdf_params, block.section_b.vdf_proof.input, expected_steps))
      return fail(7, "delay output mismatch");
  } else if (!vdf::vdf_verify(vdf_params, input_bytes, block.section_b.vdf_proof)) {
    return fail(7, "delay proof does not verify");
  }

  // 8. timestamp sanity against local clock and recent history
  if (block.section_b.timestamp > local_time + params.timestamp_max_skew)
    return fail(8, "timestamp too far in the future");
  if (!prev_timestamps.empty()) {
    size_t n = std::min<size_t>(prev_timestamps.size(), size_t(params.timestamp_median_window));
    std::vector<int64_t> recent(prev_timestamps.begin(), prev_timestamps.begin() + n);
    std::nth_element(recent.begin(), recent.begin() + (n - 1) / 2, recent.end());
    int64_t median = recent[(n - 1) / 2];
    if (block.section_b.timestamp <= median)
      return fail(8, "timestamp not above median of recent blocks");
  }

  return VerifyResult{};
}

bool proposer_prefers(const MiningSolution& a, const MiningSolution& b) {
  if (a.steps != b.steps) return a.steps < b.steps;
  if (a.vdf_input != b.vdf_input) return a.vdf_input < b.vdf_input;
  return a.slot_vrf.hash < b.slot_vrf.hash;  // totalizes the order
}

size_t select_proposer(const std::vector<MiningSolution>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("no candidates");
  size_t best = 0;
  for (size_t i = 1; i < candidates.size(); ++i)
    if (proposer_prefers(candidates[i], candidates[best])) best = i;
  return best;
}

DifficultyState initial_difficulty(const ConsensusParams& params) {
  DifficultyState s;
  s.q = params.q0;
  s.r = params.r0;
  return s;
}

Rational adjust_q(const Rational& q, const Rational& observed_avg_block_time,
                  const ConsensusParams& params) {
  Rational next = observed_avg_block_time >= params.target_block_time
                      ? Rational(q * (1 - params.alpha))
                      : Rational(q * (1 + params.alpha));
  return std::clamp(next, params.q_min, params.q_max);
}

Rational adjust_r(const Rational& r, const Rational& observed_speed, DifficultyState& state,
                  const ConsensusParams& params) {
  Rational next;
  if (params.alg5_literal) {
    next = observed_speed >= state.last_windowed_speed ? Rational(r * (1 - params.beta))
                                                       : Rational(r * (1 + params.beta));
  } else if (observed_speed > state.max_speed_seen) {
    state.max_speed_seen = observed_speed;
    next = r * (1 + params.beta);
  } else {
    next = r * (1 - params.beta);
  }
  state.last_windowed_speed = observed_speed;
  return std::clamp(next, params.r_min, params.r_max);
}

Rational dyadic_floor(const Rational& v, unsigned bits) {
  if (v < 0) throw std::invalid_argument("dyadic_floor expects a non-negative value");
  BigInt scaled = (boost::multiprecision::numerator(v) << bits) /
                  boost::multiprecision::denominator(v);
  return Rational(scaled, BigInt(1) << bits);
}

namespace {
constexpr unsigned kDifficultyGridBits = 96;
constexpr unsigned kSpeedGridBits = 32;
}  // namespace

void difficulty_on_block(DifficultyState& state, const ConsensusParams& params,
                         uint64_t winner_steps, int64_t interblock_seconds) {
  state.block_time_window.push_back(std::max<int64_t>(interblock_seconds, 0));
  state.block_time_sum += state.block_time_window.back();
  while (state.block_time_window.size() > size_t(params.window_a)) {
    state.block_time_sum -= state.block_time_window.front();
    state.block_time_window.pop_front();
  }
  Rational avg_time(state.block_time_sum, int64_t(state.block_time_window.size()));
  state.q = std::clamp(dyadic_floor(adjust_q(state.q, avg_time, params), kDifficultyGridBits),
                       params.q_min, params.q_max);

  int64_t dt = std::max<int64_t>(interblock_seconds, 1);
  Rational obs = dyadic_floor(Rational(BigInt(winner_steps), BigInt(dt)), kSpeedGridBits);
  state.speed_window.push_back(obs);
  state.speed_sum += obs;
  while (state.speed_window.size() > size_t(params.window_b)) {
    state.speed_sum -= state.speed_window.front();
    state.speed_window.pop_front();
  }
  Rational avg_speed = state.speed_sum / int64_t(state.speed_window.size());
  state.r = std::clamp(dyadic_floor(adjust_r(state.r, avg_speed, state, params), kDifficultyGridBits),
                       params.r_min, params.r_max);
}

size_t fork_choice(const std::vector<TipInfo>& tips) {
  if (tips.empty()) throw std::invalid_argument("no tips");
  size_t best = 0;
  for (size_t i = 1; i < tips.size(); ++i) {
    const TipInfo& a = tips[i];
    const TipInfo& b = tips[best];
    bool better = a.height != b.height          ? a.height > b.height
                  : a.cumulative_steps != b.cumulative_steps
                      ? a.cumulative_steps < b.cumulative_steps
                      : a.tip_hash < b.tip_hash;
    if (better) best = i;
  }
  return best;
}

uint64_t pow_baseline_mine(const Hash256& merkle_root, const Hash256& prev_hash,
                           const PowParams& pow, uint64_t iteration_cap) {
  for (uint64_t t = 0; t < iteration_cap; ++t) {
    ByteWriter w;
    w.raw(hash_to_bytes(merkle_root));
    w.raw(hash_to_bytes(prev_hash));
    w.u64(t);
    Hash256 h = hash_digest(tag::kPowBaseline, w.take());
    if (bytes_to_bigint(hash_to_bytes(h)) > pow.threshold) return t;
  }
  throw PowCapExceeded();
}

}  // namespace vixify::consensus
