#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vixify/chain.hpp"
#include "vixify/consensus.hpp"

namespace vixify::simnet {

// Deterministic discrete-event simulation of a network of staked miners.
// Time is an exact rational number of seconds; every random draw comes from
// a counter-based hash keyed by the run seed, so a (config, seed) pair maps
// to one exact execution — byte-identical outputs on every run.

enum class Behavior {
  kHonest,
  kTimestampLiar,  // stamps blocks `timestamp_offset` seconds off its clock
};

struct MinerSpec {
  std::string name;            // label for reports; defaults to "miner<idx>"
  uint64_t stake = 0;          // genesis allocation, in coins
  Rational speed = 100;        // delay-function steps per second
  Behavior behavior = Behavior::kHonest;
  int64_t timestamp_offset = 0;
  int group = -1;              // coalition tag for aggregated reporting
};

struct NetworkSpec {
  Rational latency_min = 0;  // seconds; a uniform draw in [min, max]
  Rational latency_max = 0;  // min == max means a fixed delay
  Rational drop_rate = 0;    // chance a point-to-point delivery is lost
};

// Scheduled ledger shock: once the canonical chain applies the block at
// `height`, half of miner `from`'s balance moves in equal integer parts to
// the `into` miners (which may have started with zero stake and were idle
// until funded). Models a stake-distribution change mid-run.
struct FragmentationEvent {
  uint64_t height = 0;
  size_t from = 0;
  std::vector<size_t> into;
};

struct SimConfig {
  std::vector<MinerSpec> miners;
  NetworkSpec network;
  ConsensusParams params;
  uint64_t blocks = 1000;  // target canonical height
  uint64_t seed = 1;
  consensus::VdfMode mode = consensus::VdfMode::kAbstract;
  Rational receive_window = 1;   // seconds a node reconsiders same-height blocks
  Rational retry_interval = 1;   // gossip pull cadence for missing parents
  std::optional<FragmentationEvent> fragmentation;
  bool bias_tiebreak = false;    // test hook: break ties by miner index (unfair!)
  int64_t genesis_timestamp = 0;
};

SimConfig config_from_json(const std::string& text);  // throws, naming the field path
std::string config_to_json(const SimConfig& config);

struct TimeseriesRow {
  uint64_t height = 0;
  int64_t timestamp = 0;
  int64_t interblock = 0;
  std::string q;  // decimal rendering of the exact value after this block
  std::string r;
  int winner = -1;
};

struct Verdict {
  std::string experiment;
  std::string check;
  std::string value;
  std::string threshold;
  bool pass = false;
};

struct Metrics {
  std::vector<std::string> miner_names;
  std::vector<std::string> miner_addresses;  // hex
  std::vector<Rational> stake_share;    // per miner, at genesis
  std::vector<uint64_t> blocks_won;     // per miner, canonical heights only
  std::vector<Rational> reward_share;   // per miner, of all canonical rewards
  std::vector<int> winner_sequence;     // canonical winner, height 1..N
  std::vector<TimeseriesRow> timeseries;
  uint64_t canonical_height = 0;
  uint64_t orphans = 0;   // blocks some node adopted that fell off the canon
  uint64_t rejected = 0;  // deliveries that failed verification
  chain::GenesisDoc genesis;
  std::vector<chain::Block> canonical_chain;  // genesis included
  std::vector<Verdict> verdicts;              // filled in by experiments
};

Metrics run_simulation(const SimConfig& config);

// Exact single-height win probability per miner under the slot lottery:
// each miner draws a uniform slot in [0, floor(1/stake)), the smallest slot
// wins, and ties split evenly (the tie-break hash is uniform). Valid as a
// simulation oracle whenever the slot-to-steps map is strictly increasing,
// i.e. q * (r - 1) >= 1 throughout the run. Enumerates the joint slot
// space; throws std::invalid_argument when the state count exceeds
// `max_states` or a stake is outside (0, 1].
std::vector<Rational> exact_win_distribution(const std::vector<Rational>& stakes,
                                             uint64_t max_states = uint64_t(1) << 22);

// Deterministic CSV renderings.
std::string summary_csv(const Metrics& m);
std::string timeseries_csv(const Metrics& m);
std::string verdicts_csv(const std::vector<Verdict>& verdicts);
void write_outputs(const Metrics& m, const std::string& out_dir);

// --- experiments -------------------------------------------------------------
//
// Each experiment runs one or more simulations and appends pass/fail
// verdicts. Thresholds arrive via the config's "experiment" object.

struct ExperimentSpec {
  std::string name;  // empty = plain simulation, no verdicts
  // fairness
  Rational oracle_tolerance = Rational(2, 100);  // |share - exact odds|
  Rational stake_tolerance = Rational(3, 100);   // |share - stake|
  // sybil split / pool merge
  size_t subject = 0;        // miner under the identity change
  size_t splits = 2;         // pieces the subject splits into
  size_t merge_with = 1;     // partner absorbed in the merge variant
  Rational gain_tolerance = Rational(2, 100);
  // fast hardware
  size_t fast_miner = 0;
  Rational speedup = 5;
  Rational transient_margin = Rational(1, 100);  // must exceed stake by this
  Rational settle_tolerance = Rational(2, 100);  // final window band
  uint64_t settle_window = 2000;                 // trailing blocks measured
  // difficulty convergence
  uint64_t converge_by = 2000;
  uint64_t measure_to = 10000;
  uint64_t measure_window = 500;    // blocks averaged when judging the band
  Rational band = Rational(1, 10);  // +-10% of the target block time
};

ExperimentSpec experiment_from_json(const std::string& text);  // reads "experiment"

Metrics run_experiment(const SimConfig& config, const ExperimentSpec& spec);

}  // namespace vixify::simnet
