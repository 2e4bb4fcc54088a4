#include "vixify/simnet.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace vixify::simnet {

namespace {

using consensus::DifficultyState;

// Counter-based randomness: one digest per draw, keyed by (seed, stream,
// a, b). No generator state, so draw order cannot influence outcomes.
uint64_t rng_u64(uint64_t seed, uint8_t stream, uint64_t a, uint64_t b) {
  ByteWriter w;
  w.u64(seed);
  w.u8(stream);
  w.u64(a);
  w.u64(b);
  Hash256 h = hash_digest(tag::kSimRng, w.take());
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = v << 8 | h[i];
  return v;
}

Rational unit_draw(uint64_t v) { return Rational(BigInt(v), BigInt(1) << 64); }

int64_t floor_seconds(const Rational& t) {
  BigInt f = boost::multiprecision::numerator(t) / boost::multiprecision::denominator(t);
  return f.convert_to<int64_t>();
}

uint64_t id64(const Hash256& h) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = v << 8 | h[i];
  return v;
}

constexpr uint8_t kStreamDrop = 1;
constexpr uint8_t kStreamLatency = 2;

struct BlockRec {
  chain::Block block;
  Hash256 id{};         // full-block hash; also the child's back-pointer
  Hash256 meta{};       // transaction-independent hash; slot message for children
  Hash256 parent_id{};
  uint64_t height = 0;
  int miner = -1;       // -1 = genesis
  uint64_t steps = 0;
  BigInt cumulative_steps;
  int64_t interblock = 0;
  std::string q_str, r_str;                // decimal difficulty after this block
  std::vector<int64_t> recent_timestamps;  // this block first, then ancestors
  bool adopted = false;
  // Heavy per-block state, pruned behind the frontier and rebuilt on demand.
  std::shared_ptr<const chain::Ledger> ledger_after;
  std::shared_ptr<const DifficultyState> diff_after;
};

struct PendingMine {
  Hash256 parent_id{};
  consensus::MiningSolution sol;  // delay output filled in at completion
};

struct NodeState {
  Bytes sk, pk;
  chain::Address addr{};
  Rational speed = 1;
  Behavior behavior = Behavior::kHonest;
  int64_t ts_offset = 0;
  Hash256 tip{};
  uint64_t generation = 0;  // bumping it cancels the in-flight completion
  std::optional<PendingMine> mining;
  std::map<uint64_t, Rational> first_seen;  // height -> first verified arrival
  std::set<Hash256> arrived;
  std::set<Hash256> rejected;  // failed verification; taints descendants
  std::set<Hash256> pulls;     // missing parents already being fetched
  std::map<Hash256, std::vector<Hash256>> waiting;  // parent -> buffered children
  bool stopped = false;
};

struct Event {
  Rational time;
  uint64_t seq = 0;
  int kind = 0;  // 0 = block delivery, 1 = mining completion
  int node = 0;
  Hash256 block_id{};
  uint64_t generation = 0;
};

struct EventLater {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

class Engine {
 public:
  explicit Engine(const SimConfig& cfg) : cfg_(cfg) { init(); }

  Metrics run();

 private:
  void init();
  void start_mining(int node, const Rational& now);
  void handle_completion(const Event& ev);
  void handle_delivery(int node, const Hash256& id, const Rational& now, bool own_block);
  void adopt(int node, BlockRec& rec, const Rational& now);
  bool prefers(const BlockRec& a, const BlockRec& b) const;
  BlockRec& make_record(chain::Block block, BlockRec& parent, int miner, int64_t timestamp);
  void derive_state(BlockRec& rec, const BlockRec& parent) const;
  void ensure_state(BlockRec& rec);
  void prune_states();
  void push_event(Event ev) {
    ev.seq = next_seq_++;
    queue_.push(std::move(ev));
  }
  Metrics finalize();

  SimConfig cfg_;
  vdf::VdfParams vdf_;
  Hash256 empty_merkle_{};
  std::vector<NodeState> nodes_;
  std::map<Hash256, BlockRec> recs_;
  Hash256 genesis_id_{};
  chain::GenesisDoc genesis_doc_;
  std::priority_queue<Event, std::vector<Event>, EventLater> queue_;
  uint64_t next_seq_ = 0;
  uint64_t max_height_ = 0;
  uint64_t created_ = 0;
  uint64_t rejected_count_ = 0;
};

void Engine::init() {
  if (cfg_.miners.empty()) throw std::invalid_argument("miners: at least one required");
  uint64_t total_stake = 0;
  for (size_t i = 0; i < cfg_.miners.size(); ++i) {
    const auto& m = cfg_.miners[i];
    if (m.speed <= 0)
      throw std::invalid_argument("miners[" + std::to_string(i) + "].speed: must be positive");
    total_stake += m.stake;
  }
  if (total_stake == 0) throw std::invalid_argument("miners: total stake must be positive");
  if (cfg_.network.latency_min < 0 || cfg_.network.latency_max < cfg_.network.latency_min)
    throw std::invalid_argument("network.latency: need 0 <= min <= max");
  if (cfg_.network.drop_rate < 0 || cfg_.network.drop_rate >= 1)
    throw std::invalid_argument("network.drop_rate: must be in [0, 1)");
  if (cfg_.fragmentation) {
    const auto& f = *cfg_.fragmentation;
    if (f.from >= cfg_.miners.size() || f.into.empty())
      throw std::invalid_argument("fragmentation: bad miner indices");
    for (size_t idx : f.into)
      if (idx >= cfg_.miners.size())
        throw std::invalid_argument("fragmentation.into: index out of range");
  }

  if (!cfg_.params.vdf_modulus_hex.empty()) {
    BigInt p(std::string("0x") + cfg_.params.vdf_modulus_hex);
    if (p % 4 != 3) throw std::invalid_argument("consensus.vdf_modulus_hex: need p = 3 (mod 4)");
    vdf_.modulus = p;
    vdf_.bit_length = int(boost::multiprecision::msb(p)) + 1;
  } else {
    vdf_ = vdf::vdf_setup(cfg_.params.vdf_bits);
  }
  empty_merkle_ = chain::merkle_root({});

  nodes_.resize(cfg_.miners.size());
  for (size_t i = 0; i < nodes_.size(); ++i) {
    ByteWriter w;
    w.u64(cfg_.seed);
    w.u32(uint32_t(i));
    auto pair = vrf::vrf_keygen(hash_to_bytes(hash_digest(tag::kSimKey, w.take())));
    nodes_[i].sk = pair.secret_key;
    nodes_[i].pk = pair.public_key;
    nodes_[i].addr = chain::address_from_public_key(pair.public_key);
    nodes_[i].speed = cfg_.miners[i].speed;
    nodes_[i].behavior = cfg_.miners[i].behavior;
    nodes_[i].ts_offset = cfg_.miners[i].timestamp_offset;
  }

  genesis_doc_.params = cfg_.params;
  genesis_doc_.timestamp = cfg_.genesis_timestamp;
  for (size_t i = 0; i < cfg_.miners.size(); ++i)
    if (cfg_.miners[i].stake > 0)
      genesis_doc_.allocations.push_back({nodes_[i].addr, cfg_.miners[i].stake});

  BlockRec g;
  g.block = chain::genesis_block(genesis_doc_);
  g.id = chain::hash_ab(g.block);
  g.meta = chain::hash_a(g.block.section_a);
  g.height = 0;
  g.recent_timestamps = {genesis_doc_.timestamp};
  g.ledger_after = std::make_shared<chain::Ledger>(chain::genesis_ledger(genesis_doc_));
  g.diff_after =
      std::make_shared<DifficultyState>(consensus::initial_difficulty(cfg_.params));
  g.q_str = rational_to_decimal(g.diff_after->q, 9);
  g.r_str = rational_to_decimal(g.diff_after->r, 9);
  genesis_id_ = g.id;
  recs_.emplace(g.id, std::move(g));
}

void Engine::derive_state(BlockRec& rec, const BlockRec& parent) const {
  auto ledger = std::make_shared<chain::Ledger>(
      chain::apply_block(*parent.ledger_after, rec.block, cfg_.params.block_reward));
  if (cfg_.fragmentation && rec.height == cfg_.fragmentation->height) {
    const auto& f = *cfg_.fragmentation;
    uint64_t& from_bal = ledger->balances[nodes_[f.from].addr];
    uint64_t per = from_bal / 2 / f.into.size();
    for (size_t idx : f.into) ledger->balances[nodes_[idx].addr] += per;
    from_bal -= per * f.into.size();
  }
  rec.ledger_after = std::move(ledger);

  auto diff = std::make_shared<DifficultyState>(*parent.diff_after);
  consensus::difficulty_on_block(*diff, cfg_.params, rec.steps, rec.interblock);
  rec.q_str = rational_to_decimal(diff->q, 9);
  rec.r_str = rational_to_decimal(diff->r, 9);
  rec.diff_after = std::move(diff);
}

void Engine::ensure_state(BlockRec& rec) {
  if (rec.ledger_after && rec.diff_after) return;
  std::vector<Hash256> path;  // stateless ancestors, newest first
  Hash256 cur = rec.id;
  while (true) {
    BlockRec& r = recs_.at(cur);
    if (r.ledger_after && r.diff_after) break;
    path.push_back(cur);
    cur = r.parent_id;
  }
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    BlockRec& child = recs_.at(*it);
    derive_state(child, recs_.at(child.parent_id));
  }
}

void Engine::prune_states() {
  if (max_height_ < 96) return;
  uint64_t keep_from = max_height_ - 64;
  for (auto& [id, rec] : recs_) {
    if (rec.height > 0 && rec.height < keep_from) {
      rec.ledger_after.reset();
      rec.diff_after.reset();
    }
  }
}

void Engine::start_mining(int node_idx, const Rational& now) {
  NodeState& node = nodes_[node_idx];
  node.mining.reset();
  if (node.stopped) return;
  BlockRec& tip = recs_.at(node.tip);
  ensure_state(tip);
  Rational stake = chain::stake_fraction(*tip.ledger_after, node.addr);
  if (stake <= 0) return;

  PendingMine pm;
  pm.parent_id = node.tip;
  pm.sol.range = consensus::compute_range(stake);
  auto slot = consensus::compute_slot(node.sk, tip.meta, pm.sol.range);
  pm.sol.slot = slot.slot;
  pm.sol.slot_vrf = std::move(slot.vrf);
  try {
    pm.sol.steps = consensus::compute_steps(tip.diff_after->q, tip.diff_after->r, pm.sol.slot,
                                            cfg_.params.step_ceiling);
  } catch (const consensus::StepCeilingError&) {
    return;  // slot beyond the ceiling; sit this height out
  }
  // the delay-input proof does not affect the schedule, so it is produced at
  // completion time; attempts cancelled by a tip switch never pay for it

  Rational duration = Rational(BigInt(pm.sol.steps), 1) / node.speed;
  node.mining = std::move(pm);
  push_event({now + duration, 0, 1, node_idx, {}, node.generation});
}

void Engine::handle_completion(const Event& ev) {
  NodeState& node = nodes_[ev.node];
  if (node.stopped || !node.mining || ev.generation != node.generation) return;
  PendingMine pm = std::move(*node.mining);
  node.mining.reset();

  BlockRec& parent = recs_.at(pm.parent_id);
  int64_t ts = floor_seconds(ev.time) + node.ts_offset;

  auto input = consensus::compute_vdf_input(node.sk, parent.id, empty_merkle_,
                                            cfg_.params.bind_merkle);
  pm.sol.vdf_input = input.input;
  pm.sol.merkle_vrf = std::move(input.vrf);

  Bytes input_bytes = hash_to_bytes(pm.sol.vdf_input);
  if (cfg_.mode == consensus::VdfMode::kReal) {
    pm.sol.vdf_proof = vdf::vdf_eval(vdf_, input_bytes, pm.sol.steps);
  } else {
    pm.sol.vdf_proof.input = vdf::reduce_input(vdf_, input_bytes);
    pm.sol.vdf_proof.steps = pm.sol.steps;
    pm.sol.vdf_proof.output =
        vdf::abstract_output(vdf_, pm.sol.vdf_proof.input, pm.sol.steps);
  }

  chain::Block block = consensus::assemble_block(parent.block, node.addr, pm.sol, {}, ts);
  BlockRec& rec = make_record(std::move(block), parent, ev.node, ts);

  handle_delivery(ev.node, rec.id, ev.time, /*own_block=*/true);
  for (size_t j = 0; j < nodes_.size(); ++j) {
    if (int(j) == ev.node) continue;
    uint64_t a = id64(rec.id);
    if (cfg_.network.drop_rate > 0 &&
        unit_draw(rng_u64(cfg_.seed, kStreamDrop, a, j)) < cfg_.network.drop_rate)
      continue;
    Rational latency = cfg_.network.latency_min;
    if (cfg_.network.latency_max > cfg_.network.latency_min)
      latency += (cfg_.network.latency_max - cfg_.network.latency_min) *
                 unit_draw(rng_u64(cfg_.seed, kStreamLatency, a, j));
    push_event({ev.time + latency, 0, 0, int(j), rec.id, 0});
  }
}

BlockRec& Engine::make_record(chain::Block block, BlockRec& parent, int miner,
                              int64_t timestamp) {
  BlockRec rec;
  rec.id = chain::hash_ab(block);
  rec.meta = chain::hash_a(block.section_a);
  rec.parent_id = parent.id;
  rec.height = block.height;
  rec.miner = miner;
  rec.steps = block.section_b.vdf_proof.steps;
  rec.cumulative_steps = parent.cumulative_steps + rec.steps;
  rec.interblock = timestamp - parent.block.section_b.timestamp;
  size_t keep = std::max(1, cfg_.params.timestamp_median_window);
  rec.recent_timestamps.push_back(timestamp);
  for (size_t i = 0; i < parent.recent_timestamps.size() && rec.recent_timestamps.size() < keep;
       ++i)
    rec.recent_timestamps.push_back(parent.recent_timestamps[i]);
  rec.block = std::move(block);
  ensure_state(parent);
  derive_state(rec, parent);
  auto [it, fresh] = recs_.emplace(rec.id, std::move(rec));
  if (fresh && ++created_ % 256 == 0) prune_states();
  return it->second;
}

bool Engine::prefers(const BlockRec& a, const BlockRec& b) const {
  if (cfg_.bias_tiebreak && a.steps == b.steps) return a.miner < b.miner;
  consensus::MiningSolution sa, sb;
  sa.steps = a.steps;
  sa.vdf_input = a.block.section_b.merkle_vrf.hash;
  sa.slot_vrf.hash = a.block.section_a.slot_vrf.hash;
  sb.steps = b.steps;
  sb.vdf_input = b.block.section_b.merkle_vrf.hash;
  sb.slot_vrf.hash = b.block.section_a.slot_vrf.hash;
  return consensus::proposer_prefers(sa, sb);
}

void Engine::handle_delivery(int node_idx, const Hash256& id, const Rational& now,
                             bool own_block) {
  NodeState& node = nodes_[node_idx];
  if (node.arrived.count(id)) return;
  BlockRec& rec = recs_.at(id);

  if (!node.arrived.count(rec.parent_id)) {
    auto& buf = node.waiting[rec.parent_id];
    if (std::find(buf.begin(), buf.end(), id) == buf.end()) buf.push_back(id);
    if (node.pulls.insert(rec.parent_id).second)
      push_event({now + cfg_.retry_interval, 0, 0, node_idx, rec.parent_id, 0});
    return;
  }

  node.arrived.insert(id);
  node.pulls.erase(id);

  bool valid = true;
  if (node.rejected.count(rec.parent_id)) {
    valid = false;  // descendants of a rejected block stay rejected
  } else if (!own_block) {
    BlockRec& parent = recs_.at(rec.parent_id);
    ensure_state(parent);
    auto res = consensus::verify_block(
        rec.block, parent.block, *parent.ledger_after, parent.diff_after->q,
        parent.diff_after->r, cfg_.params, vdf_, floor_seconds(now),
        std::span<const int64_t>(parent.recent_timestamps), cfg_.mode);
    valid = res.ok();
  }

  if (!valid) {
    node.rejected.insert(id);
    ++rejected_count_;
  } else {
    if (!node.first_seen.count(rec.height)) node.first_seen[rec.height] = now;
    BlockRec& tip = recs_.at(node.tip);
    if (rec.height > tip.height) {
      adopt(node_idx, rec, now);
    } else if (rec.height == tip.height && rec.id != node.tip) {
      const Rational& first = node.first_seen.at(rec.height);
      if (now <= first + cfg_.receive_window && prefers(rec, tip)) adopt(node_idx, rec, now);
    }
  }

  auto wit = node.waiting.find(id);
  if (wit != node.waiting.end()) {
    std::vector<Hash256> children = std::move(wit->second);
    node.waiting.erase(wit);
    for (const Hash256& c : children) handle_delivery(node_idx, c, now, false);
  }
}

void Engine::adopt(int node_idx, BlockRec& rec, const Rational& now) {
  NodeState& node = nodes_[node_idx];
  node.tip = rec.id;
  rec.adopted = true;
  max_height_ = std::max(max_height_, rec.height);
  ++node.generation;
  while (!node.first_seen.empty() && node.first_seen.begin()->first + 8 < rec.height)
    node.first_seen.erase(node.first_seen.begin());
  if (rec.height >= cfg_.blocks) {
    node.stopped = true;
    node.mining.reset();
  } else {
    start_mining(node_idx, now);
  }
}

Metrics Engine::run() {
  for (size_t i = 0; i < nodes_.size(); ++i) {
    nodes_[i].tip = genesis_id_;
    nodes_[i].arrived.insert(genesis_id_);
    start_mining(int(i), Rational(0));
  }
  // Generous budget: a run that cannot reach the target height should fail
  // loudly instead of spinning forever.
  uint64_t budget = (cfg_.blocks + 64) * nodes_.size() * 96 + (1 << 16);
  uint64_t processed = 0;
  while (!queue_.empty()) {
    if (++processed > budget)
      throw std::runtime_error("simulation event budget exceeded; config cannot settle");
    Event ev = queue_.top();
    queue_.pop();
    if (ev.kind == 1)
      handle_completion(ev);
    else
      handle_delivery(ev.node, ev.block_id, ev.time, false);
  }
  return finalize();
}

Metrics Engine::finalize() {
  std::vector<consensus::TipInfo> tips;
  std::vector<Hash256> tip_ids;
  for (const auto& node : nodes_) {
    if (std::find(tip_ids.begin(), tip_ids.end(), node.tip) != tip_ids.end()) continue;
    const BlockRec& r = recs_.at(node.tip);
    tips.push_back({r.height, r.cumulative_steps, r.id});
    tip_ids.push_back(r.id);
  }
  Hash256 best = tip_ids[consensus::fork_choice(tips)];

  // Truncate to the target height, then walk to genesis.
  const BlockRec* cur = &recs_.at(best);
  while (cur->height > cfg_.blocks) cur = &recs_.at(cur->parent_id);
  uint64_t H = cur->height;

  Metrics m;
  m.genesis = genesis_doc_;
  m.canonical_height = H;
  size_t n = nodes_.size();
  m.miner_names.resize(n);
  m.miner_addresses.resize(n);
  m.stake_share.assign(n, 0);
  m.blocks_won.assign(n, 0);
  m.reward_share.assign(n, 0);
  const chain::Ledger genesis_ledger = chain::genesis_ledger(genesis_doc_);
  for (size_t i = 0; i < n; ++i) {
    m.miner_names[i] =
        cfg_.miners[i].name.empty() ? "miner" + std::to_string(i) : cfg_.miners[i].name;
    m.miner_addresses[i] = chain::address_to_hex(nodes_[i].addr);
    m.stake_share[i] = chain::stake_fraction(genesis_ledger, nodes_[i].addr);
  }

  std::set<Hash256> canonical_ids;
  std::vector<const BlockRec*> canon;
  for (const BlockRec* r = cur;; r = &recs_.at(r->parent_id)) {
    canon.push_back(r);
    canonical_ids.insert(r->id);
    if (r->height == 0) break;
  }
  std::reverse(canon.begin(), canon.end());

  m.winner_sequence.resize(H);
  m.timeseries.resize(H);
  m.canonical_chain.reserve(canon.size());
  for (const BlockRec* r : canon) {
    m.canonical_chain.push_back(r->block);
    if (r->height == 0) continue;
    size_t idx = r->height - 1;
    m.winner_sequence[idx] = r->miner;
    m.blocks_won[r->miner]++;
    m.timeseries[idx] = {r->height,   r->block.section_b.timestamp, r->interblock,
                         r->q_str,    r->r_str,                     r->miner};
  }
  if (H > 0)
    for (size_t i = 0; i < n; ++i) m.reward_share[i] = Rational(m.blocks_won[i], H);

  for (const auto& [id, r] : recs_)
    if (r.adopted && r.height > 0 && r.height <= H && !canonical_ids.count(id)) ++m.orphans;
  m.rejected = rejected_count_;
  return m;
}

}  // namespace

Metrics run_simulation(const SimConfig& config) {
  Engine engine(config);
  return engine.run();
}

std::vector<Rational> exact_win_distribution(const std::vector<Rational>& stakes,
                                             uint64_t max_states) {
  if (stakes.empty()) throw std::invalid_argument("stakes: need at least one");
  size_t n = stakes.size();
  std::vector<uint64_t> ranges(n);
  BigInt total_states = 1;
  for (size_t i = 0; i < n; ++i) {
    if (stakes[i] <= 0 || stakes[i] > 1)
      throw std::invalid_argument("stakes[" + std::to_string(i) + "]: must be in (0, 1]");
    ranges[i] = consensus::compute_range(stakes[i]);
    total_states *= ranges[i];
    if (total_states > max_states)
      throw std::invalid_argument("stakes: joint slot space too large to enumerate");
  }
  uint64_t states = total_states.convert_to<uint64_t>();

  // Integer accumulation over a common denominator: each state contributes
  // lcm/|argmin| to every tied miner, with lcm covering every tie size.
  uint64_t lcm = 1;
  for (uint64_t k = 2; k <= n; ++k) lcm = std::lcm(lcm, k);
  std::vector<uint64_t> acc(n, 0);
  std::vector<uint64_t> slot(n, 0);
  for (uint64_t s = 0; s < states; ++s) {
    uint64_t min_slot = slot[0];
    for (size_t i = 1; i < n; ++i) min_slot = std::min(min_slot, slot[i]);
    uint64_t ties = 0;
    for (size_t i = 0; i < n; ++i) ties += slot[i] == min_slot;
    for (size_t i = 0; i < n; ++i)
      if (slot[i] == min_slot) acc[i] += lcm / ties;
    for (size_t i = 0; i < n; ++i) {  // mixed-radix increment
      if (++slot[i] < ranges[i]) break;
      slot[i] = 0;
    }
  }
  std::vector<Rational> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = Rational(BigInt(acc[i]), BigInt(states) * lcm);
  return out;
}

// --- CSV --------------------------------------------------------------------

std::string summary_csv(const Metrics& m) {
  std::string out = "miner,address,stake_share,blocks_won,reward_share\n";
  for (size_t i = 0; i < m.miner_names.size(); ++i) {
    out += m.miner_names[i] + ',' + m.miner_addresses[i] + ',' +
           rational_to_decimal(m.stake_share[i], 6) + ',' + std::to_string(m.blocks_won[i]) +
           ',' + rational_to_decimal(m.reward_share[i], 6) + '\n';
  }
  return out;
}

std::string timeseries_csv(const Metrics& m) {
  std::string out = "height,timestamp,interblock,q,r,winner\n";
  for (const auto& row : m.timeseries) {
    out += std::to_string(row.height) + ',' + std::to_string(row.timestamp) + ',' +
           std::to_string(row.interblock) + ',' + row.q + ',' + row.r + ',' +
           std::to_string(row.winner) + '\n';
  }
  return out;
}

std::string verdicts_csv(const std::vector<Verdict>& verdicts) {
  std::string out = "experiment,check,value,threshold,pass\n";
  for (const auto& v : verdicts) {
    out += v.experiment + ',' + v.check + ',' + v.value + ',' + v.threshold + ',' +
           (v.pass ? "true" : "false") + '\n';
  }
  return out;
}

void write_outputs(const Metrics& m, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream f(fs::path(out_dir) / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + name + " in " + out_dir);
    f << content;
  };
  write("summary.csv", summary_csv(m));
  write("timeseries.csv", timeseries_csv(m));
  write("verdicts.csv", verdicts_csv(m.verdicts));
}

}  // namespace vixify::simnet
