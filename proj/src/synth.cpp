#include "circtrade/synth.hpp"

#include "circtrade/error.hpp"
#include "circtrade/rng.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

namespace circtrade {

namespace {

constexpr Minutes kDay = 1440;
constexpr Minutes kFakeWindow = 7 * kDay;

struct RawTx {
  std::size_t seller, buyer;
  Minutes timestamp;
  Rupees amount;
};

Rupees uniform_amount(Rng& rng, Rupees lo, Rupees hi) {
  return lo + static_cast<Rupees>(uniform_index(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

template <class T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[uniform_index(rng, v.size())];
}

// Cycle lengths summing to total (>= 2), each in [2, max_len] with max_len >= 3.
// Length 2 is used only where nothing longer fits.
std::vector<std::size_t> cycle_lengths(Rng& rng, std::size_t total, std::size_t max_len) {
  std::vector<std::size_t> out;
  std::size_t left = total;
  while (left > 0) {
    std::size_t k = left;
    if (left > max_len) {
      const std::size_t hi = std::min(max_len, left - 2);
      k = hi < 3 ? 2 : 3 + uniform_index(rng, hi - 2);
    }
    out.push_back(k);
    left -= k;
  }
  return out;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (n_dealers == 0) throw ConfigError("dealer count must be positive");
  if (n_background_txs == 0) throw ConfigError("background transaction count must be positive");
  if (ring_size_min < 3 || ring_size_max < ring_size_min) throw ConfigError("ring sizes must satisfy 3 <= min <= max");
  if (n_rings > 0 && fake_txs_per_ring < 2) throw ConfigError("each ring needs at least 2 fake transactions");
  if (amount_min <= 0 || amount_max < amount_min) throw ConfigError("amount range must satisfy 0 < min <= max");
  if (!(fake_amount_jitter >= 0.0 && fake_amount_jitter < 1.0)) throw ConfigError("jitter must lie in [0, 1)");
  if (!(tax_rate >= 0.0)) throw ConfigError("tax rate must be non-negative");
  if (time_horizon_days < 7) throw ConfigError("time horizon must be at least 7 days");
  if (supply_layers < 3 || supply_layers > 5) throw ConfigError("supply layers must be 3, 4 or 5");
  if (!(cross_link_prob >= 0.0 && cross_link_prob <= 1.0)) throw ConfigError("cross-link probability must lie in [0, 1]");
}

std::size_t GroundTruth::ring_count() const {
  int top = -1;
  for (const auto& r : ring_membership)
    if (r) top = std::max(top, *r);
  return static_cast<std::size_t>(top + 1);
}

std::vector<std::vector<DealerId>> GroundTruth::rings() const {
  std::vector<std::vector<DealerId>> out(ring_count());
  for (std::size_t u = 0; u < ring_membership.size(); ++u)
    if (ring_membership[u]) out[static_cast<std::size_t>(*ring_membership[u])].push_back(static_cast<DealerId>(u));
  return out;
}

Scenario generate_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.n_dealers;
  const std::size_t layers = cfg.supply_layers;
  if (cfg.n_rings * cfg.ring_size_max + 2 * layers > n)
    throw ConfigInfeasible("cannot host " + std::to_string(cfg.n_rings) + " rings of up to " +
                           std::to_string(cfg.ring_size_max) + " dealers plus a " + std::to_string(layers) +
                           "-layer background in " + std::to_string(n) + " dealers");

  Rng rng(derive_seed(cfg.seed, "synth"));
  const Minutes start = parse_timestamp("2021/03/01/00:00");
  const Minutes horizon = static_cast<Minutes>(cfg.time_horizon_days) * kDay;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::vector<std::size_t>> rings(cfg.n_rings);
  std::vector<int> ring_of(n, -1);
  std::size_t next = 0;
  for (std::size_t r = 0; r < cfg.n_rings; ++r) {
    const std::size_t size = cfg.ring_size_min + uniform_index(rng, cfg.ring_size_max - cfg.ring_size_min + 1);
    for (std::size_t k = 0; k < size; ++k) {
      rings[r].push_back(order[next]);
      ring_of[order[next]] = static_cast<int>(r);
      ++next;
    }
  }

  // Supply-chain layers over the remaining dealers; ring members also get a
  // layer for their genuine trade.
  std::vector<std::vector<std::size_t>> layer_members(layers);
  std::vector<std::size_t> layer_of(n);
  for (std::size_t k = next; k < n; ++k) {
    const std::size_t l = (k - next) % layers;
    layer_members[l].push_back(order[k]);
    layer_of[order[k]] = l;
  }
  for (std::size_t k = 0; k < next; ++k) layer_of[order[k]] = uniform_index(rng, layers);

  std::vector<RawTx> txs;
  auto random_time = [&] { return start + static_cast<Minutes>(uniform_index(rng, static_cast<std::uint64_t>(horizon))); };

  // Genuine trade of ring members stays below their fake volume.
  std::size_t ring_quota = cfg.n_rings == 0 ? 0 : (cfg.fake_txs_per_ring - 1) / 2;
  if (cfg.n_rings > 0) ring_quota = std::min(ring_quota, cfg.n_background_txs / (2 * cfg.n_rings));
  for (const auto& ring : rings) {
    for (std::size_t k = 0; k < ring_quota; ++k) {
      const std::size_t m = pick(rng, ring);
      const std::size_t l = layer_of[m];
      const bool sells = l == 0 || (l + 1 < layers && uniform01(rng) < 0.5);
      const Rupees amount = uniform_amount(rng, cfg.amount_min, cfg.amount_max);
      if (sells)
        txs.push_back({m, pick(rng, layer_members[l + 1]), random_time(), amount});
      else
        txs.push_back({pick(rng, layer_members[l - 1]), m, random_time(), amount});
    }
  }
  const std::size_t outside = cfg.n_background_txs - ring_quota * cfg.n_rings;
  for (std::size_t k = 0; k < outside; ++k) {
    const std::size_t l = uniform_index(rng, layers - 1);
    std::size_t target = l + 1;
    if (target + 1 < layers && uniform01(rng) < cfg.cross_link_prob)
      target = target + 1 + uniform_index(rng, layers - target - 1);
    const std::size_t seller = pick(rng, layer_members[l]);
    const std::size_t buyer = pick(rng, layer_members[target]);
    txs.push_back({seller, buyer, random_time(), uniform_amount(rng, cfg.amount_min, cfg.amount_max)});
  }

  // Fake cycles: high-valued, near-equal amounts, all within one week per ring.
  std::vector<PlantedCycle> planted_raw;
  std::vector<std::vector<std::size_t>> planted_nodes;
  for (std::size_t r = 0; r < rings.size(); ++r) {
    const auto& ring = rings[r];
    const Minutes t0 = start + static_cast<Minutes>(uniform_index(rng, static_cast<std::uint64_t>(horizon - kFakeWindow)));
    std::vector<std::size_t> load(ring.size(), 0);
    for (std::size_t k : cycle_lengths(rng, cfg.fake_txs_per_ring, std::min<std::size_t>(6, ring.size()))) {
      // Least-used members first so every member joins some cycle.
      std::vector<std::size_t> idx(ring.size());
      std::iota(idx.begin(), idx.end(), 0);
      std::shuffle(idx.begin(), idx.end(), rng);
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return load[a] < load[b]; });
      idx.resize(k);
      std::shuffle(idx.begin(), idx.end(), rng);

      const Rupees base = uniform_amount(rng, cfg.amount_max, 4 * cfg.amount_max);
      const auto spread = static_cast<Rupees>(static_cast<double>(base) * cfg.fake_amount_jitter);
      std::vector<Minutes> times(k);
      for (auto& t : times) t = t0 + static_cast<Minutes>(uniform_index(rng, kFakeWindow));
      std::sort(times.begin(), times.end());

      PlantedCycle cyc;
      cyc.ring = static_cast<int>(r);
      std::vector<std::size_t> nodes;
      for (std::size_t h = 0; h < k; ++h) {
        ++load[idx[h]];
        nodes.push_back(ring[idx[h]]);
        const Rupees amount = base + (spread > 0 ? static_cast<Rupees>(uniform_index(rng, static_cast<std::uint64_t>(spread))) : 0);
        cyc.amounts.push_back(amount);
        cyc.timestamps.push_back(times[h]);
      }
      for (std::size_t h = 0; h < k; ++h)
        txs.push_back({nodes[h], nodes[(h + 1) % k], cyc.timestamps[h], cyc.amounts[h]});
      planted_raw.push_back(std::move(cyc));
      planted_nodes.push_back(std::move(nodes));
    }
  }

  std::stable_sort(txs.begin(), txs.end(), [](const RawTx& a, const RawTx& b) { return a.timestamp < b.timestamp; });

  Scenario sc;
  std::vector<std::optional<DealerId>> remap(n);
  auto id_of = [&](std::size_t raw) {
    if (!remap[raw]) {
      char name[32];
      std::snprintf(name, sizeof name, "Dealer %04zu", raw + 1);
      remap[raw] = sc.table.registry.intern(name);
    }
    return *remap[raw];
  };
  for (const auto& t : txs) {
    const DealerId s = id_of(t.seller), b = id_of(t.buyer);
    sc.table.transactions.push_back({s, b, t.timestamp, t.amount});
  }

  sc.truth.ring_membership.assign(sc.table.registry.size(), std::nullopt);
  for (std::size_t raw = 0; raw < n; ++raw)
    if (remap[raw] && ring_of[raw] >= 0) sc.truth.ring_membership[*remap[raw]] = ring_of[raw];
  for (std::size_t c = 0; c < planted_raw.size(); ++c) {
    for (std::size_t raw : planted_nodes[c]) planted_raw[c].nodes.push_back(*remap[raw]);
    sc.truth.planted_cycles.push_back(std::move(planted_raw[c]));
  }
  return sc;
}

double expected_tax_liability(DealerId dealer, std::span<const Transaction> txs, double tax_rate) {
  Rupees net = 0;
  for (const auto& tx : txs) {
    if (tx.seller == dealer) net += tx.amount;
    if (tx.buyer == dealer) net -= tx.amount;
  }
  return tax_rate * static_cast<double>(net);
}

}  // namespace circtrade
