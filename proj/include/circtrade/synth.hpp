#pragma once

#include "circtrade/ingest.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace circtrade {

struct ScenarioConfig {
  std::size_t n_dealers = 500;
  std::size_t n_background_txs = 3000;
  std::size_t n_rings = 5;
  std::size_t ring_size_min = 8;
  std::size_t ring_size_max = 15;
  std::size_t fake_txs_per_ring = 40;
  Rupees amount_min = 10'000;
  Rupees amount_max = 500'000;
  double fake_amount_jitter = 0.02;
  double tax_rate = 0.10;
  std::size_t time_horizon_days = 365;
  std::size_t supply_layers = 4;  // 3..5
  double cross_link_prob = 0.1;
  std::uint64_t seed = 42;

  void validate() const;  // ConfigError on invariant violations
};

struct PlantedCycle {
  int ring = 0;
  std::vector<DealerId> nodes;  // hop h: nodes[h] -> nodes[(h+1) % k]
  std::vector<Rupees> amounts;
  std::vector<Minutes> timestamps;
};

struct GroundTruth {
  std::vector<std::optional<int>> ring_membership;  // per dealer
  std::vector<PlantedCycle> planted_cycles;

  std::size_t ring_count() const;
  // Members of each ring, ascending.
  std::vector<std::vector<DealerId>> rings() const;
};

struct Scenario {
  TransactionTable table;
  GroundTruth truth;
};

// Layered supply-chain background plus vertex-disjoint rings of near-equal
// amount fake cycles packed into one week per ring. Each ring's fake
// transaction count exceeds the genuine transactions touching its members.
// Transactions are emitted in time order and dealer ids follow first
// appearance, so the table survives a CSV round trip unchanged.
// Throws ConfigError, ConfigInfeasible.
Scenario generate_scenario(const ScenarioConfig& cfg);

// tax_rate * (sales - purchases) for one dealer.
double expected_tax_liability(DealerId dealer, std::span<const Transaction> txs, double tax_rate);

}  // namespace circtrade
