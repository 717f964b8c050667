#pragma once

#include "circtrade/ingest.hpp"

#include <span>
#include <vector>

namespace circtrade {

// Both metrics treat every label value, including -1, as an ordinary cluster id.
// Throw LengthMismatch on unequal lengths.

// Hubert-Arabie ARI. Returns 1 when both labelings are trivially identical
// (no pair structure to correct for).
double adjusted_rand_index(std::span<const int> pred, std::span<const int> truth);

// Mutual information over the arithmetic mean of the two entropies; 1 when
// both labelings have a single cluster.
double normalized_mutual_information(std::span<const int> pred, std::span<const int> truth);

// Relabels each -1 entry with a fresh id so every noise point is its own cluster.
std::vector<int> noise_as_singletons(std::span<const int> labels);

double jaccard(std::span<const DealerId> a, std::span<const DealerId> b);

struct RingRecovery {
  double precision = 1.0;
  double recall = 0.0;
};

// A planted ring is recovered when some predicted community has Jaccard
// overlap >= threshold with it. Precision counts predicted communities that
// match some ring; it is 1 when nothing is predicted. Recall is 0 with no
// planted rings.
RingRecovery ring_recovery(const std::vector<std::vector<DealerId>>& predicted,
                           const std::vector<std::vector<DealerId>>& planted, double threshold = 0.5);

struct EvalScores {
  double ari = 0.0;
  double nmi = 0.0;
  double ari_ring_members = 0.0;  // ARI restricted to planted ring members
  double ring_precision = 0.0;
  double ring_recall = 0.0;
};

}  // namespace circtrade
