#pragma once

#include "admit/cluster.hpp"
#include "admit/features.hpp"

#include <cstdint>
#include <vector>

namespace admit {

// Pair counts over all n(n-1)/2 unordered row pairs:
// a = together in both, b = together in the first only,
// c = together in the second only, d = apart in both.
struct PairCounts {
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    std::uint64_t c = 0;
    std::uint64_t d = 0;

    std::uint64_t total() const noexcept { return a + b + c + d; }
};

// Contingency-table computation, O(n + k1*k2). Both clusterings must cover
// the same rows (same ids in the same order when ids are present).
PairCounts pair_counts(const Clustering& c1, const Clustering& c2);

double rand_index(const Clustering& c1, const Clustering& c2);
// a / (a+b+c); 1.0 when no pair is together in either clustering.
double jaccard_index(const Clustering& c1, const Clustering& c2);

struct AdcoOptions {
    std::size_t bins_per_attr = 10;
    // Cluster correspondences are enumerated exhaustively up to this k and
    // solved as an assignment problem above it.
    std::size_t exhaustive_limit = 8;
};

// Per-cluster density profile: counts of cluster members in every
// (attribute, bin) cell, flattened. Continuous attributes use equal-width
// bins over the observed range; each categorical level is its own bin.
// Returns k rows (clusters beyond c.k are empty).
std::vector<std::vector<double>> density_profiles(const Clustering& c, const MixedTable& t, std::size_t k,
                                                  std::size_t bins_per_attr);

// max over cluster permutations pi of sum_i <p[i], q[pi(i)]>.
double best_correspondence(const std::vector<std::vector<double>>& p, const std::vector<std::vector<double>>& q,
                           std::size_t exhaustive_limit = 8);

// Column for every row of a square weight matrix that maximizes the total
// weight (Hungarian method).
std::vector<std::size_t> max_weight_assignment(const std::vector<std::vector<double>>& w);

// ADCO similarity: sim(c1,c2) / max(sim(c1,c1), sim(c2,c2)), in (0, 1].
double adco(const Clustering& c1, const Clustering& c2, const MixedTable& t, const AdcoOptions& opt = {});

}  // namespace admit
