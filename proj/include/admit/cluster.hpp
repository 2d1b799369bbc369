#pragma once

#include "admit/features.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace admit {

// Sufficient statistics of one cluster over a MixedTable: size, per
// continuous attribute the mean and the sum of squared deviations (m2), and
// per categorical attribute the level counts.
struct ClusterStats {
    std::size_t n = 0;
    std::vector<double> mean;
    std::vector<double> m2;
    std::vector<std::vector<std::size_t>> level_counts;

    static ClusterStats empty_for(const MixedTable& t);
    static ClusterStats of_row(const MixedTable& t, std::size_t row);
    void add_row(const MixedTable& t, std::size_t row);
    // Pooled statistics of the union of two disjoint clusters.
    static ClusterStats merge(const ClusterStats& a, const ClusterStats& b);

    // Maximum-likelihood (population) variance.
    double variance(std::size_t attribute) const { return n ? m2[attribute] / static_cast<double>(n) : 0.0; }
};

struct Clustering {
    std::size_t k = 0;
    std::vector<std::string> ids;
    std::vector<std::size_t> assignment;  // row -> [0, k)
    std::vector<ClusterStats> stats;      // may be empty for id-only clusterings

    std::size_t rows() const noexcept { return assignment.size(); }
    std::vector<std::size_t> sizes() const;
};

// Assignment-only clustering (no stats).
Clustering make_clustering(std::vector<std::size_t> assignment, std::size_t k, std::vector<std::string> ids = {});
// Clustering with statistics recomputed from the table.
Clustering make_clustering(const MixedTable& t, std::vector<std::size_t> assignment, std::size_t k);
// Throws std::logic_error if the stored stats differ from a recount.
void check_consistent(const Clustering& c, const MixedTable& t, double tol = 1e-9);

void write_clustering(std::ostream& out, const Clustering& c);
Clustering read_clustering(std::istream& in);

// ---------------------------------------------------------------------------
// K-means
// ---------------------------------------------------------------------------

// Maps table rows to the numeric space K-means works in: continuous columns
// z-scored (population standard deviation; constant columns map to 0) and
// categorical columns one-of-L encoded.
struct FeatureEncoder {
    std::vector<double> center;  // per continuous attribute
    std::vector<double> scale;   // per continuous attribute (1 when unscaled)
    std::vector<std::size_t> level_count;

    static FeatureEncoder fit(const MixedTable& t, bool standardize);
    std::size_t dimension() const;
    void encode(const MixedTable& t, std::size_t row, std::span<double> out) const;
    std::vector<double> encode_all(const MixedTable& t) const;  // row-major
};

struct KMeansOptions {
    std::size_t k = 3;
    std::uint64_t seed = 0;
    std::size_t max_iter = 100;
    double tol = 1e-9;
    bool standardize = true;
    // Explicit initial centers as row indices; empty means seeded
    // farthest-first initialization.
    std::vector<std::size_t> initial_rows;
};

struct KMeansResult {
    Clustering clustering;
    FeatureEncoder encoder;
    std::vector<std::vector<double>> centers;  // encoded space
    std::vector<double> objective_history;     // after each assignment step
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<std::string> events;  // empty-cluster repairs etc.

    double objective() const { return objective_history.empty() ? 0.0 : objective_history.back(); }
    // Nearest center for row `row` of a table built with the same levels.
    std::size_t nearest_center(const MixedTable& t, std::size_t row) const;
};

// Lloyd iteration: nearest center by squared Euclidean distance, then
// center = mean, until no assignment changes, the largest center move is
// below tol, or max_iter. Empty clusters are reseeded at the point farthest
// from its own center. Throws ValidationError if k is 0 or exceeds the rows.
KMeansResult kmeans(const MixedTable& t, const KMeansOptions& opt);

// ---------------------------------------------------------------------------
// Log-likelihood (TwoStep) distance
// ---------------------------------------------------------------------------

// Population variance of every continuous column.
std::vector<double> global_variances(const MixedTable& t);

// xi_v = -N_v ( sum_k 1/2 ln(s2_k + s2_vk) + sum_j E_vj ), natural log.
// Throws ValidationError if any global variance is not positive.
double loglik_xi(const ClusterStats& s, std::span<const double> global_var);

// d(i,j) = xi_i + xi_j - xi_<i,j>; symmetric and non-negative.
double loglik_distance(const ClusterStats& a, const ClusterStats& b, std::span<const double> global_var);

// Number of free parameters per cluster: 2 per continuous attribute plus
// (L_j - 1) per categorical attribute.
std::size_t parameters_per_cluster(const MixedTable& t);

struct MergeStep {
    std::size_t k = 0;  // cluster count after the merge
    std::size_t left = 0;
    std::size_t right = 0;
    double distance = 0;
    double bic = 0;  // BIC(k)
};

struct MergeTrace {
    std::size_t rows = 0;
    std::size_t initial_k = 0;
    double initial_bic = 0;
    std::vector<std::size_t> initial_assignment;  // row -> starting cluster
    std::vector<MergeStep> steps;                 // steps[i].k == initial_k - 1 - i
    std::vector<std::string> notes;

    double bic(std::size_t k) const;
    // Distance of the merge that went from k+1 to k clusters.
    double merge_distance_into(std::size_t k) const;
    // Row partition with k clusters, ids numbered by first row.
    std::vector<std::size_t> partition_at(std::size_t k) const;
};

struct AgglomerateOptions {
    // Above this many rows the agglomeration starts from K-means
    // micro-clusters instead of singletons.
    std::size_t micro_threshold = 5000;
    std::size_t micro_max = 200;
    std::uint64_t seed = 0;
};

// Greedy merging of the closest pair under loglik_distance down to one
// cluster; BIC(k) = -2 sum_v xi_v + m_k ln N is recorded at every k.
MergeTrace agglomerate(const MixedTable& t, const AgglomerateOptions& opt = {});

struct AutoKOptions {
    double bic_ratio_threshold = 0.04;
    double distance_ratio_threshold = 1.15;
};

// Two-stage cluster-count selection over a merge trace, k in [1, max_k].
std::size_t auto_k(const MergeTrace& trace, std::size_t max_k, const AutoKOptions& opt = {});

struct TwoStepOptions {
    std::size_t max_k = 15;
    AutoKOptions auto_k;
    AgglomerateOptions agglomerate;
};

struct TwoStepResult {
    Clustering clustering;
    MergeTrace trace;
    std::size_t chosen_k = 0;
    std::vector<std::string> dropped_constant;
};

// Agglomerate, pick k, then assign each row to the cluster with the smallest
// loglik_distance between the row (as a singleton) and the cluster.
// Constant continuous columns carry no information and are dropped first.
TwoStepResult twostep(const MixedTable& t, const TwoStepOptions& opt = {});

void write_trace(std::ostream& out, const MergeTrace& trace, std::size_t max_k);

}  // namespace admit
