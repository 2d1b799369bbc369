#include "admit/cluster.hpp"

#include "admit/csv.hpp"
#include "admit/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace admit {

std::vector<double> global_variances(const MixedTable& t) {
    std::vector<double> out;
    const double n = static_cast<double>(t.rows());
    for (const auto& col : t.continuous) {
        double mean = 0;
        for (double x : col) mean += x;
        mean /= n;
        double ss = 0;
        for (double x : col) ss += (x - mean) * (x - mean);
        out.push_back(ss / n);
    }
    return out;
}

double loglik_xi(const ClusterStats& s, std::span<const double> global_var) {
    if (s.n == 0) return 0.0;
    if (global_var.size() != s.mean.size()) throw ValidationError("global variance count does not match the attributes");
    const double n = static_cast<double>(s.n);
    double inner = 0;
    for (std::size_t k = 0; k < s.mean.size(); ++k) {
        if (!(global_var[k] > 0)) {
            throw ValidationError("continuous attribute " + std::to_string(k) +
                                  " has zero variance over the dataset; drop the constant attribute");
        }
        inner += 0.5 * std::log(global_var[k] + s.variance(k));
    }
    for (const auto& counts : s.level_counts) {
        double entropy = 0;
        for (auto c : counts) {
            if (c == 0) continue;
            const double p = static_cast<double>(c) / n;
            entropy -= p * std::log(p);
        }
        inner += entropy;
    }
    return -n * inner;
}

double loglik_distance(const ClusterStats& a, const ClusterStats& b, std::span<const double> global_var) {
    if (a.n == 0 || b.n == 0) throw ValidationError("loglik_distance needs two non-empty clusters");
    const double d = loglik_xi(a, global_var) + loglik_xi(b, global_var) -
                     loglik_xi(ClusterStats::merge(a, b), global_var);
    return std::max(0.0, d);
}

std::size_t parameters_per_cluster(const MixedTable& t) {
    std::size_t m = 2 * t.continuous_count();
    for (const auto& lv : t.levels) m += lv.empty() ? 0 : lv.size() - 1;
    return m;
}

namespace {

// Allocation-free xi of a pair union, with c*ln(c) tabulated for integer
// counts. Used in the O(n^2) agglomeration loop.
class XiEngine {
public:
    XiEngine(std::vector<double> global_var, std::size_t max_count)
        : gv_(std::move(global_var)), clnc_(max_count + 1, 0.0) {
        for (std::size_t c = 2; c <= max_count; ++c) {
            clnc_[c] = static_cast<double>(c) * std::log(static_cast<double>(c));
        }
    }

    double xi(const ClusterStats& s) const {
        const double n = static_cast<double>(s.n);
        double cont = 0;
        for (std::size_t k = 0; k < gv_.size(); ++k) cont += std::log(gv_[k] + s.m2[k] / n);
        double cat = 0;
        for (const auto& counts : s.level_counts) {
            cat += clnc_[s.n];
            for (auto c : counts) cat -= clnc_[c];
        }
        return -(0.5 * n * cont + cat);
    }

    double merged_xi(const ClusterStats& a, const ClusterStats& b) const {
        const std::size_t nn = a.n + b.n;
        const double n = static_cast<double>(nn);
        const double na = static_cast<double>(a.n);
        const double nb = static_cast<double>(b.n);
        double cont = 0;
        for (std::size_t k = 0; k < gv_.size(); ++k) {
            const double delta = b.mean[k] - a.mean[k];
            const double m2 = a.m2[k] + b.m2[k] + delta * delta * na * nb / n;
            cont += std::log(gv_[k] + m2 / n);
        }
        double cat = 0;
        for (std::size_t j = 0; j < a.level_counts.size(); ++j) {
            cat += clnc_[nn];
            const auto& ca = a.level_counts[j];
            const auto& cb = b.level_counts[j];
            for (std::size_t l = 0; l < ca.size(); ++l) cat -= clnc_[ca[l] + cb[l]];
        }
        return -(0.5 * n * cont + cat);
    }

private:
    std::vector<double> gv_;
    std::vector<double> clnc_;
};

void require_positive_variances(const MixedTable& t, const std::vector<double>& gv) {
    for (std::size_t k = 0; k < gv.size(); ++k) {
        if (!(gv[k] > 0)) {
            throw ValidationError("attribute '" + t.continuous_names[k] +
                                  "' is constant over the dataset; drop the constant attribute");
        }
    }
}

}  // namespace

MergeTrace agglomerate(const MixedTable& t, const AgglomerateOptions& opt) {
    const std::size_t n = t.rows();
    if (n < 2) throw ValidationError("agglomeration needs at least 2 rows");
    const auto gv = global_variances(t);
    require_positive_variances(t, gv);

    MergeTrace trace;
    trace.rows = n;
    std::vector<ClusterStats> stats;
    if (n > opt.micro_threshold) {
        KMeansOptions km;
        km.k = std::max<std::size_t>(2, std::min(opt.micro_max, n / 10));
        km.seed = opt.seed;
        auto micro = kmeans(t, km);
        // Drop micro-clusters that ended empty and renumber densely.
        std::vector<std::size_t> remap(km.k, km.k);
        for (std::size_t c = 0; c < km.k; ++c) {
            if (micro.clustering.stats[c].n == 0) continue;
            remap[c] = stats.size();
            stats.push_back(micro.clustering.stats[c]);
        }
        trace.initial_assignment.resize(n);
        for (std::size_t i = 0; i < n; ++i) trace.initial_assignment[i] = remap[micro.clustering.assignment[i]];
        trace.notes.push_back("started from " + std::to_string(stats.size()) + " k-means micro-clusters");
    } else {
        trace.initial_assignment.resize(n);
        std::iota(trace.initial_assignment.begin(), trace.initial_assignment.end(), std::size_t{0});
        stats.reserve(n);
        for (std::size_t i = 0; i < n; ++i) stats.push_back(ClusterStats::of_row(t, i));
    }

    const std::size_t m = stats.size();
    const XiEngine engine(gv, n);
    std::vector<double> xi(m);
    double sum_xi = 0;
    for (std::size_t i = 0; i < m; ++i) {
        xi[i] = engine.xi(stats[i]);
        sum_xi += xi[i];
    }
    const double ln_n = std::log(static_cast<double>(n));
    const double params = static_cast<double>(parameters_per_cluster(t));
    auto bic = [&](std::size_t k) { return -2.0 * sum_xi + static_cast<double>(k) * params * ln_n; };

    trace.initial_k = m;
    trace.initial_bic = bic(m);
    if (m < 2) return trace;

    auto dist = [&](std::size_t i, std::size_t j) { return xi[i] + xi[j] - engine.merged_xi(stats[i], stats[j]); };

    // Cached nearest neighbour of every live cluster; ties go to the lower index.
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<char> alive(m, 1);
    std::vector<std::size_t> nn(m, m);
    std::vector<double> nnd(m, kInf);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double d = dist(i, j);
            if (d < nnd[i]) {
                nnd[i] = d;
                nn[i] = j;
            }
            if (d < nnd[j]) {
                nnd[j] = d;
                nn[j] = i;
            }
        }
    }

    std::vector<double> to_merged(m, kInf);
    auto recompute = [&](std::size_t i) {
        nn[i] = m;
        nnd[i] = kInf;
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i || !alive[j]) continue;
            const double d = dist(i, j);
            if (d < nnd[i]) {
                nnd[i] = d;
                nn[i] = j;
            }
        }
    };

    trace.steps.reserve(m - 1);
    for (std::size_t count = m; count > 1;) {
        std::size_t a = m;
        double best = kInf;
        for (std::size_t i = 0; i < m; ++i) {
            if (alive[i] && nnd[i] < best) {
                best = nnd[i];
                a = i;
            }
        }
        if (a == m) {
            // Every remaining distance is +inf or NaN; fall back to the first live pair.
            a = static_cast<std::size_t>(std::find(alive.begin(), alive.end(), 1) - alive.begin());
            recompute(a);
            if (nn[a] == m) {
                nn[a] = static_cast<std::size_t>(std::find(alive.begin() + static_cast<std::ptrdiff_t>(a) + 1,
                                                           alive.end(), 1) - alive.begin());
            }
            best = dist(a, nn[a]);
        }
        const std::size_t lo = std::min(a, nn[a]);
        const std::size_t hi = std::max(a, nn[a]);

        stats[lo] = ClusterStats::merge(stats[lo], stats[hi]);
        const double merged = engine.xi(stats[lo]);
        sum_xi += merged - xi[lo] - xi[hi];
        xi[lo] = merged;
        alive[hi] = 0;
        --count;
        trace.steps.push_back(MergeStep{count, lo, hi, std::max(0.0, best), bic(count)});
        if (count == 1) break;

        // Refresh the merged cluster's neighbour, remembering each distance.
        nn[lo] = m;
        nnd[lo] = kInf;
        for (std::size_t j = 0; j < m; ++j) {
            if (j == lo || !alive[j]) continue;
            to_merged[j] = dist(lo, j);
            if (to_merged[j] < nnd[lo]) {
                nnd[lo] = to_merged[j];
                nn[lo] = j;
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (i == lo || !alive[i]) continue;
            if (nn[i] == lo || nn[i] == hi) {
                recompute(i);
            } else if (to_merged[i] < nnd[i] || (to_merged[i] == nnd[i] && lo < nn[i])) {
                nnd[i] = to_merged[i];
                nn[i] = lo;
            }
        }
    }
    return trace;
}

double MergeTrace::bic(std::size_t k) const {
    if (k == initial_k) return initial_bic;
    if (k == 0 || k > initial_k) throw std::out_of_range("no BIC recorded for k=" + std::to_string(k));
    return steps.at(initial_k - 1 - k).bic;
}

double MergeTrace::merge_distance_into(std::size_t k) const {
    if (k == 0 || k >= initial_k) throw std::out_of_range("no merge into k=" + std::to_string(k));
    return steps.at(initial_k - 1 - k).distance;
}

std::vector<std::size_t> MergeTrace::partition_at(std::size_t k) const {
    if (k == 0 || k > initial_k) throw std::out_of_range("no partition with k=" + std::to_string(k));
    std::vector<std::size_t> parent(initial_k);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& s : steps) {
        if (s.k < k) break;
        parent[find(s.right)] = find(s.left);
    }
    std::vector<std::size_t> label(initial_k, initial_k);
    std::size_t next = 0;
    std::vector<std::size_t> out(initial_assignment.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::size_t root = find(initial_assignment[i]);
        if (label[root] == initial_k) label[root] = next++;
        out[i] = label[root];
    }
    return out;
}

std::size_t auto_k(const MergeTrace& trace, std::size_t max_k, const AutoKOptions& opt) {
    const std::size_t kmax = std::min(std::max<std::size_t>(max_k, 1), trace.initial_k);
    if (kmax <= 1 || trace.initial_k < 2) return 1;

    // Stage 1: coarse estimate from the BIC change ratio.
    const double first_drop = trace.bic(1) - trace.bic(2);
    if (!(first_drop > 0)) return 1;
    std::size_t coarse = kmax;
    for (std::size_t k = 1; k <= kmax && k + 1 <= trace.initial_k; ++k) {
        const double ratio = (trace.bic(k) - trace.bic(k + 1)) / first_drop;
        if (ratio < opt.bic_ratio_threshold) {
            coarse = k;
            break;
        }
    }
    if (coarse <= 1) return 1;

    // Stage 2: refine with the ratio of successive merge distances.
    struct Candidate {
        std::size_t k;
        double ratio;
    };
    std::vector<Candidate> cands;
    for (std::size_t k = 2; k <= coarse; ++k) {
        if (k + 1 > trace.initial_k) continue;
        const double num = trace.merge_distance_into(k - 1);
        const double den = trace.merge_distance_into(k);
        double ratio;
        if (den > 0) {
            ratio = num / den;
        } else {
            ratio = num > 0 ? std::numeric_limits<double>::infinity() : 1.0;
        }
        cands.push_back({k, ratio});
    }
    if (cands.empty()) return coarse;
    if (cands.size() == 1) return cands.front().k;

    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) { return x.ratio > y.ratio; });
    const auto& best = cands[0];
    const auto& runner = cands[1];
    if (best.ratio > opt.distance_ratio_threshold * runner.ratio) return best.k;
    return std::max(best.k, runner.k);
}

TwoStepResult twostep(const MixedTable& t, const TwoStepOptions& opt) {
    TwoStepResult res;

    MixedTable work = t;
    const auto gv_all = global_variances(t);
    work.continuous.clear();
    work.continuous_names.clear();
    for (std::size_t k = 0; k < t.continuous_count(); ++k) {
        if (gv_all[k] > 0) {
            work.continuous.push_back(t.continuous[k]);
            work.continuous_names.push_back(t.continuous_names[k]);
        } else {
            res.dropped_constant.push_back(t.continuous_names[k]);
        }
    }

    res.trace = agglomerate(work, opt.agglomerate);
    for (const auto& name : res.dropped_constant) res.trace.notes.push_back("dropped constant attribute '" + name + "'");
    const std::size_t k = auto_k(res.trace, opt.max_k, opt.auto_k);
    res.chosen_k = k;

    const auto partition = res.trace.partition_at(k);
    std::vector<ClusterStats> clusters(k, ClusterStats::empty_for(work));
    for (std::size_t i = 0; i < work.rows(); ++i) clusters[partition[i]].add_row(work, i);

    const XiEngine engine(global_variances(work), work.rows() + 1);
    std::vector<double> cluster_xi(k);
    for (std::size_t c = 0; c < k; ++c) cluster_xi[c] = engine.xi(clusters[c]);

    std::vector<std::size_t> assign(work.rows());
    for (std::size_t i = 0; i < work.rows(); ++i) {
        const ClusterStats single = ClusterStats::of_row(work, i);
        const double xi_single = engine.xi(single);
        std::size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            const double d = xi_single + cluster_xi[c] - engine.merged_xi(single, clusters[c]);
            if (d < bd) {
                bd = d;
                best = c;
            }
        }
        assign[i] = best;
    }

    // Renumber by first row; clusters that lost every row disappear.
    std::vector<std::size_t> label(k, k);
    std::size_t next = 0;
    for (auto& a : assign) {
        if (label[a] == k) label[a] = next++;
        a = label[a];
    }
    if (next < k) {
        res.trace.notes.push_back(std::to_string(k - next) + " cluster(s) emptied by the final assignment");
    }
    res.clustering = make_clustering(t, std::move(assign), next);
    return res;
}

void write_trace(std::ostream& out, const MergeTrace& trace, std::size_t max_k) {
    csv::write_row(out, {"k", "merge_distance", "bic"});
    const std::size_t limit = max_k + 1;
    if (trace.initial_k <= limit) {
        csv::write_row(out, {std::to_string(trace.initial_k), "", csv::format_double(trace.initial_bic)});
    }
    for (const auto& s : trace.steps) {
        if (s.k > limit) continue;
        csv::write_row(out, {std::to_string(s.k), csv::format_double(s.distance), csv::format_double(s.bic)});
    }
}

}  // namespace admit
