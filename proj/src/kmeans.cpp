#include "admit/cluster.hpp"

#include "admit/error.hpp"
#include "admit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace admit {

FeatureEncoder FeatureEncoder::fit(const MixedTable& t, bool standardize) {
    FeatureEncoder e;
    const double n = static_cast<double>(t.rows());
    for (const auto& col : t.continuous) {
        double mean = 0;
        double sd = 1;
        if (standardize && !col.empty()) {
            for (double x : col) mean += x;
            mean /= n;
            double ss = 0;
            for (double x : col) ss += (x - mean) * (x - mean);
            sd = std::sqrt(ss / n);
        }
        e.center.push_back(mean);
        e.scale.push_back(sd);
    }
    for (const auto& lv : t.levels) e.level_count.push_back(lv.size());
    return e;
}

std::size_t FeatureEncoder::dimension() const {
    std::size_t d = center.size();
    for (auto l : level_count) d += l;
    return d;
}

void FeatureEncoder::encode(const MixedTable& t, std::size_t row, std::span<double> out) const {
    std::size_t p = 0;
    for (std::size_t k = 0; k < center.size(); ++k) {
        out[p++] = scale[k] > 0 ? (t.continuous[k][row] - center[k]) / scale[k] : 0.0;
    }
    for (std::size_t j = 0; j < level_count.size(); ++j) {
        const int code = t.codes[j][row];
        for (std::size_t l = 0; l < level_count[j]; ++l) {
            out[p++] = static_cast<std::size_t>(code) == l && code >= 0 ? 1.0 : 0.0;
        }
    }
}

std::vector<double> FeatureEncoder::encode_all(const MixedTable& t) const {
    const std::size_t d = dimension();
    std::vector<double> x(t.rows() * d);
    for (std::size_t i = 0; i < t.rows(); ++i) encode(t, i, std::span<double>(x.data() + i * d, d));
    return x;
}

namespace {

double sq_dist(const double* a, const double* b, std::size_t d) {
    double s = 0;
    for (std::size_t i = 0; i < d; ++i) {
        const double diff = a[i] - b[i];
        s += diff * diff;
    }
    return s;
}

// Nearest center; ties go to the lower cluster id.
std::size_t nearest(const double* x, const std::vector<std::vector<double>>& centers, std::size_t d,
                    double* best_dist = nullptr) {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        const double dist = sq_dist(x, centers[c].data(), d);
        if (dist < bd) {
            bd = dist;
            best = c;
        }
    }
    if (best_dist) *best_dist = bd;
    return best;
}

// Seeded farthest-first sweep over distinct rows: a random first row, then
// repeatedly the row farthest from its nearest chosen center.
std::vector<std::size_t> farthest_first(const std::vector<double>& x, std::size_t n, std::size_t d, std::size_t k,
                                        std::uint64_t seed) {
    Rng rng(seed, 0x6b6d65616e73ULL);
    std::vector<std::size_t> chosen{static_cast<std::size_t>(rng.below(n))};
    std::vector<char> taken(n, 0);
    taken[chosen[0]] = 1;
    std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
    while (chosen.size() < k) {
        const double* c = x.data() + chosen.back() * d;
        std::size_t best = n;
        double bd = -1;
        for (std::size_t i = 0; i < n; ++i) {
            min_dist[i] = std::min(min_dist[i], sq_dist(x.data() + i * d, c, d));
            if (!taken[i] && min_dist[i] > bd) {
                bd = min_dist[i];
                best = i;
            }
        }
        chosen.push_back(best);
        taken[best] = 1;
    }
    return chosen;
}

}  // namespace

std::size_t KMeansResult::nearest_center(const MixedTable& t, std::size_t row) const {
    std::vector<double> x(encoder.dimension());
    encoder.encode(t, row, x);
    return nearest(x.data(), centers, x.size());
}

KMeansResult kmeans(const MixedTable& t, const KMeansOptions& opt) {
    const std::size_t n = t.rows();
    const std::size_t k = opt.k;
    if (k == 0) throw ValidationError("k-means needs k >= 1");
    if (k > n) {
        throw ValidationError("k-means: k=" + std::to_string(k) + " exceeds row count " + std::to_string(n));
    }

    KMeansResult res;
    res.encoder = FeatureEncoder::fit(t, opt.standardize);
    const std::size_t d = res.encoder.dimension();
    const std::vector<double> x = res.encoder.encode_all(t);
    auto point = [&](std::size_t i) { return x.data() + i * d; };

    std::vector<std::size_t> init = opt.initial_rows;
    if (init.empty()) {
        init = farthest_first(x, n, d, k, opt.seed);
    } else if (init.size() != k) {
        throw ValidationError("k-means: need exactly k initial rows");
    }
    res.centers.resize(k);
    for (std::size_t c = 0; c < k; ++c) {
        if (init[c] >= n) throw ValidationError("k-means: initial row out of range");
        res.centers[c].assign(point(init[c]), point(init[c]) + d);
    }

    std::vector<std::size_t> assign(n);
    auto assign_all = [&]() {
        double objective = 0;
        std::size_t changed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double dist = 0;
            const std::size_t c = nearest(point(i), res.centers, d, &dist);
            if (c != assign[i]) ++changed;
            assign[i] = c;
            objective += dist;
        }
        return std::pair{objective, changed};
    };

    res.objective_history.push_back(assign_all().first);

    for (std::size_t iter = 0; iter < opt.max_iter; ++iter) {
        // Means, summed in row order so the result does not depend on
        // how the work might be split.
        std::vector<std::vector<double>> sums(k, std::vector<double>(d, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            auto& s = sums[assign[i]];
            const double* p = point(i);
            for (std::size_t q = 0; q < d; ++q) s[q] += p[q];
            ++counts[assign[i]];
        }
        auto old = res.centers;
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            for (std::size_t q = 0; q < d; ++q) res.centers[c][q] = sums[c][q] / static_cast<double>(counts[c]);
        }

        std::vector<char> reseeded(n, 0);
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] != 0) continue;
            std::size_t far = n;
            double fd = -1;
            for (std::size_t i = 0; i < n; ++i) {
                if (reseeded[i] || counts[assign[i]] < 2) continue;
                const double dist = sq_dist(point(i), res.centers[assign[i]].data(), d);
                if (dist > fd) {
                    fd = dist;
                    far = i;
                }
            }
            if (far == n || fd <= 0) {
                res.events.push_back("iteration " + std::to_string(iter + 1) + ": cluster " + std::to_string(c) +
                                     " empty and no point to reseed it");
                continue;
            }
            reseeded[far] = 1;
            res.centers[c].assign(point(far), point(far) + d);
            res.events.push_back("iteration " + std::to_string(iter + 1) + ": cluster " + std::to_string(c) +
                                 " empty, reseeded at row " + t.ids[far]);
        }

        double moved = 0;
        for (std::size_t c = 0; c < k; ++c) moved = std::max(moved, std::sqrt(sq_dist(old[c].data(), res.centers[c].data(), d)));

        const auto [objective, changed] = assign_all();
        res.objective_history.push_back(objective);
        res.iterations = iter + 1;
        if (changed == 0 || moved < opt.tol) {
            res.converged = true;
            break;
        }
    }

    res.clustering = make_clustering(t, std::move(assign), k);
    return res;
}

}  // namespace admit
