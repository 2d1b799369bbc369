#include "admit/clustsim.hpp"

#include "admit/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace admit {

namespace {

void check_same_rows(const Clustering& c1, const Clustering& c2) {
    if (c1.rows() != c2.rows()) {
        throw ValidationError("clusterings cover different row counts (" + std::to_string(c1.rows()) + " vs " +
                              std::to_string(c2.rows()) + ")");
    }
    if (!c1.ids.empty() && !c2.ids.empty() && c1.ids != c2.ids) {
        throw ValidationError("clusterings cover different row sets");
    }
}

std::uint64_t choose2(std::uint64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

}  // namespace

PairCounts pair_counts(const Clustering& c1, const Clustering& c2) {
    check_same_rows(c1, c2);
    const std::size_t k1 = c1.k;
    const std::size_t k2 = c2.k;
    std::vector<std::uint64_t> table(k1 * k2, 0);
    std::vector<std::uint64_t> rows(k1, 0);
    std::vector<std::uint64_t> cols(k2, 0);
    for (std::size_t i = 0; i < c1.rows(); ++i) {
        ++table[c1.assignment[i] * k2 + c2.assignment[i]];
        ++rows[c1.assignment[i]];
        ++cols[c2.assignment[i]];
    }
    PairCounts p;
    for (auto v : table) p.a += choose2(v);
    std::uint64_t same1 = 0;
    std::uint64_t same2 = 0;
    for (auto v : rows) same1 += choose2(v);
    for (auto v : cols) same2 += choose2(v);
    p.b = same1 - p.a;
    p.c = same2 - p.a;
    p.d = choose2(c1.rows()) - p.a - p.b - p.c;
    return p;
}

double rand_index(const Clustering& c1, const Clustering& c2) {
    if (c1.rows() < 2) throw ValidationError("rand index needs at least 2 rows");
    const auto p = pair_counts(c1, c2);
    return static_cast<double>(p.a + p.d) / static_cast<double>(p.total());
}

double jaccard_index(const Clustering& c1, const Clustering& c2) {
    if (c1.rows() < 2) throw ValidationError("jaccard index needs at least 2 rows");
    const auto p = pair_counts(c1, c2);
    const std::uint64_t denom = p.a + p.b + p.c;
    if (denom == 0) return 1.0;
    return static_cast<double>(p.a) / static_cast<double>(denom);
}

std::vector<std::vector<double>> density_profiles(const Clustering& c, const MixedTable& t, std::size_t k,
                                                  std::size_t bins_per_attr) {
    if (bins_per_attr == 0) throw ValidationError("ADCO needs at least one bin per attribute");
    if (c.rows() != t.rows()) throw ValidationError("clustering does not cover the table");
    k = std::max(k, c.k);

    // Bin index of every row for every attribute, plus the offset of each
    // attribute's block in the flattened profile.
    std::size_t width = 0;
    std::vector<std::vector<std::size_t>> cell(t.continuous_count() + t.categorical_count());
    std::size_t a = 0;
    for (const auto& col : t.continuous) {
        const auto [lo_it, hi_it] = std::minmax_element(col.begin(), col.end());
        const double lo = *lo_it;
        const double range = *hi_it - lo;
        const std::size_t bins = range > 0 ? bins_per_attr : 1;
        auto& out = cell[a++];
        out.reserve(col.size());
        for (double x : col) {
            std::size_t b = 0;
            if (range > 0) {
                b = static_cast<std::size_t>(std::floor((x - lo) / range * static_cast<double>(bins)));
                b = std::min(b, bins - 1);
            }
            out.push_back(width + b);
        }
        width += bins;
    }
    for (std::size_t j = 0; j < t.categorical_count(); ++j) {
        auto& out = cell[a++];
        // Code -1 (unseen level) gets a bin of its own after the known levels.
        const std::size_t levels = t.levels[j].size() + 1;
        for (int code : t.codes[j]) {
            out.push_back(width + (code >= 0 ? static_cast<std::size_t>(code) : levels - 1));
        }
        width += levels;
    }

    std::vector<std::vector<double>> profile(k, std::vector<double>(width, 0.0));
    for (std::size_t i = 0; i < t.rows(); ++i) {
        auto& p = profile[c.assignment[i]];
        for (const auto& attr : cell) p[attr[i]] += 1.0;
    }
    return profile;
}

std::vector<std::size_t> max_weight_assignment(const std::vector<std::vector<double>>& w) {
    const std::size_t n = w.size();
    if (n == 0) return {};
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& row : w) {
        if (row.size() != n) throw ValidationError("assignment needs a square matrix");
        for (double v : row) top = std::max(top, v);
    }
    // Minimize cost = top - w with the potentials formulation (1-based).
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0), v(n + 1, 0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = (top - w[i0 - 1][j - 1]) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> col_of_row(n);
    for (std::size_t j = 1; j <= n; ++j) col_of_row[p[j] - 1] = j - 1;
    return col_of_row;
}

double best_correspondence(const std::vector<std::vector<double>>& p, const std::vector<std::vector<double>>& q,
                           std::size_t exhaustive_limit) {
    if (p.size() != q.size()) throw ValidationError("profiles need the same cluster count");
    const std::size_t k = p.size();
    std::vector<std::vector<double>> w(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            w[i][j] = std::inner_product(p[i].begin(), p[i].end(), q[j].begin(), 0.0);
        }
    }
    if (k <= exhaustive_limit) {
        std::vector<std::size_t> perm(k);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        double best = -std::numeric_limits<double>::infinity();
        do {
            double s = 0;
            for (std::size_t i = 0; i < k; ++i) s += w[i][perm[i]];
            best = std::max(best, s);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }
    const auto assign = max_weight_assignment(w);
    double s = 0;
    for (std::size_t i = 0; i < k; ++i) s += w[i][assign[i]];
    return s;
}

double adco(const Clustering& c1, const Clustering& c2, const MixedTable& t, const AdcoOptions& opt) {
    if (t.rows() == 0) throw ValidationError("ADCO needs a non-empty dataset");
    check_same_rows(c1, c2);
    const std::size_t k = std::max(c1.k, c2.k);
    const auto p1 = density_profiles(c1, t, k, opt.bins_per_attr);
    const auto p2 = density_profiles(c2, t, k, opt.bins_per_attr);

    auto self = [](const std::vector<std::vector<double>>& p) {
        double s = 0;
        for (const auto& row : p) s += std::inner_product(row.begin(), row.end(), row.begin(), 0.0);
        return s;
    };
    const double cross = best_correspondence(p1, p2, opt.exhaustive_limit);
    return cross / std::max(self(p1), self(p2));
}

}  // namespace admit
