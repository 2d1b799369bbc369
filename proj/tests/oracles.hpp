#pragma once

// Slow, obviously-correct reference implementations shared by the unit tests
// and the acceptance suite.

#include "admit/cluster.hpp"
#include "admit/clustsim.hpp"
#include "admit/models.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

namespace oracle {

struct RuleKey {
    std::string lhs;
    std::string rhs;
    std::size_t lhs_count = 0;
    std::size_t joint = 0;
    bool operator<(const RuleKey& o) const {
        return std::tie(lhs, rhs, lhs_count, joint) < std::tie(o.lhs, o.rhs, o.lhs_count, o.joint);
    }
    bool operator==(const RuleKey& o) const = default;
};

// Every attribute subset of size 1..max_len over the non-target columns, in
// column order; every value combination seen in some row; counted by a full
// scan.
inline std::vector<RuleKey> brute_rules(const admit::CategoricalView& v, const std::string& target,
                                        const admit::MiningParams& p) {
    const std::size_t t = *v.column(target);
    std::vector<std::size_t> feats;
    for (std::size_t c = 0; c < v.attributes.size(); ++c) {
        if (c != t) feats.push_back(c);
    }
    const double n = static_cast<double>(v.size());
    std::vector<RuleKey> out;
    for (std::size_t mask = 1; mask < (std::size_t{1} << feats.size()); ++mask) {
        std::vector<std::size_t> cols;
        for (std::size_t b = 0; b < feats.size(); ++b) {
            if (mask >> b & 1) cols.push_back(feats[b]);
        }
        if (cols.size() > p.max_lhs_len) continue;
        std::map<std::vector<std::string>, std::map<std::string, std::size_t>> joint;
        std::map<std::vector<std::string>, std::size_t> lhs;
        for (const auto& row : v.rows) {
            std::vector<std::string> key;
            for (auto c : cols) key.push_back(row[c]);
            ++lhs[key];
            ++joint[key][row[t]];
        }
        for (const auto& [key, by_class] : joint) {
            std::string text;
            for (std::size_t i = 0; i < cols.size(); ++i) {
                if (!text.empty()) text += " & ";
                text += v.attributes[cols[i]] + "=" + key[i];
            }
            for (const auto& [cls, j] : by_class) {
                const double support = static_cast<double>(j) / n;
                const double conf = static_cast<double>(j) / static_cast<double>(lhs[key]);
                if (support >= p.min_support && conf >= p.min_confidence) out.push_back({text, cls, lhs[key], j});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<RuleKey> keys_of(const admit::RuleSet& rs) {
    std::vector<RuleKey> out;
    for (const auto& r : rs.rules) out.push_back({r.lhs_text(), r.rhs, r.counts->lhs, r.counts->joint});
    std::sort(out.begin(), out.end());
    return out;
}

// Pair counts by looking at every pair.
inline admit::PairCounts brute_pairs(const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
    admit::PairCounts p;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            const bool a = x[i] == x[j];
            const bool b = y[i] == y[j];
            if (a && b) ++p.a;
            else if (a) ++p.b;
            else if (b) ++p.c;
            else ++p.d;
        }
    }
    return p;
}

// ADCO straight from the definition: all k! correspondences, profiles rebuilt
// row by row.
inline double brute_adco(const admit::Clustering& c1, const admit::Clustering& c2, const admit::MixedTable& t,
                         std::size_t bins) {
    const std::size_t k = std::max(c1.k, c2.k);
    auto profile = [&](const admit::Clustering& c) {
        std::vector<std::map<std::pair<std::size_t, long>, double>> prof(k);
        for (std::size_t a = 0; a < t.continuous_count(); ++a) {
            const auto& col = t.continuous[a];
            const double lo = *std::min_element(col.begin(), col.end());
            const double hi = *std::max_element(col.begin(), col.end());
            for (std::size_t i = 0; i < t.rows(); ++i) {
                long b = 0;
                if (hi > lo) {
                    b = static_cast<long>((col[i] - lo) / (hi - lo) * static_cast<double>(bins));
                    b = std::min<long>(b, static_cast<long>(bins) - 1);
                }
                prof[c.assignment[i]][{a, b}] += 1;
            }
        }
        for (std::size_t j = 0; j < t.categorical_count(); ++j) {
            for (std::size_t i = 0; i < t.rows(); ++i) prof[c.assignment[i]][{t.continuous_count() + j, t.codes[j][i]}] += 1;
        }
        return prof;
    };
    auto dot = [](const std::map<std::pair<std::size_t, long>, double>& a,
                  const std::map<std::pair<std::size_t, long>, double>& b) {
        double s = 0;
        for (const auto& [key, v] : a) {
            const auto it = b.find(key);
            if (it != b.end()) s += v * it->second;
        }
        return s;
    };
    auto sim = [&](const auto& p, const auto& q) {
        std::vector<std::size_t> perm(k);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        double best = 0;
        do {
            double s = 0;
            for (std::size_t i = 0; i < k; ++i) s += dot(p[i], q[perm[i]]);
            best = std::max(best, s);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    };
    const auto p1 = profile(c1);
    const auto p2 = profile(c2);
    return sim(p1, p2) / std::max(sim(p1, p1), sim(p2, p2));
}

}  // namespace oracle
