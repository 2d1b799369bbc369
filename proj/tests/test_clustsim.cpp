#include "admit/clustsim.hpp"
#include "admit/error.hpp"
#include "admit/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace admit;

namespace {

Clustering of(std::vector<std::size_t> a) {
    const std::size_t k = a.empty() ? 0 : *std::max_element(a.begin(), a.end()) + 1;
    return make_clustering(std::move(a), k);
}

double brute_best(const std::vector<std::vector<double>>& w) {
    std::vector<std::size_t> p(w.size());
    std::iota(p.begin(), p.end(), std::size_t{0});
    double best = -1e300;
    do {
        double s = 0;
        for (std::size_t i = 0; i < p.size(); ++i) s += w[i][p[i]];
        best = std::max(best, s);
    } while (std::next_permutation(p.begin(), p.end()));
    return best;
}

}  // namespace

TEST_CASE("rand and jaccard on the three-row example") {
    const auto c1 = of({0, 0, 1});
    const auto c2 = of({0, 1, 1});
    const auto p = pair_counts(c1, c2);
    CHECK(p.a == 0);
    CHECK(p.b == 1);
    CHECK(p.c == 1);
    CHECK(p.d == 1);
    CHECK(rand_index(c1, c2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(jaccard_index(c1, c2) == 0.0);
}

TEST_CASE("identity, singleton convention, relabeling") {
    const auto c = of({0, 0, 1, 2, 2, 2});
    CHECK(rand_index(c, c) == 1.0);
    CHECK(jaccard_index(c, c) == 1.0);
    CHECK(jaccard_index(of({0, 1, 2, 3}), of({3, 2, 1, 0})) == 1.0);
    const auto relabeled = of({2, 2, 0, 1, 1, 1});
    const auto other = of({0, 1, 1, 0, 1, 1});
    CHECK(rand_index(c, other) == rand_index(relabeled, other));
    CHECK(jaccard_index(c, other) == jaccard_index(relabeled, other));
    CHECK(rand_index(c, other) == rand_index(other, c));
}

TEST_CASE("mismatched rows are refused") {
    CHECK_THROWS_AS(rand_index(of({0, 1}), of({0, 1, 1})), ValidationError);
    CHECK_THROWS_AS(rand_index(make_clustering({0, 1}, 2, {"a", "b"}), make_clustering({0, 1}, 2, {"a", "c"})),
                    ValidationError);
}

TEST_CASE("hungarian assignment agrees with exhaustive search") {
    Rng rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + rng.below(6);
        std::vector<std::vector<double>> w(n, std::vector<double>(n));
        for (auto& row : w) {
            for (auto& v : row) v = static_cast<double>(rng.below(50));
        }
        const auto assign = max_weight_assignment(w);
        std::vector<std::size_t> sorted = assign;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < n; ++i) CHECK(sorted[i] == i);
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += w[i][assign[i]];
        CHECK(s == brute_best(w));
        CHECK(best_correspondence(w, std::vector<std::vector<double>>(n, std::vector<double>(n, 0)), 0) == 0.0);
    }
}

TEST_CASE("adco identity and single-cluster cases") {
    const auto t = MixedTable::from_columns({{1, 2, 3, 10, 11, 12}}, {{"a", "a", "b", "b", "c", "c"}});
    const auto c = of({0, 0, 0, 1, 1, 1});
    CHECK(adco(c, c, t) == 1.0);
    CHECK(adco(of({0, 0, 0, 0, 0, 0}), of({0, 0, 0, 0, 0, 0}), t) == 1.0);
    CHECK(adco(c, of({1, 1, 1, 0, 0, 0}), t) == 1.0);
    const double moved = adco(c, of({0, 0, 1, 1, 1, 1}), t);
    CHECK(moved > 0.0);
    CHECK(moved < 1.0);
    CHECK_THROWS_AS(adco(of({}), of({}), MixedTable{}), ValidationError);
}

TEST_CASE("adco on four rows matches a hand-built permutation oracle") {
    // One continuous column over [0,3] with 3 bins: rows fall in bins 0,0,1,2.
    const auto t = MixedTable::from_columns({{0, 0.5, 1.5, 3}});
    const auto c1 = of({0, 0, 1, 1});
    const auto c2 = of({0, 1, 1, 1});
    AdcoOptions opt;
    opt.bins_per_attr = 3;
    // Profiles (bin counts): c1 = {2,0,0},{0,1,1}; c2 = {1,0,0},{1,1,1}.
    const std::vector<std::vector<double>> p1{{2, 0, 0}, {0, 1, 1}};
    const std::vector<std::vector<double>> p2{{1, 0, 0}, {1, 1, 1}};
    CHECK(density_profiles(c1, t, 2, 3) == p1);
    CHECK(density_profiles(c2, t, 2, 3) == p2);
    // identity: 2*1 + (0+1+1) = 4; swapped: 2*1 + 0 = 2
    const double cross = std::max(2.0 + 2.0, 2.0 + 0.0);
    const double self1 = 4 + 2;
    const double self2 = 1 + 3;
    CHECK(adco(c1, c2, t, opt) == cross / std::max(self1, self2));
}

TEST_CASE("adco pads the smaller clustering with empty clusters") {
    const auto t = MixedTable::from_columns({{0, 1, 2, 3, 4, 5}});
    const double v = adco(of({0, 0, 0, 1, 1, 1}), of({0, 0, 1, 1, 2, 2}), t);
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
    CHECK(v == adco(of({0, 0, 1, 1, 2, 2}), of({0, 0, 0, 1, 1, 1}), t));
}
