#include "admit/cluster.hpp"

#include "admit/csv.hpp"
#include "admit/error.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace admit {

ClusterStats ClusterStats::empty_for(const MixedTable& t) {
    ClusterStats s;
    s.mean.assign(t.continuous_count(), 0.0);
    s.m2.assign(t.continuous_count(), 0.0);
    s.level_counts.resize(t.categorical_count());
    for (std::size_t j = 0; j < t.categorical_count(); ++j) s.level_counts[j].assign(t.levels[j].size(), 0);
    return s;
}

ClusterStats ClusterStats::of_row(const MixedTable& t, std::size_t row) {
    ClusterStats s = empty_for(t);
    s.add_row(t, row);
    return s;
}

void ClusterStats::add_row(const MixedTable& t, std::size_t row) {
    ++n;
    const double nn = static_cast<double>(n);
    for (std::size_t k = 0; k < mean.size(); ++k) {
        // Welford update.
        const double x = t.continuous[k][row];
        const double delta = x - mean[k];
        mean[k] += delta / nn;
        m2[k] += delta * (x - mean[k]);
    }
    for (std::size_t j = 0; j < level_counts.size(); ++j) {
        const int code = t.codes[j][row];
        if (code >= 0) ++level_counts[j][static_cast<std::size_t>(code)];
    }
}

ClusterStats ClusterStats::merge(const ClusterStats& a, const ClusterStats& b) {
    if (a.n == 0) return b;
    if (b.n == 0) return a;
    ClusterStats s;
    s.n = a.n + b.n;
    const double na = static_cast<double>(a.n);
    const double nb = static_cast<double>(b.n);
    const double n = static_cast<double>(s.n);
    s.mean.resize(a.mean.size());
    s.m2.resize(a.m2.size());
    for (std::size_t k = 0; k < a.mean.size(); ++k) {
        const double delta = b.mean[k] - a.mean[k];
        s.mean[k] = a.mean[k] + delta * nb / n;
        s.m2[k] = a.m2[k] + b.m2[k] + delta * delta * na * nb / n;
    }
    s.level_counts = a.level_counts;
    for (std::size_t j = 0; j < s.level_counts.size(); ++j) {
        for (std::size_t l = 0; l < s.level_counts[j].size(); ++l) s.level_counts[j][l] += b.level_counts[j][l];
    }
    return s;
}

std::vector<std::size_t> Clustering::sizes() const {
    std::vector<std::size_t> out(k, 0);
    for (auto a : assignment) ++out.at(a);
    return out;
}

Clustering make_clustering(std::vector<std::size_t> assignment, std::size_t k, std::vector<std::string> ids) {
    for (auto a : assignment) {
        if (a >= k) throw ValidationError("cluster id " + std::to_string(a) + " outside [0," + std::to_string(k) + ")");
    }
    if (!ids.empty() && ids.size() != assignment.size()) throw ValidationError("ids and assignment differ in length");
    Clustering c;
    c.k = k;
    c.assignment = std::move(assignment);
    c.ids = std::move(ids);
    if (c.ids.empty()) {
        for (std::size_t i = 0; i < c.assignment.size(); ++i) c.ids.push_back(std::to_string(i));
    }
    return c;
}

Clustering make_clustering(const MixedTable& t, std::vector<std::size_t> assignment, std::size_t k) {
    if (assignment.size() != t.rows()) throw ValidationError("assignment does not cover the table");
    Clustering c = make_clustering(std::move(assignment), k, t.ids);
    c.stats.assign(k, ClusterStats::empty_for(t));
    for (std::size_t i = 0; i < t.rows(); ++i) c.stats[c.assignment[i]].add_row(t, i);
    return c;
}

void check_consistent(const Clustering& c, const MixedTable& t, double tol) {
    if (c.assignment.size() != t.rows()) throw std::logic_error("clustering does not cover every row");
    const auto sizes = c.sizes();
    std::size_t total = 0;
    for (auto s : sizes) total += s;
    if (total != t.rows()) throw std::logic_error("cluster sizes do not sum to the row count");
    if (c.stats.empty()) return;
    const Clustering fresh = make_clustering(t, c.assignment, c.k);
    for (std::size_t v = 0; v < c.k; ++v) {
        const auto& a = c.stats[v];
        const auto& b = fresh.stats[v];
        if (a.n != b.n || a.level_counts != b.level_counts) {
            throw std::logic_error("cluster " + std::to_string(v) + " stats differ from recount");
        }
        for (std::size_t k = 0; k < a.mean.size(); ++k) {
            const double scale = 1.0 + std::abs(b.m2[k]);
            if (std::abs(a.mean[k] - b.mean[k]) > tol * (1.0 + std::abs(b.mean[k])) ||
                std::abs(a.m2[k] - b.m2[k]) > tol * scale) {
                throw std::logic_error("cluster " + std::to_string(v) + " moments differ from recount");
            }
        }
    }
}

void write_clustering(std::ostream& out, const Clustering& c) {
    csv::write_row(out, {"id", "cluster"});
    for (std::size_t i = 0; i < c.rows(); ++i) csv::write_row(out, {c.ids[i], std::to_string(c.assignment[i])});
}

Clustering read_clustering(std::istream& in) {
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header || header->size() != 2) throw ParseError(1, "clustering CSV needs header 'id,cluster'");
    std::vector<std::string> ids;
    std::vector<std::size_t> assignment;
    std::size_t k = 0;
    while (auto row = reader.next()) {
        if (row->size() == 1 && row->front().empty()) continue;
        if (row->size() != 2) throw ParseError(reader.line(), "expected 2 fields");
        auto v = csv::parse_int((*row)[1]);
        if (!v || *v < 0) throw ParseError(reader.line(), "cluster id must be a non-negative integer");
        ids.push_back(std::string(csv::trim((*row)[0])));
        assignment.push_back(static_cast<std::size_t>(*v));
        k = std::max(k, assignment.back() + 1);
    }
    return make_clustering(std::move(assignment), k, std::move(ids));
}

}  // namespace admit
