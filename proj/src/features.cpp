#include "admit/features.hpp"

#include "admit/error.hpp"

#include <algorithm>
#include <set>

namespace admit {

namespace {

std::vector<int> encode(const std::vector<std::string>& values, const std::vector<std::string>& levels) {
    std::vector<int> codes;
    codes.reserve(values.size());
    for (const auto& v : values) {
        auto it = std::lower_bound(levels.begin(), levels.end(), v);
        codes.push_back(it != levels.end() && *it == v ? static_cast<int>(it - levels.begin()) : -1);
    }
    return codes;
}

std::vector<std::string> sorted_levels(const std::vector<std::string>& values) {
    std::set<std::string> s(values.begin(), values.end());
    return {s.begin(), s.end()};
}

}  // namespace

MixedTable MixedTable::from_columns(std::vector<std::vector<double>> continuous,
                                    std::vector<std::vector<std::string>> categorical) {
    MixedTable t;
    std::size_t n = 0;
    if (!continuous.empty()) n = continuous.front().size();
    else if (!categorical.empty()) n = categorical.front().size();
    for (const auto& c : continuous) {
        if (c.size() != n) throw ValidationError("ragged continuous columns");
    }
    for (const auto& c : categorical) {
        if (c.size() != n) throw ValidationError("ragged categorical columns");
    }
    for (std::size_t i = 0; i < n; ++i) t.ids.push_back(std::to_string(i));
    for (std::size_t j = 0; j < continuous.size(); ++j) t.continuous_names.push_back("x" + std::to_string(j));
    t.continuous = std::move(continuous);
    for (std::size_t j = 0; j < categorical.size(); ++j) {
        t.categorical_names.push_back("c" + std::to_string(j));
        t.levels.push_back(sorted_levels(categorical[j]));
        t.codes.push_back(encode(categorical[j], t.levels.back()));
    }
    return t;
}

const std::vector<std::string>& default_cluster_features() {
    static const std::vector<std::string> f{"age", "gender", "grade", "employment", "job_relevancy"};
    return f;
}

MixedTable make_table(const Dataset& ds, const std::vector<std::string>& features,
                      const MixedTable* level_source) {
    MixedTable t;
    for (const auto& r : ds.rows) t.ids.push_back(r.id);

    for (const auto& name : features) {
        if (!is_attribute(name)) throw ValidationError("unknown clustering feature '" + name + "'");
        if (is_continuous(name)) {
            std::vector<double> col;
            col.reserve(ds.size());
            for (const auto& r : ds.rows) {
                auto v = continuous_value(r, name);
                if (!v) throw ValidationError("row " + r.id + ": missing " + name);
                col.push_back(*v);
            }
            t.continuous_names.push_back(name);
            t.continuous.push_back(std::move(col));
        } else {
            std::vector<std::string> col;
            col.reserve(ds.size());
            for (const auto& r : ds.rows) {
                auto v = categorical_value(r, name);
                if (!v) throw ValidationError("row " + r.id + ": missing " + name);
                col.push_back(std::move(*v));
            }
            std::vector<std::string> levels;
            if (level_source) {
                auto it = std::find(level_source->categorical_names.begin(),
                                    level_source->categorical_names.end(), name);
                if (it == level_source->categorical_names.end()) {
                    throw ValidationError("level source has no attribute '" + name + "'");
                }
                levels = level_source->levels[static_cast<std::size_t>(it - level_source->categorical_names.begin())];
            } else {
                levels = sorted_levels(col);
            }
            t.categorical_names.push_back(name);
            t.codes.push_back(encode(col, levels));
            t.levels.push_back(std::move(levels));
        }
    }
    return t;
}

}  // namespace admit
