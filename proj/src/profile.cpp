#include "admit/profile.hpp"

#include "admit/csv.hpp"
#include "admit/error.hpp"

#include <algorithm>
#include <ostream>
#include <set>

namespace admit {

std::vector<ClusterProfile> profile_clusters(const Dataset& ds, const Clustering& c, const BinningSpec& bands,
                                             std::vector<std::string>* warnings) {
    if (c.rows() != ds.size()) {
        throw ValidationError("clustering has " + std::to_string(c.rows()) + " rows, dataset has " +
                              std::to_string(ds.size()));
    }
    if (!c.ids.empty()) {
        for (std::size_t i = 0; i < ds.size(); ++i) {
            if (c.ids[i] != ds.rows[i].id) {
                throw ValidationError("clustering row " + std::to_string(i) + " is " + c.ids[i] + ", dataset row is " +
                                      ds.rows[i].id);
            }
        }
    }

    const auto sizes = c.sizes();
    std::vector<ClusterProfile> out;
    for (std::size_t k = 0; k < c.k; ++k) {
        if (sizes[k] == 0) {
            if (warnings) warnings->push_back("cluster " + std::to_string(k) + " is empty; no profile");
            continue;
        }
        ClusterProfile p;
        p.cluster = k;
        p.size = sizes[k];
        out.push_back(std::move(p));
    }

    for (const auto& attr : ds.schema) {
        if (attr.kind == AttributeKind::Categorical) {
            std::set<std::string> levels;
            std::vector<std::map<std::string, std::size_t>> counts(c.k);
            for (std::size_t i = 0; i < ds.size(); ++i) {
                const auto v = categorical_value(ds.rows[i], attr.name);
                if (!v) throw ValidationError("profile: row " + ds.rows[i].id + " is missing " + attr.name);
                levels.insert(*v);
                ++counts[c.assignment[i]][*v];
            }
            for (auto& p : out) {
                auto& dst = p.categorical[attr.name];
                for (const auto& lv : levels) {
                    const auto it = counts[p.cluster].find(lv);
                    const std::size_t n = it == counts[p.cluster].end() ? 0 : it->second;
                    dst[lv] = static_cast<double>(n) / static_cast<double>(p.size);
                }
            }
            continue;
        }

        const AttributeBins* bins = bands.find(attr.name);
        std::vector<double> sum(c.k, 0.0);
        std::vector<std::vector<std::size_t>> band_counts(c.k, std::vector<std::size_t>(bins ? bins->bin_count() : 0, 0));
        for (std::size_t i = 0; i < ds.size(); ++i) {
            const auto v = continuous_value(ds.rows[i], attr.name);
            if (!v) throw ValidationError("profile: row " + ds.rows[i].id + " is missing " + attr.name);
            sum[c.assignment[i]] += *v;
            if (bins) {
                const auto b = bins->bin_of(*v);
                if (!b) throw DiscretizeError(attr.name, *v, "value outside the profile bands");
                ++band_counts[c.assignment[i]][*b];
            }
        }
        for (auto& p : out) {
            auto& dst = p.continuous[attr.name];
            const double n = static_cast<double>(p.size);
            dst.mean = sum[p.cluster] / n;
            if (!bins) continue;
            for (std::size_t b = 0; b < bins->bin_count(); ++b) {
                dst.bands.emplace_back(bins->label(b), static_cast<double>(band_counts[p.cluster][b]) / n);
            }
        }
    }
    return out;
}

std::map<std::size_t, ClassLabel> assign_labels(const std::vector<ClusterProfile>& profiles, const LabelOptions& opt) {
    if (profiles.empty()) throw ValidationError("labeling needs at least one cluster profile");
    std::vector<const ClusterProfile*> order;
    for (const auto& p : profiles) {
        if (!p.continuous.count(opt.key_attribute)) {
            throw ValidationError("labeling key '" + opt.key_attribute + "' is not a profiled continuous attribute");
        }
        order.push_back(&p);
    }
    std::sort(order.begin(), order.end(), [&](const ClusterProfile* a, const ClusterProfile* b) {
        const double ma = a->continuous.at(opt.key_attribute).mean;
        const double mb = b->continuous.at(opt.key_attribute).mean;
        if (ma != mb) return ma < mb;
        if (a->size != b->size) return a->size > b->size;
        return a->cluster < b->cluster;
    });
    std::map<std::size_t, ClassLabel> labels;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto [it, fresh] = labels.emplace(order[i]->cluster, ClassLabel{opt.prefix + std::to_string(i + 1), order[i]->cluster});
        if (!fresh) throw ValidationError("duplicate profile for cluster " + std::to_string(it->first));
    }
    return labels;
}

Dataset apply_labels(const Dataset& ds, const Clustering& c, const std::map<std::size_t, ClassLabel>& labels) {
    if (c.rows() != ds.size()) throw ValidationError("clustering does not cover the dataset");
    Dataset out = ds;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto it = labels.find(c.assignment[i]);
        if (it == labels.end()) throw ValidationError("cluster " + std::to_string(c.assignment[i]) + " has no label");
        out.rows[i].class_label = it->second.name;
    }
    out.provenance.log.push_back("labeled " + std::to_string(out.size()) + " rows into " +
                                 std::to_string(labels.size()) + " classes");
    return out;
}

namespace {

std::string label_of(const std::map<std::size_t, ClassLabel>& labels, std::size_t cluster) {
    const auto it = labels.find(cluster);
    return it == labels.end() ? "" : it->second.name;
}

std::string percent(double p) { return csv::format_fixed(100.0 * p, 1) + "%"; }

}  // namespace

void write_profiles_text(std::ostream& out, const std::vector<ClusterProfile>& profiles,
                         const std::map<std::size_t, ClassLabel>& labels) {
    for (const auto& p : profiles) {
        const std::string name = label_of(labels, p.cluster);
        out << (name.empty() ? "cluster " + std::to_string(p.cluster) : name + " (cluster " + std::to_string(p.cluster) + ")")
            << ": " << p.size << " rows\n";
        for (const auto& [attr, cp] : p.continuous) {
            out << "  " << attr << ": mean " << csv::format_fixed(cp.mean, 2) << "\n";
            for (const auto& [band, share] : cp.bands) out << "    " << band << "  " << percent(share) << "\n";
        }
        for (const auto& [attr, levels] : p.categorical) {
            out << "  " << attr << ":\n";
            for (const auto& [level, share] : levels) {
                if (share > 0) out << "    " << level << "  " << percent(share) << "\n";
            }
        }
        out << "\n";
    }
}

void write_profiles_csv(std::ostream& out, const std::vector<ClusterProfile>& profiles,
                        const std::map<std::size_t, ClassLabel>& labels) {
    csv::write_row(out, {"cluster", "label", "size", "attribute", "statistic", "value"});
    for (const auto& p : profiles) {
        const std::string c = std::to_string(p.cluster);
        const std::string name = label_of(labels, p.cluster);
        const std::string size = std::to_string(p.size);
        for (const auto& [attr, cp] : p.continuous) {
            csv::write_row(out, {c, name, size, attr, "mean", csv::format_double(cp.mean)});
            for (const auto& [band, share] : cp.bands) {
                csv::write_row(out, {c, name, size, attr, band, csv::format_double(share)});
            }
        }
        for (const auto& [attr, levels] : p.categorical) {
            for (const auto& [level, share] : levels) {
                csv::write_row(out, {c, name, size, attr, level, csv::format_double(share)});
            }
        }
    }
}

}  // namespace admit
