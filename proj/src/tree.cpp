#include "admit/models.hpp"

#include "admit/csv.hpp"
#include "admit/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

namespace admit {

void TreeParams::validate() const {
    if (min_leaf < 1) throw ValidationError("min_leaf must be at least 1");
    if (!(min_gain >= 0)) throw ValidationError("min_gain must be non-negative");
}

namespace {

double entropy(const std::map<std::string, std::size_t>& counts, std::size_t n) {
    double h = 0;
    for (const auto& [v, c] : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(n);
        h -= p * std::log(p);
    }
    return h;
}

void set_majority(TreeNode& node) {
    std::size_t best = 0;
    for (const auto& [v, c] : node.distribution) {
        if (c > best) {
            best = c;
            node.majority = v;
        }
    }
}

class Builder {
public:
    Builder(const CategoricalView& view, std::size_t target, std::vector<std::size_t> feature_cols, DecisionTree& tree)
        : view_(view), target_(target), cols_(std::move(feature_cols)), tree_(tree) {}

    std::size_t grow(const std::vector<std::size_t>& rows, std::size_t depth) {
        const std::size_t id = tree_.nodes.size();
        tree_.nodes.emplace_back();
        {
            auto& node = tree_.nodes[id];
            node.count = rows.size();
            for (auto r : rows) ++node.distribution[view_.rows[r][target_]];
            set_majority(node);
        }
        const auto& params = tree_.params;
        if (tree_.nodes[id].distribution.size() <= 1 || depth >= params.max_depth) return id;

        const double h = entropy(tree_.nodes[id].distribution, rows.size());
        double best_gain = -1;
        std::size_t best_feature = cols_.size();
        std::map<std::string, std::vector<std::size_t>> best_parts;
        for (std::size_t f = 0; f < cols_.size(); ++f) {
            std::map<std::string, std::vector<std::size_t>> parts;
            for (auto r : rows) parts[view_.rows[r][cols_[f]]].push_back(r);
            if (parts.size() < 2) continue;
            bool small = false;
            double rest = 0;
            for (const auto& [v, part] : parts) {
                if (part.size() < params.min_leaf) {
                    small = true;
                    break;
                }
                std::map<std::string, std::size_t> dist;
                for (auto r : part) ++dist[view_.rows[r][target_]];
                rest += static_cast<double>(part.size()) / static_cast<double>(rows.size()) * entropy(dist, part.size());
            }
            if (small) continue;
            const double gain = h - rest;
            if (gain > best_gain + 1e-12) {
                best_gain = gain;
                best_feature = f;
                best_parts = std::move(parts);
            }
        }
        if (best_feature == cols_.size() || best_gain < params.min_gain) return id;

        tree_.nodes[id].split = tree_.features[best_feature];
        tree_.nodes[id].gain = best_gain;
        for (const auto& [value, part] : best_parts) {
            const std::size_t child = grow(part, depth + 1);
            tree_.nodes[id].children.emplace_back(value, child);
        }
        return id;
    }

private:
    const CategoricalView& view_;
    std::size_t target_;
    std::vector<std::size_t> cols_;
    DecisionTree& tree_;
};

}  // namespace

DecisionTree train_tree(const CategoricalView& view, const std::string& target, const TreeParams& params,
                        const std::vector<std::string>& features) {
    params.validate();
    if (view.size() == 0) throw ValidationError("cannot train a tree on an empty dataset");
    const auto target_col = view.column(target);
    if (!target_col) throw ValidationError("unknown target attribute '" + target + "'");

    DecisionTree tree;
    tree.target = target;
    tree.params = params;
    tree.total = view.size();
    if (features.empty()) {
        for (const auto& a : view.attributes) {
            if (a != target) tree.features.push_back(a);
        }
    } else {
        for (const auto& f : features) {
            if (f == target) throw ValidationError("feature list contains the target '" + target + "'");
            if (!view.column(f)) throw ValidationError("unknown feature '" + f + "'");
            tree.features.push_back(f);
        }
    }
    std::vector<std::size_t> cols;
    for (const auto& f : tree.features) cols.push_back(*view.column(f));

    std::vector<std::size_t> rows(view.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    Builder(view, *target_col, std::move(cols), tree).grow(rows, 0);
    return tree;
}

Prediction predict_tree(const DecisionTree& tree, const DiscreteRecord& record, std::vector<std::string>* notes) {
    if (tree.nodes.empty()) throw ValidationError("empty decision tree");
    std::size_t at = 0;
    while (tree.nodes[at].split) {
        const auto& node = tree.nodes[at];
        const auto it = record.find(*node.split);
        if (it == record.end()) throw ValidationError("record has no attribute '" + *node.split + "'");
        const auto child = std::find_if(node.children.begin(), node.children.end(),
                                        [&](const auto& c) { return c.first == it->second; });
        if (child != node.children.end()) {
            at = child->second;
            continue;
        }
        auto largest = node.children.begin();
        for (auto c = node.children.begin(); c != node.children.end(); ++c) {
            if (tree.nodes[c->second].count > tree.nodes[largest->second].count) largest = c;
        }
        if (notes) {
            notes->push_back("unseen " + *node.split + "='" + it->second + "' routed to '" + largest->first + "'");
        }
        at = largest->second;
    }
    const auto& leaf = tree.nodes[at];
    return Prediction{leaf.majority,
                      static_cast<double>(leaf.distribution.at(leaf.majority)) / static_cast<double>(leaf.count)};
}

std::vector<Prediction> predict_tree(const DecisionTree& tree, const CategoricalView& view,
                                     std::vector<std::string>* notes) {
    std::vector<Prediction> out;
    out.reserve(view.size());
    for (std::size_t i = 0; i < view.size(); ++i) out.push_back(predict_tree(tree, record_at(view, i), notes));
    return out;
}

RuleSet extract_tree_rules(const DecisionTree& tree) {
    if (tree.nodes.empty()) throw ValidationError("empty decision tree");
    RuleSet rs;
    rs.target = tree.target;
    const auto& root = tree.nodes[0];
    rs.default_class = root.majority;
    rs.default_probability = static_cast<double>(root.distribution.at(root.majority)) / static_cast<double>(tree.total);

    std::vector<Predicate> path;
    auto walk = [&](auto&& self, std::size_t at) -> void {
        const auto& node = tree.nodes[at];
        if (!node.split) {
            const std::size_t joint = node.distribution.at(node.majority);
            Rule r;
            r.lhs = path;
            r.target = tree.target;
            r.rhs = node.majority;
            r.support = static_cast<double>(joint) / static_cast<double>(tree.total);
            r.confidence = static_cast<double>(joint) / static_cast<double>(node.count);
            r.origin = RuleOrigin::Tree;
            r.counts = RuleCounts{node.count, joint, tree.total};
            rs.rules.push_back(std::move(r));
            return;
        }
        for (const auto& [value, child] : node.children) {
            path.push_back(Predicate{*node.split, value});
            self(self, child);
            path.pop_back();
        }
    };
    walk(walk, 0);
    rs.sort();
    return rs;
}

void write_tree_text(std::ostream& out, const DecisionTree& tree) {
    auto describe = [&](const TreeNode& n) {
        const double p = static_cast<double>(n.distribution.at(n.majority)) / static_cast<double>(n.count);
        return "n=" + std::to_string(n.count) + " -> " + n.majority + " (" + csv::format_fixed(p, 3) + ")";
    };
    out << "target " << tree.target << ", " << tree.total << " rows\n";
    out << "root: " << describe(tree.nodes.at(0)) << "\n";
    auto walk = [&](auto&& self, std::size_t at, std::size_t depth) -> void {
        const auto& node = tree.nodes[at];
        for (const auto& [value, child] : node.children) {
            out << std::string(2 * depth, ' ') << *node.split << " = " << value << ": " << describe(tree.nodes[child])
                << "\n";
            self(self, child, depth + 1);
        }
    };
    walk(walk, 0, 1);
}

void write_tree_json(std::ostream& out, const DecisionTree& tree) {
    nlohmann::json j;
    j["target"] = tree.target;
    j["features"] = tree.features;
    j["total"] = tree.total;
    j["params"] = {{"max_depth", tree.params.max_depth},
                   {"min_leaf", tree.params.min_leaf},
                   {"min_gain", tree.params.min_gain}};
    auto nodes = nlohmann::json::array();
    for (const auto& n : tree.nodes) {
        nlohmann::json jn;
        jn["count"] = n.count;
        jn["distribution"] = n.distribution;
        jn["majority"] = n.majority;
        if (n.split) {
            jn["split"] = *n.split;
            jn["gain"] = n.gain;
            auto children = nlohmann::json::array();
            for (const auto& [value, child] : n.children) children.push_back({{"value", value}, {"node", child}});
            jn["children"] = std::move(children);
        }
        nodes.push_back(std::move(jn));
    }
    j["nodes"] = std::move(nodes);
    out << j.dump(2) << "\n";
}

DecisionTree read_tree_json(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
        DecisionTree t;
        j.at("target").get_to(t.target);
        j.at("features").get_to(t.features);
        j.at("total").get_to(t.total);
        const auto& p = j.at("params");
        p.at("max_depth").get_to(t.params.max_depth);
        p.at("min_leaf").get_to(t.params.min_leaf);
        p.at("min_gain").get_to(t.params.min_gain);
        for (const auto& jn : j.at("nodes")) {
            TreeNode n;
            jn.at("count").get_to(n.count);
            jn.at("distribution").get_to(n.distribution);
            jn.at("majority").get_to(n.majority);
            if (jn.contains("split")) {
                n.split = jn.at("split").get<std::string>();
                jn.at("gain").get_to(n.gain);
                for (const auto& c : jn.at("children")) {
                    n.children.emplace_back(c.at("value").get<std::string>(), c.at("node").get<std::size_t>());
                }
            }
            t.nodes.push_back(std::move(n));
        }
        if (t.nodes.empty()) throw ValidationError("tree has no nodes");
        for (const auto& n : t.nodes) {
            for (const auto& [v, c] : n.children) {
                if (c >= t.nodes.size()) throw ValidationError("tree child index out of range");
            }
            if (!n.distribution.count(n.majority)) throw ValidationError("tree leaf majority missing from its distribution");
        }
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed tree file: ") + e.what());
    }
}

}  // namespace admit
