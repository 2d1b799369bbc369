#pragma once

#include "admit/ingest.hpp"

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace admit {

// One discretized row keyed by attribute name.
using DiscreteRecord = std::map<std::string, std::string, std::less<>>;

DiscreteRecord record_at(const CategoricalView& view, std::size_t row);

struct Prediction {
    std::string value;
    double probability = 0;
};

// ---------------------------------------------------------------------------
// Association rules
// ---------------------------------------------------------------------------

// Numeric interval [lo, hi) recognized in predicate and bin text: "a-b",
// "a - b", "a+" and ">a" mean [a, inf), "<b" means (-inf, b).
struct Interval {
    double lo;
    double hi;
};
std::optional<Interval> parse_interval(std::string_view text);

struct Predicate {
    std::string attribute;
    std::string value;

    // Equal text, or both sides read as intervals and the record's bin lies
    // inside the predicate's interval (">12.7" covers "14.8-16.3").
    bool matches(std::string_view record_value) const;
    bool operator==(const Predicate&) const = default;
};

enum class RuleOrigin { Mined, Tree };
std::string to_string(RuleOrigin o);

struct RuleCounts {
    std::size_t lhs = 0;    // rows matching the lhs
    std::size_t joint = 0;  // rows matching lhs and rhs
    std::size_t total = 0;  // training rows
};

struct Rule {
    std::vector<Predicate> lhs;
    std::string target;
    std::string rhs;
    double support = 0;
    double confidence = 0;
    RuleOrigin origin = RuleOrigin::Mined;
    std::optional<RuleCounts> counts;

    // "attr=value & attr=value"; empty for an unconditional rule.
    std::string lhs_text() const;
    // Throws ValidationError when the record lacks an lhs attribute.
    bool matches(const DiscreteRecord& record) const;
};

// Confidence desc, support desc, lhs length asc, lhs text asc, rhs asc.
bool rule_precedes(const Rule& a, const Rule& b);

struct MiningParams {
    double min_support = 0.01;
    double min_confidence = 0.5;
    std::size_t max_lhs_len = 4;

    void validate() const;
};

struct RuleSet {
    std::string target;
    std::vector<Rule> rules;
    std::string default_class;
    double default_probability = 0;
    MiningParams params;

    void sort();
};

// Levelwise frequent itemsets over (attribute, value) items with the
// downward-closure prune; emits every rule lhs => target=value with
// count(lhs & rhs)/N >= min_support and count(lhs & rhs)/count(lhs) >=
// min_confidence. `features` defaults to every non-target column.
RuleSet mine_rules(const CategoricalView& view, const std::string& target, const MiningParams& params = {},
                   const std::vector<std::string>& features = {});

// First rule in order whose lhs holds fires with its confidence; otherwise
// the default class with its training frequency.
Prediction predict_rules(const RuleSet& rs, const DiscreteRecord& record);
std::vector<Prediction> predict_rules(const RuleSet& rs, const CategoricalView& view);

// Tabular layout: rule, one column per lhs attribute ("-" when absent),
// target, rhs, support, confidence, origin, counts. The last row ("default")
// carries the default class.
void write_rules_csv(std::ostream& out, const RuleSet& rs);
// Empty support/confidence cells read as 0. Rules are re-sorted.
RuleSet read_rules_csv(std::istream& in);

// ---------------------------------------------------------------------------
// Decision tree
// ---------------------------------------------------------------------------

struct TreeParams {
    std::size_t max_depth = 6;
    std::size_t min_leaf = 5;  // every child of a split has at least this many rows
    double min_gain = 1e-6;

    void validate() const;
};

struct TreeNode {
    std::optional<std::string> split;  // attribute; nullopt for leaves
    std::vector<std::pair<std::string, std::size_t>> children;  // value -> node, sorted by value
    std::map<std::string, std::size_t> distribution;            // target value -> rows
    std::size_t count = 0;
    std::string majority;
    double gain = 0;
};

struct DecisionTree {
    std::string target;
    std::vector<std::string> features;
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    std::size_t total = 0;
    TreeParams params;
};

// Top-down multiway ID3 on the discretized view: the split maximizing the
// information gain (natural-log entropy), first attribute on ties. Stops at
// max_depth, pure nodes, when no split leaves min_leaf rows in every child,
// or when the best gain is below min_gain.
DecisionTree train_tree(const CategoricalView& view, const std::string& target, const TreeParams& params = {},
                        const std::vector<std::string>& features = {});

// Majority class of the reached leaf with its share. A value not seen in
// training follows the child with the most training rows; such detours are
// appended to `notes`.
Prediction predict_tree(const DecisionTree& tree, const DiscreteRecord& record,
                        std::vector<std::string>* notes = nullptr);
std::vector<Prediction> predict_tree(const DecisionTree& tree, const CategoricalView& view,
                                     std::vector<std::string>* notes = nullptr);

// One rule per leaf: lhs = path conditions, rhs = leaf majority.
RuleSet extract_tree_rules(const DecisionTree& tree);

void write_tree_text(std::ostream& out, const DecisionTree& tree);
void write_tree_json(std::ostream& out, const DecisionTree& tree);
DecisionTree read_tree_json(std::istream& in);

}  // namespace admit
