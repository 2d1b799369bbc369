#include "admit/error.hpp"
#include "admit/models.hpp"
#include "admit/rng.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace admit;

namespace {

CategoricalView view_of(std::vector<std::string> attrs, std::vector<std::vector<std::string>> rows) {
    CategoricalView v;
    v.attributes = std::move(attrs);
    for (std::size_t i = 0; i < rows.size(); ++i) v.ids.push_back("r" + std::to_string(i));
    v.rows = std::move(rows);
    return v;
}

CategoricalView random_view(Rng& rng, std::size_t rows, std::size_t attrs, std::size_t levels) {
    std::vector<std::string> names;
    for (std::size_t a = 0; a < attrs; ++a) names.push_back("a" + std::to_string(a));
    names.push_back("y");
    std::vector<std::vector<std::string>> data;
    for (std::size_t i = 0; i < rows; ++i) {
        std::vector<std::string> row;
        for (std::size_t a = 0; a <= attrs; ++a) row.push_back(std::string(1, static_cast<char>('p' + rng.below(levels))));
        data.push_back(std::move(row));
    }
    return view_of(std::move(names), std::move(data));
}

Rule rule(std::vector<Predicate> lhs, std::string rhs, double support, double confidence) {
    Rule r;
    r.lhs = std::move(lhs);
    r.target = "field";
    r.rhs = std::move(rhs);
    r.support = support;
    r.confidence = confidence;
    return r;
}

}  // namespace

TEST_CASE("Art implies Graphic with support 0.5 and confidence 1") {
    const auto v = view_of({"diploma", "field"},
                           {{"Art", "Graphic"}, {"Art", "Graphic"}, {"Math", "Software"}, {"Tech", "Software"}});
    MiningParams p;
    p.min_support = 0.5;
    const auto rs = mine_rules(v, "field", p);
    REQUIRE(rs.rules.size() == 1);
    CHECK(rs.rules[0].lhs_text() == "diploma=Art");
    CHECK(rs.rules[0].rhs == "Graphic");
    CHECK(rs.rules[0].support == 0.5);
    CHECK(rs.rules[0].confidence == 1.0);
    CHECK(rs.default_class == "Graphic");  // 2-2 tie goes to the lexically smaller class
    CHECK(rs.default_probability == 0.5);
}

TEST_CASE("mined rules equal the brute-force enumeration") {
    Rng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const auto v = random_view(rng, 3 + rng.below(10), 1 + rng.below(4), 2 + rng.below(2));
        MiningParams p;
        p.min_support = trial % 2 ? 0.0 : 0.15;
        p.min_confidence = trial % 3 ? 0.0 : 0.6;
        p.max_lhs_len = 1 + rng.below(4);
        const auto rs = mine_rules(v, "y", p);
        CHECK(oracle::keys_of(rs) == oracle::brute_rules(v, "y", p));
        for (const auto& r : rs.rules) {
            CHECK(r.counts->joint == static_cast<std::size_t>(std::llround(r.support * static_cast<double>(v.size()))));
            CHECK(r.confidence * static_cast<double>(r.counts->lhs) ==
                  doctest::Approx(r.support * static_cast<double>(v.size())).epsilon(1e-12));
        }
        for (std::size_t i = 1; i < rs.rules.size(); ++i) CHECK_FALSE(rule_precedes(rs.rules[i], rs.rules[i - 1]));
    }
}

TEST_CASE("max_lhs_len 1 with zero thresholds gives one rule per seen item and class pair") {
    const auto v = view_of({"a", "b", "y"}, {{"x", "u", "0"}, {"x", "v", "1"}, {"z", "v", "1"}});
    MiningParams p{0.0, 0.0, 1};
    // a=x:{0,1}, a=z:{1}, b=u:{0}, b=v:{1}
    CHECK(mine_rules(v, "y", p).rules.size() == 5);
}

TEST_CASE("a constant target gives confidence 1 everywhere") {
    Rng rng(2);
    auto v = random_view(rng, 12, 3, 3);
    for (auto& row : v.rows) row.back() = "same";
    const auto rs = mine_rules(v, "y", {0.0, 0.0, 3});
    CHECK_FALSE(rs.rules.empty());
    for (const auto& r : rs.rules) CHECK(r.confidence == 1.0);
    CHECK(rs.default_probability == 1.0);
}

TEST_CASE("mining rejects bad input") {
    const auto v = view_of({"a", "y"}, {{"x", "1"}});
    CHECK_THROWS_AS(mine_rules(view_of({"a", "y"}, {}), "y"), ValidationError);
    CHECK_THROWS_AS(mine_rules(v, "missing"), ValidationError);
    CHECK_THROWS_AS(mine_rules(v, "y", {1.5, 0.5, 2}), ValidationError);
    CHECK_THROWS_AS(mine_rules(v, "y", {0.1, 0.5, 0}), ValidationError);
    CHECK_THROWS_AS(mine_rules(v, "y", {}, {"y"}), ValidationError);
    CHECK(mine_rules(v, "y", {1.0, 1.0, 1}, {"a"}).rules.size() == 1);
}

TEST_CASE("tied rules fire shorter lhs first, then the lexically smaller one") {
    RuleSet rs;
    rs.target = "field";
    rs.default_class = "Other";
    rs.default_probability = 0.2;
    rs.rules = {rule({{"diploma", "Art"}, {"gender", "F"}}, "Graphic", 0.1, 0.8),
                rule({{"gender", "F"}}, "Software", 0.1, 0.8), rule({{"diploma", "Art"}}, "Painting", 0.1, 0.8)};
    rs.sort();
    CHECK(rs.rules[0].rhs == "Painting");
    CHECK(rs.rules[1].rhs == "Software");
    CHECK(rs.rules[2].rhs == "Graphic");
    const DiscreteRecord rec{{"diploma", "Art"}, {"gender", "F"}};
    CHECK(predict_rules(rs, rec).value == "Painting");

    const auto miss = predict_rules(rs, DiscreteRecord{{"diploma", "Math"}, {"gender", "M"}});
    CHECK(miss.value == "Other");
    CHECK(miss.probability == 0.2);
    CHECK_THROWS_AS(predict_rules(rs, DiscreteRecord{{"gender", "M"}}), ValidationError);
}

TEST_CASE("interval predicates cover bins inside them") {
    CHECK(Predicate{"grade", ">12.7"}.matches("14.8-16.3"));
    CHECK(Predicate{"grade", ">12.7"}.matches("16.3+"));
    CHECK_FALSE(Predicate{"grade", ">12.7"}.matches("10-12.7"));
    CHECK(Predicate{"grade", "<12.7"}.matches("10-12.7"));
    CHECK(Predicate{"grade", "14.8 -16.3"}.matches("14.8-16.3"));
    CHECK_FALSE(Predicate{"grade", "14.8-16.3"}.matches("12.7-14.8"));
    CHECK_FALSE(Predicate{"diploma", "Art"}.matches("Arts"));
    CHECK(Predicate{"field", "Accounting- Industrial"}.matches("Accounting- Industrial"));
    const auto i = parse_interval("25+");
    REQUIRE(i);
    CHECK(i->lo == 25);
    CHECK(std::isinf(i->hi));
    CHECK_FALSE(parse_interval("Math-Physics"));
}

TEST_CASE("rules CSV round trip") {
    Rng rng(6);
    const auto v = random_view(rng, 40, 3, 3);
    const auto rs = mine_rules(v, "y", {0.05, 0.3, 3});
    std::stringstream io;
    write_rules_csv(io, rs);
    const auto back = read_rules_csv(io);
    CHECK(back.target == rs.target);
    CHECK(back.default_class == rs.default_class);
    CHECK(back.default_probability == rs.default_probability);
    REQUIRE(back.rules.size() == rs.rules.size());
    for (std::size_t i = 0; i < rs.rules.size(); ++i) {
        CHECK(back.rules[i].lhs == rs.rules[i].lhs);
        CHECK(back.rules[i].rhs == rs.rules[i].rhs);
        CHECK(back.rules[i].support == rs.rules[i].support);
        CHECK(back.rules[i].confidence == rs.rules[i].confidence);
        CHECK(back.rules[i].counts->joint == rs.rules[i].counts->joint);
    }
    std::istringstream bad("rule,a,target,rhs\n");
    CHECK_THROWS_AS(read_rules_csv(bad), ParseError);
}

TEST_CASE("a pure root is a single leaf with probability 1") {
    const auto v = view_of({"a", "y"}, {{"p", "k"}, {"q", "k"}, {"r", "k"}});
    const auto t = train_tree(v, "y");
    CHECK(t.nodes.size() == 1);
    const auto pred = predict_tree(t, DiscreteRecord{{"a", "zzz"}});
    CHECK(pred.value == "k");
    CHECK(pred.probability == 1.0);
}

TEST_CASE("a perfectly separating attribute splits with gain ln 2") {
    const auto v = view_of({"noise", "sep", "y"}, {{"a", "L", "0"}, {"b", "L", "0"}, {"a", "R", "1"}, {"b", "R", "1"}});
    TreeParams p;
    p.min_leaf = 1;
    const auto t = train_tree(v, "y", p);
    REQUIRE(t.nodes[0].split);
    CHECK(*t.nodes[0].split == "sep");
    CHECK(t.nodes[0].gain == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    for (const auto& [value, child] : t.nodes[0].children) {
        CHECK(t.nodes[child].distribution.size() == 1);
        CHECK_FALSE(t.nodes[child].split);
    }
    const auto pred = predict_tree(t, DiscreteRecord{{"noise", "a"}, {"sep", "R"}});
    CHECK(pred.value == "1");
    CHECK(pred.probability == 1.0);

    const auto rules = extract_tree_rules(t);
    REQUIRE(rules.rules.size() == 2);
    CHECK(rules.rules[0].lhs_text() != rules.rules[1].lhs_text());
    for (const auto& r : rules.rules) CHECK(r.origin == RuleOrigin::Tree);
}

TEST_CASE("zero-gain attributes leave a majority leaf") {
    const auto v = view_of({"a", "y"}, {{"p", "0"}, {"p", "1"}, {"q", "0"}, {"q", "1"}, {"q", "0"}, {"p", "0"}});
    TreeParams p;
    p.min_leaf = 1;
    const auto t = train_tree(v, "y", p);
    CHECK(t.nodes.size() == 1);
    CHECK(t.nodes[0].majority == "0");
}

TEST_CASE("min_leaf holds for every child") {
    Rng rng(10);
    const auto v = random_view(rng, 200, 4, 3);
    TreeParams p;
    p.min_leaf = 12;
    const auto t = train_tree(v, "y", p);
    for (const auto& n : t.nodes) {
        std::size_t sum = 0;
        for (const auto& [cls, c] : n.distribution) sum += c;
        CHECK(sum == n.count);
        for (const auto& [value, child] : n.children) CHECK(t.nodes[child].count >= 12);
    }
}

TEST_CASE("unseen values follow the largest child and are reported") {
    const auto v = view_of({"d", "y"}, {{"A", "x"}, {"A", "x"}, {"A", "x"}, {"B", "z"}});
    TreeParams p;
    p.min_leaf = 1;
    const auto t = train_tree(v, "y", p);
    std::vector<std::string> notes;
    CHECK(predict_tree(t, DiscreteRecord{{"d", "C"}}, &notes).value == "x");
    CHECK(notes.size() == 1);
}

TEST_CASE("single-leaf tree over 10 rows with 7 of class A extracts to one 0.7 rule") {
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < 10; ++i) rows.push_back({"c", i < 7 ? "A" : "B"});
    const auto t = train_tree(view_of({"a", "y"}, rows), "y");
    const auto rs = extract_tree_rules(t);
    REQUIRE(rs.rules.size() == 1);
    CHECK(rs.rules[0].lhs.empty());
    CHECK(rs.rules[0].rhs == "A");
    CHECK(rs.rules[0].confidence == doctest::Approx(0.7));
    CHECK(rs.rules[0].support == doctest::Approx(0.7));
}

TEST_CASE("extracted tree rules recount on the training set, and the tree beats the baseline") {
    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        auto v = random_view(rng, 150, 4, 3);
        // Tie the target to two attributes so the tree has structure to find.
        for (auto& row : v.rows) {
            if (rng.uniform() < 0.7) row.back() = row[0] == "p" ? "A" : (row[1] == "q" ? "B" : "C");
        }
        TreeParams p;
        p.min_leaf = 3;
        const auto t = train_tree(v, "y", p);
        for (const auto& r : extract_tree_rules(t).rules) {
            std::size_t lhs = 0, joint = 0;
            for (std::size_t i = 0; i < v.size(); ++i) {
                const auto rec = record_at(v, i);
                if (!r.matches(rec)) continue;
                ++lhs;
                joint += rec.at("y") == r.rhs;
            }
            CHECK(r.confidence == doctest::Approx(static_cast<double>(joint) / static_cast<double>(lhs)).epsilon(1e-12));
            CHECK(r.support == doctest::Approx(static_cast<double>(joint) / 150.0).epsilon(1e-12));
        }
        std::map<std::string, std::size_t> counts;
        for (const auto& row : v.rows) ++counts[row.back()];
        std::size_t baseline = 0;
        for (const auto& [cls, c] : counts) baseline = std::max(baseline, c);
        const auto preds = predict_tree(t, v);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < v.size(); ++i) correct += preds[i].value == v.rows[i].back();
        CHECK(correct >= baseline);
    }
}

TEST_CASE("tree JSON round trip and text output") {
    Rng rng(3);
    const auto v = random_view(rng, 120, 3, 3);
    TreeParams p;
    p.min_leaf = 4;
    const auto t = train_tree(v, "y", p);
    std::stringstream io;
    write_tree_json(io, t);
    const auto back = read_tree_json(io);
    CHECK(back.nodes.size() == t.nodes.size());
    CHECK(back.features == t.features);
    const auto a = predict_tree(t, v);
    const auto b = predict_tree(back, v);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].value == b[i].value);
        CHECK(a[i].probability == b[i].probability);
    }
    std::ostringstream text;
    write_tree_text(text, t);
    CHECK(text.str().rfind("target y, 120 rows", 0) == 0);

    std::istringstream bad("{\"target\": 3}");
    CHECK_THROWS_AS(read_tree_json(bad), ValidationError);
}
