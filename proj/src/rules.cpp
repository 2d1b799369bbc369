#include "admit/models.hpp"

#include "admit/csv.hpp"
#include "admit/error.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <stdexcept>

namespace admit {

DiscreteRecord record_at(const CategoricalView& view, std::size_t row) {
    DiscreteRecord r;
    for (std::size_t j = 0; j < view.attributes.size(); ++j) r.emplace(view.attributes[j], view.rows[row][j]);
    return r;
}

std::optional<Interval> parse_interval(std::string_view text) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    const auto s = csv::trim(text);
    if (s.empty()) return std::nullopt;
    auto number = [](std::string_view v) { return csv::parse_double(csv::trim(v)); };
    if (s[0] == '>' || s[0] == '<') {
        const bool greater = s[0] == '>';
        std::string_view rest = s.substr(1);
        if (!rest.empty() && rest[0] == '=') rest.remove_prefix(1);
        const auto x = number(rest);
        if (!x) return std::nullopt;
        return greater ? Interval{*x, kInf} : Interval{-kInf, *x};
    }
    if (s.back() == '+') {
        const auto x = number(s.substr(0, s.size() - 1));
        if (!x) return std::nullopt;
        return Interval{*x, kInf};
    }
    const auto dash = s.find('-', 1);
    if (dash == std::string_view::npos) return std::nullopt;
    const auto lo = number(s.substr(0, dash));
    const auto hi = number(s.substr(dash + 1));
    if (!lo || !hi || *lo > *hi) return std::nullopt;
    return Interval{*lo, *hi};
}

bool Predicate::matches(std::string_view record_value) const {
    if (record_value == value) return true;
    const auto want = parse_interval(value);
    if (!want) return false;
    const auto have = parse_interval(record_value);
    if (!have) return false;
    return want->lo <= have->lo && have->hi <= want->hi;
}

std::string to_string(RuleOrigin o) { return o == RuleOrigin::Tree ? "tree" : "mined"; }

std::string Rule::lhs_text() const {
    std::string s;
    for (const auto& p : lhs) {
        if (!s.empty()) s += " & ";
        s += p.attribute + "=" + p.value;
    }
    return s;
}

bool Rule::matches(const DiscreteRecord& record) const {
    for (const auto& p : lhs) {
        const auto it = record.find(p.attribute);
        if (it == record.end()) throw ValidationError("record has no attribute '" + p.attribute + "'");
        if (!p.matches(it->second)) return false;
    }
    return true;
}

bool rule_precedes(const Rule& a, const Rule& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.support != b.support) return a.support > b.support;
    if (a.lhs.size() != b.lhs.size()) return a.lhs.size() < b.lhs.size();
    const auto ta = a.lhs_text();
    const auto tb = b.lhs_text();
    if (ta != tb) return ta < tb;
    return a.rhs < b.rhs;
}

void MiningParams::validate() const {
    if (!(min_support >= 0 && min_support <= 1)) throw ValidationError("min_support must lie in [0,1]");
    if (!(min_confidence >= 0 && min_confidence <= 1)) throw ValidationError("min_confidence must lie in [0,1]");
    if (max_lhs_len < 1) throw ValidationError("max_lhs_len must be at least 1");
}

void RuleSet::sort() { std::stable_sort(rules.begin(), rules.end(), rule_precedes); }

namespace {

using Bits = std::vector<std::uint64_t>;

std::size_t popcount(const Bits& b) {
    std::size_t n = 0;
    for (auto w : b) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

Bits conjunction(const Bits& a, const Bits& b) {
    Bits out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] & b[i];
    return out;
}

struct Item {
    std::size_t column;  // position in the feature list
    std::string value;
    Bits rows;
};

struct Itemset {
    std::vector<std::size_t> items;  // strictly increasing item indices, distinct columns
    Bits rows;
    std::size_t count = 0;
};

std::vector<std::string> resolve_features(const CategoricalView& view, const std::string& target,
                                          const std::vector<std::string>& features) {
    std::vector<std::string> out;
    if (features.empty()) {
        for (const auto& a : view.attributes) {
            if (a != target) out.push_back(a);
        }
        return out;
    }
    for (const auto& f : features) {
        if (f == target) throw ValidationError("feature list contains the target '" + target + "'");
        if (!view.column(f)) throw ValidationError("unknown feature '" + f + "'");
        if (std::find(out.begin(), out.end(), f) != out.end()) throw ValidationError("duplicate feature '" + f + "'");
        out.push_back(f);
    }
    return out;
}

// Majority value (lexically smallest on ties) and its count.
std::pair<std::string, std::size_t> majority_of(const std::map<std::string, std::size_t>& counts) {
    std::pair<std::string, std::size_t> best{"", 0};
    for (const auto& [v, n] : counts) {
        if (n > best.second) best = {v, n};
    }
    return best;
}

}  // namespace

RuleSet mine_rules(const CategoricalView& view, const std::string& target, const MiningParams& params,
                   const std::vector<std::string>& features) {
    params.validate();
    if (view.size() == 0) throw ValidationError("cannot mine rules from an empty dataset");
    const auto target_col = view.column(target);
    if (!target_col) throw ValidationError("unknown target attribute '" + target + "'");
    const auto feats = resolve_features(view, target, features);

    const std::size_t n = view.size();
    const std::size_t words = (n + 63) / 64;
    const double total = static_cast<double>(n);

    auto bits_for = [&](std::size_t col, std::map<std::string, Bits>& into) {
        for (std::size_t i = 0; i < n; ++i) {
            auto& b = into[view.rows[i][col]];
            if (b.empty()) b.assign(words, 0);
            b[i / 64] |= std::uint64_t{1} << (i % 64);
        }
    };

    std::map<std::string, Bits> target_rows;
    bits_for(*target_col, target_rows);

    RuleSet rs;
    rs.target = target;
    rs.params = params;
    {
        std::map<std::string, std::size_t> counts;
        for (const auto& [v, b] : target_rows) counts[v] = popcount(b);
        const auto [cls, cnt] = majority_of(counts);
        rs.default_class = cls;
        rs.default_probability = static_cast<double>(cnt) / total;
    }

    auto frequent = [&](std::size_t count) {
        return count > 0 && static_cast<double>(count) / total >= params.min_support;
    };

    std::vector<Item> items;
    for (std::size_t f = 0; f < feats.size(); ++f) {
        std::map<std::string, Bits> by_value;
        bits_for(*view.column(feats[f]), by_value);
        for (auto& [v, b] : by_value) items.push_back(Item{f, v, std::move(b)});
    }

    std::vector<Itemset> level;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const std::size_t c = popcount(items[i].rows);
        if (frequent(c)) level.push_back(Itemset{{i}, items[i].rows, c});
    }

    for (std::size_t len = 1; len <= params.max_lhs_len && !level.empty(); ++len) {
        for (const auto& lhs : level) {
            for (const auto& [value, trows] : target_rows) {
                const std::size_t joint = popcount(conjunction(lhs.rows, trows));
                if (!frequent(joint)) continue;
                const double confidence = static_cast<double>(joint) / static_cast<double>(lhs.count);
                if (confidence < params.min_confidence) continue;
                Rule r;
                for (auto it : lhs.items) r.lhs.push_back(Predicate{feats[items[it].column], items[it].value});
                r.target = target;
                r.rhs = value;
                r.support = static_cast<double>(joint) / total;
                r.confidence = confidence;
                r.origin = RuleOrigin::Mined;
                r.counts = RuleCounts{lhs.count, joint, n};
                rs.rules.push_back(std::move(r));
            }
        }
        if (len == params.max_lhs_len) break;

        // Next level: join sets sharing all but the last item, prune any
        // candidate with an infrequent subset.
        std::map<std::vector<std::size_t>, std::size_t> known;
        for (const auto& s : level) known.emplace(s.items, s.count);
        std::vector<Itemset> next;
        for (std::size_t a = 0; a < level.size(); ++a) {
            for (std::size_t b = a + 1; b < level.size(); ++b) {
                const auto& x = level[a].items;
                const auto& y = level[b].items;
                if (!std::equal(x.begin(), x.end() - 1, y.begin())) break;  // level is sorted, prefixes are grouped
                if (items[x.back()].column >= items[y.back()].column) continue;
                std::vector<std::size_t> cand = x;
                cand.push_back(y.back());
                std::size_t bound = std::numeric_limits<std::size_t>::max();
                bool pruned = false;
                for (std::size_t drop = 0; drop < cand.size() && !pruned; ++drop) {
                    std::vector<std::size_t> sub;
                    for (std::size_t q = 0; q < cand.size(); ++q) {
                        if (q != drop) sub.push_back(cand[q]);
                    }
                    const auto it = known.find(sub);
                    if (it == known.end()) pruned = true;
                    else bound = std::min(bound, it->second);
                }
                if (pruned) continue;
                Itemset s{std::move(cand), conjunction(level[a].rows, items[y.back()].rows), 0};
                s.count = popcount(s.rows);
                if (s.count > bound) throw std::logic_error("itemset count exceeds the count of a subset");
                if (frequent(s.count)) next.push_back(std::move(s));
            }
        }
        level = std::move(next);
    }

    rs.sort();
    return rs;
}

Prediction predict_rules(const RuleSet& rs, const DiscreteRecord& record) {
    for (const auto& r : rs.rules) {
        if (r.matches(record)) return Prediction{r.rhs, r.confidence};
    }
    return Prediction{rs.default_class, rs.default_probability};
}

std::vector<Prediction> predict_rules(const RuleSet& rs, const CategoricalView& view) {
    std::vector<Prediction> out;
    out.reserve(view.size());
    for (std::size_t i = 0; i < view.size(); ++i) out.push_back(predict_rules(rs, record_at(view, i)));
    return out;
}

namespace {

// Schema order first, then "class", then anything else alphabetically.
std::vector<std::string> rule_columns(const RuleSet& rs) {
    std::set<std::string> used;
    for (const auto& r : rs.rules) {
        for (const auto& p : r.lhs) used.insert(p.attribute);
    }
    std::vector<std::string> cols;
    for (const auto& a : candidate_schema()) {
        if (used.erase(a.name)) cols.push_back(a.name);
    }
    if (used.erase("class")) cols.push_back("class");
    cols.insert(cols.end(), used.begin(), used.end());
    return cols;
}

const std::vector<std::string> kTail = {"target", "rhs", "support", "confidence", "origin", "lhs_count", "joint_count", "total"};

}  // namespace

void write_rules_csv(std::ostream& out, const RuleSet& rs) {
    const auto cols = rule_columns(rs);
    std::vector<std::string> header{"rule"};
    header.insert(header.end(), cols.begin(), cols.end());
    header.insert(header.end(), kTail.begin(), kTail.end());
    csv::write_row(out, header);

    std::size_t number = 0;
    for (const auto& r : rs.rules) {
        std::vector<std::string> row{std::to_string(++number)};
        for (const auto& c : cols) {
            const auto it = std::find_if(r.lhs.begin(), r.lhs.end(), [&](const Predicate& p) { return p.attribute == c; });
            row.push_back(it == r.lhs.end() ? "-" : it->value);
        }
        row.push_back(r.target);
        row.push_back(r.rhs);
        row.push_back(csv::format_double(r.support));
        row.push_back(csv::format_double(r.confidence));
        row.push_back(to_string(r.origin));
        if (r.counts) {
            row.push_back(std::to_string(r.counts->lhs));
            row.push_back(std::to_string(r.counts->joint));
            row.push_back(std::to_string(r.counts->total));
        } else {
            row.insert(row.end(), {"", "", ""});
        }
        csv::write_row(out, row);
    }
    std::vector<std::string> last{"default"};
    last.insert(last.end(), cols.size(), "-");
    last.insert(last.end(), {rs.target, rs.default_class, "", csv::format_double(rs.default_probability), "default", "", "", ""});
    csv::write_row(out, last);
}

RuleSet read_rules_csv(std::istream& in) {
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header) throw ParseError(1, "rules file is empty");
    const auto& h = *header;
    if (h.size() < kTail.size() + 1 || h[0] != "rule" ||
        !std::equal(kTail.begin(), kTail.end(), h.end() - static_cast<std::ptrdiff_t>(kTail.size()))) {
        throw ParseError(reader.line(),
                         "rules header must be rule,<attributes...>,target,rhs,support,confidence,origin,lhs_count,"
                         "joint_count,total");
    }
    const std::size_t attr_end = h.size() - kTail.size();
    const std::vector<std::string> attrs(h.begin() + 1, h.begin() + static_cast<std::ptrdiff_t>(attr_end));

    auto number = [&](const std::string& cell, const char* what) {
        if (csv::trim(cell).empty()) return 0.0;
        const auto v = csv::parse_double(cell);
        if (!v || *v < 0 || *v > 1) throw ParseError(reader.line(), std::string("bad ") + what + " '" + cell + "'");
        return *v;
    };
    auto count = [&](const std::string& cell) -> std::optional<std::size_t> {
        if (csv::trim(cell).empty()) return std::nullopt;
        const auto v = csv::parse_int(cell);
        if (!v || *v < 0) throw ParseError(reader.line(), "bad count '" + cell + "'");
        return static_cast<std::size_t>(*v);
    };

    RuleSet rs;
    bool have_default = false;
    while (auto row = reader.next()) {
        const auto& f = *row;
        if (f.size() == 1 && csv::trim(f[0]).empty()) continue;
        if (f.size() != h.size()) throw ParseError(reader.line(), "expected " + std::to_string(h.size()) + " fields");
        const std::string& target = f[attr_end];
        if (rs.target.empty()) rs.target = target;
        if (target != rs.target) throw ParseError(reader.line(), "rules disagree on the target attribute");
        if (f[0] == "default") {
            rs.default_class = f[attr_end + 1];
            rs.default_probability = number(f[attr_end + 3], "default probability");
            have_default = true;
            continue;
        }
        Rule r;
        for (std::size_t j = 0; j < attrs.size(); ++j) {
            const auto v = csv::trim(f[j + 1]);
            if (v.empty() || v == "-") continue;
            if (attrs[j] == target) throw ParseError(reader.line(), "rule constrains its own target");
            r.lhs.push_back(Predicate{attrs[j], std::string(v)});
        }
        r.target = target;
        r.rhs = f[attr_end + 1];
        r.support = number(f[attr_end + 2], "support");
        r.confidence = number(f[attr_end + 3], "confidence");
        const auto origin = f[attr_end + 4];
        if (origin == "tree") r.origin = RuleOrigin::Tree;
        else if (origin == "mined" || origin.empty()) r.origin = RuleOrigin::Mined;
        else throw ParseError(reader.line(), "unknown rule origin '" + origin + "'");
        const auto lc = count(f[attr_end + 5]);
        const auto jc = count(f[attr_end + 6]);
        const auto tc = count(f[attr_end + 7]);
        if (lc && jc && tc) r.counts = RuleCounts{*lc, *jc, *tc};
        rs.rules.push_back(std::move(r));
    }
    if (!have_default) throw ParseError(reader.line(), "rules file has no default row");
    rs.sort();
    return rs;
}

}  // namespace admit
