#include "admit/synth.hpp"

#include "admit/csv.hpp"
#include "admit/error.hpp"
#include "admit/rng.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace admit {

namespace {

constexpr double kSumTolerance = 1e-9;

void check_probability(double p, const std::string& what) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(what + " must be in [0,1]");
}

template <typename Range, typename Proj>
void check_sums_to_one(const Range& items, Proj proj, const std::string& what) {
    if (items.empty()) throw ValidationError(what + " is empty");
    double sum = 0;
    for (const auto& it : items) {
        const double p = proj(it);
        check_probability(p, what + " entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw ValidationError(what + " sums to " + csv::format_double(sum) + ", expected 1");
    }
}

void check_bands(const std::vector<Band>& bands, const std::string& what, double min, double max) {
    check_sums_to_one(bands, [](const Band& b) { return b.p; }, what);
    for (const auto& b : bands) {
        if (!(b.lo < b.hi)) throw ValidationError(what + ": band lower edge must be below upper edge");
        if (b.lo < min || b.hi > max) {
            throw ValidationError(what + ": band " + csv::format_double(b.lo) + "-" + csv::format_double(b.hi) +
                                  " leaves the valid range");
        }
    }
}

std::size_t draw_index(Rng& rng, const std::vector<double>& probs) {
    const double u = rng.uniform();
    double acc = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return i;
    }
    // Rounding left u above the accumulated mass; take the last non-zero entry.
    for (std::size_t i = probs.size(); i-- > 0;) {
        if (probs[i] > 0) return i;
    }
    return probs.size() - 1;
}

template <typename T, typename Proj>
std::vector<double> probs_of(const std::vector<T>& items, Proj proj) {
    std::vector<double> out;
    out.reserve(items.size());
    for (const auto& it : items) out.push_back(proj(it));
    return out;
}

std::vector<Band> parse_bands(const std::string& text, const std::string& what) {
    std::vector<Band> out;
    for (const auto& item : csv::split(text, ',')) {
        const auto colon = item.rfind(':');
        const auto dash = item.find('-');
        if (colon == std::string::npos || dash == std::string::npos || dash > colon) {
            throw ValidationError(what + ": expected 'lo-hi:p', got '" + item + "'");
        }
        auto lo = csv::parse_double(item.substr(0, dash));
        auto hi = csv::parse_double(item.substr(dash + 1, colon - dash - 1));
        auto p = csv::parse_double(item.substr(colon + 1));
        if (!lo || !hi || !p) throw ValidationError(what + ": bad band '" + item + "'");
        out.push_back({*lo, *hi, *p});
    }
    return out;
}

std::vector<WeightedLevel> parse_levels(const std::string& text, const std::string& what) {
    std::vector<WeightedLevel> out;
    for (const auto& item : csv::split(text, ',')) {
        const auto colon = item.rfind(':');
        if (colon == std::string::npos) throw ValidationError(what + ": expected 'value:p', got '" + item + "'");
        auto p = csv::parse_double(item.substr(colon + 1));
        if (!p) throw ValidationError(what + ": bad probability in '" + item + "'");
        out.push_back({std::string(csv::trim(item.substr(0, colon))), *p});
    }
    return out;
}

std::string bands_text(const std::vector<Band>& bands) {
    std::string s;
    for (const auto& b : bands) {
        if (!s.empty()) s += ", ";
        s += csv::format_double(b.lo) + "-" + csv::format_double(b.hi) + ":" + csv::format_double(b.p);
    }
    return s;
}

std::string levels_text(const std::vector<WeightedLevel>& levels) {
    std::string s;
    for (const auto& l : levels) {
        if (!s.empty()) s += ", ";
        s += l.value + ":" + csv::format_double(l.p);
    }
    return s;
}

const char* const kDefaultMixtureText = R"(# Default admissions mixture. Band edges are half-open [lo, hi).
# Percentages stated for each cluster are transcribed; masses the
# descriptions leave open are spread evenly over the remaining bands.

[generator]
rng = mt19937_64+splitmix64

[component]
name = mature-men
weight = 0.3
age_bands = 17-25:0.14, 25-31:0.72, 31-60:0.14
gender_p_female = 0.08
grade_bands = 10-13:0.2, 13-15:0.6, 15-20:0.2
employment_p_employed = 0.4
relevancy_probs = 0.6, 0.05, 0.35
diplomas = Math-Physics:0.2, Experimental Sciences:0.15, Human Sciences:0.15, Technical & Professional:0.2, Job and Knowledge:0.2, Art:0.1
fields = Software:0.15, IT:0.15, Car Quality Control & Machine Tools:0.25, Graphic:0.05, Financial Services in Trade Units:0.1, Accounting- Industrial:0.2, Agronomy:0.1

[component]
name = young-women
weight = 0.3
age_bands = 17-25:0.78, 25-31:0.11, 31-60:0.11
gender_p_female = 0.74
grade_bands = 10-13:0.225, 13-15:0.225, 15-20:0.55
employment_p_employed = 0.15
relevancy_probs = 0.85, 0.05, 0.1
diplomas = Math-Physics:0.3, Experimental Sciences:0.25, Human Sciences:0.25, Technical & Professional:0.05, Job and Knowledge:0.05, Art:0.1
fields = Software:0.25, IT:0.2, Car Quality Control & Machine Tools:0.05, Graphic:0.15, Financial Services in Trade Units:0.1, Accounting- Industrial:0.15, Agronomy:0.1

[component]
name = employed-veterans
weight = 0.4
age_bands = 17-25:0.115, 25-31:0.115, 31-60:0.77
gender_p_female = 0.5
grade_bands = 10-12:0.16, 12-15:0.68, 15-20:0.16
employment_p_employed = 0.9
relevancy_probs = 0.1, 0.6, 0.3
diplomas = Math-Physics:0.1, Experimental Sciences:0.1, Human Sciences:0.2, Technical & Professional:0.25, Job and Knowledge:0.3, Art:0.05
fields = Software:0.1, IT:0.1, Car Quality Control & Machine Tools:0.2, Graphic:0.05, Financial Services in Trade Units:0.25, Accounting- Industrial:0.2, Agronomy:0.1

[field_groups]
Software = Industry
IT = Industry
Car Quality Control & Machine Tools = Industry
Graphic = Culture and Art
Financial Services in Trade Units = Management and Social Services
Accounting- Industrial = Management and Social Services
Agronomy = Agricultural
)";

}  // namespace

void ComponentSpec::validate() const {
    const std::string where = "component '" + name + "'";
    if (!(weight > 0.0 && weight <= 1.0)) throw ValidationError(where + ": weight must be in (0,1]");
    check_bands(age_bands, where + " age_bands", kMinAge, 150);
    for (const auto& b : age_bands) {
        if (b.lo != std::floor(b.lo) || b.hi != std::floor(b.hi)) {
            throw ValidationError(where + " age_bands: edges must be whole years");
        }
    }
    check_bands(grade_bands, where + " grade_bands", kMinGrade, kMaxGrade);
    check_probability(gender_p_female, where + " gender_p_female");
    check_probability(employment_p_employed, where + " employment_p_employed");
    check_sums_to_one(relevancy_probs, [](double p) { return p; }, where + " relevancy_probs");
    if (std::abs(relevancy_probs[0] - (1.0 - employment_p_employed)) > kSumTolerance) {
        throw ValidationError(where + ": relevancy code 0 mass must equal the unemployment mass");
    }
    check_sums_to_one(diplomas, [](const WeightedLevel& l) { return l.p; }, where + " diplomas");
    check_sums_to_one(fields, [](const WeightedLevel& l) { return l.p; }, where + " fields");
}

void Mixture::validate() const {
    if (components.empty()) throw ValidationError("mixture has no components");
    double total = 0;
    for (const auto& c : components) {
        c.validate();
        total += c.weight;
        for (const auto& f : c.fields) {
            if (!field_groups.count(f.value)) {
                throw ValidationError("field '" + f.value + "' has no field group");
            }
        }
    }
    if (std::abs(total - 1.0) > kSumTolerance) {
        throw ValidationError("component weights sum to " + csv::format_double(total) + ", expected 1");
    }
}

Mixture parse_mixture(const KeyedConfig& cfg) {
    if (auto rng = cfg.section("generator").get("rng"); rng && *rng != Rng::kAlgorithm) {
        throw ValidationError("mixture pins rng '" + *rng + "' but this build provides '" + Rng::kAlgorithm + "'");
    }
    Mixture mix;
    for (const auto* s : cfg.all("component")) {
        ComponentSpec c;
        c.name = s->get("name").value_or("component-" + std::to_string(mix.components.size() + 1));
        c.weight = s->get_double("weight", 0);
        c.age_bands = parse_bands(s->require("age_bands"), c.name + " age_bands");
        c.gender_p_female = s->get_double("gender_p_female", 0.5);
        c.grade_bands = parse_bands(s->require("grade_bands"), c.name + " grade_bands");
        c.employment_p_employed = s->get_double("employment_p_employed", 0);
        const auto rel = csv::split(s->require("relevancy_probs"), ',');
        if (rel.size() != 3) throw ValidationError(c.name + ": relevancy_probs needs 3 values");
        for (std::size_t i = 0; i < 3; ++i) {
            auto p = csv::parse_double(rel[i]);
            if (!p) throw ValidationError(c.name + ": bad relevancy probability '" + rel[i] + "'");
            c.relevancy_probs[i] = *p;
        }
        c.diplomas = parse_levels(s->require("diplomas"), c.name + " diplomas");
        c.fields = parse_levels(s->require("fields"), c.name + " fields");
        mix.components.push_back(std::move(c));
    }
    for (const auto& [field, group] : cfg.section("field_groups").entries) mix.field_groups[field] = group;
    mix.validate();
    return mix;
}

Mixture load_mixture(const std::string& path) { return parse_mixture(KeyedConfig::load(path)); }

void write_mixture(std::ostream& out, const Mixture& mix) {
    out << "[generator]\nrng = " << Rng::kAlgorithm << "\n";
    for (const auto& c : mix.components) {
        out << "\n[component]\n"
            << "name = " << c.name << "\n"
            << "weight = " << csv::format_double(c.weight) << "\n"
            << "age_bands = " << bands_text(c.age_bands) << "\n"
            << "gender_p_female = " << csv::format_double(c.gender_p_female) << "\n"
            << "grade_bands = " << bands_text(c.grade_bands) << "\n"
            << "employment_p_employed = " << csv::format_double(c.employment_p_employed) << "\n"
            << "relevancy_probs = " << csv::format_double(c.relevancy_probs[0]) << ", "
            << csv::format_double(c.relevancy_probs[1]) << ", " << csv::format_double(c.relevancy_probs[2]) << "\n"
            << "diplomas = " << levels_text(c.diplomas) << "\n"
            << "fields = " << levels_text(c.fields) << "\n";
    }
    out << "\n[field_groups]\n";
    for (const auto& [field, group] : mix.field_groups) out << field << " = " << group << "\n";
}

const Mixture& default_mixture() {
    static const Mixture mix = [] {
        std::istringstream in(kDefaultMixtureText);
        return parse_mixture(KeyedConfig::parse(in));
    }();
    return mix;
}

Cohort generate_cohort(const Mixture& mix, std::size_t n, std::uint64_t seed, int cohort_year) {
    mix.validate();

    Cohort out;
    out.data.provenance.source = "synthetic seed=" + std::to_string(seed) + " rng=" + Rng::kAlgorithm;
    out.data.rows.reserve(n);
    out.component.reserve(n);

    const auto weights = probs_of(mix.components, [](const ComponentSpec& c) { return c.weight; });
    Rng rng(seed);
    const int width = std::max<int>(6, static_cast<int>(std::to_string(n).size()));

    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = draw_index(rng, weights);
        const ComponentSpec& c = mix.components[k];
        CandidateRecord r;

        std::string num = std::to_string(i + 1);
        r.id = "S" + std::to_string(cohort_year) + "-" + std::string(width - num.size(), '0') + num;

        const Band& age = c.age_bands[draw_index(rng, probs_of(c.age_bands, [](const Band& b) { return b.p; }))];
        r.age = static_cast<int>(age.lo) + static_cast<int>(rng.below(static_cast<std::uint64_t>(age.hi - age.lo)));

        r.gender = rng.uniform() < c.gender_p_female ? Gender::Female : Gender::Male;

        const Band& grade =
            c.grade_bands[draw_index(rng, probs_of(c.grade_bands, [](const Band& b) { return b.p; }))];
        const auto lo = static_cast<std::int64_t>(std::llround(grade.lo * 100));
        const auto hi = static_cast<std::int64_t>(std::llround(grade.hi * 100));
        const auto steps = static_cast<std::uint64_t>(std::max<std::int64_t>(1, hi - lo));
        r.grade = static_cast<double>(lo + static_cast<std::int64_t>(rng.below(steps))) / 100.0;

        if (rng.uniform() < c.employment_p_employed) {
            r.employment = Employment::Employed;
            const double related = c.relevancy_probs[1] / (c.relevancy_probs[1] + c.relevancy_probs[2]);
            r.job_relevancy = rng.uniform() < related ? JobRelevancy::Related : JobRelevancy::Unrelated;
        } else {
            r.employment = Employment::Unemployed;
            r.job_relevancy = JobRelevancy::Unemployed;
        }

        r.diploma = c.diplomas[draw_index(rng, probs_of(c.diplomas, [](const WeightedLevel& l) { return l.p; }))].value;
        r.field = c.fields[draw_index(rng, probs_of(c.fields, [](const WeightedLevel& l) { return l.p; }))].value;
        r.field_group = mix.field_groups.at(*r.field);
        r.cohort_year = cohort_year;

        out.data.rows.push_back(std::move(r));
        out.component.push_back(k);
    }
    out.data.provenance.log.push_back("generated " + std::to_string(n) + " rows from " +
                                      std::to_string(mix.components.size()) + " components");
    return out;
}

void write_ground_truth(std::ostream& out, const Cohort& cohort) {
    csv::write_row(out, {"id", "component"});
    for (std::size_t i = 0; i < cohort.data.size(); ++i) {
        csv::write_row(out, {cohort.data.rows[i].id, std::to_string(cohort.component[i])});
    }
}

}  // namespace admit
