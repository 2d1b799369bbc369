#include "admit/ingest.hpp"

#include "admit/csv.hpp"
#include "admit/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace admit {

namespace {

enum Column {
    kId,
    kGender,
    kGrade,
    kAge,
    kBirthYear,
    kDiploma,
    kEmployment,
    kRelevancy,
    kFieldGroup,
    kField,
    kCohortYear,
    kClass,
    kColumnCount
};

const char* const kColumnNames[kColumnCount] = {
    "id",    "gender",      "grade", "age",         "birth_year", "diploma",
    "employment", "job_relevancy", "field_group", "field", "cohort_year", "class"};

std::optional<std::string> text_cell(const std::string& s) {
    auto t = csv::trim(s);
    if (t.empty()) return std::nullopt;
    return std::string(t);
}

}  // namespace

Dataset parse_and_validate(std::istream& in, std::optional<int> reference_year, std::string source) {
    Dataset ds;
    ds.provenance.source = std::move(source);
    csv::Reader reader(in);

    auto header = reader.next();
    if (!header) throw ParseError(1, "missing header row");

    std::array<std::optional<std::size_t>, kColumnCount> pos{};
    for (std::size_t i = 0; i < header->size(); ++i) {
        const auto name = csv::to_lower(csv::trim((*header)[i]));
        bool known = false;
        for (int c = 0; c < kColumnCount; ++c) {
            if (name == kColumnNames[c]) {
                if (pos[c]) throw ParseError(reader.line(), "duplicate column '" + name + "'");
                pos[c] = i;
                known = true;
            }
        }
        if (!known) ds.provenance.log.push_back("ignored unknown column '" + name + "'");
    }
    for (int c : {kId, kGender, kGrade, kDiploma, kEmployment, kRelevancy, kFieldGroup, kField,
                  kCohortYear}) {
        if (!pos[c]) {
            throw ParseError(reader.line(), std::string("missing required column '") + kColumnNames[c] + "'");
        }
    }
    if (!pos[kAge] && !pos[kBirthYear]) {
        throw ParseError(reader.line(), "header needs an 'age' or 'birth_year' column");
    }

    const std::size_t width = header->size();
    std::size_t read = 0;
    while (auto fields = reader.next()) {
        if (fields->size() == 1 && csv::trim((*fields)[0]).empty()) continue;  // blank line
        if (fields->size() != width) {
            throw ParseError(reader.line(), "expected " + std::to_string(width) + " fields, got " +
                                                std::to_string(fields->size()));
        }
        ++read;
        auto cell = [&](Column c) -> std::optional<std::string> {
            if (!pos[c]) return std::nullopt;
            return text_cell((*fields)[*pos[c]]);
        };

        CandidateRecord r;
        std::string reason;
        auto reject = [&](std::string why) {
            if (reason.empty()) reason = std::move(why);
        };

        r.id = cell(kId).value_or("");
        if (r.id.empty()) reject("missing id");

        if (auto v = cell(kCohortYear)) {
            if (auto y = csv::parse_int(*v)) {
                r.cohort_year = static_cast<int>(*y);
            } else {
                reject("cohort_year not an integer: '" + *v + "'");
            }
        } else {
            reject("missing cohort_year");
        }

        if (auto v = cell(kGender)) {
            r.gender = parse_gender(*v);
            if (!r.gender) reject("unknown gender '" + *v + "'");
        }
        if (auto v = cell(kGrade)) {
            r.grade = csv::parse_double(*v);
            if (!r.grade) reject("grade not numeric: '" + *v + "'");
        }
        if (auto v = cell(kAge)) {
            auto a = csv::parse_int(*v);
            if (!a) {
                reject("age not an integer: '" + *v + "'");
            } else {
                r.age = static_cast<int>(*a);
            }
        } else if (auto b = cell(kBirthYear)) {
            auto y = csv::parse_int(*b);
            if (!y) {
                reject("birth_year not an integer: '" + *b + "'");
            } else {
                const int ref = reference_year.value_or(r.cohort_year);
                r.age = ref - static_cast<int>(*y);
            }
        }
        r.diploma = cell(kDiploma);
        if (auto v = cell(kEmployment)) {
            r.employment = parse_employment(*v);
            if (!r.employment) reject("unknown employment '" + *v + "'");
        }
        if (auto v = cell(kRelevancy)) {
            r.job_relevancy = parse_job_relevancy(*v);
            if (!r.job_relevancy) reject("unknown job_relevancy '" + *v + "'");
        }
        r.field_group = cell(kFieldGroup);
        r.field = cell(kField);
        r.class_label = cell(kClass);

        if (reason.empty()) {
            if (auto why = check_invariants(r)) reason = *why;
        }
        if (!reason.empty()) {
            ds.provenance.rejected.push_back({reader.line(), r.id, reason});
            continue;
        }
        ds.rows.push_back(std::move(r));
    }

    ds.provenance.log.push_back("read " + std::to_string(read) + " rows, accepted " +
                                std::to_string(ds.rows.size()) + ", rejected " +
                                std::to_string(ds.provenance.rejected.size()));
    return ds;
}

Dataset load_dataset(const std::string& path, std::optional<int> reference_year) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open dataset: " + path);
    return parse_and_validate(in, reference_year, path);
}

void serialize(std::ostream& out, const Dataset& ds) {
    const bool labeled = ds.has_class();
    std::vector<std::string> header{"id",        "gender",        "grade",       "age",
                                    "diploma",   "employment",    "job_relevancy", "field_group",
                                    "field",     "cohort_year"};
    if (labeled) header.push_back("class");
    csv::write_row(out, header);

    auto opt = [](const auto& v, auto&& fmt) -> std::string {
        if (!v) return "";
        return fmt(*v);
    };
    auto str = [](const std::string& s) { return s; };
    for (const auto& r : ds.rows) {
        std::vector<std::string> row{
            r.id,
            opt(r.gender, [](Gender g) { return to_string(g); }),
            opt(r.grade, [](double g) { return csv::format_double(g); }),
            opt(r.age, [](int a) { return std::to_string(a); }),
            opt(r.diploma, str),
            opt(r.employment, [](Employment e) { return to_string(e); }),
            opt(r.job_relevancy, [](JobRelevancy j) { return to_string(j); }),
            opt(r.field_group, str),
            opt(r.field, str),
            std::to_string(r.cohort_year),
        };
        if (labeled) row.push_back(*r.class_label);
        csv::write_row(out, row);
    }
}

void save_dataset(const std::string& path, const Dataset& ds) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write dataset: " + path);
    serialize(out, ds);
}

// ---------------------------------------------------------------------------

ImputationPolicy parse_policy(std::string_view continuous, std::string_view categorical) {
    ImputationPolicy p;
    const auto c = csv::to_lower(continuous);
    if (c == "median") {
        p.continuous = ContinuousPolicy::Median;
    } else if (c == "drop") {
        p.continuous = ContinuousPolicy::Drop;
    } else {
        throw ValidationError("continuous policy must be median|drop, got '" + c + "'");
    }
    const auto k = csv::to_lower(categorical);
    if (k == "mode") {
        p.categorical = CategoricalPolicy::Mode;
    } else if (k == "unknown") {
        p.categorical = CategoricalPolicy::Unknown;
    } else if (k == "drop") {
        p.categorical = CategoricalPolicy::Drop;
    } else {
        throw ValidationError("categorical policy must be mode|unknown|drop, got '" + k + "'");
    }
    return p;
}

namespace {

bool continuous_missing(const CandidateRecord& r) { return !r.grade || !r.age; }

bool categorical_missing(const CandidateRecord& r) {
    return !r.gender || !r.diploma || !r.employment || !r.job_relevancy || !r.field_group || !r.field;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Most frequent value; ties go to the smallest value.
template <typename T>
std::optional<T> mode_of(const std::vector<T>& values) {
    std::map<T, std::size_t> counts;
    for (const auto& v : values) ++counts[v];
    std::optional<T> best;
    std::size_t best_count = 0;
    for (const auto& [v, c] : counts) {
        if (c > best_count) {
            best = v;
            best_count = c;
        }
    }
    return best;
}

[[noreturn]] void unrecoverable(const std::string& attribute) {
    throw ValidationError("attribute '" + attribute +
                          "' has no observed values; cannot impute (drop the attribute or use the drop policy)");
}

}  // namespace

Dataset preprocess(const Dataset& raw, const ImputationPolicy& policy) {
    Dataset out;
    out.schema = raw.schema;
    out.provenance = raw.provenance;
    auto& log = out.provenance.log;

    // Completion implied by the employment/relevancy invariant.
    std::vector<CandidateRecord> rows = raw.rows;
    std::size_t derived = 0;
    for (auto& r : rows) {
        if (!r.employment && r.job_relevancy && *r.job_relevancy != JobRelevancy::Unknown) {
            r.employment = *r.job_relevancy == JobRelevancy::Unemployed ? Employment::Unemployed
                                                                        : Employment::Employed;
            ++derived;
        }
        if (!r.job_relevancy && r.employment == Employment::Unemployed) {
            r.job_relevancy = JobRelevancy::Unemployed;
            ++derived;
        }
    }
    if (derived) log.push_back("derived " + std::to_string(derived) + " employment/job_relevancy values");

    // Drop policies first so imputation statistics come from kept rows.
    {
        std::vector<CandidateRecord> kept;
        kept.reserve(rows.size());
        std::size_t dropped = 0;
        for (auto& r : rows) {
            const bool drop = (policy.continuous == ContinuousPolicy::Drop && continuous_missing(r)) ||
                              (policy.categorical == CategoricalPolicy::Drop && categorical_missing(r));
            if (drop) {
                log.push_back("dropped row " + r.id + " (missing value)");
                ++dropped;
            } else {
                kept.push_back(std::move(r));
            }
        }
        rows = std::move(kept);
        if (dropped) log.push_back("dropped " + std::to_string(dropped) + " rows under drop policy");
    }

    if (policy.continuous == ContinuousPolicy::Median) {
        std::vector<double> grades;
        std::vector<double> ages;
        for (const auto& r : rows) {
            if (r.grade) grades.push_back(*r.grade);
            if (r.age) ages.push_back(*r.age);
        }
        const bool need_grade = std::any_of(rows.begin(), rows.end(), [](auto& r) { return !r.grade; });
        const bool need_age = std::any_of(rows.begin(), rows.end(), [](auto& r) { return !r.age; });
        if (need_grade && grades.empty()) unrecoverable("grade");
        if (need_age && ages.empty()) unrecoverable("age");
        // Integer ages take the lower median so the value was observed.
        std::optional<double> grade_fill;
        std::optional<int> age_fill;
        if (need_grade) grade_fill = median_of(grades);
        if (need_age) {
            std::sort(ages.begin(), ages.end());
            age_fill = static_cast<int>(ages[(ages.size() - 1) / 2]);
        }
        for (auto& r : rows) {
            if (!r.grade) {
                r.grade = *grade_fill;
                log.push_back("row " + r.id + ": grade imputed " + csv::format_double(*grade_fill) + " (median)");
            }
            if (!r.age) {
                r.age = *age_fill;
                log.push_back("row " + r.id + ": age imputed " + std::to_string(*age_fill) + " (median)");
            }
        }
    }

    if (policy.categorical == CategoricalPolicy::Unknown) {
        for (auto& r : rows) {
            auto fill = [&](auto& member, auto value, const char* name) {
                if (!member) {
                    member = value;
                    log.push_back("row " + r.id + ": " + name + " set to unknown");
                }
            };
            fill(r.gender, Gender::Unknown, "gender");
            fill(r.diploma, std::string("unknown"), "diploma");
            fill(r.employment, Employment::Unknown, "employment");
            fill(r.job_relevancy, JobRelevancy::Unknown, "job_relevancy");
            fill(r.field_group, std::string("unknown"), "field_group");
            fill(r.field, std::string("unknown"), "field");
        }
    } else if (policy.categorical == CategoricalPolicy::Mode) {
        auto impute = [&](auto member, const char* name) {
            using T = typename std::decay_t<decltype(rows.front().*member)>::value_type;
            std::vector<T> seen;
            bool need = false;
            for (const auto& r : rows) {
                if (r.*member) {
                    seen.push_back(*(r.*member));
                } else {
                    need = true;
                }
            }
            if (!need) return;
            auto m = mode_of(seen);
            if (!m) unrecoverable(name);
            for (auto& r : rows) {
                if (!(r.*member)) {
                    r.*member = *m;
                    log.push_back("row " + r.id + ": " + name + " imputed (mode)");
                }
            }
        };
        impute(&CandidateRecord::gender, "gender");
        impute(&CandidateRecord::diploma, "diploma");
        impute(&CandidateRecord::field_group, "field_group");
        impute(&CandidateRecord::field, "field");
        impute(&CandidateRecord::employment, "employment");

        // job_relevancy follows employment: 0 for the unemployed, otherwise
        // the most common code among employed rows.
        std::vector<JobRelevancy> employed_codes;
        for (const auto& r : rows) {
            if (r.employment == Employment::Employed && r.job_relevancy &&
                *r.job_relevancy != JobRelevancy::Unemployed) {
                employed_codes.push_back(*r.job_relevancy);
            }
        }
        const JobRelevancy employed_fill = mode_of(employed_codes).value_or(JobRelevancy::Related);
        for (auto& r : rows) {
            if (r.job_relevancy) continue;
            if (r.employment == Employment::Unemployed) {
                r.job_relevancy = JobRelevancy::Unemployed;
            } else if (r.employment == Employment::Employed) {
                r.job_relevancy = employed_fill;
            } else {
                r.job_relevancy = JobRelevancy::Unknown;
            }
            log.push_back("row " + r.id + ": job_relevancy imputed " + to_string(*r.job_relevancy));
        }
    }

    for (const auto& r : rows) {
        if (auto why = check_invariants(r)) {
            throw ValidationError("row " + r.id + " violates invariant after preprocessing: " + *why);
        }
    }
    out.rows = std::move(rows);
    return out;
}

// ---------------------------------------------------------------------------

void AttributeBins::validate() const {
    if (!(lower < upper)) throw ValidationError("bins for '" + attribute + "': lower must be < upper");
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        if (!std::isfinite(cuts[i])) throw ValidationError("bins for '" + attribute + "': non-finite cut");
        if (i > 0 && !(cuts[i - 1] < cuts[i])) {
            throw ValidationError("bins for '" + attribute + "': cut points must be strictly increasing");
        }
    }
    if (!cuts.empty() && (!(lower < cuts.front()) || !(cuts.back() < upper))) {
        throw ValidationError("bins for '" + attribute + "': cut points must lie inside (lower, upper)");
    }
    if (!labels.empty() && labels.size() != bin_count()) {
        throw ValidationError("bins for '" + attribute + "': need " + std::to_string(bin_count()) + " labels");
    }
}

std::optional<std::size_t> AttributeBins::bin_of(double v) const {
    if (!(v >= lower) || !(v <= upper)) return std::nullopt;
    // upper_bound gives the first cut strictly greater than v, so a value
    // equal to a cut lands in the bin that starts there (left-closed).
    return static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), v) - cuts.begin());
}

std::string AttributeBins::label(std::size_t bin) const {
    if (!labels.empty()) return labels.at(bin);
    const double lo = bin == 0 ? lower : cuts.at(bin - 1);
    const double hi = bin == cuts.size() ? upper : cuts.at(bin);
    if (std::isinf(hi)) return csv::format_double(lo) + "+";
    return csv::format_double(lo) + "-" + csv::format_double(hi);
}

const AttributeBins* BinningSpec::find(std::string_view attribute) const {
    for (const auto& a : attributes) {
        if (a.attribute == attribute) return &a;
    }
    return nullptr;
}

void BinningSpec::validate() const {
    for (const auto& a : attributes) a.validate();
}

BinningSpec default_binning(const Dataset& ds) {
    std::vector<double> grades;
    for (const auto& r : ds.rows) {
        if (r.grade) grades.push_back(*r.grade);
    }
    std::sort(grades.begin(), grades.end());

    AttributeBins grade{"grade", kMinGrade, kMaxGrade, {}, {}};
    if (!grades.empty()) {
        for (double q : {0.25, 0.5, 0.75}) {
            // Linear interpolation between order statistics.
            const double h = (grades.size() - 1) * q;
            const auto lo = static_cast<std::size_t>(std::floor(h));
            const std::size_t hi = std::min(lo + 1, grades.size() - 1);
            double cut = grades[lo] + (h - lo) * (grades[hi] - grades[lo]);
            cut = std::round(cut * 100.0) / 100.0;
            if (cut > kMinGrade && cut < kMaxGrade && (grade.cuts.empty() || cut > grade.cuts.back())) {
                grade.cuts.push_back(cut);
            }
        }
    }
    AttributeBins age{"age", static_cast<double>(kMinAge), std::numeric_limits<double>::infinity(), {25, 31}, {}};
    return BinningSpec{{grade, age}};
}

std::optional<std::size_t> CategoricalView::column(std::string_view name) const {
    for (std::size_t i = 0; i < attributes.size(); ++i) {
        if (attributes[i] == name) return i;
    }
    return std::nullopt;
}

CategoricalView discretize(const Dataset& ds, const BinningSpec& spec) {
    spec.validate();
    CategoricalView view;
    for (const auto& a : ds.schema) {
        if (a.kind == AttributeKind::Continuous && !spec.find(a.name)) {
            throw ValidationError("binning spec does not cover continuous attribute '" + a.name + "'");
        }
        view.attributes.push_back(a.name);
    }
    const bool labeled = ds.has_class();
    if (labeled) view.attributes.push_back("class");

    view.rows.reserve(ds.size());
    view.ids.reserve(ds.size());
    for (const auto& r : ds.rows) {
        std::vector<std::string> row;
        row.reserve(view.attributes.size());
        for (const auto& a : ds.schema) {
            if (a.kind == AttributeKind::Continuous) {
                auto v = continuous_value(r, a.name);
                if (!v) throw ValidationError("row " + r.id + ": missing " + a.name + "; preprocess first");
                const auto* bins = spec.find(a.name);
                auto b = bins->bin_of(*v);
                if (!b) throw DiscretizeError(a.name, *v, "value outside all bins");
                row.push_back(bins->label(*b));
            } else {
                auto v = categorical_value(r, a.name);
                if (!v) throw ValidationError("row " + r.id + ": missing " + a.name + "; preprocess first");
                row.push_back(std::move(*v));
            }
        }
        if (labeled) row.push_back(*r.class_label);
        view.ids.push_back(r.id);
        view.rows.push_back(std::move(row));
    }
    return view;
}

void write_view(std::ostream& out, const CategoricalView& view) {
    std::vector<std::string> header{"id"};
    header.insert(header.end(), view.attributes.begin(), view.attributes.end());
    csv::write_row(out, header);
    for (std::size_t i = 0; i < view.size(); ++i) {
        std::vector<std::string> row{view.ids[i]};
        row.insert(row.end(), view.rows[i].begin(), view.rows[i].end());
        csv::write_row(out, row);
    }
}

}  // namespace admit
