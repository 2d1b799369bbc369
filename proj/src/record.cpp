#include "admit/record.hpp"

#include "admit/csv.hpp"
#include "admit/error.hpp"

#include <algorithm>

namespace admit {

bool CandidateRecord::has_missing() const {
    return !gender || !grade || !age || !diploma || !employment || !job_relevancy ||
           !field_group || !field;
}

const std::vector<AttributeDescriptor>& candidate_schema() {
    static const std::vector<AttributeDescriptor> schema{
        {"gender", AttributeKind::Categorical},     {"grade", AttributeKind::Continuous},
        {"age", AttributeKind::Continuous},         {"diploma", AttributeKind::Categorical},
        {"employment", AttributeKind::Categorical}, {"job_relevancy", AttributeKind::Categorical},
        {"field_group", AttributeKind::Categorical}, {"field", AttributeKind::Categorical},
    };
    return schema;
}

bool is_attribute(std::string_view name) {
    const auto& s = candidate_schema();
    return std::any_of(s.begin(), s.end(), [&](const auto& a) { return a.name == name; });
}

bool is_continuous(std::string_view name) { return name == "grade" || name == "age"; }

bool Dataset::has_class() const {
    return !rows.empty() &&
           std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.class_label.has_value(); });
}

std::string to_string(Gender g) {
    switch (g) {
        case Gender::Female: return "F";
        case Gender::Male: return "M";
        case Gender::Unknown: break;
    }
    return "unknown";
}

std::string to_string(Employment e) {
    switch (e) {
        case Employment::Unemployed: return "Unemployed";
        case Employment::Employed: return "Employed";
        case Employment::Unknown: break;
    }
    return "unknown";
}

std::string to_string(JobRelevancy r) {
    switch (r) {
        case JobRelevancy::Unemployed: return "0";
        case JobRelevancy::Related: return "1";
        case JobRelevancy::Unrelated: return "2";
        case JobRelevancy::Unknown: break;
    }
    return "unknown";
}

std::optional<Gender> parse_gender(std::string_view s) {
    const auto v = csv::to_lower(csv::trim(s));
    if (v == "f" || v == "female") return Gender::Female;
    if (v == "m" || v == "male") return Gender::Male;
    if (v == "unknown") return Gender::Unknown;
    return std::nullopt;
}

std::optional<Employment> parse_employment(std::string_view s) {
    const auto v = csv::to_lower(csv::trim(s));
    if (v == "unemployed") return Employment::Unemployed;
    if (v == "employed") return Employment::Employed;
    if (v == "unknown") return Employment::Unknown;
    return std::nullopt;
}

std::optional<JobRelevancy> parse_job_relevancy(std::string_view s) {
    const auto v = csv::to_lower(csv::trim(s));
    if (v == "0") return JobRelevancy::Unemployed;
    if (v == "1") return JobRelevancy::Related;
    if (v == "2") return JobRelevancy::Unrelated;
    if (v == "unknown") return JobRelevancy::Unknown;
    return std::nullopt;
}

std::optional<double> continuous_value(const CandidateRecord& r, std::string_view attribute) {
    if (attribute == "grade") return r.grade;
    if (attribute == "age") {
        if (!r.age) return std::nullopt;
        return static_cast<double>(*r.age);
    }
    throw std::invalid_argument("not a continuous attribute: " + std::string(attribute));
}

std::optional<std::string> categorical_value(const CandidateRecord& r, std::string_view attribute) {
    auto wrap = [](const auto& opt) -> std::optional<std::string> {
        if (!opt) return std::nullopt;
        return to_string(*opt);
    };
    if (attribute == "gender") return wrap(r.gender);
    if (attribute == "employment") return wrap(r.employment);
    if (attribute == "job_relevancy") return wrap(r.job_relevancy);
    if (attribute == "diploma") return r.diploma;
    if (attribute == "field_group") return r.field_group;
    if (attribute == "field") return r.field;
    if (attribute == "class") return r.class_label;
    throw std::invalid_argument("not a categorical attribute: " + std::string(attribute));
}

std::optional<std::string> check_invariants(const CandidateRecord& r) {
    if (r.id.empty()) return "missing id";
    if (r.grade && (!(*r.grade >= kMinGrade) || !(*r.grade <= kMaxGrade))) {
        return "grade out of range";
    }
    if (r.age && *r.age < kMinAge) return "age below " + std::to_string(kMinAge);
    if (r.employment && r.job_relevancy && *r.employment != Employment::Unknown &&
        *r.job_relevancy != JobRelevancy::Unknown) {
        const bool unemployed = *r.employment == Employment::Unemployed;
        const bool zero = *r.job_relevancy == JobRelevancy::Unemployed;
        if (unemployed != zero) return "job_relevancy inconsistent with employment";
    }
    return std::nullopt;
}

}  // namespace admit
