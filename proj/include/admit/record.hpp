#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace admit {

enum class Gender { Female, Male, Unknown };
enum class Employment { Unemployed, Employed, Unknown };
// Numeric codes follow the admissions form: 0 unemployed, 1 employed in a
// related field, 2 employed in an unrelated field.
enum class JobRelevancy { Unemployed = 0, Related = 1, Unrelated = 2, Unknown = 3 };

inline constexpr double kMinGrade = 0.0;
inline constexpr double kMaxGrade = 20.0;
inline constexpr int kMinAge = 17;

// One applicant row. Optional members are missing values (empty CSV cells);
// only id and cohort_year are mandatory. `Unknown` enumerators exist for the
// "unknown" imputation policy and are distinct from missing.
struct CandidateRecord {
    std::string id;
    std::optional<Gender> gender;
    std::optional<double> grade;
    std::optional<int> age;
    std::optional<std::string> diploma;
    std::optional<Employment> employment;
    std::optional<JobRelevancy> job_relevancy;
    std::optional<std::string> field_group;
    std::optional<std::string> field;
    int cohort_year = 0;
    std::optional<std::string> class_label;

    bool operator==(const CandidateRecord&) const = default;
    bool has_missing() const;
};

enum class AttributeKind { Continuous, Categorical };

struct AttributeDescriptor {
    std::string name;
    AttributeKind kind;
    bool operator==(const AttributeDescriptor&) const = default;
};

// Modelling attributes in column order. id and cohort_year are bookkeeping
// and are not listed.
const std::vector<AttributeDescriptor>& candidate_schema();
bool is_attribute(std::string_view name);
bool is_continuous(std::string_view name);

struct Rejection {
    std::size_t line = 0;
    std::string id;
    std::string reason;
};

struct Provenance {
    std::string source;
    std::vector<std::string> log;
    std::vector<Rejection> rejected;
};

struct Dataset {
    std::vector<AttributeDescriptor> schema = candidate_schema();
    std::vector<CandidateRecord> rows;
    Provenance provenance;

    std::size_t size() const noexcept { return rows.size(); }
    bool empty() const noexcept { return rows.empty(); }
    bool has_class() const;
};

std::string to_string(Gender g);
std::string to_string(Employment e);
std::string to_string(JobRelevancy r);
std::optional<Gender> parse_gender(std::string_view s);
std::optional<Employment> parse_employment(std::string_view s);
std::optional<JobRelevancy> parse_job_relevancy(std::string_view s);

// Generic attribute access by schema name ("class" is also accepted for the
// categorical accessor). nullopt means missing.
std::optional<double> continuous_value(const CandidateRecord& r, std::string_view attribute);
std::optional<std::string> categorical_value(const CandidateRecord& r, std::string_view attribute);

// Invariant check on the present values of a record; returns the first
// violated rule or nullopt.
std::optional<std::string> check_invariants(const CandidateRecord& r);

}  // namespace admit
