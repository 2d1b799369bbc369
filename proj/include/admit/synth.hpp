#pragma once

#include "admit/keyed_config.hpp"
#include "admit/record.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace admit {

// Half-open value band [lo, hi) with its probability mass.
struct Band {
    double lo = 0;
    double hi = 0;
    double p = 0;
};

struct WeightedLevel {
    std::string value;
    double p = 0;
};

// One mixture component. Attributes are drawn independently given the
// component; values are uniform inside the chosen band (ages as integers,
// grades in steps of 0.01).
struct ComponentSpec {
    std::string name;
    double weight = 0;
    std::vector<Band> age_bands;
    double gender_p_female = 0.5;
    std::vector<Band> grade_bands;
    double employment_p_employed = 0;
    std::array<double, 3> relevancy_probs{1, 0, 0};  // codes 0, 1, 2
    std::vector<WeightedLevel> diplomas;
    std::vector<WeightedLevel> fields;

    void validate() const;
};

struct Mixture {
    std::vector<ComponentSpec> components;
    std::map<std::string, std::string> field_groups;  // field -> field group

    void validate() const;
};

Mixture parse_mixture(const KeyedConfig& cfg);
Mixture load_mixture(const std::string& path);
void write_mixture(std::ostream& out, const Mixture& mix);

// Three components transcribing the cluster descriptions of the admissions
// study (mature men, young women with high grades, employed veterans).
const Mixture& default_mixture();

struct Cohort {
    Dataset data;
    std::vector<std::size_t> component;  // ground truth, one per row
};

// Validates the whole mixture before drawing anything. Identical
// (mix, n, seed, cohort_year) give identical output.
Cohort generate_cohort(const Mixture& mix, std::size_t n, std::uint64_t seed, int cohort_year);

void write_ground_truth(std::ostream& out, const Cohort& cohort);

}  // namespace admit
