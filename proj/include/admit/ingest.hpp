#pragma once

#include "admit/record.hpp"

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace admit {

// ---------------------------------------------------------------------------
// CSV ingestion
// ---------------------------------------------------------------------------

// Reads the applicant CSV (header: id,gender,grade,age|birth_year,diploma,
// employment,job_relevancy,field_group,field,cohort_year[,class]).
//
// Structural problems throw ParseError with the offending line number. Rows
// that parse but break a record invariant (grade outside [0,20], age below
// 17, unknown enum value, ...) are dropped and listed in
// provenance.rejected. When the file carries birth_year instead of age,
// age = reference_year - birth_year; without a reference year each row's
// cohort_year is used.
Dataset parse_and_validate(std::istream& in, std::optional<int> reference_year = std::nullopt,
                           std::string source = "<stream>");
Dataset load_dataset(const std::string& path, std::optional<int> reference_year = std::nullopt);

// Writes the canonical CSV (always an age column; a class column when every
// row carries a label). parse_and_validate(serialize(ds)) reproduces ds.rows.
void serialize(std::ostream& out, const Dataset& ds);
void save_dataset(const std::string& path, const Dataset& ds);

// ---------------------------------------------------------------------------
// Missing-value handling
// ---------------------------------------------------------------------------

enum class ContinuousPolicy { Median, Drop };
enum class CategoricalPolicy { Mode, Unknown, Drop };

struct ImputationPolicy {
    ContinuousPolicy continuous = ContinuousPolicy::Median;
    CategoricalPolicy categorical = CategoricalPolicy::Mode;
};

ImputationPolicy parse_policy(std::string_view continuous, std::string_view categorical);

// Returns a dataset with no missing values. Employment and job_relevancy are
// first completed from each other where the invariant determines them;
// remaining gaps follow the policy. Kept rows keep their order. Throws
// ValidationError when an attribute has no observed value to impute from.
Dataset preprocess(const Dataset& raw, const ImputationPolicy& policy = {});

// ---------------------------------------------------------------------------
// Discretization
// ---------------------------------------------------------------------------

// Bins for one continuous attribute. Edges are lower, cuts..., upper; every
// bin is [lo, hi) except the last, which is [lo, hi].
struct AttributeBins {
    std::string attribute;
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    std::vector<double> cuts;
    std::vector<std::string> labels;  // empty: generated as "lo-hi" / "lo+"

    void validate() const;
    std::size_t bin_count() const { return cuts.size() + 1; }
    // Bin index for v, or nullopt when v lies outside [lower, upper].
    std::optional<std::size_t> bin_of(double v) const;
    std::string label(std::size_t bin) const;
};

struct BinningSpec {
    std::vector<AttributeBins> attributes;

    const AttributeBins* find(std::string_view attribute) const;
    void validate() const;
};

// Grade cut at the rounded quartiles of the observed grades; age cut at the
// 25/31 band edges. Both ranges are the record's valid ranges.
BinningSpec default_binning(const Dataset& ds);

// Every value rendered as a string; continuous attributes replaced by their
// bin label. Column "class" is appended when the dataset is labeled.
struct CategoricalView {
    std::vector<std::string> attributes;
    std::vector<std::string> ids;
    std::vector<std::vector<std::string>> rows;

    std::size_t size() const noexcept { return rows.size(); }
    std::optional<std::size_t> column(std::string_view name) const;
};

// Throws DiscretizeError when a value falls outside its attribute's bins and
// ValidationError when the dataset still has missing values.
CategoricalView discretize(const Dataset& ds, const BinningSpec& spec);

void write_view(std::ostream& out, const CategoricalView& view);

}  // namespace admit
