#pragma once

#include "admit/record.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace admit {

// Column-major view of the attributes chosen for clustering. Categorical
// values are coded by their index in the sorted level list; code -1 marks a
// level that was not present when the level lists were built.
struct MixedTable {
    std::vector<std::string> ids;
    std::vector<std::string> continuous_names;
    std::vector<std::vector<double>> continuous;  // [attribute][row]
    std::vector<std::string> categorical_names;
    std::vector<std::vector<std::string>> levels;  // [attribute] sorted
    std::vector<std::vector<int>> codes;           // [attribute][row]

    std::size_t rows() const noexcept { return ids.size(); }
    std::size_t continuous_count() const noexcept { return continuous.size(); }
    std::size_t categorical_count() const noexcept { return codes.size(); }

    // Convenience constructors for tests and tools.
    static MixedTable from_columns(std::vector<std::vector<double>> continuous,
                                   std::vector<std::vector<std::string>> categorical = {});
};

// Default clustering features: age, gender, grade, employment, job_relevancy.
const std::vector<std::string>& default_cluster_features();

// Builds the table for `features` (schema names). Rows with a missing value
// in a requested feature raise ValidationError. When `level_source` is given
// its level lists are reused, so codes line up with a table built earlier
// (unseen levels get code -1).
MixedTable make_table(const Dataset& ds, const std::vector<std::string>& features,
                      const MixedTable* level_source = nullptr);

}  // namespace admit
