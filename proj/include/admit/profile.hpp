#pragma once

#include "admit/cluster.hpp"
#include "admit/ingest.hpp"

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace admit {

struct ContinuousProfile {
    double mean = 0;
    std::vector<std::pair<std::string, double>> bands;  // band label -> proportion
};

struct ClusterProfile {
    std::size_t cluster = 0;
    std::size_t size = 0;
    // attribute -> level -> proportion, over the levels seen anywhere in the dataset
    std::map<std::string, std::map<std::string, double>> categorical;
    std::map<std::string, ContinuousProfile> continuous;
};

// One profile per non-empty cluster, in cluster id order. Continuous
// attributes are summarized by their mean and by the proportion of members
// in each band of `bands` (attributes without bands get the mean only).
// Empty clusters are skipped and reported through `warnings`.
std::vector<ClusterProfile> profile_clusters(const Dataset& ds, const Clustering& c, const BinningSpec& bands,
                                             std::vector<std::string>* warnings = nullptr);

struct ClassLabel {
    std::string name;
    std::size_t cluster = 0;
};

struct LabelOptions {
    std::string key_attribute = "age";
    std::string prefix = "Class-";
};

// Orders clusters by ascending mean of the key attribute (ties: larger
// cluster first, then lower id) and names them prefix1, prefix2, ...
std::map<std::size_t, ClassLabel> assign_labels(const std::vector<ClusterProfile>& profiles,
                                                const LabelOptions& opt = {});

// Copy of ds where every row carries its cluster's label.
Dataset apply_labels(const Dataset& ds, const Clustering& c, const std::map<std::size_t, ClassLabel>& labels);

void write_profiles_text(std::ostream& out, const std::vector<ClusterProfile>& profiles,
                         const std::map<std::size_t, ClassLabel>& labels);
void write_profiles_csv(std::ostream& out, const std::vector<ClusterProfile>& profiles,
                        const std::map<std::size_t, ClassLabel>& labels);

}  // namespace admit
