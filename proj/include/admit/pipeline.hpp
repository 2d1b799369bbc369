#pragma once

#include "admit/cluster.hpp"
#include "admit/eval.hpp"
#include "admit/ingest.hpp"
#include "admit/keyed_config.hpp"
#include "admit/models.hpp"
#include "admit/profile.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace admit {

// Cut lists from a [binning] section ("grade = 12.7, 14.8, 16.3") applied on
// top of `base`; attributes not mentioned keep their base bins.
BinningSpec apply_binning_overrides(const KeyedConfig::Section& section, BinningSpec base);
void write_binning(std::ostream& out, const BinningSpec& spec);

// Cohorts drawn from a mixture instead of read from files.
struct SyntheticInputs {
    std::string mixture = "default";  // "default" or a mixture file
    std::size_t train_rows = 3000;
    std::size_t test_rows = 1000;
    std::uint64_t train_seed = 1;
    std::uint64_t test_seed = 2;
};

struct PipelineConfig {
    std::string train_path;
    std::string test_path;  // empty: the train file holds both cohorts
    std::optional<SyntheticInputs> synthetic;
    std::optional<int> reference_year;
    int train_cohort = 2008;
    int test_cohort = 2009;

    ImputationPolicy imputation;
    std::vector<std::string> cluster_features = default_cluster_features();
    std::size_t max_k = 15;
    std::optional<std::size_t> fixed_k;
    AutoKOptions auto_k;
    std::size_t kmeans_max_iter = 100;
    LabelOptions labels;
    std::map<std::string, std::vector<double>> bin_cuts;  // overrides of the default cuts

    std::vector<std::string> model_features;  // empty: every non-target attribute
    std::vector<std::string> targets = {"field", "class"};
    MiningParams rules;
    TreeParams tree;

    std::uint64_t seed = 1;
    std::string out = "out";

    // Relative paths are resolved against `base_dir`.
    static PipelineConfig parse(const KeyedConfig& cfg, const std::string& base_dir = "");
    static PipelineConfig load(const std::string& path);
    void validate() const;
};

struct ModelResult {
    std::string model;   // "rules" or "tree"
    std::string target;  // "field" or "class"
    std::string target_value;
    MiningLegend legend;
};

struct RunReport {
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    std::size_t auto_k = 0;
    std::size_t k = 0;
    std::vector<std::size_t> cluster_sizes;
    std::map<std::size_t, ClassLabel> labels;
    std::vector<ModelResult> results;
    std::map<std::string, ModelComparison> selection;  // per target
    std::vector<std::string> access_log;
    std::string summary;
};

// Runs ingest, cluster, label, train, evaluate and report in order and
// writes every artifact under cfg.out. The test cohort is loaded only in
// the evaluate stage. A failing stage throws StageError and leaves an
// INCOMPLETE marker naming the stage in cfg.out.
RunReport run_pipeline(const PipelineConfig& cfg);

}  // namespace admit
