#pragma once

#include "admit/models.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace admit {

struct LiftPoint {
    double population = 0;  // fraction of records taken
    double captured = 0;    // fraction of target_value truths among them
};

struct LiftCurve {
    std::string target_value;
    std::size_t records = 0;
    std::size_t positives = 0;
    std::vector<LiftPoint> model;  // records + 1 points, from (0,0) to (1,1)
    std::vector<LiftPoint> ideal;
};

// Records are ranked by their score for target_value: the predicted
// probability when the prediction is target_value, 0 otherwise. Ties keep
// input order. Throws ValidationError on length mismatch, probabilities
// outside [0,1], or when no truth equals target_value.
LiftCurve lift_curve(std::span<const Prediction> predictions, std::span<const std::string> truths,
                     const std::string& target_value);

struct MiningLegend {
    double population_correct = 0;
    double mean_predict_probability = 0;
    double score = 0;

    // Validates both fields lie in [0,1] and sets score to their product.
    static MiningLegend from(double population_correct, double mean_predict_probability);
};

// population_correct = share of exact class matches; mean probability over
// all records.
MiningLegend mining_legend(std::span<const Prediction> predictions, std::span<const std::string> truths);

struct ModelComparison {
    std::string name_a;
    std::string name_b;
    MiningLegend a;
    MiningLegend b;
    bool selected_a = true;
    bool tie = false;
    double margin = 0;  // |score_a - score_b|

    const std::string& selected() const { return selected_a ? name_a : name_b; }
};

// Larger score wins; an exact tie selects `a` and sets the tie flag.
ModelComparison compare_models(const MiningLegend& a, const MiningLegend& b, std::string name_a = "A",
                               std::string name_b = "B");

void write_lift_csv(std::ostream& out, const LiftCurve& curve);
void write_lift_svg(std::ostream& out, const LiftCurve& curve, const std::string& title);
void write_legend_table(std::ostream& out, const std::vector<std::pair<std::string, MiningLegend>>& rows);
void write_comparison(std::ostream& out, const ModelComparison& cmp);

}  // namespace admit
