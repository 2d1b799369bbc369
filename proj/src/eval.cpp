#include "admit/eval.hpp"

#include "admit/csv.hpp"
#include "admit/error.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

namespace admit {

namespace {

void check_lengths(std::size_t predictions, std::size_t truths) {
    if (predictions != truths) {
        throw ValidationError("predictions (" + std::to_string(predictions) + ") and truths (" +
                              std::to_string(truths) + ") differ in length");
    }
}

bool unit(double p) { return p >= 0 && p <= 1; }

}  // namespace

LiftCurve lift_curve(std::span<const Prediction> predictions, std::span<const std::string> truths,
                     const std::string& target_value) {
    check_lengths(predictions.size(), truths.size());
    const std::size_t n = predictions.size();
    std::vector<double> score(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!unit(predictions[i].probability)) throw ValidationError("prediction probability outside [0,1]");
        score[i] = predictions[i].value == target_value ? predictions[i].probability : 0.0;
    }
    const std::size_t positives =
        static_cast<std::size_t>(std::count(truths.begin(), truths.end(), target_value));
    if (positives == 0) throw ValidationError("no record has the target value '" + target_value + "'");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });

    LiftCurve c;
    c.target_value = target_value;
    c.records = n;
    c.positives = positives;
    const double dn = static_cast<double>(n);
    const double dp = static_cast<double>(positives);
    c.model.push_back({0.0, 0.0});
    c.ideal.push_back({0.0, 0.0});
    std::size_t captured = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        if (truths[order[i - 1]] == target_value) ++captured;
        const double x = static_cast<double>(i) / dn;
        c.model.push_back({x, static_cast<double>(captured) / dp});
        c.ideal.push_back({x, static_cast<double>(std::min(i, positives)) / dp});
    }
    return c;
}

MiningLegend MiningLegend::from(double population_correct, double mean_predict_probability) {
    if (!unit(population_correct) || !unit(mean_predict_probability)) {
        throw ValidationError("mining legend fields must lie in [0,1]");
    }
    return MiningLegend{population_correct, mean_predict_probability, population_correct * mean_predict_probability};
}

MiningLegend mining_legend(std::span<const Prediction> predictions, std::span<const std::string> truths) {
    check_lengths(predictions.size(), truths.size());
    if (predictions.empty()) throw ValidationError("mining legend needs at least one prediction");
    std::size_t correct = 0;
    double sum = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (!unit(predictions[i].probability)) throw ValidationError("prediction probability outside [0,1]");
        if (predictions[i].value == truths[i]) ++correct;
        sum += predictions[i].probability;
    }
    const double n = static_cast<double>(predictions.size());
    return MiningLegend::from(static_cast<double>(correct) / n, sum / n);
}

ModelComparison compare_models(const MiningLegend& a, const MiningLegend& b, std::string name_a, std::string name_b) {
    ModelComparison c;
    c.name_a = std::move(name_a);
    c.name_b = std::move(name_b);
    c.a = a;
    c.b = b;
    c.tie = a.score == b.score;
    c.selected_a = a.score >= b.score;
    c.margin = c.selected_a ? a.score - b.score : b.score - a.score;
    return c;
}

void write_lift_csv(std::ostream& out, const LiftCurve& curve) {
    csv::write_row(out, {"population", "model", "ideal"});
    for (std::size_t i = 0; i < curve.model.size(); ++i) {
        csv::write_row(out, {csv::format_double(curve.model[i].population), csv::format_double(curve.model[i].captured),
                             csv::format_double(curve.ideal[i].captured)});
    }
}

namespace {

std::string polyline(const std::vector<LiftPoint>& pts, double x0, double y0, double w, double h,
                     const std::string& color) {
    std::string s = "  <polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\" points=\"";
    // Thin long curves so the file stays small; keep both endpoints.
    const std::size_t step = std::max<std::size_t>(1, pts.size() / 400);
    for (std::size_t i = 0; i < pts.size(); i += step) {
        if (i) s += ' ';
        s += csv::format_fixed(x0 + pts[i].population * w, 2) + "," + csv::format_fixed(y0 + h - pts[i].captured * h, 2);
    }
    if ((pts.size() - 1) % step != 0) {
        s += ' ' + csv::format_fixed(x0 + pts.back().population * w, 2) + "," +
             csv::format_fixed(y0 + h - pts.back().captured * h, 2);
    }
    return s + "\"/>\n";
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

}  // namespace

void write_lift_svg(std::ostream& out, const LiftCurve& curve, const std::string& title) {
    const double x0 = 60, y0 = 40, w = 480, h = 320;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"420\" viewBox=\"0 0 600 420\">\n";
    out << "  <rect width=\"600\" height=\"420\" fill=\"white\"/>\n";
    out << "  <text x=\"300\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
        << xml_escape(title) << "</text>\n";
    out << "  <rect x=\"60\" y=\"40\" width=\"480\" height=\"320\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int t = 0; t <= 10; t += 2) {
        const double f = t / 10.0;
        const std::string label = std::to_string(t * 10) + "%";
        out << "  <text x=\"" << csv::format_fixed(x0 + f * w, 2) << "\" y=\"378\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"10\">" << label << "</text>\n";
        out << "  <text x=\"54\" y=\"" << csv::format_fixed(y0 + h - f * h + 3, 2) << "\" text-anchor=\"end\" "
            << "font-family=\"sans-serif\" font-size=\"10\">" << label << "</text>\n";
    }
    out << "  <text x=\"300\" y=\"400\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << "overall population</text>\n";
    out << "  <line x1=\"60\" y1=\"360\" x2=\"540\" y2=\"40\" stroke=\"#999\" stroke-dasharray=\"4 4\"/>\n";
    out << polyline(curve.ideal, x0, y0, w, h, "#1f4fd1");
    out << polyline(curve.model, x0, y0, w, h, "#d12f1f");
    out << "  <text x=\"400\" y=\"330\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#1f4fd1\">ideal</text>\n";
    out << "  <text x=\"400\" y=\"346\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#d12f1f\">model ("
        << xml_escape(curve.target_value) << ")</text>\n";
    out << "</svg>\n";
}

void write_legend_table(std::ostream& out, const std::vector<std::pair<std::string, MiningLegend>>& rows) {
    std::size_t width = 6;
    for (const auto& [name, l] : rows) width = std::max(width, name.size());
    auto pad = [](std::string s, std::size_t w) { return s.size() < w ? s + std::string(w - s.size(), ' ') : s; };
    out << pad("series", width) << "  " << pad("population correct", 20) << pad("predict probability", 21) << "score\n";
    for (const auto& [name, l] : rows) {
        out << pad(name, width) << "  " << pad(csv::format_fixed(100 * l.population_correct, 2) + "%", 20)
            << pad(csv::format_fixed(100 * l.mean_predict_probability, 2) + "%", 21) << csv::format_fixed(l.score, 4)
            << "\n";
    }
}

void write_comparison(std::ostream& out, const ModelComparison& cmp) {
    out << cmp.name_a << ": population correct " << csv::format_double(cmp.a.population_correct)
        << ", predict probability " << csv::format_double(cmp.a.mean_predict_probability) << ", score "
        << csv::format_double(cmp.a.score) << "\n";
    out << cmp.name_b << ": population correct " << csv::format_double(cmp.b.population_correct)
        << ", predict probability " << csv::format_double(cmp.b.mean_predict_probability) << ", score "
        << csv::format_double(cmp.b.score) << "\n";
    out << "selected: " << cmp.selected() << (cmp.tie ? " (tie)" : "") << ", margin " << csv::format_double(cmp.margin)
        << "\n";
}

}  // namespace admit
