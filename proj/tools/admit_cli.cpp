// admit: command-line front end for the admission mining pipeline.

#include "admit/clustsim.hpp"
#include "admit/csv.hpp"
#include "admit/error.hpp"
#include "admit/pipeline.hpp"
#include "admit/synth.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace admit;

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    return in;
}

std::vector<std::string> features_or_default(const std::vector<std::string>& f) {
    return f.empty() ? default_cluster_features() : f;
}

BinningSpec binning_for(const Dataset& ds, const std::string& path) {
    BinningSpec spec = default_binning(ds);
    if (path.empty()) return spec;
    return apply_binning_overrides(KeyedConfig::load(path).section("binning"), spec);
}

void report_rejections(const Dataset& ds) {
    for (const auto& r : ds.provenance.rejected) {
        std::cerr << "rejected line " << r.line << (r.id.empty() ? "" : " (" + r.id + ")") << ": " << r.reason << "\n";
    }
}

// Runs one subcommand body and converts failures into a stage-tagged
// message and exit code 1.
int guarded(const std::string& stage, const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const StageError& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: [" << stage << "] " << e.what() << "\n";
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Admission data mining: clustering, labeling, rule and tree models, lift evaluation"};
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = 1;
    std::string out;
    app.add_option("--seed", seed, "Random seed")->capture_default_str();
    app.add_option("--out", out, "Output file or directory");

    int status = 0;

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Validate and clean an applicant CSV");
    std::string in_path;
    std::optional<int> reference_year;
    std::string cont_policy = "median", cat_policy = "mode";
    ingest->add_option("input", in_path, "Applicant CSV")->required();
    ingest->add_option("--reference-year", reference_year, "Year used to turn birth_year into age");
    ingest->add_option("--continuous", cont_policy, "median | drop")->capture_default_str();
    ingest->add_option("--categorical", cat_policy, "mode | unknown | drop")->capture_default_str();
    ingest->callback([&] {
        status = guarded("ingest", [&] {
            const Dataset raw = load_dataset(in_path, reference_year);
            report_rejections(raw);
            const Dataset clean = preprocess(raw, parse_policy(cont_policy, cat_policy));
            for (const auto& line : clean.provenance.log) std::cerr << line << "\n";
            if (out.empty()) serialize(std::cout, clean);
            else save_dataset(out, clean);
            std::cerr << clean.size() << " rows kept, " << raw.provenance.rejected.size() << " rejected\n";
        });
    });

    // synth
    auto* synth = app.add_subcommand("synth", "Draw a synthetic cohort from a mixture");
    std::string mixture_path, truth_path, dump_mixture;
    std::size_t rows = 3000;
    int cohort_year = 2008;
    synth->add_option("--mixture", mixture_path, "Mixture file (default: built-in three-component mixture)");
    synth->add_option("--rows", rows, "Rows to draw")->capture_default_str();
    synth->add_option("--cohort-year", cohort_year, "cohort_year of the drawn rows")->capture_default_str();
    synth->add_option("--truth", truth_path, "Write the generating component of every row here");
    synth->add_option("--write-mixture", dump_mixture, "Write the mixture in use to this file");
    synth->callback([&] {
        status = guarded("synth", [&] {
            const Mixture mix = mixture_path.empty() ? default_mixture() : load_mixture(mixture_path);
            if (!dump_mixture.empty()) {
                auto f = open_out(dump_mixture);
                write_mixture(f, mix);
            }
            const Cohort cohort = generate_cohort(mix, rows, seed, cohort_year);
            if (out.empty()) serialize(std::cout, cohort.data);
            else save_dataset(out, cohort.data);
            if (!truth_path.empty()) {
                auto f = open_out(truth_path);
                write_ground_truth(f, cohort);
            }
        });
    });

    // cluster
    auto* cluster = app.add_subcommand("cluster", "Cluster a cleaned dataset (TwoStep for k, then k-means)");
    std::string cluster_in, trace_path, method = "both";
    std::vector<std::string> features;
    std::size_t max_k = 15, fixed_k = 0;
    cluster->add_option("input", cluster_in, "Cleaned applicant CSV")->required();
    cluster->add_option("--features", features, "Clustering attributes")->delimiter(',');
    cluster->add_option("--method", method, "twostep | kmeans | both")->capture_default_str();
    cluster->add_option("--max-k", max_k, "Largest k considered by TwoStep")->capture_default_str();
    cluster->add_option("--k", fixed_k, "Use this k instead of the TwoStep choice");
    cluster->add_option("--trace", trace_path, "Write the merge trace (k, distance, BIC) here");
    cluster->callback([&] {
        status = guarded("cluster", [&] {
            const Dataset ds = load_dataset(cluster_in);
            const MixedTable t = make_table(ds, features_or_default(features));
            std::size_t k = fixed_k;
            Clustering result;
            if (method != "kmeans" || k == 0) {
                TwoStepOptions opt;
                opt.max_k = max_k;
                opt.agglomerate.seed = seed;
                const auto ts = twostep(t, opt);
                std::cerr << "twostep chose k=" << ts.chosen_k << "\n";
                if (!trace_path.empty()) {
                    auto f = open_out(trace_path);
                    write_trace(f, ts.trace, max_k);
                }
                if (k == 0) k = ts.chosen_k;
                result = ts.clustering;
            }
            if (method != "twostep") {
                KMeansOptions ko;
                ko.k = k;
                ko.seed = seed;
                const auto km = kmeans(t, ko);
                std::cerr << "k-means k=" << k << ", " << km.iterations << " iterations, objective "
                          << csv::format_double(km.objective()) << "\n";
                result = km.clustering;
            } else if (fixed_k) {
                throw ValidationError("--k applies to k-means; use --method kmeans or both");
            }
            if (out.empty()) write_clustering(std::cout, result);
            else {
                auto f = open_out(out);
                write_clustering(f, result);
            }
        });
    });

    // compare-clusterings
    auto* compare = app.add_subcommand("compare-clusterings", "Rand, Jaccard and ADCO between two clusterings");
    std::string cmp_data, cmp_a, cmp_b;
    std::size_t bins = 10;
    std::vector<std::string> cmp_features;
    compare->add_option("input", cmp_data, "Dataset both clusterings cover")->required();
    compare->add_option("first", cmp_a, "First assignment CSV (id,cluster)")->required();
    compare->add_option("second", cmp_b, "Second assignment CSV (id,cluster)")->required();
    compare->add_option("--features", cmp_features, "Attributes for ADCO profiles")->delimiter(',');
    compare->add_option("--bins", bins, "Equal-width bins per continuous attribute")->capture_default_str();
    compare->callback([&] {
        status = guarded("compare-clusterings", [&] {
            const Dataset ds = load_dataset(cmp_data);
            const MixedTable t = make_table(ds, features_or_default(cmp_features));
            auto fa = open_in(cmp_a);
            auto fb = open_in(cmp_b);
            const Clustering a = read_clustering(fa);
            const Clustering b = read_clustering(fb);
            if (a.ids != t.ids) throw ValidationError("first clustering does not list the dataset rows in order");
            AdcoOptions opt;
            opt.bins_per_attr = bins;
            std::cout << "rand,jaccard,adco\n"
                      << csv::format_double(rand_index(a, b)) << "," << csv::format_double(jaccard_index(a, b)) << ","
                      << csv::format_double(adco(a, b, t, opt)) << "\n";
        });
    });

    // label
    auto* label = app.add_subcommand("label", "Profile clusters and add the class column");
    std::string label_in, label_clusters, profiles_path, binning_path;
    label->add_option("input", label_in, "Cleaned applicant CSV")->required();
    label->add_option("clusters", label_clusters, "Assignment CSV (id,cluster)")->required();
    label->add_option("--profiles", profiles_path, "Write the text profile report here");
    label->add_option("--binning", binning_path, "Binning file with [binning] cut lists");
    label->callback([&] {
        status = guarded("label", [&] {
            const Dataset ds = load_dataset(label_in);
            auto fc = open_in(label_clusters);
            const Clustering c = read_clustering(fc);
            const auto profiles = profile_clusters(ds, c, binning_for(ds, binning_path));
            const auto labels = assign_labels(profiles);
            if (!profiles_path.empty()) {
                auto f = open_out(profiles_path);
                write_profiles_text(f, profiles, labels);
            }
            const Dataset labeled = apply_labels(ds, c, labels);
            if (out.empty()) serialize(std::cout, labeled);
            else save_dataset(out, labeled);
        });
    });

    // train
    auto* train = app.add_subcommand("train", "Mine rules and grow a tree for one target");
    std::string train_in, target = "field", train_binning;
    std::vector<std::string> model_features;
    MiningParams mp;
    TreeParams tp;
    train->add_option("input", train_in, "Labeled applicant CSV")->required();
    train->add_option("--target", target, "field | class | any categorical attribute")->capture_default_str();
    train->add_option("--features", model_features, "Model attributes (default: all but the target)")->delimiter(',');
    train->add_option("--binning", train_binning, "Binning file with [binning] cut lists");
    train->add_option("--min-support", mp.min_support)->capture_default_str();
    train->add_option("--min-confidence", mp.min_confidence)->capture_default_str();
    train->add_option("--max-lhs-len", mp.max_lhs_len)->capture_default_str();
    train->add_option("--max-depth", tp.max_depth)->capture_default_str();
    train->add_option("--min-leaf", tp.min_leaf)->capture_default_str();
    train->add_option("--min-gain", tp.min_gain)->capture_default_str();
    train->callback([&] {
        status = guarded("train", [&] {
            if (out.empty()) throw ValidationError("--out <directory> is required for train");
            const Dataset ds = load_dataset(train_in);
            const BinningSpec spec = binning_for(ds, train_binning);
            const CategoricalView view = discretize(ds, spec);
            const RuleSet rs = mine_rules(view, target, mp, model_features);
            const DecisionTree tree = train_tree(view, target, tp, model_features);
            fs::create_directories(out);
            auto write = [&](const std::string& name, auto&& body) {
                auto f = open_out((fs::path(out) / name).string());
                body(f);
            };
            write("binning.conf", [&](std::ostream& o) { write_binning(o, spec); });
            write("rules_" + target + ".csv", [&](std::ostream& o) { write_rules_csv(o, rs); });
            write("tree_" + target + ".json", [&](std::ostream& o) { write_tree_json(o, tree); });
            write("tree_" + target + ".txt", [&](std::ostream& o) { write_tree_text(o, tree); });
            std::cerr << rs.rules.size() << " rules, tree with " << tree.nodes.size() << " nodes\n";
        });
    });

    // predict
    auto* predict = app.add_subcommand("predict", "Apply a rule set or tree to a dataset");
    std::string pred_in, rules_path, tree_path, pred_binning;
    predict->add_option("input", pred_in, "Applicant CSV")->required();
    predict->add_option("--rules", rules_path, "Rules CSV");
    predict->add_option("--tree", tree_path, "Tree JSON");
    predict->add_option("--binning", pred_binning, "Binning file used at training time");
    predict->callback([&] {
        status = guarded("predict", [&] {
            if (rules_path.empty() == tree_path.empty()) throw ValidationError("give exactly one of --rules or --tree");
            const Dataset ds = load_dataset(pred_in);
            const CategoricalView view = discretize(ds, binning_for(ds, pred_binning));
            std::vector<Prediction> preds;
            if (!rules_path.empty()) {
                auto f = open_in(rules_path);
                preds = predict_rules(read_rules_csv(f), view);
            } else {
                auto f = open_in(tree_path);
                std::vector<std::string> notes;
                preds = predict_tree(read_tree_json(f), view, &notes);
                for (const auto& n : notes) std::cerr << n << "\n";
            }
            std::ofstream file;
            if (!out.empty()) file = open_out(out);
            std::ostream& o = out.empty() ? std::cout : file;
            csv::write_row(o, {"id", "prediction", "probability"});
            for (std::size_t i = 0; i < preds.size(); ++i) {
                csv::write_row(o, {view.ids[i], preds[i].value, csv::format_double(preds[i].probability)});
            }
        });
    });

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Legends, lift curves and model selection on a labeled dataset");
    std::string eval_in, eval_rules, eval_tree, eval_target = "field", eval_binning, target_value;
    evaluate->add_option("input", eval_in, "Labeled applicant CSV")->required();
    evaluate->add_option("--rules", eval_rules, "Rules CSV")->required();
    evaluate->add_option("--tree", eval_tree, "Tree JSON")->required();
    evaluate->add_option("--target", eval_target, "Target attribute")->capture_default_str();
    evaluate->add_option("--target-value", target_value, "Class tracked by the lift curve (default: most frequent)");
    evaluate->add_option("--binning", eval_binning, "Binning file used at training time");
    evaluate->callback([&] {
        status = guarded("evaluate", [&] {
            const Dataset ds = load_dataset(eval_in);
            const CategoricalView view = discretize(ds, binning_for(ds, eval_binning));
            const auto col = view.column(eval_target);
            if (!col) throw ValidationError("dataset has no attribute '" + eval_target + "'");
            std::vector<std::string> truths;
            std::map<std::string, std::size_t> counts;
            for (const auto& row : view.rows) {
                truths.push_back(row[*col]);
                ++counts[row[*col]];
            }
            if (target_value.empty()) {
                std::size_t best = 0;
                for (const auto& [v, n] : counts) {
                    if (n > best) {
                        best = n;
                        target_value = v;
                    }
                }
            }
            auto fr = open_in(eval_rules);
            auto ft = open_in(eval_tree);
            const auto rule_preds = predict_rules(read_rules_csv(fr), view);
            const auto tree_preds = predict_tree(read_tree_json(ft), view);
            const auto a = mining_legend(rule_preds, truths);
            const auto b = mining_legend(tree_preds, truths);
            write_legend_table(std::cout, {{"rules/" + eval_target, a}, {"tree/" + eval_target, b}});
            std::cout << "\n";
            write_comparison(std::cout, compare_models(a, b, "association rules", "decision tree"));
            if (!out.empty()) {
                fs::create_directories(out);
                for (const auto& [model, preds] : {std::pair{std::string("rules"), &rule_preds}, std::pair{std::string("tree"), &tree_preds}}) {
                    const auto curve = lift_curve(*preds, truths, target_value);
                    const std::string stem = (fs::path(out) / ("lift_" + model + "_" + eval_target)).string();
                    auto fc = open_out(stem + ".csv");
                    write_lift_csv(fc, curve);
                    auto fs_ = open_out(stem + ".svg");
                    write_lift_svg(fs_, curve, model + " model, target " + eval_target + " = " + target_value);
                }
            }
        });
    });

    // run
    auto* run = app.add_subcommand("run", "Run the whole pipeline from a config file");
    std::string config_path;
    run->add_option("config", config_path, "Pipeline config (keyed text)")->required();
    run->callback([&] {
        status = guarded("config", [&] {
            PipelineConfig cfg = PipelineConfig::load(config_path);
            if (run->get_parent()->get_option("--seed")->count()) cfg.seed = seed;
            if (!out.empty()) cfg.out = out;
            const RunReport report = run_pipeline(cfg);
            std::cout << report.summary;
        });
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    return status;
}
