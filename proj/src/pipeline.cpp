#include "admit/pipeline.hpp"

#include "admit/clustsim.hpp"
#include "admit/csv.hpp"
#include "admit/error.hpp"
#include "admit/synth.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace admit {

BinningSpec apply_binning_overrides(const KeyedConfig::Section& section, BinningSpec base) {
    for (const auto& [key, value] : section.entries) {
        auto it = std::find_if(base.attributes.begin(), base.attributes.end(),
                               [&](const AttributeBins& b) { return b.attribute == key; });
        if (it == base.attributes.end()) throw ValidationError("no bins for attribute '" + key + "'");
        it->cuts.clear();
        it->labels.clear();
        for (const auto& cell : csv::split(value, ',')) {
            const auto v = csv::parse_double(cell);
            if (!v) throw ValidationError("bad cut '" + cell + "' for " + key);
            it->cuts.push_back(*v);
        }
    }
    base.validate();
    return base;
}

void write_binning(std::ostream& out, const BinningSpec& spec) {
    out << "[binning]\n";
    for (const auto& b : spec.attributes) {
        out << b.attribute << " =";
        for (std::size_t i = 0; i < b.cuts.size(); ++i) out << (i ? ", " : " ") << csv::format_double(b.cuts[i]);
        out << "\n";
    }
}

namespace {

std::vector<std::string> list_of(const std::string& text) {
    std::vector<std::string> out;
    for (const auto& cell : csv::split(text, ',')) {
        const auto v = csv::trim(cell);
        if (!v.empty()) out.emplace_back(v);
    }
    return out;
}

void check_keys(const KeyedConfig::Section& s, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : s.entries) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            throw ValidationError("config line " + std::to_string(s.line) + ": unknown key '" + key + "' in [" +
                                  s.name + "]");
        }
    }
}

std::size_t count_of(const KeyedConfig::Section& s, const std::string& key, std::size_t fallback) {
    const long long v = s.get_int(key, static_cast<long long>(fallback));
    if (v < 0) throw ValidationError("[" + s.name + "] " + key + " must be non-negative");
    return static_cast<std::size_t>(v);
}

std::string resolve(const std::string& base, const std::string& path) {
    if (path.empty() || base.empty() || fs::path(path).is_absolute()) return path;
    return (fs::path(base) / path).lexically_normal().string();
}

}  // namespace

PipelineConfig PipelineConfig::parse(const KeyedConfig& cfg, const std::string& base_dir) {
    static const std::set<std::string> kSections = {"input", "synthetic", "cohorts", "preprocess", "cluster",
                                                    "binning", "models", "run"};
    for (const auto& s : cfg.sections()) {
        if (s.name.empty() && s.entries.empty()) continue;
        if (!kSections.count(s.name)) throw ValidationError("config line " + std::to_string(s.line) + ": unknown section [" + s.name + "]");
    }

    PipelineConfig c;
    const auto& input = cfg.section("input");
    check_keys(input, {"train", "test", "reference_year"});
    c.train_path = resolve(base_dir, input.get("train").value_or(""));
    c.test_path = resolve(base_dir, input.get("test").value_or(""));
    if (const auto y = input.get("reference_year")) {
        const auto v = csv::parse_int(*y);
        if (!v) throw ValidationError("bad reference_year '" + *y + "'");
        c.reference_year = static_cast<int>(*v);
    }

    if (!cfg.all("synthetic").empty()) {
        const auto& s = cfg.section("synthetic");
        check_keys(s, {"mixture", "train_rows", "test_rows", "train_seed", "test_seed"});
        SyntheticInputs syn;
        syn.mixture = s.get("mixture").value_or("default");
        if (syn.mixture != "default") syn.mixture = resolve(base_dir, syn.mixture);
        syn.train_rows = count_of(s, "train_rows", syn.train_rows);
        syn.test_rows = count_of(s, "test_rows", syn.test_rows);
        syn.train_seed = count_of(s, "train_seed", syn.train_seed);
        syn.test_seed = count_of(s, "test_seed", syn.test_seed);
        c.synthetic = syn;
    }

    const auto& cohorts = cfg.section("cohorts");
    check_keys(cohorts, {"train", "test"});
    c.train_cohort = static_cast<int>(cohorts.get_int("train", c.train_cohort));
    c.test_cohort = static_cast<int>(cohorts.get_int("test", c.test_cohort));

    const auto& pre = cfg.section("preprocess");
    check_keys(pre, {"continuous", "categorical"});
    c.imputation = parse_policy(pre.get("continuous").value_or("median"), pre.get("categorical").value_or("mode"));

    const auto& cl = cfg.section("cluster");
    check_keys(cl, {"features", "max_k", "k", "bic_ratio_threshold", "distance_ratio_threshold", "kmeans_max_iter",
                    "label_key", "label_prefix"});
    if (const auto f = cl.get("features")) c.cluster_features = list_of(*f);
    c.max_k = count_of(cl, "max_k", c.max_k);
    if (const auto k = cl.get("k"); k && !csv::trim(*k).empty()) c.fixed_k = count_of(cl, "k", 0);
    c.auto_k.bic_ratio_threshold = cl.get_double("bic_ratio_threshold", c.auto_k.bic_ratio_threshold);
    c.auto_k.distance_ratio_threshold = cl.get_double("distance_ratio_threshold", c.auto_k.distance_ratio_threshold);
    c.kmeans_max_iter = count_of(cl, "kmeans_max_iter", c.kmeans_max_iter);
    c.labels.key_attribute = cl.get("label_key").value_or(c.labels.key_attribute);
    c.labels.prefix = cl.get("label_prefix").value_or(c.labels.prefix);

    for (const auto& [key, value] : cfg.section("binning").entries) {
        std::vector<double> cuts;
        for (const auto& cell : list_of(value)) {
            const auto v = csv::parse_double(cell);
            if (!v) throw ValidationError("bad cut '" + cell + "' for " + key);
            cuts.push_back(*v);
        }
        c.bin_cuts[key] = std::move(cuts);
    }

    const auto& m = cfg.section("models");
    check_keys(m, {"features", "targets", "min_support", "min_confidence", "max_lhs_len", "max_depth", "min_leaf",
                   "min_gain"});
    if (const auto f = m.get("features")) c.model_features = list_of(*f);
    if (const auto t = m.get("targets")) c.targets = list_of(*t);
    c.rules.min_support = m.get_double("min_support", c.rules.min_support);
    c.rules.min_confidence = m.get_double("min_confidence", c.rules.min_confidence);
    c.rules.max_lhs_len = count_of(m, "max_lhs_len", c.rules.max_lhs_len);
    c.tree.max_depth = count_of(m, "max_depth", c.tree.max_depth);
    c.tree.min_leaf = count_of(m, "min_leaf", c.tree.min_leaf);
    c.tree.min_gain = m.get_double("min_gain", c.tree.min_gain);

    const auto& run = cfg.section("run");
    check_keys(run, {"seed", "out"});
    c.seed = count_of(run, "seed", c.seed);
    c.out = resolve(base_dir, run.get("out").value_or(c.out));

    c.validate();
    return c;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
    return parse(KeyedConfig::load(path), fs::path(path).parent_path().string());
}

void PipelineConfig::validate() const {
    if (!synthetic && train_path.empty()) throw ValidationError("config needs [input] train or a [synthetic] section");
    if (train_cohort == test_cohort) throw ValidationError("train and test cohort years must differ");
    if (cluster_features.empty()) throw ValidationError("no clustering features");
    for (const auto& f : cluster_features) {
        if (!is_attribute(f)) throw ValidationError("unknown clustering feature '" + f + "'");
    }
    for (const auto& f : model_features) {
        if (!is_attribute(f) && f != "class") throw ValidationError("unknown model feature '" + f + "'");
    }
    if (targets.empty()) throw ValidationError("no model targets");
    for (const auto& t : targets) {
        if (t != "class" && (!is_attribute(t) || is_continuous(t))) {
            throw ValidationError("target '" + t + "' is not a categorical attribute");
        }
    }
    if (!is_continuous(labels.key_attribute)) throw ValidationError("label key must be a continuous attribute");
    if (max_k < 1) throw ValidationError("max_k must be at least 1");
    if (fixed_k && *fixed_k < 1) throw ValidationError("k must be at least 1");
    for (const auto& [attr, cuts] : bin_cuts) {
        if (!is_continuous(attr)) throw ValidationError("binning for non-continuous attribute '" + attr + "'");
    }
    rules.validate();
    tree.validate();
}

namespace {

// Test rows stay behind this gate until the evaluate stage asks for them.
class SealedCohort {
public:
    SealedCohort(std::function<Dataset()> load, std::vector<std::string>& log) : load_(std::move(load)), log_(log) {}

    Dataset open(const std::string& stage) {
        log_.push_back(stage + ": test cohort requested");
        if (stage != "evaluate") throw std::logic_error("test cohort requested in stage '" + stage + "'");
        return load_();
    }

private:
    std::function<Dataset()> load_;
    std::vector<std::string>& log_;
};

Dataset keep_year(Dataset ds, int year) {
    const std::size_t before = ds.size();
    std::erase_if(ds.rows, [&](const CandidateRecord& r) { return r.cohort_year != year; });
    ds.provenance.log.push_back("kept " + std::to_string(ds.size()) + " of " + std::to_string(before) +
                                " rows with cohort_year " + std::to_string(year));
    return ds;
}

const Mixture& mixture_for(const SyntheticInputs& syn, std::optional<Mixture>& holder) {
    if (syn.mixture == "default") return default_mixture();
    if (!holder) holder = load_mixture(syn.mixture);
    return *holder;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    body(out);
    if (!out) throw Error("write failed for " + path.string());
}

// Recounts every mined rule against the training view.
void verify_rules(const RuleSet& rs, const CategoricalView& view) {
    for (const auto& r : rs.rules) {
        if (!r.counts) continue;
        std::size_t lhs = 0;
        std::size_t joint = 0;
        const auto target = view.column(r.target);
        for (std::size_t i = 0; i < view.size(); ++i) {
            if (!r.matches(record_at(view, i))) continue;
            ++lhs;
            if (view.rows[i][*target] == r.rhs) ++joint;
        }
        if (lhs != r.counts->lhs || joint != r.counts->joint || view.size() != r.counts->total) {
            throw std::logic_error("rule '" + r.lhs_text() + " => " + r.rhs + "' does not recount");
        }
    }
}

std::string majority_value(const std::vector<std::string>& values) {
    std::map<std::string, std::size_t> counts;
    for (const auto& v : values) ++counts[v];
    std::string best;
    std::size_t n = 0;
    for (const auto& [v, c] : counts) {
        if (c > n) {
            n = c;
            best = v;
        }
    }
    return best;
}

std::string join(const std::vector<std::string>& items) {
    std::string s;
    for (const auto& i : items) s += (s.empty() ? "" : ", ") + i;
    return s;
}

}  // namespace

RunReport run_pipeline(const PipelineConfig& cfg) {
    cfg.validate();
    const fs::path out_dir(cfg.out);
    fs::create_directories(out_dir);
    fs::remove(out_dir / "INCOMPLETE");

    RunReport report;
    std::ostringstream summary;
    std::vector<std::string> notes;
    std::optional<Mixture> mixture_holder;

    auto stage = [&](const std::string& name, const std::function<void()>& body) {
        report.access_log.push_back(name + ": start");
        try {
            body();
        } catch (const std::exception& e) {
            write_file(out_dir / "INCOMPLETE", [&](std::ostream& o) { o << "stage " << name << " failed: " << e.what() << "\n"; });
            throw StageError(name, e.what());
        }
    };

    SealedCohort test_cohort(
        [&]() {
            if (cfg.synthetic) {
                const auto& mix = mixture_for(*cfg.synthetic, mixture_holder);
                auto cohort = generate_cohort(mix, cfg.synthetic->test_rows, cfg.synthetic->test_seed, cfg.test_cohort);
                save_dataset((out_dir / "test_input.csv").string(), cohort.data);
                return std::move(cohort.data);
            }
            const std::string path = cfg.test_path.empty() ? cfg.train_path : cfg.test_path;
            return keep_year(load_dataset(path, cfg.reference_year), cfg.test_cohort);
        },
        report.access_log);

    Dataset train;
    std::vector<std::size_t> truth;
    std::size_t train_rejected = 0;
    stage("ingest", [&] {
        Dataset raw;
        if (cfg.synthetic) {
            const auto& mix = mixture_for(*cfg.synthetic, mixture_holder);
            auto cohort = generate_cohort(mix, cfg.synthetic->train_rows, cfg.synthetic->train_seed, cfg.train_cohort);
            save_dataset((out_dir / "train_input.csv").string(), cohort.data);
            raw = std::move(cohort.data);
            truth = std::move(cohort.component);
        } else {
            raw = keep_year(load_dataset(cfg.train_path, cfg.reference_year), cfg.train_cohort);
        }
        train_rejected = raw.provenance.rejected.size();
        train = preprocess(raw, cfg.imputation);
        if (train.empty()) throw ValidationError("train cohort " + std::to_string(cfg.train_cohort) + " has no rows");
        if (!truth.empty() && train.size() != truth.size()) truth.clear();
        report.train_rows = train.size();
        report.access_log.push_back("ingest: train cohort " + std::to_string(cfg.train_cohort) + " loaded, " +
                                    std::to_string(train.size()) + " rows");
    });

    BinningSpec binning;
    MixedTable table;
    KMeansResult km;
    TwoStepResult ts;
    stage("cluster", [&] {
        binning = default_binning(train);
        for (auto& b : binning.attributes) {
            const auto it = cfg.bin_cuts.find(b.attribute);
            if (it == cfg.bin_cuts.end()) continue;
            b.cuts = it->second;
            b.labels.clear();
        }
        binning.validate();

        table = make_table(train, cfg.cluster_features);
        TwoStepOptions opt;
        opt.max_k = cfg.max_k;
        opt.auto_k = cfg.auto_k;
        opt.agglomerate.seed = cfg.seed;
        ts = twostep(table, opt);
        report.auto_k = ts.chosen_k;
        report.k = cfg.fixed_k.value_or(ts.chosen_k);

        KMeansOptions ko;
        ko.k = report.k;
        ko.seed = cfg.seed;
        ko.max_iter = cfg.kmeans_max_iter;
        km = kmeans(table, ko);
        check_consistent(km.clustering, table);
        const auto& hist = km.objective_history;
        for (std::size_t i = 1; i < hist.size(); ++i) {
            if (hist[i] > hist[i - 1] * (1 + 1e-12) + 1e-12) throw std::logic_error("k-means objective increased");
        }
        report.cluster_sizes = km.clustering.sizes();
        std::size_t total = 0;
        for (auto s : report.cluster_sizes) total += s;
        if (total != train.size()) throw std::logic_error("cluster sizes do not sum to the row count");
        for (const auto& e : km.events) notes.push_back("k-means: " + e);
        for (const auto& n : ts.trace.notes) notes.push_back("twostep: " + n);
        for (const auto& d : ts.dropped_constant) notes.push_back("twostep: dropped constant column " + d);

        write_file(out_dir / "assignments.csv", [&](std::ostream& o) { write_clustering(o, km.clustering); });
        write_file(out_dir / "twostep_assignments.csv", [&](std::ostream& o) { write_clustering(o, ts.clustering); });
        write_file(out_dir / "merge_trace.csv", [&](std::ostream& o) { write_trace(o, ts.trace, cfg.max_k); });
        write_file(out_dir / "binning.conf", [&](std::ostream& o) { write_binning(o, binning); });
    });

    Dataset labeled;
    std::vector<ClusterProfile> profiles;
    stage("label", [&] {
        std::vector<std::string> warnings;
        profiles = profile_clusters(train, km.clustering, binning, &warnings);
        for (const auto& w : warnings) notes.push_back("profile: " + w);
        report.labels = assign_labels(profiles, cfg.labels);
        labeled = apply_labels(train, km.clustering, report.labels);
        write_file(out_dir / "profiles.txt", [&](std::ostream& o) { write_profiles_text(o, profiles, report.labels); });
        write_file(out_dir / "profiles.csv", [&](std::ostream& o) { write_profiles_csv(o, profiles, report.labels); });
        save_dataset((out_dir / "train_labeled.csv").string(), labeled);
    });

    CategoricalView train_view;
    std::map<std::string, RuleSet> rule_sets;
    std::map<std::string, DecisionTree> trees;
    auto features_for = [&](const std::string& target) {
        std::vector<std::string> f;
        for (const auto& a : cfg.model_features) {
            if (a != target) f.push_back(a);
        }
        return f;
    };
    stage("train", [&] {
        train_view = discretize(labeled, binning);
        for (const auto& target : cfg.targets) {
            const auto features = features_for(target);
            auto rs = mine_rules(train_view, target, cfg.rules, features);
            verify_rules(rs, train_view);
            auto tree = train_tree(train_view, target, cfg.tree, features);
            write_file(out_dir / ("rules_" + target + ".csv"), [&](std::ostream& o) { write_rules_csv(o, rs); });
            write_file(out_dir / ("tree_" + target + ".txt"), [&](std::ostream& o) { write_tree_text(o, tree); });
            write_file(out_dir / ("tree_" + target + ".json"), [&](std::ostream& o) { write_tree_json(o, tree); });
            write_file(out_dir / ("tree_rules_" + target + ".csv"),
                       [&](std::ostream& o) { write_rules_csv(o, extract_tree_rules(tree)); });
            rule_sets.emplace(target, std::move(rs));
            trees.emplace(target, std::move(tree));
        }
    });

    std::size_t unseen_routes = 0;
    stage("evaluate", [&] {
        const Dataset raw = test_cohort.open("evaluate");
        if (raw.empty()) throw ValidationError("test cohort " + std::to_string(cfg.test_cohort) + " is empty");
        Dataset test = preprocess(raw, cfg.imputation);
        if (test.empty()) throw ValidationError("test cohort " + std::to_string(cfg.test_cohort) + " has no usable rows");
        report.test_rows = test.size();

        // Status classes for the test rows come from the nearest train center.
        const MixedTable test_table = make_table(test, cfg.cluster_features, &table);
        std::vector<std::size_t> assign(test.size());
        for (std::size_t i = 0; i < test.size(); ++i) assign[i] = km.nearest_center(test_table, i);
        const Clustering test_clusters = make_clustering(assign, km.clustering.k, test_table.ids);
        const Dataset test_labeled = apply_labels(test, test_clusters, report.labels);
        write_file(out_dir / "test_assignments.csv", [&](std::ostream& o) { write_clustering(o, test_clusters); });
        save_dataset((out_dir / "test_labeled.csv").string(), test_labeled);

        const CategoricalView test_view = discretize(test_labeled, binning);
        std::vector<std::pair<std::string, MiningLegend>> legend_rows;
        for (const auto& target : cfg.targets) {
            const auto col = *test_view.column(target);
            std::vector<std::string> truths;
            for (const auto& row : test_view.rows) truths.push_back(row[col]);
            const std::string target_value = majority_value(truths);

            std::vector<std::string> route_notes;
            const std::vector<std::pair<std::string, std::vector<Prediction>>> runs = {
                {"rules", predict_rules(rule_sets.at(target), test_view)},
                {"tree", predict_tree(trees.at(target), test_view, &route_notes)},
            };
            unseen_routes += route_notes.size();
            std::map<std::string, MiningLegend> by_model;
            for (const auto& [model, preds] : runs) {
                const auto legend = mining_legend(preds, truths);
                const auto curve = lift_curve(preds, truths, target_value);
                const std::string stem = "lift_" + model + "_" + target;
                write_file(out_dir / (stem + ".csv"), [&](std::ostream& o) { write_lift_csv(o, curve); });
                write_file(out_dir / (stem + ".svg"), [&](std::ostream& o) {
                    write_lift_svg(o, curve, model + " model, target " + target + " = " + target_value);
                });
                report.results.push_back(ModelResult{model, target, target_value, legend});
                legend_rows.emplace_back(model + "/" + target, legend);
                by_model[model] = legend;
            }
            report.selection.emplace(target, compare_models(by_model.at("rules"), by_model.at("tree"),
                                                            "association rules", "decision tree"));
        }
        write_file(out_dir / "legend.txt", [&](std::ostream& o) { write_legend_table(o, legend_rows); });
        write_file(out_dir / "selection.txt", [&](std::ostream& o) {
            for (const auto& [target, cmp] : report.selection) {
                o << "target " << target << "\n";
                write_comparison(o, cmp);
                o << "\n";
            }
        });
    });

    stage("report", [&] {
        summary << "admission pipeline summary\n\n";
        summary << "train cohort " << cfg.train_cohort << ": " << report.train_rows << " rows";
        if (train_rejected) summary << " (" << train_rejected << " rejected at ingest)";
        summary << "\ntest cohort " << cfg.test_cohort << ": " << report.test_rows << " rows\n";
        if (cfg.synthetic) {
            summary << "inputs: synthetic mixture " << cfg.synthetic->mixture << ", seeds " << cfg.synthetic->train_seed
                    << " / " << cfg.synthetic->test_seed << "\n";
        }
        summary << "seed: " << cfg.seed << "\n\n";

        summary << "clustering features: " << join(cfg.cluster_features) << "\n";
        summary << "twostep chosen k: " << report.auto_k << " (max_k " << cfg.max_k << ")\n";
        summary << "k used: " << report.k << (cfg.fixed_k ? " (fixed in config)" : "") << "\n";
        summary << "k-means: " << km.iterations << " iterations, objective " << csv::format_fixed(km.objective(), 6)
                << (km.converged ? "" : ", not converged") << "\n";
        if (!truth.empty()) {
            const std::size_t truth_k = *std::max_element(truth.begin(), truth.end()) + 1;
            const auto rand = rand_index(km.clustering, make_clustering(truth, truth_k, km.clustering.ids));
            summary << "rand index vs mixture components: " << csv::format_fixed(rand, 4) << "\n";
        }
        summary << "\nclasses (ordered by mean " << cfg.labels.key_attribute << "):\n";
        for (const auto& p : profiles) {
            const auto& label = report.labels.at(p.cluster);
            summary << "  " << label.name << ": cluster " << p.cluster << ", " << p.size << " rows, mean "
                    << cfg.labels.key_attribute << " " << csv::format_fixed(p.continuous.at(cfg.labels.key_attribute).mean, 2)
                    << "\n";
        }
        summary << "\nbinning:\n";
        for (const auto& b : binning.attributes) {
            std::vector<std::string> labels;
            for (std::size_t i = 0; i < b.bin_count(); ++i) labels.push_back(b.label(i));
            summary << "  " << b.attribute << ": " << join(labels) << "\n";
        }
        summary << "\nmodels (min_support " << csv::format_double(cfg.rules.min_support) << ", min_confidence "
                << csv::format_double(cfg.rules.min_confidence) << ", max_lhs_len " << cfg.rules.max_lhs_len
                << "; tree max_depth " << cfg.tree.max_depth << ", min_leaf " << cfg.tree.min_leaf << "):\n";
        for (const auto& target : cfg.targets) {
            std::size_t leaves = 0;
            for (const auto& n : trees.at(target).nodes) leaves += n.split ? 0 : 1;
            summary << "  " << target << ": " << rule_sets.at(target).rules.size() << " rules, tree with "
                    << trees.at(target).nodes.size() << " nodes / " << leaves << " leaves\n";
        }
        summary << "\nevaluation on the test cohort:\n";
        for (const auto& r : report.results) {
            summary << "  " << r.model << "/" << r.target << ": population correct "
                    << csv::format_fixed(r.legend.population_correct, 4) << ", predict probability "
                    << csv::format_fixed(r.legend.mean_predict_probability, 4) << ", score "
                    << csv::format_fixed(r.legend.score, 4) << " (lift target " << r.target_value << ")\n";
        }
        summary << "\nselected model per target:\n";
        for (const auto& [target, cmp] : report.selection) {
            summary << "  " << target << ": " << cmp.selected() << (cmp.tie ? " (tie)" : "") << ", margin "
                    << csv::format_fixed(cmp.margin, 4) << "\n";
        }
        if (unseen_routes) notes.push_back("tree: " + std::to_string(unseen_routes) + " test values unseen in training");
        notes.push_back("test status classes assigned by nearest train k-means center");
        summary << "\nnotes:\n";
        for (const auto& n : notes) summary << "  " << n << "\n";
        summary << "\ndata access:\n";
        for (const auto& a : report.access_log) summary << "  " << a << "\n";

        report.summary = summary.str();
        write_file(out_dir / "summary.txt", [&](std::ostream& o) { o << report.summary; });
        write_file(out_dir / "access.log", [&](std::ostream& o) {
            for (const auto& a : report.access_log) o << a << "\n";
        });
    });
    return report;
}

}  // namespace admit
