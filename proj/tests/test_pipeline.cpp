#include "admit/error.hpp"
#include "admit/pipeline.hpp"
#include "admit/synth.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace admit;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("admit_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

PipelineConfig small_synthetic(const fs::path& out, std::size_t test_rows = 150) {
    PipelineConfig c;
    c.synthetic = SyntheticInputs{"default", 300, test_rows, 11, 12};
    c.model_features = {"gender", "grade", "age", "diploma", "employment", "job_relevancy", "class"};
    c.rules.min_support = 0.02;
    c.out = out.string();
    return c;
}

PipelineConfig parse_text(const std::string& text, const std::string& base = "") {
    std::istringstream in(text);
    return PipelineConfig::parse(KeyedConfig::parse(in), base);
}

}  // namespace

TEST_CASE("config parsing reads every section and resolves paths") {
    const auto c = parse_text(
        "[input]\ntrain = data/all.csv\nreference_year = 2010\n"
        "[cohorts]\ntrain = 2007\ntest = 2008\n"
        "[preprocess]\ncontinuous = drop\ncategorical = unknown\n"
        "[cluster]\nfeatures = age, grade\nmax_k = 6\nk = 3\n"
        "[binning]\ngrade = 12.7, 14.8, 16.3\n"
        "[models]\ntargets = field\nmin_support = 0.05\nmax_depth = 3\n"
        "[run]\nseed = 9\nout = results\n",
        "/base");
    CHECK(c.train_path == "/base/data/all.csv");
    CHECK(c.test_path.empty());
    CHECK(*c.reference_year == 2010);
    CHECK(c.train_cohort == 2007);
    CHECK(c.imputation.continuous == ContinuousPolicy::Drop);
    CHECK(c.imputation.categorical == CategoricalPolicy::Unknown);
    CHECK(c.cluster_features == std::vector<std::string>{"age", "grade"});
    CHECK(c.max_k == 6);
    CHECK(*c.fixed_k == 3);
    CHECK(c.bin_cuts.at("grade") == std::vector<double>{12.7, 14.8, 16.3});
    CHECK(c.targets == std::vector<std::string>{"field"});
    CHECK(c.rules.min_support == 0.05);
    CHECK(c.tree.max_depth == 3);
    CHECK(c.seed == 9);
    CHECK(c.out == "/base/results");
}

TEST_CASE("config errors are reported") {
    CHECK_THROWS_AS(parse_text("[run]\nseed = 1\n"), ValidationError);
    CHECK_THROWS_AS(parse_text("[input]\ntrain = a.csv\n[bogus]\nx = 1\n"), ValidationError);
    CHECK_THROWS_AS(parse_text("[input]\ntrain = a.csv\ntypo = 1\n"), ValidationError);
    CHECK_THROWS_AS(parse_text("[input]\ntrain = a.csv\n[cohorts]\ntrain = 2008\ntest = 2008\n"), ValidationError);
    CHECK_THROWS_AS(parse_text("[input]\ntrain = a.csv\n[models]\ntargets = grade\n"), ValidationError);
    CHECK_THROWS_AS(parse_text("[input]\ntrain = a.csv\n[cluster]\nfeatures = height\n"), ValidationError);
    CHECK_NOTHROW(PipelineConfig::load(std::string(ADMIT_SOURCE_DIR) + "/config/synthetic_run.conf"));
}

TEST_CASE("a synthetic run writes its artifacts and keeps the test cohort sealed until evaluate") {
    const auto dir = scratch("run");
    const auto report = run_pipeline(small_synthetic(dir));
    CHECK(report.train_rows == 300);
    CHECK(report.test_rows == 150);
    CHECK(report.k >= 1);
    std::size_t total = 0;
    for (auto s : report.cluster_sizes) total += s;
    CHECK(total == 300);
    CHECK(report.labels.size() == report.k);
    CHECK(report.results.size() == 4);
    CHECK(report.selection.size() == 2);
    for (const auto& r : report.results) {
        CHECK(r.legend.population_correct >= 0.0);
        CHECK(r.legend.population_correct <= 1.0);
    }
    for (const char* f : {"summary.txt", "access.log", "assignments.csv", "profiles.txt", "rules_field.csv",
                          "rules_class.csv", "tree_class.json", "lift_rules_class.svg", "legend.txt", "selection.txt",
                          "test_labeled.csv"}) {
        CHECK_MESSAGE(fs::exists(dir / f), f);
    }
    CHECK_FALSE(fs::exists(dir / "INCOMPLETE"));

    const auto& log = report.access_log;
    const auto requested = std::find(log.begin(), log.end(), "evaluate: test cohort requested");
    REQUIRE(requested != log.end());
    CHECK(std::count_if(log.begin(), log.end(),
                        [](const std::string& s) { return s.find("test cohort requested") != std::string::npos; }) == 1);
    const auto train_start = std::find(log.begin(), log.end(), "train: start");
    const auto eval_start = std::find(log.begin(), log.end(), "evaluate: start");
    CHECK(train_start < eval_start);
    CHECK(eval_start < requested);
}

TEST_CASE("the same config gives byte-identical outputs") {
    const auto a = scratch("det_a");
    const auto b = scratch("det_b");
    run_pipeline(small_synthetic(a));
    run_pipeline(small_synthetic(b));
    for (const char* f : {"summary.txt", "rules_field.csv", "rules_class.csv", "tree_class.json", "assignments.csv",
                          "legend.txt"}) {
        CHECK_MESSAGE(slurp(a / f) == slurp(b / f), f);
    }
}

TEST_CASE("an empty test cohort fails in evaluate and leaves a marker") {
    const auto dir = scratch("empty");
    try {
        run_pipeline(small_synthetic(dir, 0));
        FAIL("run should have failed");
    } catch (const StageError& e) {
        CHECK(e.stage() == "evaluate");
    }
    REQUIRE(fs::exists(dir / "INCOMPLETE"));
    CHECK(slurp(dir / "INCOMPLETE").find("evaluate") != std::string::npos);
    CHECK(fs::exists(dir / "rules_class.csv"));
}

TEST_CASE("a run from one file holding both cohorts") {
    const auto dir = scratch("file");
    Dataset both = generate_cohort(default_mixture(), 250, 3, 2008).data;
    for (auto& r : generate_cohort(default_mixture(), 120, 4, 2009).data.rows) {
        r.id = "T" + r.id;
        both.rows.push_back(r);
    }
    save_dataset((dir / "all.csv").string(), both);
    {
        std::ofstream conf(dir / "run.conf");
        conf << "[input]\ntrain = all.csv\n[cluster]\nk = 3\n[models]\nmin_support = 0.02\n[run]\nout = result\n";
    }
    const auto report = run_pipeline(PipelineConfig::load((dir / "run.conf").string()));
    CHECK(report.train_rows == 250);
    CHECK(report.test_rows == 120);
    CHECK(report.k == 3);
    CHECK(fs::exists(dir / "result" / "summary.txt"));
    CHECK_FALSE(fs::exists(dir / "result" / "train_input.csv"));
}
