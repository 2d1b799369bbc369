#include "admit/error.hpp"
#include "admit/profile.hpp"
#include "admit/synth.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace admit;

namespace {

CandidateRecord person(std::string id, int age, Gender g = Gender::Female, double grade = 14.0) {
    CandidateRecord r;
    r.id = std::move(id);
    r.gender = g;
    r.grade = grade;
    r.age = age;
    r.diploma = "Bachelor";
    r.employment = Employment::Unemployed;
    r.job_relevancy = JobRelevancy::Unemployed;
    r.field_group = "IT";
    r.field = "Software";
    r.cohort_year = 2008;
    return r;
}

Dataset of(std::vector<CandidateRecord> rows) {
    Dataset ds;
    ds.rows = std::move(rows);
    return ds;
}

std::vector<std::string> ids_of(const Dataset& ds) {
    std::vector<std::string> ids;
    for (const auto& r : ds.rows) ids.push_back(r.id);
    return ids;
}

}  // namespace

TEST_CASE("a singleton cluster profiles to its own values") {
    const auto ds = of({person("a", 30, Gender::Male, 16.5)});
    const auto profiles = profile_clusters(ds, make_clustering({0}, 1, ids_of(ds)), default_binning(ds));
    REQUIRE(profiles.size() == 1);
    const auto& p = profiles[0];
    CHECK(p.size == 1);
    CHECK(p.continuous.at("age").mean == 30.0);
    CHECK(p.continuous.at("grade").mean == 16.5);
    CHECK(p.categorical.at("gender").at("M") == 1.0);
    for (const auto& [label, prop] : p.continuous.at("age").bands) CHECK((prop == 0.0 || prop == 1.0));
}

TEST_CASE("proportions sum to one and cover every level in the dataset") {
    const auto cohort = generate_cohort(default_mixture(), 900, 3, 2008);
    const auto c = make_clustering(cohort.component, 3, ids_of(cohort.data));
    const auto profiles = profile_clusters(cohort.data, c, default_binning(cohort.data));
    REQUIRE(profiles.size() == 3);
    std::size_t total = 0;
    for (const auto& p : profiles) {
        total += p.size;
        for (const auto& [attr, dist] : p.categorical) {
            double s = 0;
            for (const auto& [lv, prop] : dist) s += prop;
            CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(dist.size() == profiles[0].categorical.at(attr).size());
        }
        for (const auto& [attr, cont] : p.continuous) {
            double s = 0;
            for (const auto& [lv, prop] : cont.bands) s += prop;
            CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    CHECK(total == 900);
}

TEST_CASE("profiles of the generating components recover the age band share") {
    const auto cohort = generate_cohort(default_mixture(), 3000, 2, 2008);
    const auto bins = default_binning(cohort.data);
    const auto profiles = profile_clusters(cohort.data, make_clustering(cohort.component, 3, ids_of(cohort.data)), bins);
    const auto* age = bins.find("age");
    REQUIRE(age);
    const std::string band = age->label(*age->bin_of(25));
    double share = -1;
    for (const auto& [label, prop] : profiles[0].continuous.at("age").bands) {
        if (label == band) share = prop;
    }
    CHECK(std::abs(share - 0.72) <= 0.05);
}

TEST_CASE("labels follow ascending mean age") {
    const auto ds = of({person("a", 40), person("b", 22), person("c", 28), person("d", 41)});
    const auto c = make_clustering({0, 1, 2, 0}, 3, ids_of(ds));
    const auto labels = assign_labels(profile_clusters(ds, c, default_binning(ds)));
    CHECK(labels.at(1).name == "Class-1");
    CHECK(labels.at(2).name == "Class-2");
    CHECK(labels.at(0).name == "Class-3");

    const auto labeled = apply_labels(ds, c, labels);
    CHECK(*labeled.rows[0].class_label == "Class-3");
    CHECK(*labeled.rows[3].class_label == "Class-3");
    CHECK(*labeled.rows[1].class_label == "Class-1");
}

TEST_CASE("ties on mean age go to the larger cluster, then the lower id") {
    const auto ds = of({person("a", 30), person("b", 30), person("c", 30), person("d", 30)});
    auto labels = assign_labels(profile_clusters(ds, make_clustering({0, 1, 1, 2}, 3, ids_of(ds)), default_binning(ds)));
    CHECK(labels.at(1).name == "Class-1");
    CHECK(labels.at(0).name == "Class-2");
    CHECK(labels.at(2).name == "Class-3");
}

TEST_CASE("one cluster gets one label") {
    const auto ds = of({person("a", 20), person("b", 50)});
    const auto labels = assign_labels(profile_clusters(ds, make_clustering({0, 0}, 1, ids_of(ds)), default_binning(ds)));
    REQUIRE(labels.size() == 1);
    CHECK(labels.at(0).name == "Class-1");
}

TEST_CASE("renumbering clusters does not change the labeling of rows") {
    const auto cohort = generate_cohort(default_mixture(), 300, 8, 2008);
    std::vector<std::size_t> swapped;
    for (auto k : cohort.component) swapped.push_back((k + 1) % 3);
    const auto bins = default_binning(cohort.data);
    const auto c1 = make_clustering(cohort.component, 3, ids_of(cohort.data));
    const auto c2 = make_clustering(swapped, 3, ids_of(cohort.data));
    const auto l1 = apply_labels(cohort.data, c1, assign_labels(profile_clusters(cohort.data, c1, bins)));
    const auto l2 = apply_labels(cohort.data, c2, assign_labels(profile_clusters(cohort.data, c2, bins)));
    for (std::size_t i = 0; i < l1.size(); ++i) CHECK(l1.rows[i].class_label == l2.rows[i].class_label);
}

TEST_CASE("size-weighted profiles reproduce the dataset marginals") {
    const auto cohort = generate_cohort(default_mixture(), 500, 4, 2008);
    const auto profiles = profile_clusters(cohort.data, make_clustering(cohort.component, 3, ids_of(cohort.data)), default_binning(cohort.data));
    double female = 0, age = 0;
    for (const auto& p : profiles) {
        female += p.categorical.at("gender").at("F") * static_cast<double>(p.size);
        age += p.continuous.at("age").mean * static_cast<double>(p.size);
    }
    double f_direct = 0, a_direct = 0;
    for (const auto& r : cohort.data.rows) {
        f_direct += *r.gender == Gender::Female;
        a_direct += *r.age;
    }
    CHECK(female == doctest::Approx(f_direct).epsilon(1e-9));
    CHECK(age == doctest::Approx(a_direct).epsilon(1e-9));
}

TEST_CASE("empty clusters are skipped with a warning") {
    const auto ds = of({person("a", 20), person("b", 50)});
    std::vector<std::string> warnings;
    const auto profiles = profile_clusters(ds, make_clustering({0, 2}, 3, ids_of(ds)), default_binning(ds), &warnings);
    CHECK(profiles.size() == 2);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("cluster 1") != std::string::npos);
}

TEST_CASE("profiling refuses a clustering of other rows") {
    const auto ds = of({person("a", 20), person("b", 50)});
    CHECK_THROWS_AS(profile_clusters(ds, make_clustering({0}, 1), default_binning(ds)), ValidationError);
    CHECK_THROWS_AS(profile_clusters(ds, make_clustering({0, 0}, 1, {"a", "x"}), default_binning(ds)), ValidationError);
    CHECK_NOTHROW(profile_clusters(ds, make_clustering({0, 0}, 1, ids_of(ds)), default_binning(ds)));
}

TEST_CASE("profile writers emit every cluster") {
    const auto ds = of({person("a", 20), person("b", 50)});
    const auto c = make_clustering({0, 1}, 2, ids_of(ds));
    const auto profiles = profile_clusters(ds, c, default_binning(ds));
    const auto labels = assign_labels(profiles);
    std::ostringstream text, csv;
    write_profiles_text(text, profiles, labels);
    write_profiles_csv(csv, profiles, labels);
    CHECK(text.str().find("Class-2") != std::string::npos);
    CHECK(csv.str().rfind("cluster,label,size,attribute,statistic,value\n", 0) == 0);
}
