#include "admit/csv.hpp"
#include "admit/error.hpp"
#include "admit/ingest.hpp"
#include "admit/keyed_config.hpp"
#include "admit/rng.hpp"

#include <doctest.h>

#include <map>
#include <sstream>

using namespace admit;

namespace {

const char* kHeader = "id,gender,grade,age,diploma,employment,job_relevancy,field_group,field,cohort_year\n";

Dataset parse(const std::string& body, std::optional<int> ref = std::nullopt) {
    std::istringstream in(body);
    return parse_and_validate(in, ref);
}

CandidateRecord full_row(std::string id, double grade, int age) {
    CandidateRecord r;
    r.id = std::move(id);
    r.gender = Gender::Female;
    r.grade = grade;
    r.age = age;
    r.diploma = "Math-Physics";
    r.employment = Employment::Unemployed;
    r.job_relevancy = JobRelevancy::Unemployed;
    r.field_group = "Industry";
    r.field = "Software";
    r.cohort_year = 2008;
    return r;
}

}  // namespace

TEST_CASE("csv reader handles quotes, embedded newlines and CRLF") {
    std::istringstream in("a,\"b,c\",\"say \"\"hi\"\"\"\r\n\"multi\nline\",x,\r\n");
    csv::Reader r(in);
    auto row = r.next();
    REQUIRE(row);
    CHECK(*row == std::vector<std::string>{"a", "b,c", "say \"hi\""});
    row = r.next();
    REQUIRE(row);
    CHECK(*row == std::vector<std::string>{"multi\nline", "x", ""});
    CHECK_FALSE(r.next());
}

TEST_CASE("csv reader reports unterminated quotes with a line number") {
    std::istringstream in("a,b\n\"open,c\n");
    csv::Reader r(in);
    r.next();
    CHECK_THROWS_AS(r.next(), ParseError);
}

TEST_CASE("escape round-trips through the reader") {
    const std::vector<std::string> fields = {"plain", "with,comma", "with \"quote\"", "", "Accounting- Industrial"};
    std::ostringstream out;
    csv::write_row(out, fields);
    std::istringstream in(out.str());
    csv::Reader r(in);
    CHECK(*r.next() == fields);
}

TEST_CASE("keyed config keeps repeated sections and skips comment lines") {
    std::istringstream in("top = 1\n# note\n[a]\n; other note\nx = 1\n[b]\ny=two\n[a]\nx = 3\n");
    const auto cfg = KeyedConfig::parse(in);
    CHECK(cfg.section("").get("top") == "1");
    CHECK(cfg.all("a").size() == 2);
    CHECK(cfg.section("a").get_int("x", 0) == 1);
    CHECK(cfg.all("a")[1]->get_double("x", 0) == 3.0);
    CHECK(cfg.section("b").require("y") == "two");
    CHECK_THROWS(cfg.section("b").require("z"));
    CHECK_FALSE(cfg.section("missing").get("x"));
}

TEST_CASE("rng is reproducible and split streams are independent of draws") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
    Rng c(42);
    const auto before = c.split(7).below(1000000);
    for (int i = 0; i < 10; ++i) c.uniform();
    CHECK(c.split(7).below(1000000) == before);
    CHECK(std::string(Rng::kAlgorithm) == "mt19937_64+splitmix64");
    Rng d(1);
    for (int i = 0; i < 1000; ++i) {
        const double u = d.uniform();
        CHECK((u >= 0.0 && u < 1.0));
        CHECK(d.below(7) < 7);
    }
}

TEST_CASE("parse_and_validate accepts a Table 1 row") {
    const auto ds = parse(std::string(kHeader) + "r1,F,15.0,20,Math-Physics,Unemployed,0,Industry,Software,2008\n");
    REQUIRE(ds.size() == 1);
    CHECK(ds.rows[0] == full_row("r1", 15.0, 20));
    CHECK(ds.provenance.rejected.empty());
}

TEST_CASE("parse_and_validate rejects rows that break invariants") {
    const auto ds = parse(std::string(kHeader) +
                          "r1,F,21.0,20,Math-Physics,Unemployed,0,Industry,Software,2008\n"
                          "r2,F,15.0,16,Math-Physics,Unemployed,0,Industry,Software,2008\n"
                          "r3,X,15.0,20,Math-Physics,Unemployed,0,Industry,Software,2008\n"
                          "r4,F,15.0,20,Math-Physics,Unemployed,1,Industry,Software,2008\n"
                          "r5,M,12.5,30,Art,Employed,2,Culture and Art,Graphic,2008\n");
    REQUIRE(ds.size() == 1);
    CHECK(ds.rows[0].id == "r5");
    REQUIRE(ds.provenance.rejected.size() == 4);
    CHECK(ds.provenance.rejected[0].id == "r1");
    CHECK(ds.provenance.rejected[0].reason.find("grade") != std::string::npos);
    CHECK(ds.provenance.rejected[0].line == 2);
    CHECK(ds.provenance.rejected[1].reason.find("age") != std::string::npos);
    CHECK(ds.provenance.rejected[2].reason.find("gender") != std::string::npos);
}

TEST_CASE("empty file with a valid header gives an empty dataset") {
    const auto ds = parse(kHeader);
    CHECK(ds.empty());
    CHECK(ds.provenance.rejected.empty());
}

TEST_CASE("structural problems raise ParseError with the line") {
    try {
        parse(std::string(kHeader) + "r1,F,15.0,20,Math-Physics,Unemployed,0,Industry,Software,2008\nr2,F,15\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse("id,gender\n"), ParseError);
    CHECK_THROWS_AS(parse(""), ParseError);
}

TEST_CASE("birth_year becomes age against the reference year") {
    const std::string body = "id,gender,grade,birth_year,diploma,employment,job_relevancy,field_group,field,cohort_year\n"
                             "r1,M,14,1980,Art,Employed,1,Culture and Art,Graphic,2008\n";
    CHECK(*parse(body, 2009).rows[0].age == 29);
    CHECK(*parse(body).rows[0].age == 28);
}

TEST_CASE("serialize then parse reproduces the rows") {
    Dataset ds;
    ds.rows.push_back(full_row("a", 12.345, 18));
    auto b = full_row("b,quoted", 19.99, 44);
    b.gender = Gender::Male;
    b.employment = Employment::Employed;
    b.job_relevancy = JobRelevancy::Unrelated;
    b.diploma = "Job and Knowledge";
    b.field = "Accounting- Industrial";
    b.field_group = "Management and Social Services";
    ds.rows.push_back(b);
    auto c = full_row("c", 10, 17);
    c.grade.reset();
    c.diploma.reset();
    ds.rows.push_back(c);
    std::ostringstream out;
    serialize(out, ds);
    CHECK(parse(out.str()).rows == ds.rows);

    for (auto& r : ds.rows) r.class_label = "Class-1";
    ds.rows[2].grade = 11;
    ds.rows[2].diploma = "Art";
    std::ostringstream labeled;
    serialize(labeled, ds);
    CHECK(parse(labeled.str()).rows == ds.rows);
}

TEST_CASE("median imputation fills the hand-computed value") {
    Dataset ds;
    ds.rows = {full_row("a", 12, 20), full_row("b", 14, 21), full_row("c", 16, 22), full_row("d", 0, 23)};
    ds.rows[3].grade.reset();
    const auto out = preprocess(ds);
    CHECK(*out.rows[3].grade == 14.0);
    CHECK(out.size() == 4);
}

TEST_CASE("age median is the lower median so it was observed") {
    Dataset ds;
    ds.rows = {full_row("a", 12, 20), full_row("b", 14, 30), full_row("c", 16, 25)};
    ds.rows[2].age.reset();
    CHECK(*preprocess(ds).rows[2].age == 20);
}

TEST_CASE("preprocess without gaps is the identity and is idempotent") {
    Dataset ds;
    ds.rows = {full_row("a", 12, 20), full_row("b", 14, 30)};
    CHECK(preprocess(ds).rows == ds.rows);

    ds.rows[0].gender.reset();
    ds.rows[1].grade.reset();
    const auto once = preprocess(ds);
    CHECK(preprocess(once).rows == once.rows);
}

TEST_CASE("unknown policy keeps the row and marks the value") {
    Dataset ds;
    ds.rows = {full_row("a", 12, 20), full_row("b", 14, 30), full_row("c", 15, 31)};
    ds.rows[1].gender.reset();
    const auto out = preprocess(ds, parse_policy("median", "unknown"));
    CHECK(out.size() == ds.size());
    CHECK(*out.rows[1].gender == Gender::Unknown);
    CHECK(*categorical_value(out.rows[1], "gender") == "unknown");
}

TEST_CASE("drop policy removes incomplete rows and nothing else") {
    Dataset ds;
    ds.rows = {full_row("a", 12, 20), full_row("b", 14, 30), full_row("c", 15, 31)};
    ds.rows[1].field.reset();
    ds.rows[2].grade.reset();
    CHECK(preprocess(ds, parse_policy("median", "drop")).size() == 2);
    CHECK(preprocess(ds, parse_policy("drop", "drop")).size() == 1);
}

TEST_CASE("employment and relevancy complete each other") {
    Dataset ds;
    ds.rows = {full_row("a", 12, 20), full_row("b", 14, 30)};
    ds.rows[0].employment.reset();  // relevancy 0 forces Unemployed
    ds.rows[1].job_relevancy.reset();  // Unemployed forces relevancy 0
    const auto out = preprocess(ds);
    CHECK(*out.rows[0].employment == Employment::Unemployed);
    CHECK(*out.rows[1].job_relevancy == JobRelevancy::Unemployed);
}

TEST_CASE("median policy with no observed value is an error") {
    Dataset ds;
    ds.rows = {full_row("a", 12, 20), full_row("b", 14, 30)};
    for (auto& r : ds.rows) r.grade.reset();
    CHECK_THROWS_AS(preprocess(ds), ValidationError);
}

TEST_CASE("bins are left-closed with a closed last bin") {
    AttributeBins grade{"grade", 0, 20, {12.7, 14.8, 16.3}, {}};
    grade.validate();
    CHECK(grade.label(*grade.bin_of(15.0)) == "14.8-16.3");
    CHECK(grade.label(*grade.bin_of(14.8)) == "14.8-16.3");
    CHECK(grade.label(*grade.bin_of(0)) == "0-12.7");
    CHECK(grade.label(*grade.bin_of(20)) == "16.3-20");
    CHECK_FALSE(grade.bin_of(20.01));
    CHECK_FALSE(grade.bin_of(-0.5));

    AttributeBins age{"age", 17, std::numeric_limits<double>::infinity(), {25, 31}, {}};
    CHECK(age.label(*age.bin_of(25)) == "25-31");
    CHECK(age.label(*age.bin_of(24)) == "17-25");
    CHECK(age.label(*age.bin_of(59)) == "31+");

    CHECK_THROWS_AS((AttributeBins{"grade", 0, 20, {14, 12}, {}}.validate()), ValidationError);
    CHECK_THROWS_AS((AttributeBins{"grade", 0, 20, {25}, {}}.validate()), ValidationError);
}

TEST_CASE("discretize maps every value to one bin and reports misses") {
    Dataset ds;
    for (int i = 0; i < 40; ++i) ds.rows.push_back(full_row("r" + std::to_string(i), i * 0.5, 17 + i));
    const auto spec = default_binning(ds);
    const auto view = discretize(ds, spec);
    REQUIRE(view.size() == ds.size());
    const auto g = *view.column("grade");
    std::map<std::string, std::size_t> counts;
    for (const auto& row : view.rows) ++counts[row[g]];
    std::size_t total = 0;
    for (const auto& [label, n] : counts) total += n;
    CHECK(total == ds.size());
    CHECK(counts.size() == 4);
    CHECK_FALSE(view.column("class"));

    BinningSpec narrow{{AttributeBins{"grade", 0, 10, {5}, {}}, AttributeBins{"age", 17, 100, {25, 31}, {}}}};
    try {
        discretize(ds, narrow);
        FAIL("expected DiscretizeError");
    } catch (const DiscretizeError& e) {
        CHECK(e.attribute() == "grade");
        CHECK(e.value() > 10);
    }
}

TEST_CASE("default grade cuts are the rounded quartiles") {
    Dataset ds;
    for (int i = 0; i <= 100; ++i) ds.rows.push_back(full_row("r" + std::to_string(i), 10 + i * 0.1, 20));
    const auto spec = default_binning(ds);
    const auto* g = spec.find("grade");
    REQUIRE(g);
    CHECK(g->cuts == std::vector<double>{12.5, 15.0, 17.5});
    CHECK(spec.find("age")->cuts == std::vector<double>{25, 31});
}
