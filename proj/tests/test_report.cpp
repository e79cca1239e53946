#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "test_support.hpp"
#include "tradecurve/report.hpp"

using namespace tradecurve;
using nlohmann::json;

TEST_CASE("format_double round-trips through 17 significant digits") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 200; ++i) {
        const double v = u(rng);
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(903.0) == "903");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "null");
    CHECK(format_double(std::nan("")) == "null");
}

TEST_CASE("JsonWriter emits valid JSON with escaping") {
    JsonWriter w;
    w.begin_object();
    w.key("name").value("a\"b\\c\nd");
    w.key("count").value(42);
    w.key("ok").value(true);
    w.key("nothing").null();
    w.key("list").begin_array().value(1.5).value(2).end_array();
    w.key("nested").begin_object().key("x").value(0.25).end_object();
    w.end_object();

    const json parsed = json::parse(w.str());
    CHECK(parsed["name"] == "a\"b\\c\nd");
    CHECK(parsed["count"] == 42);
    CHECK(parsed["ok"] == true);
    CHECK(parsed["nothing"].is_null());
    CHECK(parsed["list"][0] == 1.5);
    CHECK(parsed["nested"]["x"] == 0.25);
}

TEST_CASE("parse report JSON carries counts and samples") {
    ParseReport report;
    report.rows_total = 10;
    report.add_bad(3, "value must be a non-negative number: '-5'");
    report.self_flows = 1;
    PanelJoinInfo join;
    join.trade_only = {"NOR"};
    join.gdp_only = {"BRA"};
    const json parsed = json::parse(parse_report_json(report, &join));
    CHECK(parsed["rows_total"] == 10);
    CHECK(parsed["rows_bad"] == 1);
    CHECK(parsed["self_flows"] == 1);
    CHECK(parsed["bad_samples"].size() == 1);
    CHECK(parsed["excluded_trade_only"][0] == "NOR");
    CHECK(parsed["excluded_gdp_only"][0] == "BRA");
}

TEST_CASE("series JSON matches the wire schema") {
    YearlyResult r;
    r.year = 1995;
    r.variable = Variable::export_goods;
    r.fit.params = {903.0, 1.85, 10.7};
    r.fit.r_squared = 0.86;
    r.fit.f_value = 231.0;
    r.cp = critical_points(r.fit.params);
    r.proportions = {0.5, 0.375, 0.125};
    r.normalized = false;
    r.y_min = 2.0;
    r.y_max = 890.0;

    const json parsed = json::parse(series_json(std::vector<YearlyResult>{r}));
    REQUIRE(parsed.is_array());
    REQUIRE(parsed.size() == 1);
    const json& e = parsed[0];
    for (const char* key : {"year", "variable", "A", "k", "XM", "XL", "XR", "YL",
                            "YM", "YR", "r2", "f", "proportions", "normalized",
                            "y_min", "y_max"})
        CHECK(e.contains(key));
    CHECK(e["A"] == 903.0);
    CHECK(e["k"] == 1.85);
    CHECK(e["XM"] == 10.7);
    CHECK(e["variable"] == "export_goods");
    CHECK(e["proportions"].size() == 3);
    CHECK(e.size() == 16);  // exactly the schema keys
}

TEST_CASE("atomic_write leaves no temp file and replaces atomically") {
    const auto dir = testsupport::scratch_dir("report");
    const auto path = dir / "out.json";
    atomic_write(path, "{\"a\":1}\n");
    atomic_write(path, "{\"a\":2}\n");
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == "{\"a\":2}\n");
    CHECK_FALSE(std::filesystem::exists(dir / "out.json.tmp"));
    CHECK_THROWS_AS(atomic_write(dir / "no_such_dir" / "x.json", "x"), WriteFailed);
    std::filesystem::remove_all(dir);
}

TEST_CASE("stage CSV has one row per country") {
    std::vector<CountryObservation> panel(3);
    panel[0] = {"AAA", 1995, 9.0, 10, 5, 3, 2};
    panel[1] = {"BBB", 1995, 10.7, 200, 80, 40, 30};
    panel[2] = {"CCC", 1995, 12.5, 600, 300, 100, 90};
    LogisticFit fit;
    fit.params = {903.0, 1.85, 10.7};
    const StageCounts counts = stage_counts(panel, fit);
    const std::string csv = stages_csv(panel, counts);

    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "country,year,x,stage");
    std::getline(lines, line);
    CHECK(line == "AAA,1995,9,Initial");
    std::getline(lines, line);
    CHECK(line.find("BBB") == 0);
    CHECK(line.find("Acceleration") != std::string::npos);
    std::getline(lines, line);
    CHECK(line.find("Final") != std::string::npos);
}
