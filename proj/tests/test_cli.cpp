#include "doctest.h"

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "noma/cli.hpp"

using namespace noma;
using namespace noma::cli;
using nlohmann::json;

namespace {

std::string csv_of(const std::vector<SweepRow>& rows, bool series = false)
{
    std::ostringstream out;
    write_csv(out, rows, series);
    return out.str();
}

std::string error_field(const json& doc)
{
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<accepted>";
}

struct Golden {
    const char* id;
    Axis axis;
    double first, step, last;
    double snr_db;
    // per series: m1, m2, nt1, nr1, nt2, nr2, eps
    std::vector<std::array<double, 7>> series;
};

} // namespace

TEST_CASE("empty configuration yields the default scenario")
{
    const SweepSpec spec = parse_config(json::object());
    const ScenarioConfig& c = spec.scenario;
    CHECK(c.users == 3);
    CHECK(c.alloc == std::vector<double>{3.0 / 6, 2.0 / 6, 1.0 / 6});
    CHECK(c.thresholds == std::vector<double>{0.9, 1.5, 2.0});
    CHECK(c.path_loss_alpha == 4.0);
    CHECK(c.hop1.d == 0.5);
    CHECK(c.hop2.d == 0.5);
    CHECK(spec.trials == 0);
    CHECK(spec.seed == 1);
    CHECK(spec.axis == Axis::snr_db);
    const SystemScenario s = c.build();
    CHECK(s.hop1.omega == doctest::Approx(16.0));
}

TEST_CASE("configuration errors name the offending field")
{
    CHECK(error_field(json::parse(R"({"alloc": [0.5, 0.5, 0.2]})")) == "alloc");
    CHECK(error_field(json::parse(R"({"hop1": {"m": 1.5}})")) == "hop1.m");
    CHECK(error_field(json::parse(R"({"hop2": {"epsilon": 1.0}})")) == "hop2.epsilon");
    CHECK(error_field(json::parse(R"({"hop1": {"colour": 3}})")) == "hop1.colour");
    CHECK(error_field(json::parse(R"({"users": 2})")) == "alloc");
    CHECK(error_field(json::parse(R"({"sweep": {"axis": "time"}})")) == "sweep.axis");
    CHECK(error_field(json::parse(R"({"sweep": {"points": [3, 1]}})")) == "sweep.points");
    CHECK(error_field(json::parse(R"({"sweep": {"axis": "d1", "points": [0, 0.5]}})")) == "sweep.points");
    CHECK(error_field(json::parse(R"({"thresholds": [0.9, -1, 2]})")) == "thresholds[1]");
    CHECK(error_field(json::parse(R"([1, 2])")) == "");
    try {
        parse_config(json::parse(R"({"hop1": {"m": 1.5}})"));
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("integer") != std::string::npos);
    }
}

TEST_CASE("configuration round trip")
{
    const json doc = json::parse(R"({
        "users": 2, "alloc": [0.7, 0.3], "thresholds": [1, 1],
        "hop1": {"m": 2, "nt": 2, "nr": 1, "d": 0.3, "epsilon": 0.01},
        "hop2": {"m": 1, "nt": 1, "nr": 3, "d": 0.7, "epsilon": 0},
        "path_loss_alpha": 3,
        "sweep": {"axis": "snr_db", "points": "0:5:20", "trials": 1000, "seed": 9, "users": [2]}
    })");
    const SweepSpec spec = parse_config(doc);
    CHECK(spec.scenario.users == 2);
    CHECK(spec.scenario.hop1.m == 2);
    CHECK(spec.scenario.hop2.nr == 3);
    CHECK(spec.points == std::vector<double>{0, 5, 10, 15, 20});
    CHECK(spec.trials == 1000);
    CHECK(spec.seed == 9);
    CHECK((spec.outputs & kMonteCarloOutputs) == kMonteCarloOutputs);
    CHECK(spec.users == std::vector<int>{2});
    const SystemScenario s = spec.scenario.build();
    CHECK(s.hop1.omega == doctest::Approx(std::pow(0.3, -3.0)));
    CHECK(s.hop1.sigma_e2 == doctest::Approx(0.01 * std::pow(0.3, -3.0)));

    const auto path = std::filesystem::temp_directory_path() / "noma_cfg_test.json";
    std::ofstream(path) << doc.dump();
    CHECK(load_config(path).points == spec.points);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_config("/nonexistent/dir/cfg.json"), ConfigError);
}

TEST_CASE("parse_range")
{
    CHECK(parse_range("0:2.5:10") == std::vector<double>{0, 2.5, 5, 7.5, 10});
    CHECK(parse_range("1,3,7") == std::vector<double>{1, 3, 7});
    const auto d = parse_range("0.05:0.05:0.95");
    CHECK(d.size() == 19);
    CHECK(d.back() == doctest::Approx(0.95));
    CHECK_THROWS_AS(parse_range("0:-1:5"), ConfigError);
    CHECK_THROWS_AS(parse_range("a,b"), ConfigError);
    CHECK(parse_outputs("closed,oma") == (out_closed | out_oma));
    CHECK_THROWS_AS(parse_outputs("closed,nonsense"), ConfigError);
    CHECK(parse_outputs(outputs_to_string(kAnalyticOutputs)) == kAnalyticOutputs);
}

TEST_CASE("figure presets match the golden parameter table")
{
    const std::vector<Golden> table = {
        {"fig2", Axis::snr_db, 0, 2.5, 40, 10,
         {{1, 1, 1, 1, 1, 1, 0.005}, {1, 1, 1, 2, 1, 2, 0.005}, {1, 1, 2, 2, 2, 2, 0.005}}},
        {"fig3", Axis::snr_db, 0, 2.5, 40, 10,
         {{1, 1, 1, 2, 1, 2, 0.005}, {1, 2, 1, 2, 1, 2, 0.005}, {2, 1, 1, 2, 1, 2, 0.005}, {2, 2, 1, 2, 1, 2, 0.005}}},
        {"fig4", Axis::snr_db, 0, 2.5, 40, 10,
         {{1, 1, 2, 2, 2, 2, 0.0}, {1, 1, 2, 2, 2, 2, 0.005}, {1, 1, 2, 2, 2, 2, 0.05}}},
        {"fig5", Axis::snr_db, 0, 2.5, 60, 10,
         {{1, 1, 1, 1, 1, 1, 0.005}, {1, 1, 1, 1, 1, 1, 0.05}, {1, 1, 2, 2, 2, 2, 0.005}, {1, 1, 2, 2, 2, 2, 0.05}}},
        {"fig6", Axis::d1, 0.05, 0.05, 0.95, 10, {{1, 1, 2, 2, 2, 2, 0.005}, {2, 1, 2, 2, 2, 2, 0.005}}},
        {"fig7", Axis::snr_db, 0, 2.5, 50, 10,
         {{1, 1, 1, 1, 1, 1, 0.0}, {1, 1, 1, 2, 1, 2, 0.0}, {1, 1, 2, 2, 2, 2, 0.0}}},
    };
    CHECK(preset_ids().size() == table.size());
    for (const Golden& g : table) {
        CAPTURE(g.id);
        const FigurePreset p = figure_preset(g.id);
        CHECK(p.axis == g.axis);
        CHECK(p.snr_db == g.snr_db);
        REQUIRE(!p.points.empty());
        CHECK(p.points.front() == doctest::Approx(g.first));
        CHECK(p.points.back() == doctest::Approx(g.last));
        CHECK(p.points[1] - p.points[0] == doctest::Approx(g.step));
        REQUIRE(p.series.size() == g.series.size());
        for (std::size_t i = 0; i < g.series.size(); ++i) {
            const auto& e = g.series[i];
            const ScenarioConfig& c = p.series[i].scenario;
            CHECK(c.hop1.m == e[0]);
            CHECK(c.hop2.m == e[1]);
            CHECK(c.hop1.nt == e[2]);
            CHECK(c.hop1.nr == e[3]);
            CHECK(c.hop2.nt == e[4]);
            CHECK(c.hop2.nr == e[5]);
            CHECK(c.hop1.epsilon == e[6]);
            CHECK(c.hop2.epsilon == e[6]);
            CHECK(c.path_loss_alpha == 4.0);
            CHECK(c.alloc == std::vector<double>{3.0 / 6, 2.0 / 6, 1.0 / 6});
            CHECK(c.thresholds == std::vector<double>{0.9, 1.5, 2.0});
            if (g.axis == Axis::snr_db) {
                CHECK(c.hop1.d == 0.5);
                CHECK(c.hop2.d == 0.5);
            }
        }
    }
    CHECK_THROWS_AS(figure_preset("fig9"), ConfigError);
}

TEST_CASE("sweep rows and CSV format")
{
    SweepSpec spec = parse_config(json::object());
    spec.points = {0, 10};
    spec.trials = 2000;
    spec.outputs = kAnalyticOutputs | kMonteCarloOutputs;
    const auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].axis_value == 0);
    CHECK(rows[0].user == 1);
    CHECK(rows[5].user == 3);
    CHECK(rows[0].op_closed.has_value());
    CHECK_FALSE(rows[0].op_asymptotic.has_value());  // eps = 0.005 by default
    CHECK(rows[0].op_mc_upper.has_value());
    const std::string csv = csv_of(rows);
    CHECK(csv.rfind("axis_value,user,op_closed,op_quadrature,op_lower,op_upper,ef_lower,ef_upper,op_asymptotic,"
                    "op_mc_exact,op_mc_upper,op_oma,ci_halfwidth,trials,seed,warnings\n",
                    0) == 0);
    CHECK(csv == csv_of(run_sweep(spec)));
    spec.seed = 2;
    CHECK(csv != csv_of(run_sweep(spec)));

    // disabled outputs leave empty fields
    spec.outputs = out_closed;
    spec.trials = 0;
    const std::string lean = csv_of(run_sweep(spec));
    std::istringstream lines(lean);
    std::string header, first;
    std::getline(lines, header);
    std::getline(lines, first);
    CHECK(first.find(",,,,,,,,,,") != std::string::npos);
}

TEST_CASE("epsilon and d1 axes")
{
    SweepSpec spec = parse_config(json::object());
    spec.axis = Axis::epsilon;
    spec.points = {0.0, 0.05};
    spec.outputs = out_floor | out_asymptotic;
    const auto rows = run_sweep(spec);
    CHECK(rows[0].ef_lower == 0.0);
    CHECK(rows[0].op_asymptotic.has_value());
    CHECK(rows[3].ef_lower > 0.0);
    CHECK_FALSE(rows[3].op_asymptotic.has_value());

    spec.axis = Axis::d1;
    spec.points = {0.2};
    const SystemScenario s = scenario_at(spec, 0.2);
    CHECK(s.hop1.omega == doctest::Approx(std::pow(0.2, -4.0)));
    CHECK(s.hop2.omega == doctest::Approx(std::pow(0.8, -4.0)));
    CHECK(snr_at(spec, 0.2) == doctest::Approx(10.0));
}

TEST_CASE("fig7 has no floor and fig6 shows the NOMA/OMA crossing")
{
    for (const SweepRow& r : run_figure(figure_preset("fig7"), 0, 1, 1)) {
        CHECK(r.ef_lower == 0.0);
        CHECK(r.ef_upper == 0.0);
        CHECK(r.op_asymptotic.has_value());
    }
    const auto rows = run_figure(figure_preset("fig6"), 0, 1, 1);
    bool noma_wins_near = false;
    bool oma_wins_far = false;
    for (const SweepRow& r : rows) {
        if (r.axis_value < 0.3 && *r.op_closed < *r.op_oma) {
            noma_wins_near = true;
        }
        if (r.axis_value > 0.7 && *r.op_oma < *r.op_closed) {
            oma_wins_far = true;
        }
    }
    CHECK(noma_wins_near);
    CHECK(oma_wins_far);
}

TEST_CASE("emit_figure writes CSV and SVG")
{
    const auto dir = std::filesystem::temp_directory_path() / "noma_fig_test";
    std::filesystem::remove_all(dir);
    const FigureFiles f = emit_figure(figure_preset("fig6"), dir, 1000, 1, 1);
    CHECK(std::filesystem::exists(f.csv));
    std::ifstream svg(f.svg);
    std::stringstream text;
    text << svg.rdbuf();
    CHECK(text.str().find("<svg") != std::string::npos);
    CHECK(text.str().find("</svg>") != std::string::npos);
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(emit_figure(figure_preset("fig6"), "/proc/noma_cannot_write", 0, 1, 1), ConfigError);
}

TEST_CASE("validation exit codes")
{
    ValidationOptions o;
    o.trials = 0;
    std::ostringstream report;
    CHECK(run_validation(o, report) == 0);
    CHECK(report.str().find("SKIP Monte Carlo") != std::string::npos);
    o.closed_perturbation = 0.01;
    std::ostringstream bad;
    CHECK(run_validation(o, bad) == 2);
    CHECK(bad.str().find("offending") != std::string::npos);
}
