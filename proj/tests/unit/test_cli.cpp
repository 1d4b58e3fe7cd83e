#include "oracles.hpp"

#include "pmpy/cli/commands.hpp"
#include "pmpy/cli/config.hpp"
#include "pmpy/cli/output.hpp"
#include "pmpy/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

using namespace pmpy;
using namespace pmpy::cli;

namespace {

const char *rectangle_text = R"({
  "swimmer": {"mu": 1.0, "v0": 272.2713633111154},
  "stroke": {"type": "rectangle", "eps": 0.2, "ell_ratio": 10.0, "v_s": 4.1887902047863905},
  "timing": {"period": 1.0, "optimal": true},
  "outputs": {"samples": 32}
})";

std::string field_of(const std::string &text) {
    try {
        parse_config_text(text);
    } catch (const ConfigError &e) {
        return e.field();
    }
    return "";
}

std::vector<std::vector<std::string>> parse_csv(const std::string &text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> row;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ','))
            row.push_back(cell);
        if (!line.empty() && line.back() == ',')
            row.emplace_back();
        rows.push_back(row);
    }
    return rows;
}

Json rectangle_json() { return Json::parse(rectangle_text); }

} // namespace

TEST_CASE("config errors name the offending field") {
    CHECK(field_of(R"({"swimmer": {"v0": 1.0, "viscosity": 2.0}})") == "swimmer.viscosity");
    CHECK(field_of(R"({"swimmer": {"v0": -1.0}})") == "swimmer.v0");
    CHECK(field_of(R"({"swimmer": {"v0": "big"}})") == "swimmer.v0");
    CHECK(field_of(R"({"swimmer": {"v0": 1.0, "fidelity": "exact"}})") == "swimmer.fidelity");
    CHECK(field_of(R"({"swimmer": {"v0": 1.0}, "stroke": {"type": "rectangle", "ell_s": 3, "ell_L": 9,
                   "v_s": 0.6}, "timing": {"period": 1}})") == "stroke.v_s");
    CHECK(field_of(R"({"swimmer": {"v0": 1.0}, "stroke": {"type": "spiral"}, "timing": {"period": 1}})") ==
          "stroke.type");
    CHECK(field_of(R"({"swimmer": {"v0": 1.0}, "stroke": {"type": "rectangle", "ell_s": 3, "ell_L": 9,
                   "v_s": 0.1}})") == "timing");
    CHECK(field_of(R"({"swimmer": {"v0": 1.0}, "quadrature": {"max_depth": 2}})") == "quadrature.max_depth");
    CHECK(field_of("not json") != "");
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), std::runtime_error);
    try {
        parse_config_text(R"({"swimmer": {"v0": 1.0}, "stroke": {"type": "rectangle", "ell_s": 3, "ell_L": 9,
                           "v_s": 0.6}, "timing": {"period": 1}})");
        FAIL("expected a config error");
    } catch (const ConfigError &e) {
        CHECK(std::string(e.what()).find("v0/2") != std::string::npos);
    }
}

TEST_CASE("config normalization and round trip") {
    const ExperimentConfig cfg = parse_config_text(rectangle_text);
    REQUIRE(cfg.stroke);
    const auto &rect = std::get<RectangleSpec>(*cfg.stroke);
    const double a_L = radius_of_volume(cfg.swimmer.v0 - 4.1887902047863905);
    CHECK(rect.ell_s == doctest::Approx(a_L / 0.2));
    CHECK(rect.ell_L == doctest::Approx(10.0 * a_L / 0.2));
    CHECK(cfg.timing.optimal);
    CHECK(cfg.outputs.samples == 32);

    const Json normalized = to_json(cfg);
    CHECK(parse_config(normalized) == cfg);
    CHECK(dump_json(to_json(parse_config(normalized))) == dump_json(normalized));

    for (const char *text : {R"({"swimmer": {"v0": 1.0}, "stroke": {"type": "small_loop",
                              "center": [8.0, 0.5], "d_log_v": 0.2, "d_ell": 1.0, "shape": "ellipse"},
                              "timing": {"period": 2.0}})",
                             R"({"swimmer": {"v0": 1.0}, "stroke": {"type": "polyline",
                              "points": [[4, 0.3], {"ell": 8, "v": 0.3}, [8, 0.6], [4, 0.3]]},
                              "timing": {"durations": [3.0]}})"}) {
        const ExperimentConfig c = parse_config_text(text);
        CHECK(parse_config(to_json(c)) == c);
    }
}

TEST_CASE("set_numeric_field edits existing numbers only") {
    Json j = rectangle_json();
    set_numeric_field(j, "stroke.eps", 0.1);
    CHECK(j["stroke"]["eps"].get<double>() == 0.1);
    CHECK_THROWS_AS(set_numeric_field(j, "stroke.missing", 1.0), ConfigError);
    CHECK_THROWS_AS(set_numeric_field(j, "stroke.type", 1.0), ConfigError);
    CHECK_THROWS_AS(set_numeric_field(j, "nowhere.eps", 1.0), ConfigError);
}

TEST_CASE("number and JSON formatting") {
    CHECK(format_number(1.0) == "1.0000000000000000e+00");
    CHECK(format_number(-0.125) == "-1.2500000000000000e-01");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");

    Json j;
    j["b"] = 2.5;
    j["a"] = std::numeric_limits<double>::infinity();
    j["n"] = 3;
    const std::string s = dump_json(j);
    CHECK(s == "{\n  \"b\": 2.5000000000000000e+00,\n  \"a\": null,\n  \"n\": 3\n}\n");
}

TEST_CASE("CSV writer") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_field("two\nlines") == "\"two\nlines\"");
    CsvWriter w({"x", "y"});
    w.row({"1", "2"});
    CHECK_THROWS_AS(w.row({"1"}), std::logic_error);
    CHECK(w.rows() == 1);
    CHECK(w.str() == "x,y\n1,2\n");
}

TEST_CASE("simulate is deterministic and reports the stroke") {
    const ExperimentConfig cfg = parse_config_text(rectangle_text);
    const SimulateOutput a = run_simulate(cfg);
    const SimulateOutput b = run_simulate(cfg);
    CHECK(dump_json(a.summary) == dump_json(b.summary));
    CHECK(a.trajectory_csv == b.trajectory_csv);

    const Json &s = a.summary;
    CHECK(s["command"] == "simulate");
    CHECK(s["drag_finite"] == true);
    CHECK(s["displacement"].get<double>() > 0.0);
    CHECK(s["closed_form"]["displacement"].get<double>() ==
          doctest::Approx(s["displacement"].get<double>()).epsilon(1e-9));
    CHECK(s["predictions"].size() == 3);
    for (const Json &p : s["predictions"])
        CHECK(p["ratio"].get<double>() == doctest::Approx(p["numeric"].get<double>() / p["predicted"].get<double>()));

    const auto rows = parse_csv(a.trajectory_csv);
    REQUIRE(rows.size() > 30);
    CHECK(rows[0] == std::vector<std::string>{"t", "ell", "v", "a1", "a2", "X", "P", "E_cum"});
    CHECK(std::stod(rows.back()[5]) == doctest::Approx(s["displacement"].get<double>()).epsilon(1e-9));
}

TEST_CASE("overrides") {
    ExperimentConfig cfg = parse_config_text(rectangle_text);
    CommandOptions o;
    o.fidelity = Fidelity::Refined;
    o.tolerance = 1e-8;
    o.samples = 5;
    apply_overrides(cfg, o);
    CHECK(cfg.swimmer.fidelity == Fidelity::Refined);
    CHECK(cfg.quadrature.tolerance == 1e-8);
    CHECK(cfg.outputs.samples == 5);
    CHECK(run_simulate(cfg).summary["fidelity"] == "refined");
}

TEST_CASE("sweep output does not depend on the job count") {
    Json base = rectangle_json();
    base["sweep"] = Json::parse(R"({"grid": [{"field": "stroke.eps", "values": [0.2, 0.1, 0.05]},
                                             {"field": "stroke.ell_ratio", "values": [4, 10]}]})");
    CommandOptions one;
    CommandOptions four;
    four.jobs = 4;
    const std::string serial = run_sweep(base, one);
    CHECK(run_sweep(base, four) == serial);

    const auto rows = parse_csv(serial);
    REQUIRE(rows.size() == 7);
    CHECK(rows[0][0] == "index");
    CHECK(rows[0][1] == "stroke.eps");
    CHECK(rows[0].back() == "error");
    CHECK(std::stod(rows[1][1]) == 0.2);
    CHECK(std::stod(rows[2][1]) == 0.2);
    CHECK(std::stod(rows[2][2]) == 10.0);
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(rows[i].back().empty());
}

TEST_CASE("sweep ratios approach one as eps shrinks") {
    Json base = rectangle_json();
    base["sweep"] = Json::parse(R"({"grid": [{"field": "stroke.eps", "values": [0.2, 0.1, 0.05, 0.025]}]})");
    const auto rows = parse_csv(run_sweep(base, {}));
    std::size_t col = 0;
    for (std::size_t k = 0; k < rows[0].size(); ++k)
        if (rows[0][k] == "ratio_displacement")
            col = k;
    REQUIRE(col > 0);
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double dev = std::abs(std::stod(rows[i][col]) - 1.0);
        CHECK(dev < previous);
        previous = dev;
    }
}

TEST_CASE("sweep edge cases") {
    Json base = rectangle_json();
    CHECK_THROWS_AS(run_sweep(base, {}), ConfigError);

    base["sweep"] = Json::parse(R"({"grid": []})");
    const auto empty = parse_csv(run_sweep(base, {}));
    CHECK(empty.size() == 1);

    base["sweep"] = Json::parse(R"({"grid": [{"field": "stroke.eps", "values": [0.1, 0.2, 0.3]}], "max_points": 2})");
    try {
        run_sweep(base, {});
        FAIL("expected a cap error");
    } catch (const ConfigError &e) {
        CHECK(e.field() == "sweep.max_points");
    }

    base["sweep"] = Json::parse(R"({"grid": [{"field": "stroke.v_s", "values": [4.0, 1000.0]}]})");
    const std::string text = run_sweep(base, {});
    const auto rows = parse_csv(text);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].back().empty());
    const std::string last_line = text.substr(text.rfind("\n1,"));
    CHECK(last_line.find("stroke.v_s") != std::string::npos);
    CHECK(last_line.find("\"") != std::string::npos);
}

TEST_CASE("optimize agrees with a golden-section search") {
    const ExperimentConfig cfg = parse_config_text(rectangle_text);
    const Json j = run_optimize(cfg);
    const double tau = j["period"].get<double>();
    const double t_ell = j["optimal"]["T_ell"].get<double>();
    CHECK(j["optimal_not_worse"] == true);
    CHECK(j["sqrt_rule_check"]["passed"] == true);
    CHECK(j["optimal"]["energy"].get<double>() <= j["equal_split"]["energy"].get<double>());

    const BuiltStroke built = build_stroke(cfg);
    const auto best = oracle::golden_section(
        [&](double T) {
            RectangleStroke r = *built.rectangle;
            r.T_ell = T;
            r.T_v = 0.5 * tau - T;
            return integrate(cfg.swimmer, build_rectangle(cfg.swimmer, r)).energy;
        },
        1e-6 * tau, (0.5 - 1e-6) * tau, 1e-10);
    CHECK(t_ell == doctest::Approx(best.first).epsilon(1e-4));
    CHECK(j["optimal"]["energy"].get<double>() == doctest::Approx(best.second).epsilon(1e-8));

    // The v-legs become free as the shuttle volume vanishes.
    Json tiny = rectangle_json();
    tiny["stroke"]["v_s"] = 136.0;
    const Json jt = run_optimize(parse_config(tiny));
    CHECK(jt["optimal"]["ell_time_fraction"].get<double>() > 0.99);
}

TEST_CASE("optimize rejects other strokes") {
    const ExperimentConfig loop = parse_config_text(R"({"swimmer": {"v0": 1.0}, "stroke": {"type": "small_loop",
        "center": [8.0, 0.5], "d_log_v": 0.2, "d_ell": 1.0}, "timing": {"period": 2.0}})");
    CHECK_THROWS_AS(run_optimize(loop), UnsupportedOperation);
    Json vol = rectangle_json();
    vol["stroke"]["volume_rate"] = "volume";
    vol["timing"] = Json::parse(R"({"period": 1.0})");
    CHECK_THROWS_AS(run_optimize(parse_config(vol)), UnsupportedOperation);
}

TEST_CASE("flowfield of a single source") {
    const ExperimentConfig cfg = parse_config_text(R"({"swimmer": {"v0": 1.0}, "flowfield": {
        "grid": {"min": [-3, 0, 0], "max": [3, 0, 0], "resolution": [13, 1, 1]},
        "source": {"type": "single", "a": 1.0, "v_dot": 2.0}}})");
    const auto rows = parse_csv(run_flowfield(cfg));
    REQUIRE(rows.size() == 14);
    CHECK(rows[0] == std::vector<std::string>{"x", "y", "z", "ux", "uy", "uz", "masked"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double x = std::stod(rows[i][0]);
        if (std::abs(x) < 1.0) {
            CHECK(rows[i][6] == "1");
            CHECK(rows[i][3] == "nan");
        } else {
            CHECK(rows[i][6] == "0");
            CHECK(std::stod(rows[i][3]) == doctest::Approx(2.0 / (4.0 * oracle::pi * x * x) * (x > 0 ? 1 : -1)));
        }
    }
}

TEST_CASE("flowfield grid is divergence free") {
    const ExperimentConfig cfg = parse_config_text(R"({"swimmer": {"v0": 1.0, "mu": 0.7}, "flowfield": {
        "grid": {"min": [2, -1, -1], "max": [4, 1, 1], "resolution": [21, 21, 21]},
        "source": {"type": "single", "a": 1.0, "force": [1.0, -0.5, 0.3], "v_dot": 0.8}}})");
    const auto rows = parse_csv(run_flowfield(cfg));
    REQUIRE(rows.size() == 1 + 21 * 21 * 21);
    auto u = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t c) {
        return std::stod(rows[1 + (i * 21 + j) * 21 + k][3 + c]);
    };
    const double h = 0.1;
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t i = 1; i < 20; i += 3)
        for (std::size_t j = 1; j < 20; j += 3)
            for (std::size_t k = 1; k < 20; k += 3) {
                const double dux = (u(i + 1, j, k, 0) - u(i - 1, j, k, 0)) / (2 * h);
                const double duy = (u(i, j + 1, k, 1) - u(i, j - 1, k, 1)) / (2 * h);
                const double duz = (u(i, j, k + 1, 2) - u(i, j, k - 1, 2)) / (2 * h);
                worst = std::max(worst, std::abs(dux + duy + duz));
                scale = std::max({scale, std::abs(dux), std::abs(duy), std::abs(duz)});
            }
    CHECK(worst < 1e-2 * scale);
}

TEST_CASE("pair flowfield masks both spheres") {
    const ExperimentConfig cfg = parse_config_text(R"({"swimmer": {"v0": 1.0}, "flowfield": {
        "grid": {"min": [-2.5, 0, 0], "max": [2.5, 0, 0], "resolution": [3, 1, 1]},
        "source": {"type": "pair", "ell": 5.0, "v": 0.3, "ell_dot": 0.5, "v_dot": -0.1}}})");
    const auto rows = parse_csv(run_flowfield(cfg));
    REQUIRE(rows.size() == 4);
    CHECK(rows[1][6] == "1");
    CHECK(rows[2][6] == "0");
    CHECK(rows[3][6] == "1");
    CHECK_THROWS_AS(run_flowfield(parse_config_text(R"({"swimmer": {"v0": 1.0}})")), ConfigError);
}

TEST_CASE("guarded maps errors to exit codes") {
    std::ostringstream err;
    CHECK(guarded([] { return 0; }, err) == exit_success);
    CHECK(guarded([]() -> int { throw ConfigError("x", "bad"); }, err) == exit_config);
    CHECK(guarded([]() -> int { throw ConstructionError("bad"); }, err) == exit_config);
    CHECK(guarded([]() -> int { throw UnsupportedOperation("bad"); }, err) == exit_config);
    CHECK(guarded([]() -> int { throw ModelValidityError("bad"); }, err) == exit_validity);
    CHECK(guarded([]() -> int { throw IntegrationAccuracyError("bad", 1.0, 0.1); }, err) == exit_accuracy);
    CHECK(guarded([]() -> int { throw std::runtime_error("bad"); }, err) == exit_failure);
    CHECK(err.str().find("error: config: x: bad") != std::string::npos);
}
