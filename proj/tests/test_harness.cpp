#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "flrw/config.hpp"
#include "flrw/errors.hpp"
#include "flrw/experiments.hpp"
#include "flrw/report.hpp"

using namespace flrw;
using nlohmann::json;

namespace {

json small_document(const std::string& experiment) {
    return json{
        {"model", {{"n", 1}, {"ell", 0.5}, {"beta", 3.0}, {"p", 6.0}}},
        {"grid", {{"points_per_axis", 256}, {"half_length", 32.0}}},
        {"run", {{"experiment", experiment}, {"horizon", 10.0}, {"delta", 0.5}, {"q_list", {6}}, {"outputs_per_decade", 16}}},
        {"report", {{"fit_window", {1.0, 10.0}}}},
    };
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("flrw_harness_" + name)).string();
}

}  // namespace

TEST_CASE("configuration parsing") {
    const LabConfig cfg = parse_config(small_document("semilinear"));
    CHECK(cfg.experiment == Experiment::semilinear);
    CHECK(cfg.run.params.beta == 3.0);
    CHECK(cfg.run.grid.points_per_axis == 256);
    CHECK(cfg.run.q_list == std::vector<double>{6.0});
    CHECK(cfg.fit_lo() == 1.0);
    CHECK(cfg.fit_hi() == 10.0);

    json defaults = small_document("linear_decay");
    defaults["report"] = json::object();
    const LabConfig d = parse_config(defaults);
    CHECK(d.fit_lo() == doctest::Approx(1.0));
    CHECK(d.fit_hi() == doctest::Approx(10.0));

    json tau = small_document("semilinear");
    tau["run"]["frame"] = "tau";
    const LabConfig t = parse_config(tau);
    CHECK(t.run.tau_frame);
    CHECK(t.fit_lo() == 1.0);
    CHECK(t.fit_hi() == 10.0);
}

TEST_CASE("configuration errors") {
    auto rejects = [](const json& doc) { CHECK_THROWS_AS(parse_config(doc), ConfigError); };
    json doc = small_document("semilinear");
    doc["run"]["horizon"] = 1e4;  // beyond the causal budget of the box
    rejects(doc);

    doc = small_document("semilinear");
    doc["model"]["gamma"] = 1.0;
    rejects(doc);
    doc = small_document("semilinear");
    doc["model"].erase("beta");
    rejects(doc);
    doc = small_document("semilinear");
    doc["run"]["experiment"] = "unknown";
    rejects(doc);
    doc = small_document("semilinear");
    doc["run"]["frame"] = "comoving";
    rejects(doc);
    doc = small_document("semilinear");
    doc["report"]["fit_window"] = {5.0, 1.0};
    rejects(doc);
    doc = small_document("semilinear");
    doc["report"]["fit_window"] = {1.0, 20.0};
    rejects(doc);
    doc = small_document("semilinear");
    doc["model"]["ell"] = 1.0;
    rejects(doc);
    doc = small_document("semilinear");
    doc["grid"]["points_per_axis"] = "many";
    rejects(doc);
    doc = small_document("sweep");
    doc["run"]["p_list"] = {0.5, 2.0};
    rejects(doc);

    CHECK_THROWS_AS(load_config(temp_path("missing.json")), IoError);
    const std::string bad = temp_path("bad.json");
    std::ofstream(bad) << "{ not json";
    CHECK_THROWS_AS(load_config(bad), ConfigError);
    std::filesystem::remove(bad);
}

TEST_CASE("CSV headers and line endings") {
    DecaySeries series;
    series.q_list = {4.0, 6.0};
    series.rows.push_back({1.0, 0.5, 0.25, {0.3, 0.2}});
    const std::string csv = decay_csv(series);
    CHECK(first_line(csv) == "t,l2,linf,lq_4,lq_6");
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(parse_decay_csv(csv) == series);

    CHECK(multiplier_csv({}) == "t,s,xi,ell,beta,zone,rel_err_m1,rel_err_dtm1,lemma1_ratio\n");
    const std::vector<MultiplierRow> rows{{3.5, 1.25, 0.1, 0.5, 2.0, "Z2", 1e-12, 2e-11, 0.75}};
    CHECK(parse_multiplier_csv(multiplier_csv(rows)) == rows);

    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("empty multiplier sample writes a header-only file") {
    json doc = small_document("verify_multipliers");
    doc["run"]["samples"] = 0;
    const Report r = run_experiment(parse_config(doc));
    CHECK(r.samples.empty());
    const std::string path = temp_path("empty.csv");
    export_csv(r, path);
    CHECK(read_file(path) == "t,s,xi,ell,beta,zone,rel_err_m1,rel_err_dtm1,lemma1_ratio\n");
    std::filesystem::remove(path);
    CHECK_THROWS_AS(export_csv(r, "/nonexistent-dir/out.csv"), IoError);
}

TEST_CASE("report round trips and deterministic output") {
    json doc = small_document("verify_multipliers");
    doc["run"]["samples"] = 20;
    doc["run"]["seed"] = 7;
    const LabConfig cfg = parse_config(doc);
    const Report a = run_experiment(cfg);
    const Report b = run_experiment(cfg);
    CHECK(report_csv(a) == report_csv(b));
    CHECK(report_from_json(report_to_json(a)) == a);
    CHECK(parse_multiplier_csv(report_csv(a)) == a.samples);

    const Report s = run_experiment(parse_config(small_document("semilinear")));
    CHECK(s.status == "completed");
    CHECK(report_from_json(report_to_json(s)) == s);
    const DecaySeries parsed = parse_decay_csv(report_csv(s));
    CHECK(parsed.q_list == s.series.q_list);
    CHECK(parsed.rows == s.series.rows);
    CHECK(report_csv(s) == report_csv(run_experiment(parse_config(small_document("semilinear")))));
    for (const Comparison& c : s.comparisons) CHECK(!c.case_tag.empty());
}

TEST_CASE("zero source matches the linear report") {
    json doc = small_document("semilinear");
    doc["run"]["source"] = "off";
    doc["run"]["rtol"] = 1e-11;
    doc["run"]["atol"] = 1e-14;
    const Report semi = run_experiment(parse_config(doc));
    doc["run"]["experiment"] = "linear_decay";
    const Report lin = run_experiment(parse_config(doc));
    REQUIRE(semi.series.rows.size() == lin.series.rows.size());
    for (std::size_t i = 1; i < lin.series.rows.size(); ++i) {
        CHECK(std::abs(semi.series.rows[i].l2 / lin.series.rows[i].l2 - 1.0) < 1e-8);
        CHECK(std::abs(semi.series.rows[i].lq[0] / lin.series.rows[i].lq[0] - 1.0) < 1e-8);
    }
    REQUIRE(semi.fits.size() == lin.fits.size());
    for (std::size_t i = 0; i < lin.fits.size(); ++i) {
        CHECK(semi.fits[i].column == lin.fits[i].column);
        CHECK(std::abs(semi.fits[i].fit.exponent - lin.fits[i].fit.exponent) < 1e-8);
    }
}

TEST_CASE("fit is invariant under positive scaling") {
    std::vector<double> t;
    std::vector<double> y;
    for (int i = 0; i <= 40; ++i) {
        t.push_back(std::pow(10.0, 1.0 + i / 20.0));
        y.push_back(2.0 * std::pow(1.0 + t.back(), -0.4) * (1.0 + 0.01 * std::sin(i)));
    }
    const DecayFit base = fit_decay_exponent(t, y, 10.0, 1000.0);
    for (double scale : {1e-6, 3.0, 1e8}) {
        std::vector<double> z = y;
        for (double& v : z) v *= scale;
        CHECK(fit_decay_exponent(t, z, 10.0, 1000.0).exponent == doctest::Approx(base.exponent).epsilon(1e-12));
    }
}

TEST_CASE("sweep classification and bracket") {
    CHECK(classify_growth(true, std::nullopt) == GrowthClass::growth);
    CHECK(classify_growth(false, 0.1) == GrowthClass::growth);
    CHECK(classify_growth(false, -0.1) == GrowthClass::decay);
    CHECK(classify_growth(false, 0.0) == GrowthClass::indeterminate);
    CHECK(classify_growth(false, std::nullopt) == GrowthClass::indeterminate);

    Report r;
    for (auto [p, g] : {std::pair{4.0, GrowthClass::decay}, {2.0, GrowthClass::growth}, {3.0, GrowthClass::growth},
                        {5.0, GrowthClass::decay}}) {
        SweepRow row;
        row.p = p;
        row.growth = g;
        r.sweep.push_back(row);
    }
    transition_bracket(r);
    CHECK(r.sweep.front().p == 2.0);
    CHECK(r.monotone);
    CHECK(*r.bracket_lo == 3.0);
    CHECK(*r.bracket_hi == 4.0);
    r.sweep[3].growth = GrowthClass::growth;
    transition_bracket(r);
    CHECK_FALSE(r.monotone);

    json doc = small_document("sweep");
    doc["run"]["p_list"] = json::array();
    const Report empty = run_experiment(parse_config(doc), 2);
    CHECK(empty.sweep.empty());
    CHECK(sweep_csv(empty.sweep).find('\n') == sweep_csv(empty.sweep).size() - 1);

    doc["run"]["p_list"] = {7.0, 6.0};
    doc["run"]["delta"] = 0.01;
    const Report sup = run_experiment(parse_config(doc), 2);
    REQUIRE(sup.sweep.size() == 2);
    CHECK(sup.sweep[0].p == 6.0);
    for (const SweepRow& row : sup.sweep) CHECK(row.growth == GrowthClass::decay);
}

TEST_CASE("doubling the grid leaves the final L2 norm unchanged") {
    json doc = small_document("semilinear");
    doc["grid"]["points_per_axis"] = 1024;
    const Report coarse = run_experiment(parse_config(doc));
    doc["grid"]["points_per_axis"] = 2048;
    const Report fine = run_experiment(parse_config(doc));
    CHECK(std::abs(fine.series.rows.back().l2 / coarse.series.rows.back().l2 - 1.0) < 1e-4);
}
