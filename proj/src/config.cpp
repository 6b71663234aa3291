#include "flrw/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "flrw/errors.hpp"

namespace flrw {

namespace {

using nlohmann::json;

void only_keys(const json& section, const std::string& name, const std::set<std::string>& allowed) {
    if (!section.is_object()) throw ConfigError("section '" + name + "' must be an object");
    for (const auto& item : section.items()) {
        if (!allowed.count(item.key())) {
            throw ConfigError("unknown key '" + item.key() + "' in section '" + name + "'");
        }
    }
}

double number(const json& section, const std::string& key, double fallback) {
    if (!section.contains(key)) return fallback;
    const json& v = section.at(key);
    if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
    return v.get<double>();
}

double required_number(const json& section, const std::string& key, const std::string& name) {
    if (!section.contains(key)) throw ConfigError("section '" + name + "' needs '" + key + "'");
    return number(section, key, 0.0);
}

int integer(const json& section, const std::string& key, int fallback) {
    if (!section.contains(key)) return fallback;
    const json& v = section.at(key);
    if (!v.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
    return v.get<int>();
}

std::string text(const json& section, const std::string& key, const std::string& fallback) {
    if (!section.contains(key)) return fallback;
    const json& v = section.at(key);
    if (!v.is_string()) throw ConfigError("'" + key + "' must be a string");
    return v.get<std::string>();
}

std::vector<double> numbers(const json& section, const std::string& key, std::vector<double> fallback) {
    if (!section.contains(key)) return fallback;
    const json& v = section.at(key);
    if (!v.is_array()) throw ConfigError("'" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const json& x : v) {
        if (!x.is_number()) throw ConfigError("'" + key + "' must be an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

}  // namespace

std::string_view to_string(Experiment experiment) {
    switch (experiment) {
        case Experiment::linear_decay: return "linear_decay";
        case Experiment::semilinear: return "semilinear";
        case Experiment::sweep: return "sweep";
        case Experiment::verify_multipliers: return "verify_multipliers";
    }
    return "linear_decay";
}

Experiment parse_experiment(std::string_view text) {
    for (Experiment e : {Experiment::linear_decay, Experiment::semilinear, Experiment::sweep,
                         Experiment::verify_multipliers}) {
        if (to_string(e) == text) return e;
    }
    throw ConfigError("unknown experiment '" + std::string(text) + "'");
}

double LabConfig::fit_lo() const { return report.fit_lo.value_or(run.horizon / 10.0); }
double LabConfig::fit_hi() const { return report.fit_hi.value_or(run.horizon); }

LabConfig parse_config(const json& document) {
    only_keys(document, "document", {"model", "grid", "run", "report"});
    LabConfig cfg;
    cfg.echo = document;

    const json model = document.value("model", json::object());
    only_keys(model, "model", {"n", "ell", "beta", "p"});
    cfg.run.params.n = integer(model, "n", 1);
    cfg.run.params.ell = required_number(model, "ell", "model");
    cfg.run.params.beta = required_number(model, "beta", "model");
    cfg.run.params.p = number(model, "p", 2.0);

    const json grid = document.value("grid", json::object());
    only_keys(grid, "grid", {"points_per_axis", "half_length"});
    cfg.run.grid.n = cfg.run.params.n;
    cfg.run.grid.points_per_axis = integer(grid, "points_per_axis", 1024);
    cfg.run.grid.half_length = number(grid, "half_length", 64.0);

    const json run = document.value("run", json::object());
    only_keys(run, "run",
              {"experiment", "horizon", "delta", "bump_width", "q_list", "outputs_per_decade", "rtol",
               "atol", "blowup_threshold", "nonlinearity", "frame", "source", "p_list", "samples",
               "ell_list", "beta_list", "seed"});
    cfg.experiment = parse_experiment(text(run, "experiment", "linear_decay"));
    NonlinearRunConfig& r = cfg.run;
    r.horizon = number(run, "horizon", r.horizon);
    r.delta = number(run, "delta", r.delta);
    r.bump_width = number(run, "bump_width", r.bump_width);
    r.q_list = numbers(run, "q_list", {});
    r.outputs_per_decade = integer(run, "outputs_per_decade", r.outputs_per_decade);
    r.rtol = number(run, "rtol", r.rtol);
    r.atol = number(run, "atol", r.atol);
    r.blowup_threshold = number(run, "blowup_threshold", r.blowup_threshold);
    const std::string kind = text(run, "nonlinearity", "abs_power");
    if (kind == "abs_power") {
        r.nonlinearity = Nonlinearity::abs_power;
    } else if (kind == "signed_power") {
        r.nonlinearity = Nonlinearity::signed_power;
    } else {
        throw ConfigError("nonlinearity must be abs_power or signed_power");
    }
    const std::string frame = text(run, "frame", "physical");
    if (frame != "physical" && frame != "tau") throw ConfigError("frame must be physical or tau");
    const std::string source = text(run, "source", "on");
    if (source != "on" && source != "off") throw ConfigError("source must be on or off");
    r.source_enabled = source == "on";
    cfg.p_list = numbers(run, "p_list", {});
    cfg.sample.samples = integer(run, "samples", cfg.sample.samples);
    cfg.sample.ell_list = numbers(run, "ell_list", cfg.sample.ell_list);
    cfg.sample.beta_list = numbers(run, "beta_list", cfg.sample.beta_list);
    if (run.contains("seed")) {
        const json& seed = run.at("seed");
        if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0)) {
            throw ConfigError("'seed' must be a non-negative integer");
        }
        cfg.seed = run.at("seed").get<std::uint64_t>();
    }

    const json report = document.value("report", json::object());
    only_keys(report, "report", {"csv", "json", "fit_window", "tolerance", "epsilon", "required", "classify_column"});
    cfg.report.csv_path = text(report, "csv", "");
    cfg.report.json_path = text(report, "json", "");
    if (report.contains("fit_window")) {
        const std::vector<double> w = numbers(report, "fit_window", {});
        if (w.size() != 2 || !(w[1] > w[0])) throw ConfigError("fit_window must be [lo, hi] with lo < hi");
        cfg.report.fit_lo = w[0];
        cfg.report.fit_hi = w[1];
    }
    cfg.report.tolerance = number(report, "tolerance", cfg.report.tolerance);
    cfg.report.epsilon = number(report, "epsilon", cfg.report.epsilon);
    cfg.report.classify_column = text(report, "classify_column", cfg.report.classify_column);
    if (report.contains("required")) {
        const json& req = report.at("required");
        if (!req.is_array()) throw ConfigError("'required' must be an array of column names");
        for (const json& x : req) {
            if (!x.is_string()) throw ConfigError("'required' must be an array of column names");
            cfg.report.required.push_back(x.get<std::string>());
        }
    }

    if (cfg.experiment != Experiment::verify_multipliers) {
        try {
            r.validate();
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
        if (cfg.fit_hi() > r.horizon * (1.0 + 1e-12)) {
            throw ConfigError("fit window extends beyond the horizon");
        }
        // fit windows stay in physical time
        cfg.report.fit_lo = cfg.fit_lo();
        cfg.report.fit_hi = cfg.fit_hi();
        if (frame == "tau") r = to_tau_frame(r);
    } else {
        if (cfg.sample.samples < 0) throw ConfigError("samples must be non-negative");
        for (double ell : cfg.sample.ell_list) {
            if (!(ell >= 0.0 && ell < 1.0)) throw ConfigError("sample ell values must lie in [0, 1)");
        }
        for (double beta : cfg.sample.beta_list) {
            if (!std::isfinite(beta)) throw ConfigError("sample beta values must be finite");
        }
        if (cfg.sample.ell_list.empty() || cfg.sample.beta_list.empty()) {
            throw ConfigError("sample ell and beta lists must be non-empty");
        }
    }
    if (cfg.experiment == Experiment::sweep) {
        for (double p : cfg.p_list) {
            if (!(p > 1.0)) throw ConfigError("p_list entries must exceed 1");
        }
    }
    if (!(cfg.report.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
    return cfg;
}

LabConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read configuration " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    json document;
    try {
        document = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return parse_config(document);
}

}  // namespace flrw
