#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "flrw/config.hpp"
#include "flrw/errors.hpp"
#include "flrw/experiments.hpp"
#include "flrw/exponents.hpp"
#include "flrw/report.hpp"

namespace {

using namespace flrw;

constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitFailures = 2;

struct GlobalOptions {
    std::string config_path;
    std::string out_path;
    int threads = 1;
    std::optional<std::uint64_t> seed;
};

std::string json_path_for(const std::string& csv_path) {
    std::filesystem::path p(csv_path);
    p.replace_extension(".json");
    return p.string();
}

template <class F>
void row(std::string& out, const std::string& name, F&& value) {
    try {
        out += name + "," + format_double(value()) + "\n";
    } catch (const std::exception& e) {
        out += name + ",n/a\n";
    }
}

std::string exponent_table(int n, double ell, double beta) {
    std::string out = "quantity,value\n";
    const ModelParams params{n, ell, beta, 2.0};
    params.validate();
    const DerivedSymbols d = derive(params);
    row(out, "p_fujita_n", [&] { return fujita_exponent(n); });
    row(out, "p_critical", [&] { return d.p_c; });
    row(out, "p_strauss", [&] { return strauss_generalized(n, ell, beta); });
    row(out, "beta_critical", [&] { return beta_critical(n, ell); });
    row(out, "beta_star", [&] { return beta_star(n); });
    row(out, "rho", [&] { return d.rho; });
    row(out, "mu", [&] { return d.mu; });
    row(out, "q_bar", [&] { return q_bar(n, ell); });
    row(out, "q_sharp", [&] { return q_sharp(n); });
    row(out, "crucial_condition", [&] { return crucial_condition(n, ell) ? 1.0 : 0.0; });
    row(out, "high_dim_beta_floor", [&] { return theorem1_beta_floor(n, ell); });
    row(out, "regularity_beta_floor", [&] { return theorem2_beta_floor(n, ell); });
    for (double q : {2.0, 6.0}) {
        const std::string tag = "linear_rate_q" + format_double(q);
        row(out, tag, [&] { return linear_rate(n, ell, beta, q, 0.0, admissible_m(n, q, 0.0).value()).t_exponent; });
    }
    return out;
}

void print_summary(const Report& r) {
    std::printf("experiment %s: %s, %s\n", r.experiment.c_str(), r.status.c_str(), r.passed ? "pass" : "fail");
    for (const ColumnFit& f : r.fits) {
        std::printf("  fit %-8s exponent %+.4f over [%g, %g] (%d samples)%s\n", f.column.c_str(), f.fit.exponent,
                    f.fit.t_lo, f.fit.t_hi, f.fit.samples, f.fit.log_factor ? " log-drift" : "");
    }
    for (const Comparison& c : r.comparisons) {
        std::printf("  %-8s %-10s %-15s measured %+.4f predicted %+.4f tol %.3g %s%s\n", c.column.c_str(),
                    c.case_tag.c_str(), c.variant.c_str(), c.measured, c.predicted, c.tolerance,
                    c.pass ? "ok" : "off", c.required ? " [required]" : "");
    }
    for (const SweepRow& s : r.sweep) {
        std::printf("  p %-5g %-16s %s\n", s.p, s.status.c_str(), std::string(to_string(s.growth)).c_str());
    }
    for (const std::string& n : r.notes) std::printf("  note: %s\n", n.c_str());
}

int run_config(Experiment experiment, const GlobalOptions& g) {
    if (g.config_path.empty()) throw ConfigError("--config is required for this subcommand");
    LabConfig cfg = load_config(g.config_path);
    if (cfg.experiment != experiment) {
        nlohmann::json doc = cfg.echo;
        doc["run"]["experiment"] = std::string(to_string(experiment));
        cfg = parse_config(doc);
    }
    if (g.seed) cfg.seed = *g.seed;
    const Report report = run_experiment(cfg, g.threads);
    const std::string csv = g.out_path.empty() ? cfg.report.csv_path : g.out_path;
    std::string json = cfg.report.json_path;
    if (!g.out_path.empty() || (json.empty() && !csv.empty())) json = json_path_for(csv);
    if (!csv.empty()) export_csv(report, csv);
    if (!json.empty()) export_json(report, json);
    print_summary(report);
    return report.passed ? kExitPass : kExitFailures;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for damped waves with decreasing propagation speed"};
    app.require_subcommand(1);
    GlobalOptions g;
    std::uint64_t seed = 0;
    app.add_option("--config", g.config_path, "JSON configuration")->check(CLI::ExistingFile);
    app.add_option("--out", g.out_path, "CSV output path; the JSON report goes next to it");
    app.add_option("--threads", g.threads, "parallel runs in a sweep")->check(CLI::PositiveNumber);
    auto* seed_opt = app.add_option("--seed", seed, "random seed");

    int n = 1;
    double ell = 0.0;
    double beta = 2.0;
    auto* exponents = app.add_subcommand("exponents", "print the exponent table for n, ell, beta");
    exponents->add_option("--n", n, "dimension")->check(CLI::Range(1, 8));
    exponents->add_option("--ell", ell, "speed decay in [0, 1)");
    exponents->add_option("--beta", beta, "damping coefficient");
    auto* linear = app.add_subcommand("linear-decay", "linear decay rates from the multiplier solution");
    auto* semilinear = app.add_subcommand("semilinear", "time-stepped semilinear run and decay fit");
    auto* sweep = app.add_subcommand("sweep", "growth/decay classification over a list of p");
    auto* verify = app.add_subcommand("verify-multipliers", "closed-form multipliers against the mode ODE");
    for (auto* sub : {exponents, linear, semilinear, sweep, verify}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitError;
    }
    if (*seed_opt) g.seed = seed;

    try {
        if (*exponents) {
            const std::string table = exponent_table(n, ell, beta);
            std::fputs(table.c_str(), stdout);
            if (!g.out_path.empty()) {
                FILE* f = std::fopen(g.out_path.c_str(), "wb");
                if (!f) throw IoError("cannot open " + g.out_path + " for writing");
                std::fputs(table.c_str(), f);
                std::fclose(f);
            }
            return kExitPass;
        }
        if (*linear) return run_config(Experiment::linear_decay, g);
        if (*semilinear) return run_config(Experiment::semilinear, g);
        if (*sweep) return run_config(Experiment::sweep, g);
        if (*verify) return run_config(Experiment::verify_multipliers, g);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
    return kExitError;
}
