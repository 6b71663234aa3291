#pragma once

// JSON experiment configuration with sections {model, grid, run, report}.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flrw/semilinear_solver.hpp"

namespace flrw {

enum class Experiment { linear_decay, semilinear, sweep, verify_multipliers };

std::string_view to_string(Experiment experiment);
Experiment parse_experiment(std::string_view text);

/// Random sample of (t, s, xi, ell, beta) points for the multiplier check.
struct SampleSpec {
    int samples = 1000;
    std::vector<double> ell_list{0.25, 0.5, 2.0 / 3.0};
    std::vector<double> beta_list{1.5, 2.0, 3.0};
    double s_max = 100.0;
    double gap_max = 50.0;   // t - s
    double xi_min = 1e-2;
    double xi_max = 1e2;
};

struct ReportSpec {
    std::string csv_path;
    std::string json_path;
    std::optional<double> fit_lo;  // default: horizon / 10
    std::optional<double> fit_hi;  // default: horizon
    double tolerance = 0.1;
    double epsilon = 1e-6;         // slack in the epsilon-loss branch of the high-dimension rate
    std::vector<std::string> required;  // columns whose first prediction must match
    std::string classify_column = "l2";
};

struct LabConfig {
    Experiment experiment = Experiment::linear_decay;
    NonlinearRunConfig run;
    std::vector<double> p_list;
    SampleSpec sample;
    ReportSpec report;
    std::uint64_t seed = 0;
    nlohmann::json echo;  // the document as read, for the report

    double fit_lo() const;
    double fit_hi() const;
};

/// Throws ConfigError on unknown keys, wrong types or invalid values.
LabConfig parse_config(const nlohmann::json& document);

/// Reads and parses a file; IoError when it cannot be read.
LabConfig load_config(const std::string& path);

}  // namespace flrw
