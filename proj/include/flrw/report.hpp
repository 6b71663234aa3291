#pragma once

// Reports: fitted exponents, rate comparisons, sweep and multiplier rows, and
// their CSV / JSON forms.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flrw/decay.hpp"

namespace flrw {

struct ColumnFit {
    std::string column;
    DecayFit fit;
    bool operator==(const ColumnFit&) const = default;
};

/// Measured exponent against one predicted rate.
struct Comparison {
    std::string column;
    double measured = 0.0;
    double predicted = 0.0;
    std::string case_tag;
    std::string variant;  // empty, or the high-dimension estimate variant
    double tolerance = 0.0;
    bool pass = false;
    bool required = false;
    bool operator==(const Comparison&) const = default;
};

enum class GrowthClass { growth, decay, indeterminate };

std::string_view to_string(GrowthClass value);
GrowthClass parse_growth_class(std::string_view text);

struct SweepRow {
    double p = 0.0;
    std::string status;             // completed / blowup_detected
    std::optional<double> exponent;  // absent after blow-up or a failed fit
    std::optional<double> blowup_time;
    GrowthClass growth = GrowthClass::indeterminate;
    bool operator==(const SweepRow&) const = default;
};

struct MultiplierRow {
    double t = 0.0;
    double s = 0.0;
    double xi = 0.0;
    double ell = 0.0;
    double beta = 0.0;
    std::string zone;
    double rel_err_m1 = 0.0;
    double rel_err_dtm1 = 0.0;
    double lemma1_ratio = 0.0;
    bool operator==(const MultiplierRow&) const = default;
};

struct Report {
    std::string experiment;
    nlohmann::json config;
    std::string version;
    std::uint64_t seed = 0;
    std::string status;  // completed, blowup_detected, ...
    bool passed = false;
    std::vector<ColumnFit> fits;
    std::vector<Comparison> comparisons;
    DecaySeries series;
    std::vector<SweepRow> sweep;
    std::optional<double> bracket_lo;  // largest p classified growth
    std::optional<double> bracket_hi;  // smallest p classified decay
    bool monotone = true;
    std::vector<MultiplierRow> samples;
    std::vector<std::string> notes;

    bool operator==(const Report& other) const;
};

std::string decay_csv(const DecaySeries& series);
DecaySeries parse_decay_csv(const std::string& text);

std::string multiplier_csv(const std::vector<MultiplierRow>& rows);
std::vector<MultiplierRow> parse_multiplier_csv(const std::string& text);

std::string sweep_csv(const std::vector<SweepRow>& rows);

nlohmann::json report_to_json(const Report& report);
Report report_from_json(const nlohmann::json& document);

/// CSV matching the experiment: multiplier rows, sweep rows or the decay series.
std::string report_csv(const Report& report);

/// Writes the CSV form; IoError naming the path on failure.
void export_csv(const Report& report, const std::string& path);
void export_json(const Report& report, const std::string& path);

/// Full-precision decimal form used in every CSV field.
std::string format_double(double value);

}  // namespace flrw
