#pragma once

// Time series of solution norms and power-law fits in log(1+t).

#include <optional>
#include <string>
#include <vector>

namespace flrw {

struct DecayFit {
    double exponent = 0.0;
    double intercept = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double residual = 0.0;     // max |log y - fit| over the window
    int samples = 0;
    bool log_factor = false;   // local slopes drift monotonically across the window
    std::vector<double> local_slopes;
    bool operator==(const DecayFit&) const = default;
};

struct DecayRow {
    double t = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
    std::vector<double> lq;  // one entry per DecaySeries::q_list element
    bool operator==(const DecayRow&) const = default;
};

struct DecaySeries {
    std::vector<double> q_list;
    std::vector<DecayRow> rows;
    std::optional<DecayFit> fit;

    /// "l2", "linf" or "lq_<q>" as written in CSV headers.
    std::vector<double> column(const std::string& name) const;
    std::vector<double> times() const;
    bool operator==(const DecaySeries&) const = default;
};

/// CSV column name for an L^q norm, e.g. lq_6 or lq_2.5.
std::string lq_column_name(double q);

/// Least-squares slope of log(value) against log(1+t) over samples with t in
/// [t_lo, t_hi]. Needs at least 8 samples, all positive and finite.
DecayFit fit_decay_exponent(const std::vector<double>& t, const std::vector<double>& value,
                            double t_lo, double t_hi);

DecayFit fit_decay_exponent(const DecaySeries& series, const std::string& column, double t_lo,
                            double t_hi);

/// n times per decade of (1+t), log-spaced, from t_start to t_end inclusive.
std::vector<double> log_spaced_times(double t_start, double t_end, int per_decade);

}  // namespace flrw
