#pragma once

// Experiment orchestration: decay fits against predicted rates, dichotomy
// sweeps over p and the multiplier check against the per-mode ODE.

#include <vector>

#include "flrw/config.hpp"
#include "flrw/report.hpp"

namespace flrw {

/// Multiplier solution of the linear problem; fits every norm column and
/// compares with the linear rate branch.
Report run_linear_decay(const LabConfig& config);

/// Time-stepped semilinear solve; compares with the linear rate and, where the
/// parameters allow, with both variants of the high-dimension L^q rate and the
/// higher-regularity L^2 rate. Blow-up marks the report failed.
Report run_semilinear_decay(const LabConfig& config);

/// One semilinear run per p, up to `threads` at a time; rows sorted by p.
/// growth: blow-up or exponent > 0.05; decay: exponent < -0.05.
Report dichotomy_sweep(const LabConfig& config, int threads = 1);

/// Seeded random sample of the closed-form multipliers against the per-mode ODE.
Report verify_multipliers(const LabConfig& config);

Report run_experiment(const LabConfig& config, int threads = 1);

/// Classification thresholds used by the sweep.
GrowthClass classify_growth(bool blew_up, std::optional<double> exponent);

/// Largest growth p and smallest decay p of rows sorted by p; monotone when no
/// growth row follows a decay row.
void transition_bracket(Report& report);

/// Amplitude-relative errors of (m1, dt m1) against reference values. The
/// scale is the local oscillation amplitude sqrt(m1^2 + (dt m1 / w)^2) with
/// w = max(|xi| (1+t)^{-ell}, 1/(1+t)).
struct MultiplierErrors {
    double m1 = 0.0;
    double dt_m1 = 0.0;
};

MultiplierErrors multiplier_errors(double t, double xi, double ell, double m1, double dt_m1,
                                   double ref_m1, double ref_dt_m1);

}  // namespace flrw
